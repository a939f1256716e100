#include <gtest/gtest.h>

#include "symcrit/fields/factor.hpp"

using namespace symcrit;

namespace {

std::vector<u64> small_primes(u64 n) {
    std::vector<u64> out;
    for (u64 a = 2; a < n; ++a) {
        bool pr = true;
        for (u64 d = 2; d * d <= a; ++d)
            if (a % d == 0) pr = false;
        if (pr) out.push_back(a);
    }
    return out;
}

Polynomial random_poly(const FieldHandle& K, int deg, std::mt19937_64& rng) {
    std::vector<FieldElement> c;
    for (int i = 0; i <= deg; ++i) c.push_back(detail::random_element(K, rng));
    c.back() = c.back().is_zero() ? FieldElement(K, 1) : c.back();
    return Polynomial(K, c);
}

// every element of F_q, q prime
std::vector<FieldElement> elements(const FieldHandle& F) {
    std::vector<FieldElement> v;
    for (u64 a = 0; a < F->characteristic(); ++a) v.emplace_back(F, static_cast<i64>(a));
    return v;
}

bool has_root(const Polynomial& f) {
    for (const auto& a : elements(f.field()))
        if (f.eval(a).is_zero()) return true;
    return false;
}

// brute force: does some monic quadratic divide f
bool has_quadratic_factor(const Polynomial& f) {
    const FieldHandle& F = f.field();
    i64 q = static_cast<i64>(F->characteristic());
    for (i64 b = 0; b < q; ++b)
        for (i64 c = 0; c < q; ++c)
            if ((f % Polynomial(F, {c, b, 1})).is_zero()) return true;
    return false;
}

} // namespace

TEST(ModArith, PowmodAgainstRepeatedMultiplication) {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 200; ++i) {
        u64 m = rng() % 100000 + 2, a = rng() % m, e = rng() % 50;
        u64 r = 1 % m;
        for (u64 k = 0; k < e; ++k) r = r * a % m;
        EXPECT_EQ(powmod(a, e, m), r);
    }
}

TEST(ModArith, PrimalityAgainstTrialDivision) {
    auto ps = small_primes(5000);
    std::set<u64> S(ps.begin(), ps.end());
    for (u64 n = 0; n < 5000; ++n) EXPECT_EQ(is_prime_u64(n), S.count(n) == 1) << n;
    EXPECT_TRUE(is_prime_u64(103350469));
    EXPECT_FALSE(is_prime_u64(u64(4294967291) * 3));
    EXPECT_TRUE(is_prime_big(BigInt("170141183460469231731687303715884105727")));
}

TEST(ModArith, LegendreAndSqrt) {
    for (u64 p : {3u, 5u, 7u, 11u, 31u, 73u, 101u}) {
        std::set<u64> squares;
        for (u64 a = 1; a < p; ++a) squares.insert(a * a % p);
        for (u64 a = 1; a < p; ++a) {
            EXPECT_EQ(legendre_symbol(static_cast<i64>(a), p), squares.count(a) ? 1 : -1);
            if (squares.count(a)) {
                u64 r = sqrt_mod(a, p);
                EXPECT_EQ(r * r % p, a);
                EXPECT_LE(r, p - r);
            }
        }
        EXPECT_EQ(squares.count(least_nonresidue(p)), 0u);
    }
    EXPECT_THROW(legendre_symbol(i64(3), 9), Error);
}

TEST(ModArith, Valuation) {
    EXPECT_EQ(valuation(BigInt(11) * 11 * 11 * 7, 11), 3);
    EXPECT_EQ(valuation(BigInt(-250), 5), 3);
    EXPECT_EQ(valuation(BigInt(7), 11), 0);
}

TEST(Tower, FieldAxiomsAndFrobenius) {
    FieldHandle F = TowerField::prime_field(7);
    FieldHandle K = extend(F, Polynomial(F, {1, 0, 1}));  // 7 = 3 mod 4
    FieldElement g = FieldElement::generator(K);
    Polynomial cubic(K);
    for (i64 c = 1;; ++c) {
        cubic = Polynomial(K, {0, 1, 0, 1}) + Polynomial::constant(g * c);
        if (is_irreducible(cubic)) break;
    }
    FieldHandle L = extend(K, cubic);
    EXPECT_EQ(L->absolute_degree(), 6u);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        FieldElement a = detail::random_element(L, rng), b = detail::random_element(L, rng), c = detail::random_element(L, rng);
        EXPECT_EQ((a + b) * c, a * c + b * c);
        EXPECT_EQ(a * b, b * a);
        if (!a.is_zero()) {
            EXPECT_TRUE((a * a.inverse()).is_one());
            EXPECT_TRUE(a.pow(BigInt(L->order() - 1)).is_one());
        }
        // Frobenius is additive and multiplicative
        EXPECT_EQ(frobenius_power(a + b, 1), frobenius_power(a, 1) + frobenius_power(b, 1));
        EXPECT_EQ(frobenius_power(a * b, 1), frobenius_power(a, 1) * frobenius_power(b, 1));
        EXPECT_EQ(frobenius_power(a, 6), a);
    }
    // lifting and descending
    FieldElement x(F, 5);
    EXPECT_EQ(x.lift_to(L).descend_to(F).value(), x);
    EXPECT_FALSE(g.lift_to(L).descend_to(F).has_value());
}

TEST(Tower, ExtendRejectsReducible) {
    FieldHandle F = TowerField::prime_field(5);
    EXPECT_THROW(extend(F, Polynomial(F, {-1, 0, 1})), Error);
}

TEST(Polynomial, DivisionIdentityAndGcd) {
    std::mt19937_64 rng(5);
    for (u64 ell : {5u, 7u, 11u, 31u, 73u}) {
        FieldHandle F = TowerField::prime_field(ell);
        for (int i = 0; i < 40; ++i) {
            Polynomial a = random_poly(F, static_cast<int>(rng() % 12), rng), b = random_poly(F, static_cast<int>(rng() % 6), rng);
            auto [q, r] = Polynomial::divmod(a, b);
            EXPECT_EQ(q * b + r, a);
            EXPECT_LT(r.degree(), b.degree());
            Polynomial g = Polynomial::gcd(a, b);
            EXPECT_TRUE((a % g).is_zero());
            EXPECT_TRUE((b % g).is_zero());
            auto [d, s, t] = Polynomial::xgcd(a, b);
            EXPECT_EQ(s * a + t * b, d);
        }
    }
}

TEST(Polynomial, KaratsubaMatchesSchoolbook) {
    std::mt19937_64 rng(6);
    FieldHandle F = TowerField::prime_field(31);
    FieldHandle K = extend(F, Polynomial(F, {3, 1, 0, 1}));
    for (const auto& L : {F, K}) {
        for (int i = 0; i < 6; ++i) {
            Polynomial a = random_poly(L, 40 + static_cast<int>(rng() % 60), rng), b = random_poly(L, 35 + static_cast<int>(rng() % 70), rng);
            Polynomial fast = a * b;
            std::size_t saved = detail::karatsuba_threshold;
            detail::karatsuba_threshold = 1u << 30;
            Polynomial slow = a * b;
            detail::karatsuba_threshold = saved;
            EXPECT_EQ(fast, slow);
        }
    }
}

// 1000 random polynomials over F_ell: the factorization multiplies back,
// linear factors match the roots found by evaluation, and low-degree
// factors are irreducible by brute force.
TEST(Factor, RandomPolynomials) {
    std::mt19937_64 rng(7);
    const u64 ells[] = {5, 7, 11, 31, 73};
    for (int i = 0; i < 1000; ++i) {
        u64 ell = ells[i % 5];
        FieldHandle F = TowerField::prime_field(ell);
        Polynomial f = random_poly(F, 1 + static_cast<int>(rng() % 8), rng);
        if (i % 7 == 0) f = f * random_poly(F, 1 + static_cast<int>(rng() % 2), rng) * random_poly(F, 1, rng);  // force repeats
        Factorization fz = factor(f);
        Polynomial prod = Polynomial::constant(fz.leading);
        int linear = 0;
        for (std::size_t k = 0; k < fz.factors.size(); ++k) {
            const auto& [g, m] = fz.factors[k];
            EXPECT_TRUE(g.leading().is_one());
            for (int j = 0; j < m; ++j) prod = prod * g;
            if (g.degree() == 1) linear += 1;
            if (g.degree() >= 2) EXPECT_FALSE(has_root(g));
            if (g.degree() >= 4 && ell <= 11) EXPECT_FALSE(has_quadratic_factor(g));
            if (k) EXPECT_FALSE(fz.factors[k].poly == fz.factors[k - 1].poly);
        }
        EXPECT_EQ(prod, f);
        int roots = 0;
        for (const auto& a : elements(F))
            if (f.eval(a).is_zero()) ++roots;
        EXPECT_EQ(linear, roots);
    }
}

TEST(Factor, IrreducibilityMatchesFactorCount) {
    std::mt19937_64 rng(8);
    FieldHandle F = TowerField::prime_field(5);
    for (int i = 0; i < 200; ++i) {
        Polynomial f = random_poly(F, 2 + static_cast<int>(rng() % 4), rng);
        auto fz = factor(f);
        bool irr = fz.factors.size() == 1 && fz.factors[0].multiplicity == 1;
        EXPECT_EQ(is_irreducible(f), irr);
        bool brute = !has_root(f) && (f.degree() < 4 || !has_quadratic_factor(f));
        EXPECT_EQ(irr, brute);
    }
}

TEST(Factor, FactorOverExtension) {
    FieldHandle F = TowerField::prime_field(11);
    FieldHandle K = extend(F, Polynomial(F, {1, 0, 1}));  // x^2 + 1, 11 = 3 mod 4
    std::mt19937_64 rng(9);
    for (int i = 0; i < 30; ++i) {
        Polynomial f = random_poly(K, 1 + static_cast<int>(rng() % 5), rng);
        Factorization fz = factor(f);
        Polynomial prod = Polynomial::constant(fz.leading);
        for (const auto& [g, m] : fz.factors)
            for (int j = 0; j < m; ++j) prod = prod * g;
        EXPECT_EQ(prod, f);
    }
    // x^2 + 1 splits over K
    auto r = roots_in_field(Polynomial(F, {1, 0, 1}), K);
    EXPECT_EQ(r.size(), 2u);
}

TEST(Factor, RootsOfUnityAndLogs) {
    // the canonical 5th roots of unity used throughout
    EXPECT_EQ(primitive_pth_root(TowerField::prime_field(11), 5), FieldElement(TowerField::prime_field(11), 4));
    EXPECT_EQ(primitive_pth_root(TowerField::prime_field(31), 5), FieldElement(TowerField::prime_field(31), 2));
    FieldHandle F = TowerField::prime_field(31);
    FieldElement z = primitive_pth_root(F, 5);
    for (u64 k = 0; k < 5; ++k) EXPECT_EQ(log_in_mu_p(z.pow(k), z, 5), k);
    EXPECT_EQ(log_in_mu_p(FieldElement(F, 16), FieldElement(F, 2), 5), 4u);
    EXPECT_THROW(log_in_mu_p(FieldElement(F, 3), z, 5), Error);
    // 7 has no 5th roots of unity; the degree-4 extension does
    FieldHandle G = TowerField::prime_field(7);
    EXPECT_THROW(primitive_pth_root(G, 5), Error);
}

TEST(Factor, SquaresAndSqrt) {
    FieldHandle F = TowerField::prime_field(13);
    FieldHandle K = extend(F, Polynomial(F, {2, 0, 1}));
    std::mt19937_64 rng(10);
    for (int i = 0; i < 50; ++i) {
        FieldElement a = detail::random_element(K, rng);
        FieldElement s = a * a;
        EXPECT_TRUE(is_square(s));
        FieldElement r = sqrt_in_field(s);
        EXPECT_EQ(r * r, s);
    }
}
