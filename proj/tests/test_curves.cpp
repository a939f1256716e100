#include <gtest/gtest.h>

#include <set>

#include "symcrit/curves/counting.hpp"
#include "symcrit/curves/division.hpp"
#include "symcrit/curves/isogeny.hpp"
#include "symcrit/curves/pairing.hpp"
#include "symcrit/fields/factor.hpp"

using namespace symcrit;

namespace {

// smallest nonsingular random curve over F_q
WeierstrassCurve random_curve(const FieldHandle& F, std::mt19937_64& rng, bool short_form = false) {
    for (;;) {
        u64 q = F->characteristic();
        std::array<i64, 5> a{};
        for (auto& c : a) c = static_cast<i64>(rng() % q);
        if (short_form) a[0] = a[1] = a[2] = 0;
        try {
            return WeierstrassCurve(F, a[0], a[1], a[2], a[3], a[4]);
        } catch (const Error&) {
        }
    }
}

FieldElement element_from_index(const FieldHandle& L, u64 idx) {
    std::vector<u64> flat(L->absolute_degree());
    for (auto& c : flat) {
        c = idx % L->characteristic();
        idx /= L->characteristic();
    }
    return FieldElement(L, flat);
}

u64 field_size(const FieldHandle& L) { return static_cast<u64>(L->order()); }

FieldHandle degree_k_field(u64 q, int k, std::mt19937_64& rng) {
    FieldHandle F = TowerField::prime_field(q);
    if (k == 1) return F;
    for (;;) {
        std::vector<i64> c(k + 1);
        for (auto& v : c) v = static_cast<i64>(rng() % q);
        c[k] = 1;
        Polynomial g(F);
        for (int i = 0; i <= k; ++i) g = g + Polynomial::monomial(FieldElement(F, c[i]), i);
        if (is_irreducible(g)) return extend(F, g);
    }
}

// naive count over F_q by testing every pair
u64 count_pairs(u64 q, const std::array<u64, 5>& a) {
    u64 n = 1;
    for (u64 x = 0; x < q; ++x)
        for (u64 y = 0; y < q; ++y) {
            u64 lhs = (mulmod(y, y, q) + mulmod(mulmod(a[0], x, q), y, q) + mulmod(a[2], y, q)) % q;
            u64 rhs = (mulmod(mulmod(x, x, q), x, q) + mulmod(mulmod(a[1], x, q), x, q) + mulmod(a[3], x, q) + a[4]) % q;
            if (lhs == rhs) ++n;
        }
    return n;
}

// f_{n,P}(R) by adding P one step at a time, with lines y - lam x - nu and
// verticals x - c; R must avoid <P>
FieldElement naive_miller(const Point& P, u64 n, const Point& R) {
    FieldElement f(R.field(), 1);
    Point T = P;
    for (u64 i = 1; i < n; ++i) {
        Point S = add(T, P);
        FieldElement line;
        if (T.x() == P.x() && !(T == P)) {
            line = R.x() - T.x();
        } else {
            auto lam = chord(T, P);
            line = R.y() - lam->first * R.x() - lam->second;
        }
        f = f * line;
        if (!S.is_infinity()) f = f / (R.x() - S.x());
        T = S;
    }
    return f;
}

FieldElement reference_pairing(const Point& P, const Point& Q, u64 n) {
    FieldElement e = naive_miller(P, n, Q) / naive_miller(Q, n, P);
    return n % 2 ? -e : e;
}

struct Torsion {
    WeierstrassCurve E;  // over the torsion field
    Point P, Q;
};

std::vector<Point> multiples(const Point& P, u64 n) {
    std::vector<Point> out{Point::infinity(P.curve())};
    for (u64 i = 1; i < n; ++i) out.push_back(add(out.back(), P));
    return out;
}

// a basis of E[n] over the smallest F_{q^k} (k <= 12) where one exists
std::optional<Torsion> full_torsion(const WeierstrassCurve& E0, u64 n, std::mt19937_64& rng) {
    u64 q = E0.field()->characteristic();
    i64 a = frobenius_trace(E0);
    // s_k = alpha^k + beta^k
    std::vector<BigInt> s{2, a};
    for (int k = 2; k <= 12; ++k) s.push_back(a * s[k - 1] - BigInt(q) * s[k - 2]);
    for (int k = 1; k <= 12; ++k) {
        BigInt N = big_pow(BigInt(q), k) + 1 - s[k];
        if (N % (n * n) != 0 || (big_pow(BigInt(q), k) - 1) % n != 0) continue;
        BigInt m = N;
        while (m % n == 0) m /= n;
        FieldHandle L = degree_k_field(q, k, rng);
        WeierstrassCurve E = E0.base_change(L);
        auto order_n = [&]() -> std::optional<Point> {
            Point R = scalar_mul(m, random_point(E, L, rng));
            if (R.is_infinity()) return std::nullopt;
            for (;;) {
                Point S = scalar_mul(static_cast<i64>(n), R);
                if (S.is_infinity()) return R;
                R = S;
            }
        };
        std::optional<Point> P;
        for (int t = 0; t < 50 && !P; ++t) P = order_n();
        if (!P) continue;
        auto span = multiples(*P, n);
        for (int t = 0; t < 200; ++t) {
            auto Q = order_n();
            if (Q && std::find(span.begin(), span.end(), *Q) == span.end()) return Torsion{E, *P, *Q};
        }
    }
    return std::nullopt;
}

} // namespace

TEST(Curve, InvariantRelation) {
    std::mt19937_64 rng(11);
    for (u64 q : {7u, 13u, 101u}) {
        FieldHandle F = TowerField::prime_field(q);
        for (int i = 0; i < 20; ++i) {
            auto E = random_curve(F, rng);
            EXPECT_EQ(E.c4() * E.c4() * E.c4() - E.c6() * E.c6(), E.discriminant() * 1728);
        }
    }
    EXPECT_THROW(WeierstrassCurve(TowerField::prime_field(7), 0, 0, 0, 0, 0), Error);
}

TEST(Curve, GroupLaw) {
    std::mt19937_64 rng(12);
    FieldHandle F = TowerField::prime_field(103);
    for (int i = 0; i < 20; ++i) {
        auto E = random_curve(F, rng);
        Point P = random_point(E, F, rng), Q = random_point(E, F, rng), R = random_point(E, F, rng);
        EXPECT_EQ(add(add(P, Q), R), add(P, add(Q, R)));
        EXPECT_EQ(add(P, Q), add(Q, P));
        EXPECT_TRUE(add(P, negate(P)).is_infinity());
        Point acc = Point::infinity(E);
        for (int k = 0; k < 13; ++k) acc = add(acc, P);
        EXPECT_EQ(acc, scalar_mul(i64(13), P));
        EXPECT_TRUE(scalar_mul(count_points(E), P).is_infinity());
    }
}

TEST(Counting, SweepAgainstPairCount) {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 500; ++i) {
        u64 q = std::vector<u64>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97}[rng() % 25];
        std::array<u64, 5> a;
        for (auto& c : a) c = rng() % q;
        if (detail::singular_mod(q, a)) continue;
        EXPECT_EQ(count_points_mod(q, a), count_pairs(q, a)) << q;
    }
}

// 500 random curves: BSGS against the sweep, both inside the Hasse interval
TEST(Counting, BsgsAgainstSweep) {
    std::mt19937_64 rng(14);
    for (int i = 0; i < 500; ++i) {
        u64 q = next_prime(1000 + rng() % 200000);
        std::array<u64, 5> a;
        for (auto& c : a) c = rng() % q;
        if (detail::singular_mod(q, a)) continue;
        u64 sweep = count_points_mod(q, a, CountMethod::Sweep);
        EXPECT_EQ(count_points_mod(q, a, CountMethod::Bsgs, i), sweep) << q;
        i64 t = static_cast<i64>(q + 1) - static_cast<i64>(sweep);
        EXPECT_LE(t * t, static_cast<i64>(4 * q));
    }
}

TEST(Counting, LargePrimeHasse) {
    std::mt19937_64 rng(15);
    for (int i = 0; i < 10; ++i) {
        u64 q = next_prime((u64(1) << 40) + rng() % 1000000);
        std::array<u64, 5> a{0, 0, 0, rng() % q, rng() % q};
        if (detail::singular_mod(q, a)) continue;
        i64 t = trace_mod(q, a, CountMethod::Bsgs, 1);
        EXPECT_LE(static_cast<double>(t) * t, 4.0 * static_cast<double>(q));
        // twist has the opposite trace
        u64 d = least_nonresidue(q);
        std::array<u64, 5> tw{0, 0, 0, mulmod(mulmod(a[3], d, q), d, q), mulmod(mulmod(mulmod(a[4], d, q), d, q), d, q)};
        EXPECT_EQ(trace_mod(q, tw, CountMethod::Bsgs, 2), -t);
    }
}

TEST(Counting, KnownValues) {
    // y^2 = x^3 + 30x^2 + 30x + 6 over F_31 has trace -3
    EXPECT_EQ(frobenius_trace(WeierstrassCurve(TowerField::prime_field(31), 0, 30, 0, 30, 6)), -3);
}

// roots of psi_n in L are exactly the x in L of nonzero n-torsion points
TEST(Division, RootsMatchBruteForceTorsion) {
    std::mt19937_64 rng(16);
    struct Case {
        u64 q;
        int k;
    };
    for (Case c : {Case{7, 1}, Case{11, 1}, Case{13, 2}, Case{5, 3}, Case{97, 1}, Case{7, 4}, Case{101, 2}}) {
        FieldHandle L = degree_k_field(c.q, c.k, rng);
        FieldHandle F = TowerField::prime_field(c.q);
        for (int i = 0; i < 3; ++i) {
            auto E0 = random_curve(F, rng);
            auto E = E0.base_change(L);
            // every x in L, with y in L or its quadratic extension
            std::vector<Point> pts;
            for (u64 j = 0; j < field_size(L); ++j) pts.push_back(lift_x(E, element_from_index(L, j)));
            for (int n : {3, 5, 7}) {
                std::set<std::string> brute, found;
                for (const auto& P : pts)
                    if (scalar_mul(i64(n), P).is_infinity()) brute.insert(P.x().descend_to(L)->to_string());
                for (const auto& r : roots_in_field(division_polynomial(E0, n), L)) found.insert(r.to_string());
                EXPECT_EQ(brute, found) << c.q << "^" << c.k << " n=" << n;
            }
        }
    }
}

TEST(Division, MultipleX) {
    std::mt19937_64 rng(17);
    FieldHandle F = TowerField::prime_field(1009);
    for (int i = 0; i < 20; ++i) {
        auto E = random_curve(F, rng);
        Point P = random_point(E, F, rng);
        for (int k : {2, 3, 5, 6}) {
            Point kP = scalar_mul(i64(k), P);
            if (kP.is_infinity()) continue;
            EXPECT_EQ(multiple_x(E, P.x(), k), kP.x());
        }
    }
}

// the Miller implementation against the step-by-step reference on full E[3]
// and E[5], plus the pairing axioms
TEST(Pairing, AgainstReferenceAndAxioms) {
    std::mt19937_64 rng(18);
    int done = 0;
    for (u64 n : {3u, 5u}) {
        int curves = 0;
        for (u64 q : {7u, 11u, 13u, 19u, 31u, 37u, 41u, 61u, 71u, 43u, 29u, 23u}) {
            if (curves == 5) break;
            FieldHandle F = TowerField::prime_field(q);
            auto E0 = random_curve(F, rng);
            auto T = full_torsion(E0, n, rng);
            if (!T) continue;
            ++curves;
            const Point &P = T->P, &Q = T->Q;
            FieldElement e = weil_pairing(P, Q, n, 1);
            FieldHandle L = T->E.field();
            EXPECT_EQ(e, reference_pairing(P, Q, n).lift_to(e.field())) << "q=" << q << " n=" << n;
            EXPECT_FALSE(e.is_one());
            EXPECT_TRUE(e.pow(n).is_one());
            EXPECT_TRUE(weil_pairing(P, P, n).is_one());
            // bilinear and alternating on sums
            Point P2 = add(P, Q), Q2 = add(scalar_mul(i64(2), Q), P);
            EXPECT_EQ(weil_pairing(P2, Q, n, 2), weil_pairing(P, Q, n, 3) * weil_pairing(Q, Q, n, 4));
            EXPECT_EQ(weil_pairing(P, Q2, n, 5), e * e);
            EXPECT_EQ(weil_pairing(Q, P, n, 6), e.inverse());
            // independent of the auxiliary randomness
            EXPECT_EQ(weil_pairing(P, Q, n, 99), e);
            // Galois-equivariant
            FieldElement eF = weil_pairing(frobenius_point(P), frobenius_point(Q), n, 7);
            EXPECT_EQ(eF, e.pow(q));
            (void)L;
        }
        EXPECT_EQ(curves, 5) << "n=" << n;
        done += curves;
    }
    EXPECT_EQ(done, 10);
}

TEST(Isogeny, VeluKernelAndDual) {
    std::mt19937_64 rng(19);
    int tested = 0;
    for (u64 q : {11u, 31u, 41u, 61u, 71u, 101u, 131u, 151u, 181u, 191u, 211u, 241u}) {
        FieldHandle F = TowerField::prime_field(q);
        for (int i = 0; i < 6; ++i) {
            auto E = random_curve(F, rng, true);
            for (u64 p : {3u, 5u}) {
                auto kernels = rational_kernel_polynomials(E, p);
                if (kernels.empty()) continue;
                Isogeny phi = velu(E, kernels.front());
                EXPECT_EQ(phi.x_num.degree(), static_cast<int>(p));
                // kernel points map to infinity
                FieldElement theta = adjoin_root(factor(phi.kernel_poly).factors.front().poly);
                Point K = lift_x(E, theta);
                EXPECT_TRUE(scalar_mul(static_cast<i64>(p), K).is_infinity());
                EXPECT_TRUE(apply_isogeny(phi, K).is_infinity());
                // group homomorphism on rational points
                Point R = random_point(E, F, rng), S = random_point(E, F, rng);
                EXPECT_EQ(apply_isogeny(phi, add(R, S)), add(apply_isogeny(phi, R), apply_isogeny(phi, S)));
                // dual: psi o phi = [p] up to the isomorphism x -> p^(+-2) x
                Isogeny psi = velu(phi.codomain, dual_kernel_polynomial(phi));
                EXPECT_EQ(psi.codomain.j_invariant(), E.j_invariant());
                EXPECT_TRUE(apply_isogeny(psi, apply_isogeny(phi, K)).is_infinity());
                for (int s = 0; s < 5; ++s) {
                    Point T = random_point(E, F, rng);
                    Point pT = scalar_mul(static_cast<i64>(p), T);
                    Point img = apply_isogeny(psi, apply_isogeny(phi, T));
                    EXPECT_EQ(img.is_infinity(), pT.is_infinity());
                    if (pT.is_infinity() || pT.x().is_zero() || pT.y().is_zero()) continue;
                    FieldElement u2 = img.x() / pT.x(), u3 = img.y() / pT.y();
                    FieldElement pp(F, static_cast<i64>(p));
                    EXPECT_EQ(u2 * u2 * u2, u3 * u3);
                    EXPECT_TRUE(u2 == pp * pp || u2 == (pp * pp).inverse());
                }
                ++tested;
            }
        }
    }
    EXPECT_GE(tested, 5);
}

TEST(Isogeny, RejectsNonSubgroup) {
    FieldHandle F = TowerField::prime_field(31);
    WeierstrassCurve E(F, 0, 30, 0, 30, 6);
    EXPECT_THROW(velu(E, Polynomial(F, {1, 0, 1})), Error);
}
