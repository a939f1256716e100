#pragma once

// Factorization over finite tower fields: squarefree split, distinct-degree,
// then Cantor-Zassenhaus equal-degree splitting with a PRNG seeded from the
// polynomial itself, so results never depend on call order.

#include <algorithm>
#include <map>
#include <random>

#include "symcrit/fields/polynomial.hpp"

namespace symcrit {

struct Factor {
    Polynomial poly; // monic irreducible
    int multiplicity;
};

struct Factorization {
    FieldElement leading;
    std::vector<Factor> factors;
};

namespace detail {

inline FieldElement random_element(const FieldHandle& K, std::mt19937_64& rng) {
    std::vector<u64> c(K->absolute_degree());
    for (u64& x : c) x = rng() % K->characteristic();
    return FieldElement(K, std::move(c));
}

inline Polynomial random_poly(const FieldHandle& K, int deg_below, std::mt19937_64& rng) {
    std::vector<u64> c(static_cast<std::size_t>(deg_below) * K->absolute_degree());
    for (u64& x : c) x = rng() % K->characteristic();
    return Polynomial(K, std::move(c));
}

// c(x) = g(x^ell); returns g^(1/ell) coefficientwise
inline Polynomial pth_root(const Polynomial& c) {
    const FieldHandle& K = c.field();
    const u64 ell = K->characteristic();
    const long n = static_cast<long>(K->absolute_degree());
    std::vector<FieldElement> out;
    for (int i = 0; i <= c.degree(); i += static_cast<int>(ell)) out.push_back(frobenius_power(c.coeff(i), n - 1));
    return Polynomial(K, out);
}

inline std::vector<Factor> squarefree_parts(const Polynomial& f) {
    std::vector<Factor> out;
    if (f.degree() <= 0) return out;
    const u64 ell = f.field()->characteristic();
    Polynomial c = Polynomial::gcd(f, f.derivative());
    Polynomial w = f / c;
    int i = 1;
    while (w.degree() > 0) {
        Polynomial y = Polynomial::gcd(w, c);
        Polynomial z = w / y;
        if (z.degree() > 0) out.push_back({z.monic(), i});
        ++i;
        w = y;
        c = c / y;
    }
    if (c.degree() > 0) {
        for (auto& [g, m] : squarefree_parts(pth_root(c.monic()))) out.push_back({g, m * static_cast<int>(ell)});
    }
    return out;
}

// pairs (product of all irreducible factors of degree d, d)
inline std::vector<std::pair<Polynomial, int>> distinct_degree(Polynomial f) {
    std::vector<std::pair<Polynomial, int>> out;
    const FieldHandle& K = f.field();
    const BigInt q = K->order();
    Polynomial x = Polynomial::x(K), h = x % f;
    for (int d = 1; 2 * d <= f.degree(); ++d) {
        h = Polynomial::powmod(h, q, f);
        Polynomial g = Polynomial::gcd(h - x, f);
        if (g.degree() > 0) {
            out.push_back({g, d});
            f = f / g;
            h = h % f;
        }
    }
    if (f.degree() > 0) out.push_back({f.monic(), f.degree()});
    return out;
}

inline void equal_degree(const Polynomial& g, int d, std::mt19937_64& rng, std::vector<Polynomial>& out) {
    if (g.degree() == d) {
        out.push_back(g.monic());
        return;
    }
    const FieldHandle& K = g.field();
    if (K->characteristic() == 2) fail(ErrorKind::InvalidArgument, "equal-degree splitting needs odd characteristic");
    const BigInt e = (boost::multiprecision::pow(K->order(), static_cast<unsigned>(d)) - 1) / 2;
    for (;;) {
        Polynomial a = random_poly(K, g.degree(), rng);
        if (a.degree() <= 0) continue;
        Polynomial b = Polynomial::powmod(a, e, g) - Polynomial::constant(FieldElement(K, 1));
        Polynomial u = Polynomial::gcd(b, g);
        if (u.degree() > 0 && u.degree() < g.degree()) {
            equal_degree(u, d, rng, out);
            equal_degree(g / u, d, rng, out);
            return;
        }
    }
}

inline std::mt19937_64 seeded_rng(const Polynomial& f, u64 salt = 0) { return std::mt19937_64(mix_seed(f.hash(), salt)); }

} // namespace detail

inline Factorization factor(const Polynomial& f) {
    if (f.is_zero()) fail(ErrorKind::InvalidArgument, "cannot factor the zero polynomial");
    Factorization out{f.leading(), {}};
    Polynomial g = f.monic();
    auto rng = detail::seeded_rng(g);
    for (auto& [part, mult] : detail::squarefree_parts(g)) {
        for (auto& [block, d] : detail::distinct_degree(part)) {
            std::vector<Polynomial> pieces;
            detail::equal_degree(block, d, rng, pieces);
            for (auto& p : pieces) out.factors.push_back({p, mult});
        }
    }
    std::sort(out.factors.begin(), out.factors.end(), [](const Factor& a, const Factor& b) {
        if (a.poly == b.poly) return a.multiplicity < b.multiplicity;
        return canonical_less(a.poly, b.poly);
    });
    return out;
}

// Rabin's test: x^(q^n) = x mod f and gcd(x^(q^(n/r)) - x, f) = 1 for primes r | n
inline bool is_irreducible(const Polynomial& f) {
    const int n = f.degree();
    if (n <= 0) return false;
    if (n == 1) return true;
    const FieldHandle& K = f.field();
    Polynomial g = f.monic(), x = Polynomial::x(K);
    const BigInt q = K->order();
    std::vector<int> divisors;
    {
        int m = n;
        for (int r = 2; r * r <= m; ++r)
            if (m % r == 0) {
                divisors.push_back(n / r);
                while (m % r == 0) m /= r;
            }
        if (m > 1) divisors.push_back(n / m);
    }
    std::vector<Polynomial> powers{x % g};
    for (int i = 1; i <= n; ++i) powers.push_back(Polynomial::powmod(powers.back(), q, g));
    if (powers[n] != x % g) return false;
    for (int d : divisors)
        if (Polynomial::gcd(powers[d] - x, g).degree() != 0) return false;
    return true;
}

// Extension of K by a root of f; f must be irreducible of degree >= 2 over K.
inline FieldHandle extend(const FieldHandle& K, const Polynomial& f) {
    Polynomial g = f.lift_to(K).monic();
    if (g.degree() < 2) fail(ErrorKind::InvalidArgument, "extension polynomial must have degree at least 2");
    if (!is_irreducible(g)) {
        Factorization fa = factor(g);
        fail(ErrorKind::InvalidArgument, "polynomial is reducible over " + K->describe() + ", factor " + fa.factors.front().poly.to_string());
    }
    std::vector<u64> lower(g.flat().begin(), g.flat().end() - static_cast<std::ptrdiff_t>(K->absolute_degree()));
    return TowerField::adjoin_unchecked(K, std::move(lower), static_cast<std::size_t>(g.degree()));
}

// A root of an irreducible g, in K itself when deg g = 1 and in a new level otherwise.
// g must come from factor(), which already certifies irreducibility.
inline FieldElement adjoin_root(const Polynomial& g) {
    Polynomial m = g.monic();
    const FieldHandle& K = m.field();
    if (m.degree() == 1) return -m.coeff(0);
    std::vector<u64> lower(m.flat().begin(), m.flat().end() - static_cast<std::ptrdiff_t>(K->absolute_degree()));
    return FieldElement::generator(TowerField::adjoin_unchecked(K, std::move(lower), static_cast<std::size_t>(m.degree())));
}

// roots of f lying in L (f's field must be a subfield of L), sorted lexicographically
inline std::vector<FieldElement> roots_in_field(const Polynomial& f, const FieldHandle& L) {
    if (f.is_zero()) fail(ErrorKind::InvalidArgument, "the zero polynomial has every element as a root");
    Polynomial g = f.lift_to(L).monic();
    std::vector<FieldElement> roots;
    if (g.degree() <= 0) return roots;
    Polynomial x = Polynomial::x(L);
    Polynomial h = Polynomial::powmod(x, L->order(), g);
    Polynomial lin = Polynomial::gcd(h - x, g);
    if (lin.degree() <= 0) return roots;
    auto rng = detail::seeded_rng(lin, 1);
    std::vector<Polynomial> pieces;
    detail::equal_degree(lin, 1, rng, pieces);
    for (auto& p : pieces) roots.push_back(-p.coeff(0));
    std::sort(roots.begin(), roots.end(), [](const FieldElement& a, const FieldElement& b) { return a.lex_less(b); });
    return roots;
}

inline bool is_square(const FieldElement& a) {
    if (a.is_zero()) return true;
    const FieldHandle& K = a.field();
    if (K->characteristic() == 2) return true;
    return a.pow((K->order() - 1) / 2).is_one();
}

// canonical square root: the lexicographically smaller of the two roots
inline FieldElement sqrt_in_field(const FieldElement& a) {
    if (a.is_zero()) return a;
    const FieldHandle& K = a.field();
    if (!is_square(a)) fail(ErrorKind::NoRoot, "element is not a square in " + K->describe());
    if (K->is_prime()) return FieldElement(K, static_cast<i64>(sqrt_mod(a.flat()[0], K->characteristic())));
    Polynomial f = Polynomial::monomial(FieldElement(K, 1), 2) - Polynomial::constant(a);
    auto r = roots_in_field(f, K);
    if (r.empty()) fail(ErrorKind::Internal, "square root search failed");
    return r.front();
}

inline FieldElement primitive_pth_root(const FieldHandle& K, u64 p) {
    const BigInt q1 = K->order() - 1;
    if (q1 % p != 0) fail(ErrorKind::InvalidArgument, "no primitive " + std::to_string(p) + "-th root of unity in " + K->describe());
    const BigInt e = q1 / p;
    const u64 ell = K->characteristic();
    for (u64 i = 1;; ++i) {
        std::vector<u64> c(K->absolute_degree(), 0);
        u64 v = i;
        for (std::size_t k = 0; k < c.size() && v; ++k) {
            c[k] = v % ell;
            v /= ell;
        }
        FieldElement z = FieldElement(K, std::move(c)).pow(e);
        if (!z.is_one()) return z;
    }
}

inline u64 log_in_mu_p(const FieldElement& x, const FieldElement& zeta, u64 p) {
    if (x.is_zero() || !x.pow(p).is_one()) fail(ErrorKind::NotInSubgroup, "element is not a " + std::to_string(p) + "-th root of unity");
    FieldElement one(larger_field(x.field(), zeta.field()), 1);
    FieldElement cur = one;
    for (u64 k = 0; k < p; ++k) {
        if (cur == x) return k;
        cur = cur * zeta;
    }
    fail(ErrorKind::NotInSubgroup, "zeta does not generate the p-th roots of unity containing x");
}

} // namespace symcrit
