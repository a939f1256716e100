#pragma once

// Local invariants at a prime ell >= 5: minimal model, reduction kind,
// semistability defect, valuation and unit part of j, and quadratic twists.

#include "symcrit/local/integer_curve.hpp"

namespace symcrit {

enum class ReductionKind { Good, SplitMult, NonsplitMult, AdditivePotMult, AdditivePotGood };

inline std::string_view reduction_kind_name(ReductionKind k) {
    switch (k) {
        case ReductionKind::Good: return "good";
        case ReductionKind::SplitMult: return "split multiplicative";
        case ReductionKind::NonsplitMult: return "nonsplit multiplicative";
        case ReductionKind::AdditivePotMult: return "additive, potentially multiplicative";
        case ReductionKind::AdditivePotGood: return "additive, potentially good";
    }
    return "?";
}

struct LocalData {
    u64 ell = 0;
    int v_c4 = 0, v_c6 = 0, v_disc = 0; // of the minimal model; c4 = 0 or c6 = 0 report a large sentinel
    std::optional<int> v_j;             // empty when j = 0
    ReductionKind kind = ReductionKind::Good;
    int e = 1;
    u64 j_unit = 0; // residue of j * ell^(-v(j)); 0 when j = 0
    IntegerCurve minimal_model;

    bool potentially_multiplicative() const { return v_j && *v_j < 0; }
    bool multiplicative() const { return kind == ReductionKind::SplitMult || kind == ReductionKind::NonsplitMult; }
};

inline constexpr int kInfiniteValuation = 1 << 20;

namespace detail {

inline int val_or_inf(const BigInt& n, u64 ell) { return n == 0 ? kInfiniteValuation : valuation(n, ell); }

inline BigInt symmetric_mod(const BigInt& a, const BigInt& m) {
    BigInt r = a % m;
    if (r < 0) r += m;
    if (2 * r > m) r -= m;
    return r;
}

inline void check_local_prime(u64 ell) {
    if (ell < 5 || ell >= kMaxModulus || !is_prime_u64(ell))
        fail(ErrorKind::UnsupportedPrime, "local data is implemented for primes ell >= 5, got " + std::to_string(ell));
}

} // namespace detail

// One descent step x = ell^2 x' + r, y = ell^3 y' + s ell^2 x' + t, with r, s, t
// forced modulo ell^2, ell, ell^3 by integrality of a1', a2', a3'.
inline std::optional<IntegerCurve> descend_once(const IntegerCurve& E, u64 ell) {
    const BigInt L = ell, L2 = L * L, L3 = L2 * L;
    const auto& [a1, a2, a3, a4, a6] = E.coefficients();
    const BigInt inv2 = (L3 + 1) / 2; // inverse of 2 modulo ell^3
    BigInt inv3 = 0;
    for (int k = 0; k < 3; ++k)
        if ((k * L3 + 1) % 3 == 0) inv3 = (k * L3 + 1) / 3;
    BigInt s = detail::symmetric_mod(-a1 * inv2, L);
    BigInt r = detail::symmetric_mod((s * s + s * a1 - a2) * inv3, L2);
    BigInt t = detail::symmetric_mod(-(a3 + r * a1) * inv2, L3);
    return transform(E, L, r, s, t);
}

inline IntegerCurve minimal_model_at(const IntegerCurve& E, u64 ell) {
    detail::check_local_prime(ell);
    IntegerCurve M = E;
    for (;;) {
        int v4 = detail::val_or_inf(M.c4(), ell), v6 = detail::val_or_inf(M.c6(), ell), vd = valuation(M.discriminant(), ell);
        if (v4 < 4 || v6 < 6 || vd < 12) return M;
        auto next = descend_once(M, ell);
        if (!next) fail(ErrorKind::Internal, "non-minimal model did not descend integrally at " + std::to_string(ell));
        M = *next;
    }
}

inline LocalData local_data(const IntegerCurve& E, u64 ell) {
    detail::check_local_prime(ell);
    LocalData d;
    d.ell = ell;
    d.minimal_model = minimal_model_at(E, ell);
    const IntegerCurve& M = d.minimal_model;
    d.v_c4 = detail::val_or_inf(M.c4(), ell);
    d.v_c6 = detail::val_or_inf(M.c6(), ell);
    d.v_disc = valuation(M.discriminant(), ell);
    if (M.c4() != 0) {
        d.v_j = 3 * d.v_c4 - d.v_disc;
        BigInt c4u = M.c4(), du = M.discriminant();
        for (int i = 0; i < d.v_c4; ++i) c4u /= ell;
        for (int i = 0; i < d.v_disc; ++i) du /= ell;
        u64 c = reduce_big(c4u, ell);
        d.j_unit = mulmod(mulmod(mulmod(c, c, ell), c, ell), invmod(reduce_big(du, ell), ell), ell);
    }
    if (d.v_disc == 0) {
        d.kind = ReductionKind::Good;
        d.e = 1;
    } else if (d.v_c4 == 0) {
        d.kind = legendre_symbol(BigInt(-M.c6()), ell) == 1 ? ReductionKind::SplitMult : ReductionKind::NonsplitMult;
        d.e = 1;
    } else if (d.v_j && *d.v_j < 0) {
        d.kind = ReductionKind::AdditivePotMult;
        d.e = 2;
    } else {
        d.kind = ReductionKind::AdditivePotGood;
        d.e = 12 / std::gcd(d.v_disc, 12);
    }
    return d;
}

// Y^2 = X^3 + d b2 X^2 + 8 d^2 b4 X + 16 d^3 b6, which has c4 = 2^4 d^2 c4(E)
// and c6 = 2^6 d^3 c6(E); the factor 2 only affects the model at 2.
inline IntegerCurve quadratic_twist(const IntegerCurve& E, const BigInt& d) {
    if (d == 0) fail(ErrorKind::InvalidArgument, "twist parameter must be nonzero");
    return IntegerCurve({BigInt(0), d * E.b2(), BigInt(0), 8 * d * d * E.b4(), 16 * d * d * d * E.b6()});
}

struct TwistChoice {
    BigInt d;             // one of 1, u, ell, u*ell
    std::string label;    // "1", "u", "ell", "u*ell"
};

inline std::vector<TwistChoice> local_twist_classes(u64 ell) {
    u64 u = least_nonresidue(ell);
    return {{BigInt(1), "1"}, {BigInt(u), "u"}, {BigInt(ell), "ell"}, {BigInt(u) * ell, "u*ell"}};
}

// The local quadratic twist class making E split multiplicative at ell.
inline TwistChoice split_mult_twist(const IntegerCurve& E, u64 ell) {
    LocalData d0 = local_data(E, ell);
    if (!d0.potentially_multiplicative())
        fail(ErrorKind::NotPotentiallyMultiplicative, "curve has potentially good reduction at " + std::to_string(ell));
    std::vector<TwistChoice> hits;
    for (const auto& tc : local_twist_classes(ell))
        if (local_data(quadratic_twist(E, tc.d), ell).kind == ReductionKind::SplitMult) hits.push_back(tc);
    if (hits.size() != 1) fail(ErrorKind::Internal, "expected exactly one split twist class at " + std::to_string(ell));
    return hits.front();
}

// reduction mod ell of the minimal model; requires good reduction
inline WeierstrassCurve reduce_mod(const IntegerCurve& E, u64 ell) {
    LocalData d = local_data(E, ell);
    if (d.kind != ReductionKind::Good) fail(ErrorKind::BadReduction, "curve has bad reduction at " + std::to_string(ell));
    return d.minimal_model.reduce(ell);
}

} // namespace symcrit
