#pragma once

// Weil pairing by Miller's algorithm with a random auxiliary point S:
// e(P,Q) = [f_P(Q+S)/f_P(S)] / [f_Q(P-S)/f_Q(-S)].

#include "symcrit/curves/weierstrass.hpp"

namespace symcrit {

namespace detail {

struct MillerValue {
    FieldElement num, den;
};

// f_{n,P} evaluated at R1 and R2 as the ratio f(R1)/f(R2); nullopt if an
// intermediate line vanishes at either evaluation point
inline std::optional<FieldElement> miller_ratio(const Point& P, u64 n, const Point& R1, const Point& R2) {
    const FieldHandle& L = R1.field();
    const auto& E = P.curve();
    FieldElement num(L, 1), den(L, 1);
    Point T = P;

    // multiplies by l_{T,U}/v_{T+U} evaluated at R1 over R2; returns false on a zero
    auto step = [&](const Point& U) -> bool {
        Point V = add(T, U);
        FieldElement l1(L), l2(L), v1(L, 1), v2(L, 1);
        auto ln = chord(T, U);
        if (!ln) {
            l1 = R1.x() - T.x();
            l2 = R2.x() - T.x();
        } else {
            const auto& [lam, nu] = *ln;
            l1 = R1.y() - lam * R1.x() - nu;
            l2 = R2.y() - lam * R2.x() - nu;
            v1 = R1.x() - V.x();
            v2 = R2.x() - V.x();
        }
        if (l1.is_zero() || l2.is_zero() || v1.is_zero() || v2.is_zero()) return false;
        num = num * l1 * v2;
        den = den * l2 * v1;
        T = V;
        return true;
    };

    const std::size_t bits = 64 - static_cast<std::size_t>(__builtin_clzll(n));
    for (std::size_t i = bits - 1; i-- > 0;) {
        num = num * num;
        den = den * den;
        if (!step(T)) return std::nullopt;
        if ((n >> i) & 1)
            if (!step(P)) return std::nullopt;
    }
    (void)E;
    if (!T.is_infinity()) fail(ErrorKind::InvalidArgument, "point is not killed by the pairing order");
    return num / den;
}

} // namespace detail

inline FieldElement weil_pairing(const Point& P0, const Point& Q0, u64 n, u64 seed = 0) {
    detail::check_same_curve(P0, Q0);
    const auto& E = P0.curve();
    if (n < 2) fail(ErrorKind::InvalidArgument, "pairing order must be at least 2");
    FieldHandle L = larger_field(P0.field(), Q0.field());
    if (!scalar_mul(static_cast<i64>(n), P0).is_infinity() || !scalar_mul(static_cast<i64>(n), Q0).is_infinity())
        fail(ErrorKind::InvalidArgument, "pairing arguments must be " + std::to_string(n) + "-torsion points");
    if (P0.is_infinity() || Q0.is_infinity() || P0.lift_to(L) == Q0.lift_to(L)) return FieldElement(L, 1);
    std::mt19937_64 rng(mix_seed(seed, 0x5151));
    for (int attempt = 0; attempt < 256; ++attempt) {
        // tiny fields may leave no usable auxiliary point; move up a quadratic step
        if (attempt == 64) {
            Polynomial g = Polynomial::monomial(FieldElement(L, 1), 2) - Polynomial::constant(FieldElement(L, static_cast<i64>(least_nonresidue(L->characteristic()))));
            for (u64 c = 1; !is_irreducible(g); ++c)
                g = Polynomial::monomial(FieldElement(L, 1), 2) + Polynomial::x(L) - Polynomial::constant(FieldElement(L, static_cast<i64>(c)));
            L = extend(L, g);
        }
        Point P = P0.lift_to(L), Q = Q0.lift_to(L);
        Point S = random_point(E, L, rng);
        Point QS = add(Q, S), PS = subtract(P, S), mS = negate(S);
        if (QS.is_infinity() || PS.is_infinity() || S.is_infinity()) continue;
        auto a = detail::miller_ratio(P, n, QS, S);
        if (!a) continue;
        auto b = detail::miller_ratio(Q, n, PS, mS);
        if (!b) continue;
        return *a / *b;
    }
    fail(ErrorKind::Internal, "Weil pairing could not find an auxiliary point");
}

} // namespace symcrit
