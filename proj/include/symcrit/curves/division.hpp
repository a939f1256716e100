#pragma once

// Division polynomials in x alone.  f_n = psi_n for odd n and psi_n / psi_2 for
// even n, so psi_2^2 = F = 4x^3 + b2 x^2 + 2 b4 x + b6 only ever appears squared.

#include "symcrit/curves/weierstrass.hpp"

namespace symcrit {

namespace detail {

inline Polynomial two_torsion_poly(const WeierstrassCurve& E) {
    const FieldHandle& K = E.field();
    return Polynomial(K, {E.b6(), 2 * E.b4(), E.b2(), FieldElement(K, 4)});
}

inline Polynomial reduced_division_polynomial(const WeierstrassCurve& E, int n) {
    const FieldHandle& K = E.field();
    if (n < 0) fail(ErrorKind::InvalidArgument, "division polynomial index must be nonnegative");
    auto c = [&](i64 v) { return FieldElement(K, v); };
    const auto &b2 = E.b2(), &b4 = E.b4(), &b6 = E.b6(), &b8 = E.b8();
    switch (n) {
        case 0: return Polynomial(K);
        case 1:
        case 2: return Polynomial::constant(c(1));
        case 3: return Polynomial(K, {b8, 3 * b6, 3 * b4, b2, c(3)});
        case 4:
            return Polynomial(K, {b4 * b8 - b6 * b6, b2 * b8 - b4 * b6, 10 * b8, 10 * b6, 5 * b4, b2, c(2)});
        default: break;
    }
    return E.cached_division_polynomial(n, [&] {
        auto f = [&](int k) { return reduced_division_polynomial(E, k); };
        const int m = n / 2;
        if (n % 2 == 1) {
            Polynomial F = two_torsion_poly(E);
            Polynomial F2 = F * F;
            Polynomial fm = f(m), fm1 = f(m + 1);
            Polynomial left = f(m + 2) * fm * fm * fm, right = f(m - 1) * fm1 * fm1 * fm1;
            if (m % 2 == 0) return F2 * left - right;
            return left - F2 * right;
        }
        Polynomial fm1 = f(m - 1), fp1 = f(m + 1);
        return f(m) * (f(m + 2) * fm1 * fm1 - f(m - 2) * fp1 * fp1);
    });
}

} // namespace detail

// psi_n for odd n; psi_n / psi_2 for even n
inline Polynomial division_polynomial(const WeierstrassCurve& E, int n) {
    if (n < 1) fail(ErrorKind::InvalidArgument, "division polynomial index must be positive");
    return detail::reduced_division_polynomial(E, n);
}

// x(kP) as a function of x(P) = x, for a point that is not killed by k
inline FieldElement multiple_x(const WeierstrassCurve& E, const FieldElement& x, int k) {
    if (k < 0) k = -k;
    if (k == 0) fail(ErrorKind::InvalidArgument, "x([0]P) is undefined");
    if (k == 1) return x;
    FieldElement fkm = division_polynomial(E, k - 1).eval(x), fk = division_polynomial(E, k).eval(x),
                 fkp = division_polynomial(E, k + 1).eval(x);
    FieldElement F = two_torsion_cubic(E, x.lift_to(larger_field(x.field(), E.field())));
    FieldElement num = fkm * fkp, den = fk * fk;
    if (k % 2)
        num = num * F;
    else
        den = den * F;
    if (den.is_zero()) fail(ErrorKind::InvalidArgument, "point is killed by the multiplier");
    return x - num / den;
}

} // namespace symcrit
