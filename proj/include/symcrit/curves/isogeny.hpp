#pragma once

// Odd prime degree isogenies from a kernel polynomial (Velu's formulas in the
// form due to Kohel), point images and preimages, and the rational p-subgroups
// of a curve over F_ell.

#include "symcrit/curves/division.hpp"

namespace symcrit {

struct Isogeny {
    WeierstrassCurve domain, codomain;
    u64 degree = 0;
    Polynomial kernel_poly; // monic, degree (p-1)/2
    Polynomial x_num, x_den; // X(x) = x_num / x_den, x_den = kernel_poly^2
};

namespace detail {

// x-coordinates of the nonzero multiples kP, k = 1..(p-1)/2, of the point with x = theta
inline std::vector<FieldElement> half_orbit(const WeierstrassCurve& E, const FieldElement& theta, u64 p) {
    std::vector<FieldElement> xs{theta};
    for (u64 k = 2; 2 * k <= p - 1; ++k) xs.push_back(multiple_x(E, theta, static_cast<int>(k)));
    return xs;
}

inline Polynomial poly_from_roots(const std::vector<FieldElement>& roots, const FieldHandle& L) {
    Polynomial f = Polynomial::constant(FieldElement(L, 1));
    for (const auto& r : roots) f = f * (Polynomial::x(L) - Polynomial::constant(r.lift_to(L)));
    return f;
}

} // namespace detail

inline Isogeny velu(const WeierstrassCurve& E, const Polynomial& kernel) {
    const FieldHandle& K = E.field();
    Polynomial psi = kernel.lift_to(K).monic();
    const int n = psi.degree();
    const u64 p = static_cast<u64>(2 * n + 1);
    if (n < 1 || !is_prime_u64(p)) fail(ErrorKind::NotASubgroup, "kernel polynomial degree must be (p-1)/2 for an odd prime p");
    if (!(division_polynomial(E, static_cast<int>(p)) % psi).is_zero())
        fail(ErrorKind::NotASubgroup, "kernel polynomial does not divide the " + std::to_string(p) + "-division polynomial");
    if (Polynomial::gcd(psi, psi.derivative()).degree() != 0) fail(ErrorKind::NotASubgroup, "kernel polynomial is not squarefree");
    {
        // closure: the orbit of one root stays inside the root set
        Factorization fa = factor(psi);
        FieldElement theta = adjoin_root(fa.factors.front().poly);
        for (const auto& xk : detail::half_orbit(E, theta, p))
            if (!psi.eval(xk).is_zero()) fail(ErrorKind::NotASubgroup, "roots of the kernel polynomial are not closed under the group law");
    }
    auto c = [&](int i) { return psi.coeff(i); };
    FieldElement s1 = -c(n - 1), s2 = n >= 2 ? c(n - 2) : FieldElement(K), s3 = n >= 3 ? -c(n - 3) : FieldElement(K);
    const auto &b2 = E.b2(), &b4 = E.b4(), &b6 = E.b6();
    FieldElement t = 6 * (s1 * s1 - 2 * s2) + b2 * s1 + n * b4;
    FieldElement w = 10 * (s1 * s1 * s1 - 3 * s1 * s2 + 3 * s3) + 2 * b2 * (s1 * s1 - 2 * s2) + 3 * b4 * s1 + n * b6;
    Isogeny phi;
    phi.domain = E;
    phi.codomain = WeierstrassCurve(K, {E.a1(), E.a2(), E.a3(), E.a4() - 5 * t, E.a6() - b2 * t - 7 * w});
    phi.degree = p;
    phi.kernel_poly = psi;
    Polynomial x = Polynomial::x(K), d1 = psi.derivative(), d2 = d1.derivative();
    Polynomial F = detail::two_torsion_poly(E);
    Polynomial G = Polynomial(K, {b4, b2, FieldElement(K, 6)});
    Polynomial psi2 = psi * psi;
    phi.x_num = Polynomial::constant(FieldElement(K, static_cast<i64>(p))) * x * psi2 - Polynomial::constant(2 * s1) * psi2 +
                F * (d1 * d1 - psi * d2) - G * psi * d1;
    phi.x_den = psi2;
    return phi;
}

inline Point apply_isogeny(const Isogeny& phi, const Point& R) {
    if (R.curve() != phi.domain) fail(ErrorKind::InvalidArgument, "point is not on the isogeny's domain");
    if (R.is_infinity()) return Point::infinity(phi.codomain);
    const FieldElement& x = R.x();
    FieldElement D = phi.x_den.eval(x);
    if (D.is_zero()) return Point::infinity(phi.codomain);
    const auto& E = phi.domain;
    FieldElement N = phi.x_num.eval(x), Dinv = D.inverse();
    FieldElement X = N * Dinv;
    FieldElement dX = (phi.x_num.derivative().eval(x) * D - N * phi.x_den.derivative().eval(x)) * Dinv * Dinv;
    FieldElement Y = ((2 * R.y() + E.a1() * x + E.a3()) * dX - E.a1() * X - E.a3()) * FieldElement(x.field(), 2).inverse();
    return Point(phi.codomain, X, Y);
}

// A point Q with phi(Q) = R, found over the smallest tower step that holds it.
inline Point isogeny_preimage(const Isogeny& phi, const Point& R) {
    if (R.curve() != phi.codomain) fail(ErrorKind::InvalidArgument, "point is not on the isogeny's codomain");
    if (R.is_infinity()) return Point::infinity(phi.domain);
    const FieldHandle& L = R.field();
    Polynomial G = phi.x_num.lift_to(L) - phi.x_den.lift_to(L) * R.x();
    Factorization fa = factor(G);
    FieldElement xq = adjoin_root(fa.factors.front().poly);
    Point Q = lift_x(phi.domain, xq);
    for (const Point& cand : {Q, negate(Q)})
        if (apply_isogeny(phi, cand) == R.lift_to(cand.field())) return cand;
    fail(ErrorKind::Internal, "no preimage found among the lifted points");
}

// Kernel polynomials of all F_ell-rational subgroups of order p, in canonical order.
inline std::vector<Polynomial> rational_kernel_polynomials(const WeierstrassCurve& E, u64 p) {
    if (!E.field()->is_prime()) fail(ErrorKind::InvalidArgument, "rational subgroups are searched over the prime field");
    if (p < 3 || !is_prime_u64(p)) fail(ErrorKind::InvalidArgument, "subgroup order must be an odd prime");
    const FieldHandle& K = E.field();
    const int n = static_cast<int>((p - 1) / 2);
    Factorization fa = factor(division_polynomial(E, static_cast<int>(p)));
    std::vector<Polynomial> found;
    for (const auto& f : fa.factors) {
        if (f.poly.degree() > n) continue;
        bool seen = false;
        for (const auto& k : found)
            if ((k % f.poly).is_zero()) seen = true;
        if (seen) continue;
        FieldElement theta = adjoin_root(f.poly);
        Polynomial kp = detail::poly_from_roots(detail::half_orbit(E, theta, p), theta.field());
        if (auto down = kp.descend_to(K)) found.push_back(*down);
    }
    std::sort(found.begin(), found.end(), [](const Polynomial& a, const Polynomial& b) { return canonical_less(a, b); });
    return found;
}

// sum_i k_i N^i D^(n-i) for K = sum k_i X^i: the numerator of K(N/D) times D^n
inline Polynomial homogenized_pullback(const Polynomial& Kpoly, const Polynomial& N, const Polynomial& D) {
    const int n = Kpoly.degree();
    Polynomial acc = Polynomial::constant(Kpoly.coeff(n)), Dpow = Polynomial::constant(FieldElement(N.field(), 1));
    for (int i = n - 1; i >= 0; --i) {
        Dpow = Dpow * D;
        acc = acc * N + Polynomial::constant(Kpoly.coeff(i)) * Dpow;
    }
    return acc;
}

// Kernel polynomial of the dual isogeny: the rational subgroup C of the codomain
// whose pullback under phi is all of E[p].
inline Polynomial dual_kernel_polynomial(const Isogeny& phi) {
    const int p = static_cast<int>(phi.degree);
    Polynomial rest = division_polynomial(phi.domain, p) / phi.kernel_poly;
    std::optional<Polynomial> pick;
    for (const auto& C : rational_kernel_polynomials(phi.codomain, phi.degree)) {
        Polynomial G = homogenized_pullback(C, phi.x_num, phi.x_den);
        if ((G % rest).is_zero()) {
            if (pick) fail(ErrorKind::Internal, "two codomain subgroups pass the dual-kernel test");
            pick = C;
        }
    }
    if (!pick) fail(ErrorKind::Internal, "no rational subgroup of the codomain pulls back to E[p]");
    return *pick;
}

} // namespace symcrit
