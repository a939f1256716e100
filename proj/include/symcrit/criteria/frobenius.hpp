#pragma once

// The good-reduction invariant: for E over F_ell with a^2 = 4 ell mod p and
// non-scalar Frobenius on E[p], Frobenius acts as [[lambda, h], [0, lambda]]
// in a symplectic basis {P, Q}; we return the quadratic class of h.
//
// P spans the unique rational p-subgroup.  Q is a preimage, under the isogeny
// phi with kernel <P>, of a generator of ker(phi-dual).  Everything is built in
// one relative tower over K0 = F_ell(mu_p) so all pairings share one zeta.

#include "symcrit/curves/counting.hpp"
#include "symcrit/curves/isogeny.hpp"
#include "symcrit/curves/pairing.hpp"

namespace symcrit {

struct ZetaContext {
    u64 p = 0;
    FieldHandle K0;
    FieldElement zeta;
};

// F_ell(mu_p) with its canonical primitive p-th root of unity
inline ZetaContext zeta_context(u64 ell, u64 p) {
    FieldHandle F = TowerField::prime_field(ell);
    ZetaContext z;
    z.p = p;
    if (ell % p == 1) {
        z.K0 = F;
    } else {
        std::vector<FieldElement> ones(p, FieldElement(F, 1));
        Factorization fa = factor(Polynomial(F, ones));
        z.K0 = adjoin_root(fa.factors.front().poly).field();
        if (z.K0->is_prime()) fail(ErrorKind::Internal, "cyclotomic factor unexpectedly linear");
    }
    z.zeta = primitive_pth_root(z.K0, p);
    return z;
}

struct FrobeniusOptions {
    u64 seed = 0;
    std::size_t max_absolute_degree = 200;
    std::optional<ZetaContext> zeta; // shared root field; built canonically when absent
};

struct FrobeniusData {
    i64 a_ell = 0;
    u64 a_mod_p = 0;
    int h_class = 0; // Legendre class of h relative to zeta
    u64 alpha = 0;   // Log_zeta e(Frob Q, Q) with e(P, Q) normalized into the square class
    ZetaContext zeta;
    Polynomial kernel, dual_kernel;
    std::vector<std::size_t> tower_degrees; // absolute degrees of P, P_W and Q's fields
    std::vector<std::string> narrative;
};

namespace detail {

inline void check_tower(const FieldHandle& K, const FrobeniusOptions& opt) {
    if (K->absolute_degree() > opt.max_absolute_degree)
        fail(ErrorKind::TowerLimit, "tower reached absolute degree " + std::to_string(K->absolute_degree()) + " above the limit " +
                                        std::to_string(opt.max_absolute_degree) + " (raise it or use --stress)");
}

inline Point tower_point_from_kernel(const WeierstrassCurve& E, const Polynomial& kernel, const FieldHandle& top, const FrobeniusOptions& opt) {
    Factorization fa = factor(kernel.lift_to(top));
    FieldElement x = adjoin_root(fa.factors.front().poly);
    check_tower(x.field(), opt);
    Point P = lift_x(E, x);
    check_tower(P.field(), opt);
    return P;
}

} // namespace detail

// Frobenius on E[p] has exact order p: ell = 1 mod p, a = 2 mod p and E[p] not all rational.
inline bool frobenius_order_is_p(const WeierstrassCurve& E, u64 p) {
    const u64 ell = E.field()->characteristic();
    if (ell % p != 1) return false;
    i64 a = frobenius_trace(E);
    if (reduce_signed(a - 2, p) != 0) return false;
    auto roots = roots_in_field(division_polynomial(E, static_cast<int>(p)), E.field());
    std::size_t rational = 0;
    for (const auto& x : roots)
        if (is_square(two_torsion_cubic(E, x))) ++rational;
    return 2 * rational != p * p - 1;
}

inline FrobeniusData frobenius_symplectic_data(const WeierstrassCurve& E, u64 p, const FrobeniusOptions& opt = {}) {
    if (!E.field()->is_prime()) fail(ErrorKind::InvalidArgument, "curve must be defined over F_ell");
    const u64 ell = E.field()->characteristic();
    if (p < 3 || !is_prime_u64(p)) fail(ErrorKind::InvalidArgument, "p must be an odd prime");
    if (ell == p) fail(ErrorKind::InvalidArgument, "ell must differ from p");
    FrobeniusData out;
    out.a_ell = frobenius_trace(E, CountMethod::Auto, opt.seed);
    out.a_mod_p = reduce_signed(out.a_ell, p);
    if ((BigInt(out.a_ell) * out.a_ell - 4 * BigInt(ell)) % p != 0)
        fail(ErrorKind::HypothesisViolated, "a^2 - 4 ell is not divisible by p (a = " + std::to_string(out.a_ell) + ")");

    auto kernels = rational_kernel_polynomials(E, p);
    if (kernels.size() != 1)
        fail(ErrorKind::HypothesisViolated, "Frobenius is scalar or split on E[p] (" + std::to_string(kernels.size()) + " rational subgroups)");
    out.kernel = kernels.front();
    Isogeny phi = velu(E, out.kernel);
    out.dual_kernel = dual_kernel_polynomial(phi);

    out.zeta = opt.zeta ? *opt.zeta : zeta_context(ell, p);
    if (out.zeta.p != p || out.zeta.K0->characteristic() != ell) fail(ErrorKind::InvalidArgument, "zeta context does not match (ell, p)");
    const FieldHandle& K0 = out.zeta.K0;

    Point P = detail::tower_point_from_kernel(E, out.kernel, K0, opt);
    Point PW = detail::tower_point_from_kernel(phi.codomain, out.dual_kernel, P.field(), opt);
    Point Q = isogeny_preimage(phi, PW);
    detail::check_tower(Q.field(), opt);
    out.tower_degrees = {P.field()->absolute_degree(), PW.field()->absolute_degree(), Q.field()->absolute_degree()};

    const FieldElement& zeta = out.zeta.zeta;
    u64 c = log_in_mu_p(weil_pairing(P, Q, p, opt.seed), zeta, p);
    if (c == 0) fail(ErrorKind::Internal, "P and Q are dependent");
    if (legendre_symbol(static_cast<i64>(c), p) == -1) {
        Q = scalar_mul(static_cast<i64>(least_nonresidue(p)), Q);
        c = log_in_mu_p(weil_pairing(P, Q, p, opt.seed), zeta, p);
    }
    out.alpha = log_in_mu_p(weil_pairing(frobenius_point(Q), Q, p, opt.seed), zeta, p);
    if (out.alpha == 0) fail(ErrorKind::HypothesisViolated, "Frobenius fixes Q modulo P: scalar action on E[p]");
    out.h_class = legendre_symbol(static_cast<i64>(out.alpha), p);

    out.narrative.push_back("a_" + std::to_string(ell) + " = " + std::to_string(out.a_ell) + ", a^2 = 4 ell mod " + std::to_string(p));
    out.narrative.push_back("kernel of phi: " + out.kernel.to_string() + "; kernel of the dual: " + out.dual_kernel.to_string());
    out.narrative.push_back("tower degrees: P in degree " + std::to_string(out.tower_degrees[0]) + ", P_W in degree " +
                            std::to_string(out.tower_degrees[1]) + ", Q in degree " + std::to_string(out.tower_degrees[2]));
    out.narrative.push_back("e(P,Q) = zeta^" + std::to_string(c) + ", e(Frob Q, Q) = zeta^" + std::to_string(out.alpha) +
                            ", class of h = " + std::to_string(out.h_class));
    return out;
}

} // namespace symcrit
