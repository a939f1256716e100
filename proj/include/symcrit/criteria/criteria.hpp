#pragma once

// Symplectic criteria at a single prime ell for a pair of curves over Q whose
// p-torsion modules are (assumed) isomorphic.  Inapplicability is reported,
// never thrown.

#include "symcrit/criteria/frobenius.hpp"
#include "symcrit/criteria/report.hpp"
#include "symcrit/local/local_data.hpp"

namespace symcrit {

namespace detail {

inline std::string str(u64 v) { return std::to_string(v); }

inline void check_primes(u64 p, u64 ell) {
    if (p < 3 || !is_prime_u64(p)) fail(ErrorKind::InvalidArgument, "p must be an odd prime, got " + str(p));
    if (ell < 5 || ell >= kMaxModulus || !is_prime_u64(ell)) fail(ErrorKind::UnsupportedPrime, "ell must be a prime >= 5, got " + str(ell));
}

inline u64 j_power(const LocalData& d, u64 p) { return powmod(d.j_unit, (d.ell - 1) / p, d.ell); }

inline SymplecticType from_class(bool square) { return square ? SymplecticType::Symplectic : SymplecticType::AntiSymplectic; }

// checks shared by the Tate-curve criteria; empty string when they hold
inline std::string tate_condition(const LocalData& d, u64 p, const std::string& name) {
    if (d.kind != ReductionKind::SplitMult) return name + " is not split multiplicative (" + std::string(reduction_kind_name(d.kind)) + ")";
    if (*d.v_j % static_cast<int>(p) != 0) return "v(j_" + name + ") = " + std::to_string(*d.v_j) + " is not divisible by p";
    if (j_power(d, p) == 1) return "j~_" + name + "^((ell-1)/p) = 1 mod ell";
    return {};
}

} // namespace detail

inline CriterionReport thm_multiplicative(const IntegerCurve& E1, const IntegerCurve& E2, u64 p, u64 ell, const FrobeniusOptions& opt = {}) {
    detail::check_primes(p, ell);
    CriterionReport r("ThmMultiplicative", ell, p);
    if (ell == p) return r.reject("ell = p");
    if (ell % p != 1) return r.reject("ell is not 1 mod p");
    LocalData d1 = local_data(E1, ell), d2 = local_data(E2, ell);
    for (auto [d, name] : {std::pair{&d1, "E1"}, std::pair{&d2, "E2"}})
        if (auto why = detail::tate_condition(*d, p, name); !why.empty()) return r.reject(why);
    FieldHandle F = TowerField::prime_field(ell);
    FieldElement zeta = opt.zeta ? *opt.zeta->zeta.descend_to(F) : primitive_pth_root(F, p);
    if (zeta.is_one() || !zeta.pow(p).is_one()) fail(ErrorKind::InvalidArgument, "zeta is not a primitive p-th root of unity");
    u64 w1 = detail::j_power(d1, p), w2 = detail::j_power(d2, p);
    u64 h1 = log_in_mu_p(FieldElement(F, static_cast<i64>(w1)), zeta, p);
    u64 h2 = log_in_mu_p(FieldElement(F, static_cast<i64>(w2)), zeta, p);
    r.applies = true;
    r.type = detail::from_class(legendre_symbol(static_cast<i64>(h1 * h2), p) == 1);
    r.witnesses = {{"zeta", zeta.to_string()}, {"h1", static_cast<i64>(h1)}, {"h2", static_cast<i64>(h2)},
                   {"v_j1", *d1.v_j}, {"v_j2", *d2.v_j}, {"j_unit1", static_cast<i64>(d1.j_unit)}, {"j_unit2", static_cast<i64>(d2.j_unit)}};
    r.note("both curves split multiplicative with v(j) = 0 mod p");
    r.note("j~1^((ell-1)/p) = " + detail::str(w1) + " = zeta^" + detail::str(h1) + ", j~2^((ell-1)/p) = " + detail::str(w2) + " = zeta^" + detail::str(h2));
    r.note("h1*h2 is a " + std::string(*r.type == SymplecticType::Symplectic ? "square" : "nonsquare") + " mod p");
    return r;
}

inline CriterionReport thm_mixed(const IntegerCurve& E, const IntegerCurve& E2, u64 p, u64 ell, const FrobeniusOptions& opt = {}) {
    detail::check_primes(p, ell);
    CriterionReport r("ThmMixed", ell, p);
    if (ell == p) return r.reject("ell = p");
    if (ell % p != 1) return r.reject("ell is not 1 mod p");
    LocalData d = local_data(E, ell), d2 = local_data(E2, ell);
    if (auto why = detail::tate_condition(d, p, "E"); !why.empty()) return r.reject(why);
    if (d2.kind != ReductionKind::Good) return r.reject("E2 does not have good reduction");
    WeierstrassCurve E2bar = d2.minimal_model.reduce(ell);
    if (!frobenius_order_is_p(E2bar, p)) return r.reject("Frobenius does not have order p on E2[p]");
    FrobeniusOptions o = opt;
    if (!o.zeta) o.zeta = zeta_context(ell, p);
    FrobeniusData fd = frobenius_symplectic_data(E2bar, p, o);
    u64 w = detail::j_power(d, p);
    u64 s = log_in_mu_p(FieldElement(o.zeta->K0, static_cast<i64>(w)), o.zeta->zeta, p);
    r.applies = true;
    r.type = detail::from_class(legendre_symbol(static_cast<i64>(s), p) == fd.h_class);
    r.witnesses = {{"zeta", o.zeta->zeta.to_string()}, {"s", static_cast<i64>(s)}, {"h_prime_class", fd.h_class},
                   {"v_j", *d.v_j}, {"j_unit", static_cast<i64>(d.j_unit)}, {"a_ell", fd.a_ell}};
    r.note("E split multiplicative, v(j) = 0 mod p, j~^((ell-1)/p) = " + detail::str(w) + " = zeta^" + detail::str(s));
    r.note("E2 good at ell with Frobenius of order p on E2[p]");
    for (const auto& line : fd.narrative) r.note(line);
    r.note("(s/p) = " + std::to_string(legendre_symbol(static_cast<i64>(s), p)) + ", h' class = " + std::to_string(fd.h_class));
    return r;
}

inline CriterionReport thm_goodred(const WeierstrassCurve& E1, const WeierstrassCurve& E2, u64 p, const FrobeniusOptions& opt = {}) {
    const u64 ell = E1.field()->characteristic();
    CriterionReport r("ThmGoodRed", ell, p);
    if (E2.field()->characteristic() != ell) fail(ErrorKind::InvalidArgument, "curves live over different prime fields");
    i64 a1 = frobenius_trace(E1, CountMethod::Auto, opt.seed), a2 = frobenius_trace(E2, CountMethod::Auto, opt.seed);
    r.witnesses["a_ell1"] = a1;
    r.witnesses["a_ell2"] = a2;
    if (reduce_signed(a1 - a2, p) != 0) return r.reject("a_ell differs mod p between the two curves");
    if ((BigInt(a1) * a1 - 4 * BigInt(ell)) % p != 0) return r.reject("p does not divide a^2 - 4 ell");
    if (rational_kernel_polynomials(E1, p).size() != 1 || rational_kernel_polynomials(E2, p).size() != 1)
        return r.reject("Frobenius acts as a scalar (or is split) on E[p]");
    FrobeniusOptions o = opt;
    if (!o.zeta) o.zeta = zeta_context(ell, p);
    FrobeniusData f1 = frobenius_symplectic_data(E1, p, o), f2 = frobenius_symplectic_data(E2, p, o);
    r.applies = true;
    r.type = detail::from_class(f1.h_class == f2.h_class);
    r.witnesses["zeta"] = o.zeta->zeta.to_string();
    r.witnesses["h1_class"] = f1.h_class;
    r.witnesses["h2_class"] = f2.h_class;
    r.witnesses["a_mod_p"] = static_cast<i64>(f1.a_mod_p);
    r.note("a = " + std::to_string(a1) + ", a^2 = 4 ell mod p, Frobenius non-scalar on both");
    r.note("h classes " + std::to_string(f1.h_class) + " and " + std::to_string(f2.h_class));
    return r;
}

inline CriterionReport ko_criterion(const IntegerCurve& E1, const IntegerCurve& E2, u64 p, u64 ell) {
    detail::check_primes(p, ell);
    CriterionReport r("KrausOesterle", ell, p);
    if (ell == p) return r.reject("ell = p");
    LocalData d1 = local_data(E1, ell), d2 = local_data(E2, ell);
    if (!d1.potentially_multiplicative() || !d2.potentially_multiplicative()) return r.reject("both curves must be potentially multiplicative");
    TwistChoice tc = split_mult_twist(E1, ell);
    LocalData t1 = local_data(quadratic_twist(E1, tc.d), ell), t2 = local_data(quadratic_twist(E2, tc.d), ell);
    if (!t1.multiplicative() || !t2.multiplicative()) return r.reject("twisted pair is not multiplicative at ell");
    const int v1 = t1.v_disc, v2 = t2.v_disc;
    if (v1 % static_cast<int>(p) == 0 || v2 % static_cast<int>(p) == 0) return r.reject("p divides a minimal discriminant valuation");
    r.applies = true;
    r.type = detail::from_class(legendre_symbol(static_cast<i64>(v1) * v2, p) == 1);
    r.witnesses = {{"v_disc1", v1}, {"v_disc2", v2}, {"twist_d", tc.label}};
    r.note("after the twist d = " + tc.label + " both curves are multiplicative with v(Delta_min) = " + std::to_string(v1) + ", " + std::to_string(v2));
    r.note("v1*v2 is a " + std::string(*r.type == SymplecticType::Symplectic ? "square" : "nonsquare") + " mod p");
    return r;
}

struct ExistenceResult {
    bool exists = false;
    std::string criterion; // name of the criterion that applies
    std::string reason;
};

// E potentially multiplicative at ell
inline ExistenceResult exists_tate(const IntegerCurve& E, u64 p, u64 ell) {
    detail::check_primes(p, ell);
    LocalData d = local_data(E, ell);
    if (!d.potentially_multiplicative()) fail(ErrorKind::NotPotentiallyMultiplicative, "curve is potentially good at " + detail::str(ell));
    if (*d.v_j % static_cast<int>(p) != 0) return {true, "KrausOesterle", "p does not divide v(j)"};
    if (ell % p == 1 && detail::j_power(d, p) != 1) return {true, "ThmMultiplicative", "p | v(j), ell = 1 mod p and j~^((ell-1)/p) != 1"};
    return {false, "", ell % p != 1 ? "p | v(j) and ell is not 1 mod p" : "p | v(j) and j~^((ell-1)/p) = 1"};
}

// E potentially multiplicative, E2 potentially good at ell
inline ExistenceResult exists_mixed(const IntegerCurve& E, const IntegerCurve& E2, u64 p, u64 ell) {
    detail::check_primes(p, ell);
    LocalData d = local_data(E, ell), d2 = local_data(E2, ell);
    if (!d.potentially_multiplicative()) fail(ErrorKind::NotPotentiallyMultiplicative, "first curve is potentially good at " + detail::str(ell));
    if (d2.potentially_multiplicative()) fail(ErrorKind::InvalidCall, "second curve is potentially multiplicative at " + detail::str(ell));
    if (p == 3 && (d2.e == 3 || d2.e == 6)) return {true, "External:MixedP3TameE3or6", "p = 3 and e(E2) in {3, 6}"};
    if (ell % p == 1 && *d.v_j % static_cast<int>(p) == 0 && detail::j_power(d, p) != 1)
        return {true, "ThmMixed", "ell = 1 mod p, p | v(j) and j~^((ell-1)/p) != 1"};
    return {false, "", "no criterion covers this mixed configuration"};
}

struct MixedNormalization {
    TwistChoice twist;
    IntegerCurve E, E2;
    std::string case_tag; // "i": E2 twisted is good; "ii": p = 3 and e(E2 twisted) = 3
};

inline MixedNormalization mixed_twist_normalize(const IntegerCurve& E, const IntegerCurve& E2, u64 ell, u64 p) {
    detail::check_primes(p, ell);
    LocalData d = local_data(E, ell);
    if (!d.potentially_multiplicative()) fail(ErrorKind::InvalidCall, "first curve must be potentially multiplicative at " + detail::str(ell));
    MixedNormalization m;
    m.twist = split_mult_twist(E, ell);
    m.E = quadratic_twist(E, m.twist.d);
    m.E2 = quadratic_twist(E2, m.twist.d);
    LocalData t2 = local_data(m.E2, ell);
    if (t2.kind == ReductionKind::Good)
        m.case_tag = "i";
    else if (p == 3 && t2.kind == ReductionKind::AdditivePotGood && t2.e == 3)
        m.case_tag = "ii";
    else
        fail(ErrorKind::ClassificationError, "after the split twist the partner has " + std::string(reduction_kind_name(t2.kind)) +
                                                 " reduction with e = " + std::to_string(t2.e));
    return m;
}

} // namespace symcrit
