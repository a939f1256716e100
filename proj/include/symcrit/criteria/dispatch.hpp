#pragma once

// Routing of a pair (E1, E2) at ell to the criterion covering its local
// reduction types, after the simultaneous quadratic twist that reaches a
// covered row.

#include "symcrit/criteria/criteria.hpp"

namespace symcrit {

namespace detail {

inline CriterionReport no_criterion(u64 ell, u64 p, const std::string& why) {
    CriterionReport r("None", ell, p);
    r.note(why);
    r.reject("no criterion exists at ell = " + std::to_string(ell));
    return r;
}

inline CriterionReport external(const std::string& name, u64 ell, u64 p, const std::string& why) {
    CriterionReport r("External:" + name, ell, p);
    r.applies = true;
    r.note(why);
    r.note("criterion outside this library; named here, not evaluated");
    return r;
}

inline CriterionReport dispatch_both_potmult(const IntegerCurve& E1, const IntegerCurve& E2, u64 p, u64 ell, const FrobeniusOptions& opt) {
    TwistChoice tc = split_mult_twist(E1, ell);
    IntegerCurve T1 = quadratic_twist(E1, tc.d), T2 = quadratic_twist(E2, tc.d);
    LocalData l2 = local_data(T2, ell);
    if (l2.kind != ReductionKind::SplitMult) {
        CriterionReport r("None", ell, p);
        return r.reject("after the twist d = " + tc.label + " making E1 split, E2 is " + std::string(reduction_kind_name(l2.kind)) +
                        ": the p-torsion modules cannot be isomorphic at ell");
    }
    ExistenceResult ex = exists_tate(T1, p, ell);
    CriterionReport r;
    if (!ex.exists)
        r = no_criterion(ell, p, "both potentially multiplicative; " + ex.reason);
    else if (ex.criterion == "KrausOesterle")
        r = ko_criterion(E1, E2, p, ell);
    else
        r = thm_multiplicative(T1, T2, p, ell, opt);
    r.witnesses["twist_d"] = tc.label;
    r.narrative.insert(r.narrative.begin(), "both curves potentially multiplicative; simultaneous twist d = " + tc.label);
    return r;
}

inline CriterionReport dispatch_mixed(const IntegerCurve& E, const IntegerCurve& E2, u64 p, u64 ell, const FrobeniusOptions& opt) {
    MixedNormalization m;
    try {
        m = mixed_twist_normalize(E, E2, ell, p);
    } catch (const Error& err) {
        if (err.kind() != ErrorKind::ClassificationError) throw;
        CriterionReport r("None", ell, p);
        return r.reject(std::string("mixed reduction types cannot have isomorphic p-torsion here (") + err.what() + ")");
    }
    ExistenceResult ex = exists_mixed(E, E2, p, ell);
    CriterionReport r;
    if (!ex.exists)
        r = no_criterion(ell, p, "mixed reduction; " + ex.reason);
    else if (ex.criterion != "ThmMixed")
        r = external(ex.criterion.substr(std::string("External:").size()), ell, p, ex.reason);
    else if (m.case_tag != "i")
        r = no_criterion(ell, p, "twisted partner is not good at ell");
    else
        r = thm_mixed(m.E, m.E2, p, ell, opt);
    r.witnesses["twist_d"] = m.twist.label;
    r.narrative.insert(r.narrative.begin(), "mixed reduction; twist d = " + m.twist.label + " makes the multiplicative curve split, case (" + m.case_tag + ")");
    return r;
}

inline CriterionReport dispatch_both_potgood(const IntegerCurve& E1, const IntegerCurve& E2, u64 p, u64 ell, const FrobeniusOptions& opt) {
    std::optional<TwistChoice> best;
    int best_e = 0;
    for (const auto& tc : local_twist_classes(ell)) {
        LocalData t1 = local_data(quadratic_twist(E1, tc.d), ell), t2 = local_data(quadratic_twist(E2, tc.d), ell);
        if (t1.e != t2.e) continue;
        if (!best || t1.e < best_e) {
            best = tc;
            best_e = t1.e;
        }
    }
    if (!best) {
        CriterionReport r("None", ell, p);
        return r.reject("semistability defects differ under every twist: the p-torsion modules cannot be isomorphic at ell");
    }
    IntegerCurve T1 = quadratic_twist(E1, best->d), T2 = quadratic_twist(E2, best->d);
    CriterionReport r;
    if (best_e == 1) {
        WeierstrassCurve R1 = reduce_mod(T1, ell), R2 = reduce_mod(T2, ell);
        r = thm_goodred(R1, R2, p, opt);
        if (!r.applies) r.note("no criterion exists at ell = " + std::to_string(ell));
    } else if (best_e == 3 && ell % 3 == 2) {
        r = external("PotGoodE3EllTwoMod3", ell, p, "potentially good with e = 3, ell = 2 mod 3");
    } else if (best_e == 3 && p == 3) {
        r = external("PotGoodE3P3", ell, p, "potentially good with e = 3, ell = 1 mod 3, p = 3");
    } else if (best_e == 4 && ell % 4 == 3) {
        r = external("PotGoodE4EllThreeMod4", ell, p, "potentially good with e = 4, ell = 3 mod 4");
    } else {
        r = no_criterion(ell, p, "potentially good with e = " + std::to_string(best_e) + " and no covering row");
    }
    r.witnesses["twist_d"] = best->label;
    r.narrative.insert(r.narrative.begin(), "both potentially good; twist d = " + best->label + " brings both to e = " + std::to_string(best_e));
    return r;
}

} // namespace detail

inline CriterionReport dispatch(const IntegerCurve& E1, const IntegerCurve& E2, u64 p, u64 ell, const FrobeniusOptions& opt = {}) {
    detail::check_primes(p, ell);
    if (ell == p) return detail::no_criterion(ell, p, "ell = p is outside the local criteria");
    LocalData d1 = local_data(E1, ell), d2 = local_data(E2, ell);
    CriterionReport r;
    const bool m1 = d1.potentially_multiplicative(), m2 = d2.potentially_multiplicative();
    if (m1 && m2)
        r = detail::dispatch_both_potmult(E1, E2, p, ell, opt);
    else if (m1)
        r = detail::dispatch_mixed(E1, E2, p, ell, opt);
    else if (m2)
        r = detail::dispatch_mixed(E2, E1, p, ell, opt);
    else
        r = detail::dispatch_both_potgood(E1, E2, p, ell, opt);
    r.narrative.insert(r.narrative.begin(), "reduction at " + std::to_string(ell) + ": E1 " + std::string(reduction_kind_name(d1.kind)) +
                                                ", E2 " + std::string(reduction_kind_name(d2.kind)));
    return r;
}

} // namespace symcrit
