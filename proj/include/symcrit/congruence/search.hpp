#pragma once

// Congruence search over a corpus: group by traces in a window of good primes,
// prove congruences up to the Sturm-type bound, and run the local criteria
// at every bad prime >= 5 of a congruent pair.

#include <algorithm>
#include <atomic>
#include <thread>

#include "symcrit/congruence/corpus.hpp"
#include "symcrit/criteria/dispatch.hpp"

namespace symcrit {

// prime factorization of a positive integer whose cofactor after trial
// division is prime or fits in u64 (Pollard-Brent)
namespace detail {

inline u64 pollard_brent(u64 n, u64 c) {
    auto f = [&](u64 x) { return addmod(mulmod(x, x, n), c, n); };
    u64 y = 2, g = 1, q = 1, x = 0, ys = 0;
    for (u64 r = 1; g == 1; r <<= 1) {
        x = y;
        for (u64 i = 0; i < r; ++i) y = f(y);
        for (u64 k = 0; k < r && g == 1; k += 128) {
            ys = y;
            for (u64 i = 0; i < std::min<u64>(128, r - k); ++i) {
                y = f(y);
                q = mulmod(q, x > y ? x - y : y - x, n);
            }
            g = std::gcd(q, n);
        }
    }
    if (g == n) {
        do {
            ys = f(ys);
            g = std::gcd(x > ys ? x - ys : ys - x, n);
        } while (g == 1);
    }
    return g;
}

inline void split_u64(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (is_prime_u64(n)) {
        out.push_back(n);
        return;
    }
    for (u64 c = 1;; ++c) {
        u64 d = pollard_brent(n, c);
        if (d != n) {
            split_u64(d, out);
            split_u64(n / d, out);
            return;
        }
    }
}

} // namespace detail

inline std::vector<std::pair<BigInt, int>> factor_integer(BigInt n) {
    if (n <= 0) fail(ErrorKind::InvalidArgument, "factor_integer needs a positive integer");
    std::vector<std::pair<BigInt, int>> f;
    for (u64 q = 2; q < (1u << 16) && BigInt(q) * q <= n; q += (q == 2 ? 1 : 2)) {
        int e = 0;
        while (n % q == 0) n /= q, ++e;
        if (e) f.emplace_back(BigInt(q), e);
    }
    if (n > 1) {
        if (n < BigInt(1u << 16) * (1u << 16) || is_prime_big(n)) {
            f.emplace_back(n, 1);
        } else {
            if (n >= kMaxModulus) fail(ErrorKind::InvalidArgument, "cofactor " + n.str() + " is too large to factor");
            std::vector<u64> ps;
            detail::split_u64(static_cast<u64>(n), ps);
            std::sort(ps.begin(), ps.end());
            for (u64 p : ps) {
                if (!f.empty() && f.back().first == p)
                    ++f.back().second;
                else
                    f.emplace_back(BigInt(p), 1);
            }
        }
    }
    return f;
}

inline std::vector<u64> prime_divisors(const BigInt& n) {
    std::vector<u64> out;
    for (const auto& [q, e] : factor_integer(n)) {
        if (q >= kMaxModulus) fail(ErrorKind::InvalidArgument, "prime divisor " + q.str() + " exceeds the supported modulus range");
        out.push_back(static_cast<u64>(q));
    }
    return out;
}

// mu(N)/6 for N = lcm(N1, N2), where mu(N) = N prod_{q | N} (1 + 1/q)
inline BigInt sturm_bound(const BigInt& N1, const BigInt& N2) {
    if (N1 <= 0 || N2 <= 0) fail(ErrorKind::InvalidArgument, "conductors must be positive");
    BigInt N = N1 / boost::multiprecision::gcd(N1, N2) * N2;
    BigInt mu = 1;
    for (const auto& [q, e] : factor_integer(N)) mu *= big_pow(q, static_cast<unsigned>(e - 1)) * (q + 1);
    return mu / 6;
}

inline std::vector<u64> primes_below(u64 n) {
    std::vector<u64> out;
    if (n < 3) return out;
    std::vector<bool> comp(n, false);
    for (u64 i = 2; i < n; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (u64 j = i * i; j < n; j += i) comp[j] = true;
    }
    return out;
}

enum class TraceKind { Good, Split, Nonsplit, Gap };

struct LocalTrace {
    TraceKind kind = TraceKind::Gap;
    i64 a = 0;
    std::string reason; // for gaps
};

// a_q of the record at q, read from its conductor and local data
inline LocalTrace local_trace(const CurveRecord& r, u64 q, u64 seed = 0) {
    LocalTrace out;
    const IntegerCurve& E = r.curve;
    bool bad = r.conductor ? (*r.conductor % q == 0) : (E.discriminant() % q == 0);
    if (!bad) {
        if (auto it = r.trace_cache.find(q); it != r.trace_cache.end()) return {TraceKind::Good, it->second, {}};
        if (E.discriminant() % q != 0) return {TraceKind::Good, trace_mod(q, E.coefficients_mod(q), CountMethod::Auto, seed), {}};
        if (q < 5) return {TraceKind::Gap, 0, "model is not minimal at " + std::to_string(q)};
        IntegerCurve M = minimal_model_at(E, q);
        return {TraceKind::Good, trace_mod(q, M.coefficients_mod(q), CountMethod::Auto, seed), {}};
    }
    if (q < 5) return {TraceKind::Gap, 0, "bad reduction at " + std::to_string(q)};
    LocalData d = local_data(E, q);
    switch (d.kind) {
        case ReductionKind::SplitMult: return {TraceKind::Split, 1, {}};
        case ReductionKind::NonsplitMult: return {TraceKind::Nonsplit, -1, {}};
        case ReductionKind::Good: return {TraceKind::Gap, 0, "conductor and model disagree at " + std::to_string(q)};
        default: return {TraceKind::Gap, 0, std::string(reduction_kind_name(d.kind)) + " reduction at " + std::to_string(q)};
    }
}

enum class PairStatus { Candidate, ProvedCongruent, Refuted };

inline std::string_view pair_status_name(PairStatus s) {
    switch (s) {
        case PairStatus::Candidate: return "Candidate";
        case PairStatus::ProvedCongruent: return "ProvedCongruent";
        case PairStatus::Refuted: return "Refuted";
    }
    return "?";
}

struct CongruencePair {
    CurveRecord left, right;
    u64 p = 0;
    PairStatus status = PairStatus::Candidate;
    BigInt bound_used = 0;
    std::string method; // "traces", "family", "none"
    std::size_t relations_checked = 0;
    std::vector<std::pair<u64, std::string>> gaps;
    std::optional<u64> refuted_at;
    std::vector<std::string> notes;
};

struct TraceTestOptions {
    u64 cap = 200000; // largest prime bound swept; beyond it the pair stays a Candidate
    u64 seed = 0;
    bool family_shortcut = true;
};

// is E isomorphic over Q to F, i.e. c4(E) = u^4 c4(F), c6(E) = u^6 c6(F) with u rational
inline bool isomorphic_over_q(const IntegerCurve& E, const IntegerCurve& F) {
    if ((E.c4() == 0) != (F.c4() == 0) || (E.c6() == 0) != (F.c6() == 0)) return false;
    std::optional<Rational> u2;
    if (F.c4() != 0 && F.c6() != 0) {
        u2 = Rational(E.c6() * F.c4(), F.c6() * E.c4());
    } else if (F.c4() == 0) {
        Rational r(E.c6(), F.c6());
        auto a = exact_root(r.num, 3), b = exact_root(r.den, 3);
        if (a && b) u2 = Rational(*a, *b);
    } else {
        Rational r(E.c4(), F.c4());
        auto a = exact_root(r.num, 2), b = exact_root(r.den, 2);
        if (a && b) u2 = Rational(*a, *b);
    }
    if (!u2 || !is_kth_power(*u2, 2)) return false;
    Rational u4 = *u2 * *u2;
    return u4 * Rational(F.c4()) == Rational(E.c4()) && u4 * *u2 * Rational(F.c6()) == Rational(E.c6());
}

// the record's curve really is E(t) for its recorded t
inline bool family_member(const CurveRecord& r) {
    if (!r.family_t || family_disc_numerator(*r.family_t) == 0) return false;
    return isomorphic_over_q(r.curve, family_curve(*r.family_t));
}

// E(t) and E(t') have isomorphic 5-torsion when t/t' is a fifth power in Q
inline bool family_congruent(const CurveRecord& A, const CurveRecord& B, u64 p) {
    return p == 5 && family_member(A) && family_member(B) && is_kth_power(*A.family_t / *B.family_t, 5);
}

inline CongruencePair trace_test(const CurveRecord& A, const CurveRecord& B, u64 p, const TraceTestOptions& opt = {}) {
    if (!is_prime_u64(p)) fail(ErrorKind::InvalidArgument, "p must be prime");
    CongruencePair out{A, B, p};
    if (A.reducible || B.reducible) {
        out.method = "none";
        out.notes.push_back("reducible image recorded; left as a candidate");
        return out;
    }
    if (opt.family_shortcut && family_congruent(A, B, p)) {
        out.method = "family";
        out.status = PairStatus::ProvedCongruent;
        out.notes.push_back("both in the family E(t) with t/t' = " + (*A.family_t / *B.family_t).to_string() +
                            " a fifth power, so the 5-torsion fields and modules agree");
        return out;
    }
    if (!A.conductor || !B.conductor) {
        out.method = "none";
        out.notes.push_back("missing conductor; no bound available");
        return out;
    }
    out.method = "traces";
    out.bound_used = sturm_bound(*A.conductor, *B.conductor);
    u64 limit = out.bound_used > opt.cap ? opt.cap : static_cast<u64>(out.bound_used);
    if (out.bound_used > opt.cap) out.notes.push_back("bound " + out.bound_used.str() + " exceeds cap " + std::to_string(opt.cap));
    for (u64 q : primes_below(limit)) {
        if (q == p) continue;
        LocalTrace ta = local_trace(A, q, opt.seed), tb = local_trace(B, q, opt.seed);
        if (ta.kind == TraceKind::Gap || tb.kind == TraceKind::Gap) {
            out.gaps.emplace_back(q, ta.kind == TraceKind::Gap ? "left: " + ta.reason : "right: " + tb.reason);
            continue;
        }
        const bool ga = ta.kind == TraceKind::Good, gb = tb.kind == TraceKind::Good;
        bool ok;
        if (ga && gb) {
            ok = (ta.a - tb.a) % static_cast<i64>(p) == 0;
        } else if (ga != gb) {
            ok = (static_cast<BigInt>(ta.a) * tb.a - (q + 1)) % p == 0;
        } else {
            out.gaps.emplace_back(q, "multiplicative for both");
            continue;
        }
        ++out.relations_checked;
        if (!ok) {
            out.status = PairStatus::Refuted;
            out.refuted_at = q;
            out.notes.push_back("relation fails at q = " + std::to_string(q) + " (a = " + std::to_string(ta.a) + ", " + std::to_string(tb.a) + ")");
            return out;
        }
    }
    if (out.bound_used <= opt.cap) out.status = PairStatus::ProvedCongruent;
    return out;
}

// first n primes above `above`
inline std::vector<u64> default_window(u64 above, std::size_t n = 50) {
    std::vector<u64> w;
    for (u64 q = above; w.size() < n;) {
        q = next_prime(q);
        w.push_back(q);
    }
    return w;
}

inline u64 max_conductor(const std::vector<CurveRecord>& corpus) {
    BigInt m = 0;
    for (const auto& r : corpus)
        if (r.conductor && *r.conductor > m) m = *r.conductor;
    if (m >= kMaxModulus / 2) fail(ErrorKind::InvalidWindow, "conductor too large for a default window");
    return static_cast<u64>(m);
}

// cells of curves with equal (a_q mod p) over the window; singletons dropped
inline std::vector<std::vector<std::size_t>> group_by_traces(const std::vector<CurveRecord>& corpus, const std::vector<u64>& window, u64 p,
                                                             u64 seed = 0) {
    for (u64 q : window) {
        if (!is_prime_u64(q) || q >= kMaxModulus) fail(ErrorKind::InvalidWindow, std::to_string(q) + " is not a usable prime");
        for (const auto& r : corpus)
            if ((r.conductor && *r.conductor % q == 0) || r.curve.discriminant() % q == 0)
                fail(ErrorKind::InvalidWindow, "window prime " + std::to_string(q) + " is bad for " + r.label);
    }
    std::map<std::vector<i64>, std::vector<std::size_t>> cells;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        std::vector<i64> key;
        for (u64 q : window) {
            i64 a = local_trace(corpus[i], q, seed).a;
            key.push_back(((a % static_cast<i64>(p)) + static_cast<i64>(p)) % static_cast<i64>(p));
        }
        cells[key].push_back(i);
    }
    std::vector<std::vector<std::size_t>> out;
    for (auto& [k, v] : cells)
        if (v.size() > 1) out.push_back(std::move(v));
    std::sort(out.begin(), out.end());
    return out;
}

struct PairReport {
    CongruencePair pair;
    std::vector<u64> primes_scanned;
    std::vector<CriterionReport> reports; // applicable ones only
    std::vector<std::string> errors;

    // verdict over all applicable typed reports; nullopt if none or if they disagree
    std::optional<SymplecticType> verdict() const {
        std::optional<SymplecticType> v;
        for (const auto& r : reports) {
            if (!r.type) continue;
            if (v && *v != *r.type) return std::nullopt;
            v = r.type;
        }
        return v;
    }
    bool conflicting() const {
        bool s = false, a = false;
        for (const auto& r : reports)
            if (r.type) (*r.type == SymplecticType::Symplectic ? s : a) = true;
        return s && a;
    }
};

struct SearchOptions {
    std::vector<u64> window; // empty: first 50 primes above the largest conductor
    TraceTestOptions trace;
    FrobeniusOptions frobenius;
    unsigned jobs = 1;
};

struct SearchResult {
    std::vector<PairReport> pairs;
    std::vector<std::string> warnings;
};

inline PairReport analyze_pair(const CurveRecord& A, const CurveRecord& B, u64 p, const SearchOptions& opt) {
    PairReport pr{trace_test(A, B, p, opt.trace)};
    if (pr.pair.status != PairStatus::ProvedCongruent) return pr;
    std::vector<u64> ells;
    for (const auto* r : {&A, &B}) {
        if (!r->conductor) continue;
        for (u64 q : prime_divisors(*r->conductor))
            if (q >= 5 && q != p) ells.push_back(q);
    }
    std::sort(ells.begin(), ells.end());
    ells.erase(std::unique(ells.begin(), ells.end()), ells.end());
    pr.primes_scanned = ells;
    for (u64 ell : ells) {
        try {
            CriterionReport r = dispatch(A.curve, B.curve, p, ell, opt.frobenius);
            if (r.applies) pr.reports.push_back(std::move(r));
        } catch (const Error& e) {
            pr.errors.push_back("ell = " + std::to_string(ell) + ": " + e.what());
        }
    }
    return pr;
}

// runs f(i) for i in [0, n) on `jobs` threads
template <class F>
void parallel_for(std::size_t n, unsigned jobs, F&& f) {
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (jobs == 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(jobs);
    for (unsigned t = 0; t < jobs; ++t)
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i; (i = next.fetch_add(1)) < n;) f(i);
            } catch (...) {
                errs[t] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

inline SearchResult find_triples(const std::vector<CurveRecord>& corpus, u64 p, const SearchOptions& opt = {}) {
    SearchResult res;
    std::vector<CurveRecord> usable;
    for (const auto& r : corpus) {
        if (!r.conductor)
            res.warnings.push_back(r.label + ": no conductor, excluded");
        else
            usable.push_back(r);
    }
    if (usable.size() < 2) return res;
    std::vector<u64> window = opt.window.empty() ? default_window(max_conductor(usable)) : opt.window;
    std::vector<std::pair<std::size_t, std::size_t>> todo;
    for (const auto& cell : group_by_traces(usable, window, p, opt.trace.seed))
        for (std::size_t a = 0; a < cell.size(); ++a)
            for (std::size_t b = a + 1; b < cell.size(); ++b) {
                const auto &L = usable[cell[a]], &R = usable[cell[b]];
                if (!L.isogeny_class.empty() && L.isogeny_class == R.isogeny_class) {
                    res.warnings.push_back(L.label + ", " + R.label + ": same isogeny class, skipped");
                    continue;
                }
                todo.emplace_back(cell[a], cell[b]);
            }
    res.pairs.resize(todo.size());
    parallel_for(todo.size(), opt.jobs, [&](std::size_t i) { res.pairs[i] = analyze_pair(usable[todo[i].first], usable[todo[i].second], p, opt); });
    return res;
}

inline nlohmann::ordered_json to_json(const PairReport& pr) {
    nlohmann::ordered_json j;
    const auto& c = pr.pair;
    j["left"] = c.left.label;
    j["right"] = c.right.label;
    j["p"] = c.p;
    j["status"] = pair_status_name(c.status);
    j["method"] = c.method;
    j["bound_used"] = c.bound_used.str();
    j["relations_checked"] = c.relations_checked;
    nlohmann::ordered_json gaps = nlohmann::ordered_json::array();
    for (const auto& [q, why] : c.gaps) gaps.push_back({{"q", q}, {"reason", why}});
    j["gaps"] = gaps;
    j["refuted_at"] = c.refuted_at ? nlohmann::ordered_json(*c.refuted_at) : nlohmann::ordered_json(nullptr);
    j["notes"] = c.notes;
    j["primes_scanned"] = pr.primes_scanned;
    auto v = pr.verdict();
    j["verdict"] = v ? nlohmann::ordered_json(type_name(*v)) : nlohmann::ordered_json(pr.conflicting() ? "conflict" : "undecided");
    nlohmann::ordered_json reps = nlohmann::ordered_json::array();
    for (const auto& r : pr.reports) reps.push_back(to_json(r));
    j["reports"] = reps;
    j["errors"] = pr.errors;
    return j;
}

} // namespace symcrit
