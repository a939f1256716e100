#pragma once

// Point counting over prime fields.  Small fields use a Legendre-symbol sweep
// of the cubic (evaluated by finite differences); above the sweep limit a
// baby-step/giant-step search on the curve and its quadratic twist pins down
// the group order inside the Hasse interval.

#include <cmath>
#include <set>
#include <unordered_map>

#include "symcrit/curves/weierstrass.hpp"

namespace symcrit {

enum class CountMethod { Auto, Sweep, Bsgs };

inline constexpr u64 kSweepLimit = u64(1) << 20;

namespace detail {

inline u64 isqrt_u64(u64 n) {
    u64 r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

inline bool singular_mod(u64 q, const std::array<u64, 5>& a) {
    auto [a1, a2, a3, a4, a6] = a;
    u64 b2 = addmod(mulmod(a1, a1, q), mulmod(4 % q, a2, q), q);
    u64 b4 = addmod(mulmod(2 % q, a4, q), mulmod(a1, a3, q), q);
    u64 b6 = addmod(mulmod(a3, a3, q), mulmod(4 % q, a6, q), q);
    u64 b8 = submod(addmod(addmod(mulmod(mulmod(a1, a1, q), a6, q), mulmod(mulmod(4 % q, a2, q), a6, q), q),
                           mulmod(mulmod(a2, a3, q), a3, q), q),
                    addmod(mulmod(mulmod(a1, a3, q), a4, q), mulmod(a4, a4, q), q), q);
    u64 d = 0;
    d = submod(d, mulmod(mulmod(b2, b2, q), b8, q), q);
    d = submod(d, mulmod(8 % q, mulmod(mulmod(b4, b4, q), b4, q), q), q);
    d = submod(d, mulmod(27 % q, mulmod(b6, b6, q), q), q);
    d = addmod(d, mulmod(9 % q, mulmod(mulmod(b2, b4, q), b6, q), q), q);
    return d == 0;
}

inline u64 count_brute(u64 q, const std::array<u64, 5>& a) {
    auto [a1, a2, a3, a4, a6] = a;
    u64 n = 1;
    for (u64 x = 0; x < q; ++x)
        for (u64 y = 0; y < q; ++y) {
            u64 l = addmod(addmod(mulmod(y, y, q), mulmod(mulmod(a1, x, q), y, q), q), mulmod(a3, y, q), q);
            u64 r = addmod(addmod(addmod(mulmod(mulmod(x, x, q), x, q), mulmod(mulmod(a2, x, q), x, q), q), mulmod(a4, x, q), q), a6, q);
            if (l == r) ++n;
        }
    return n;
}

inline u64 count_sweep(u64 q, const std::array<u64, 5>& a) {
    if (q < 5) return count_brute(q, a);
    auto [a1, a2, a3, a4, a6] = a;
    // g(x) = 4x^3 + b2 x^2 + 2 b4 x + b6; #E = q + 1 + sum chi(g(x))
    u64 b2 = (a1 * a1 + 4 * a2) % q, b4 = (2 * a4 + a1 * a3) % q, b6 = (a3 * a3 + 4 * a6) % q;
    std::vector<signed char> chi(q, -1);
    chi[0] = 0;
    for (u64 y = 1, sq = 1; y <= (q - 1) / 2; ++y) {
        chi[sq] = 1;
        sq += 2 * y + 1;
        if (sq >= q) sq %= q;
    }
    auto g = [&](u64 x) {
        return (mulmod(mulmod(mulmod(4, x, q), x, q), x, q) + mulmod(mulmod(b2, x, q), x, q) + mulmod(2 * b4 % q, x, q) + b6) % q;
    };
    u64 g0 = g(0), g1 = g(1), g2 = g(2), g3 = g(3);
    u64 d1 = submod(g1, g0, q), d2 = submod(submod(g2, g1, q), d1, q);
    u64 d3 = submod(submod(submod(g3, g2, q), submod(g2, g1, q), q), d2, q);
    i64 s = 0;
    u64 v = g0;
    for (u64 x = 0; x < q; ++x) {
        s += chi[v];
        v = addmod(v, d1, q);
        d1 = addmod(d1, d2, q);
        d2 = addmod(d2, d3, q);
    }
    return static_cast<u64>(static_cast<i64>(q) + 1 + s);
}

// affine arithmetic on y^2 = x^3 + A x + B mod q
struct ShortCurveModQ {
    u64 q, A, B;
    struct Pt {
        u64 x = 0, y = 0;
        bool inf = true;
        bool operator==(const Pt& o) const { return inf == o.inf && (inf || (x == o.x && y == o.y)); }
    };
    Pt add(const Pt& P, const Pt& Q) const {
        if (P.inf) return Q;
        if (Q.inf) return P;
        u64 lam;
        if (P.x == Q.x) {
            if (addmod(P.y, Q.y, q) == 0) return {};
            lam = mulmod(addmod(mulmod(3, mulmod(P.x, P.x, q), q), A, q), invmod(mulmod(2, P.y, q), q), q);
        } else {
            lam = mulmod(submod(Q.y, P.y, q), invmod(submod(Q.x, P.x, q), q), q);
        }
        u64 x3 = submod(submod(mulmod(lam, lam, q), P.x, q), Q.x, q);
        u64 y3 = submod(mulmod(lam, submod(P.x, x3, q), q), P.y, q);
        return {x3, y3, false};
    }
    Pt neg(const Pt& P) const { return P.inf ? P : Pt{P.x, negmod(P.y, q), false}; }
    Pt mul(u64 n, Pt P) const {
        Pt R;
        while (n) {
            if (n & 1) R = add(R, P);
            P = add(P, P);
            n >>= 1;
        }
        return R;
    }
    Pt random_point(std::mt19937_64& rng) const {
        for (;;) {
            u64 x = rng() % q;
            u64 r = addmod(addmod(mulmod(mulmod(x, x, q), x, q), mulmod(A, x, q), q), B, q);
            if (r == 0) return {x, 0, false};
            if (powmod(r, (q - 1) / 2, q) != 1) continue;
            u64 y = sqrt_mod(r, q);
            if (rng() & 1) y = negmod(y, q);
            return {x, y, false};
        }
    }
};

// all m in [lo, hi] with mP = O
inline std::vector<u64> orders_in_interval(const ShortCurveModQ& C, const ShortCurveModQ::Pt& P, u64 lo, u64 hi) {
    using Pt = ShortCurveModQ::Pt;
    std::vector<u64> out;
    const u64 width = hi - lo + 1;
    const u64 b = isqrt_u64(width) + 1;
    std::unordered_map<u64, std::vector<std::pair<u64, u64>>> baby;
    Pt R;
    for (u64 j = 0; j < b; ++j) {
        if (j > 0 && R.inf) {
            // P has order j: every multiple of j kills it
            for (u64 m = (lo + j - 1) / j * j; m <= hi; m += j) out.push_back(m);
            return out;
        }
        if (!R.inf) baby[R.x].push_back({R.y, j});
        R = C.add(R, P);
    }
    const Pt step = C.mul(b, P);
    Pt G = C.mul(lo, P);
    for (u64 i = 0; lo + i * b <= hi; ++i) {
        // (lo + i b) P = -jP
        if (G.inf) out.push_back(lo + i * b);
        else {
            auto it = baby.find(G.x);
            if (it != baby.end())
                for (auto [y, j] : it->second)
                    if (y == negmod(G.y, C.q) && lo + i * b + j <= hi) out.push_back(lo + i * b + j);
        }
        G = C.add(G, step);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline u64 count_bsgs(u64 q, const std::array<u64, 5>& a, u64 seed) {
    auto [a1, a2, a3, a4, a6] = a;
    u64 b2 = addmod(mulmod(a1, a1, q), mulmod(4, a2, q), q), b4 = addmod(mulmod(2, a4, q), mulmod(a1, a3, q), q);
    u64 b6 = addmod(mulmod(a3, a3, q), mulmod(4, a6, q), q);
    u64 c4 = submod(mulmod(b2, b2, q), mulmod(24, b4, q), q);
    u64 c6 = addmod(submod(mulmod(36, mulmod(b2, b4, q), q), mulmod(mulmod(b2, b2, q), b2, q), q), negmod(mulmod(216, b6, q), q), q);
    ShortCurveModQ E{q, negmod(mulmod(27, c4, q), q), negmod(mulmod(54, c6, q), q)};
    const u64 u = least_nonresidue(q);
    ShortCurveModQ T{q, mulmod(E.A, mulmod(u, u, q), q), mulmod(E.B, mulmod(mulmod(u, u, q), u, q), q)};
    const u64 r = isqrt_u64(4 * q);
    const u64 lo = q + 1 - r, hi = q + 1 + r;
    std::mt19937_64 rng(mix_seed(seed, q));
    std::set<u64> cand;
    bool have = false;
    for (int attempt = 0; attempt < 400; ++attempt) {
        const bool twist = attempt % 2 == 1;
        const ShortCurveModQ& C = twist ? T : E;
        auto ms = orders_in_interval(C, C.random_point(rng), lo, hi);
        std::set<u64> next;
        for (u64 m : ms) next.insert(twist ? 2 * q + 2 - m : m);
        if (!have) {
            cand = std::move(next);
            have = true;
        } else {
            std::set<u64> both;
            std::set_intersection(cand.begin(), cand.end(), next.begin(), next.end(), std::inserter(both, both.begin()));
            cand = std::move(both);
        }
        if (cand.size() == 1 && attempt >= 1) return *cand.begin();
        if (cand.empty()) fail(ErrorKind::Internal, "group order search found no candidate mod " + std::to_string(q));
    }
    fail(ErrorKind::Internal, "group order search did not converge mod " + std::to_string(q));
}

} // namespace detail

// #E(F_q) for a model with coefficients already reduced mod q
inline u64 count_points_mod(u64 q, const std::array<u64, 5>& a, CountMethod method = CountMethod::Auto, u64 seed = 0) {
    if (!is_prime_u64(q) || q >= kMaxModulus) fail(ErrorKind::InvalidArgument, "point counting needs a prime modulus below 2^62");
    std::array<u64, 5> r;
    for (int i = 0; i < 5; ++i) r[i] = a[i] % q;
    if (detail::singular_mod(q, r)) fail(ErrorKind::BadReduction, "model is singular mod " + std::to_string(q));
    if (method == CountMethod::Auto) method = q <= kSweepLimit ? CountMethod::Sweep : CountMethod::Bsgs;
    if (method == CountMethod::Bsgs && q < 500) method = CountMethod::Sweep;
    if (method == CountMethod::Sweep) return detail::count_sweep(q, r);
    return detail::count_bsgs(q, r, seed);
}

inline i64 trace_mod(u64 q, const std::array<u64, 5>& a, CountMethod method = CountMethod::Auto, u64 seed = 0) {
    return static_cast<i64>(q + 1) - static_cast<i64>(count_points_mod(q, a, method, seed));
}

inline std::array<u64, 5> prime_field_coefficients(const WeierstrassCurve& E) {
    if (!E.field()->is_prime()) fail(ErrorKind::InvalidArgument, "point counting is implemented over prime fields only");
    std::array<u64, 5> a;
    for (int i = 0; i < 5; ++i) a[i] = E.coefficients()[i].flat()[0];
    return a;
}

inline BigInt count_points(const WeierstrassCurve& E, CountMethod method = CountMethod::Auto, u64 seed = 0) {
    return BigInt(count_points_mod(E.field()->characteristic(), prime_field_coefficients(E), method, seed));
}

inline i64 frobenius_trace(const WeierstrassCurve& E, CountMethod method = CountMethod::Auto, u64 seed = 0) {
    return trace_mod(E.field()->characteristic(), prime_field_coefficients(E), method, seed);
}

// A point of exact order p in E(F_ell).
inline Point point_of_order(const WeierstrassCurve& E, u64 p, u64 seed = 0) {
    BigInt N = count_points(E, CountMethod::Auto, seed);
    if (N % p != 0) fail(ErrorKind::NoSuchPoint, "no rational point of order " + std::to_string(p));
    BigInt m = N;
    while (m % p == 0) m /= p;
    std::mt19937_64 rng(mix_seed(seed, 0x9e3779b97f4a7c15ull ^ p));
    for (int tries = 0; tries < 1000; ++tries) {
        Point S = scalar_mul(m, random_point(E, E.field(), rng));
        if (S.is_infinity()) continue;
        for (;;) {
            Point T = scalar_mul(static_cast<i64>(p), S);
            if (T.is_infinity()) return S;
            S = T;
        }
    }
    fail(ErrorKind::Internal, "failed to find a point of order " + std::to_string(p));
}

} // namespace symcrit
