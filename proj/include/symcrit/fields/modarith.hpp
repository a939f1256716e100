#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/miller_rabin.hpp>

#include <cstdint>
#include <random>
#include <string>
#include <utility>

#include "symcrit/error.hpp"

namespace symcrit {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using BigInt = boost::multiprecision::cpp_int;

// moduli are kept below 2^62 so sums of two residues never wrap
inline constexpr u64 kMaxModulus = u64(1) << 62;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }
inline u64 addmod(u64 a, u64 b, u64 m) {
    u64 s = a + b;
    return s >= m ? s - m : s;
}
inline u64 submod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + m - b; }
inline u64 negmod(u64 a, u64 m) { return a == 0 ? 0 : m - a; }

inline u64 powmod(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

inline u64 invmod(u64 a, u64 m) {
    i64 t = 0, nt = 1;
    u64 r = m, nr = a % m;
    if (nr == 0) fail(ErrorKind::InvalidArgument, "inverse of zero mod " + std::to_string(m));
    while (nr) {
        u64 q = r / nr;
        i64 tmp = t - static_cast<i64>(q) * nt;
        t = nt;
        nt = tmp;
        u64 tr = r - q * nr;
        r = nr;
        nr = tr;
    }
    if (r != 1) fail(ErrorKind::InvalidArgument, "non-invertible residue mod " + std::to_string(m));
    return t < 0 ? static_cast<u64>(t + static_cast<i64>(m)) : static_cast<u64>(t);
}

inline u64 reduce_signed(i64 a, u64 m) {
    i64 r = a % static_cast<i64>(m);
    return static_cast<u64>(r < 0 ? r + static_cast<i64>(m) : r);
}

inline u64 reduce_big(const BigInt& a, u64 m) {
    BigInt r = a % m;
    if (r < 0) r += m;
    return static_cast<u64>(r);
}

inline bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // this base set is deterministic for all 64-bit n
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

inline bool is_prime_big(const BigInt& n) {
    if (n < 2) return false;
    if (n < BigInt(kMaxModulus)) return is_prime_u64(static_cast<u64>(n));
    std::mt19937_64 rng(0x5eed);
    return boost::multiprecision::miller_rabin_test(n, 32, rng);
}

inline u64 next_prime(u64 n) {
    u64 q = n + 1;
    while (!is_prime_u64(q)) ++q;
    return q;
}

// Legendre symbol (a/p) for an odd prime p, returns -1, 0 or 1
inline int legendre_symbol(i64 a, u64 p) {
    if (p < 3 || !is_prime_u64(p)) fail(ErrorKind::InvalidArgument, "legendre symbol needs an odd prime, got " + std::to_string(p));
    u64 r = reduce_signed(a, p);
    if (r == 0) return 0;
    return powmod(r, (p - 1) / 2, p) == 1 ? 1 : -1;
}

inline int legendre_symbol(const BigInt& a, u64 p) {
    if (p < 3 || !is_prime_u64(p)) fail(ErrorKind::InvalidArgument, "legendre symbol needs an odd prime, got " + std::to_string(p));
    u64 r = reduce_big(a, p);
    if (r == 0) return 0;
    return powmod(r, (p - 1) / 2, p) == 1 ? 1 : -1;
}

inline u64 least_nonresidue(u64 p) {
    for (u64 u = 2;; ++u)
        if (legendre_symbol(static_cast<i64>(u), p) == -1) return u;
}

// square root mod an odd prime; the smaller of the two roots
inline u64 sqrt_mod(u64 a, u64 p) {
    a %= p;
    if (a == 0) return 0;
    if (powmod(a, (p - 1) / 2, p) != 1) fail(ErrorKind::NoRoot, "not a square mod " + std::to_string(p));
    u64 q = p - 1;
    int s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    u64 z = least_nonresidue(p);
    u64 m = s, c = powmod(z, q, p), t = powmod(a, q, p), r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        u64 i = 0, tt = t;
        while (tt != 1) {
            tt = mulmod(tt, tt, p);
            ++i;
        }
        u64 b = c;
        for (u64 j = 0; j + i + 1 < m; ++j) b = mulmod(b, b, p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return r <= p - r ? r : p - r;
}

inline int valuation(BigInt n, u64 ell) {
    if (n == 0) fail(ErrorKind::InvalidArgument, "valuation of zero");
    int v = 0;
    while (n % ell == 0) {
        n /= ell;
        ++v;
    }
    return v;
}

inline BigInt big_pow(const BigInt& b, unsigned e) { return boost::multiprecision::pow(b, e); }

// 64-bit FNV-1a, used to derive deterministic seeds from canonical data
struct Fnv1a {
    u64 h = 0xcbf29ce484222325ull;
    void add(u64 v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 0x100000001b3ull;
        }
    }
    void add(std::string_view s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ull;
        }
    }
};

inline u64 mix_seed(u64 a, u64 b) {
    Fnv1a f;
    f.add(a);
    f.add(b);
    return f.h;
}

} // namespace symcrit
