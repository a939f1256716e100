#pragma once

// Weierstrass models over Z, their invariants, and the standard changes of
// variables x = u^2 x' + r, y = u^3 y' + s u^2 x' + t.

#include <array>
#include <string>

#include "symcrit/curves/weierstrass.hpp"

namespace symcrit {

struct Rational {
    BigInt num = 0, den = 1;

    Rational() = default;
    Rational(BigInt n, BigInt d = 1) : num(std::move(n)), den(std::move(d)) {
        if (den == 0) fail(ErrorKind::InvalidArgument, "rational with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        BigInt g = boost::multiprecision::gcd(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }
    friend bool operator==(const Rational& a, const Rational& b) { return a.num == b.num && a.den == b.den; }
    friend Rational operator/(const Rational& a, const Rational& b) { return Rational(a.num * b.den, a.den * b.num); }
    std::string to_string() const { return den == 1 ? num.str() : num.str() + "/" + den.str(); }
};

// exact integer k-th root, if there is one
inline std::optional<BigInt> exact_root(const BigInt& n, unsigned k) {
    if (n < 0) {
        if (k % 2 == 0) return std::nullopt;
        auto r = exact_root(BigInt(-n), k);
        if (!r) return std::nullopt;
        return BigInt(-*r);
    }
    if (n < 2) return n;
    // Newton iteration from above
    BigInt x = BigInt(1) << (boost::multiprecision::msb(n) / k + 1);
    for (;;) {
        BigInt y = ((k - 1) * x + n / big_pow(x, k - 1)) / k;
        if (y >= x) break;
        x = y;
    }
    if (big_pow(x, k) == n) return x;
    return std::nullopt;
}

inline bool is_kth_power(const Rational& r, unsigned k) { return exact_root(r.num, k) && exact_root(r.den, k); }

class IntegerCurve {
public:
    IntegerCurve() = default;
    explicit IntegerCurve(const std::array<BigInt, 5>& a) : a_(a) {
        const auto& [a1, a2, a3, a4, a6] = a_;
        b2_ = a1 * a1 + 4 * a2;
        b4_ = 2 * a4 + a1 * a3;
        b6_ = a3 * a3 + 4 * a6;
        b8_ = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        c4_ = b2_ * b2_ - 24 * b4_;
        c6_ = -b2_ * b2_ * b2_ + 36 * b2_ * b4_ - 216 * b6_;
        disc_ = -b2_ * b2_ * b8_ - 8 * b4_ * b4_ * b4_ - 27 * b6_ * b6_ + 9 * b2_ * b4_ * b6_;
        if (disc_ == 0) fail(ErrorKind::InvalidArgument, "singular Weierstrass equation (discriminant zero)");
    }

    const std::array<BigInt, 5>& coefficients() const { return a_; }
    const BigInt& a1() const { return a_[0]; }
    const BigInt& a2() const { return a_[1]; }
    const BigInt& a3() const { return a_[2]; }
    const BigInt& a4() const { return a_[3]; }
    const BigInt& a6() const { return a_[4]; }
    const BigInt& b2() const { return b2_; }
    const BigInt& b4() const { return b4_; }
    const BigInt& b6() const { return b6_; }
    const BigInt& b8() const { return b8_; }
    const BigInt& c4() const { return c4_; }
    const BigInt& c6() const { return c6_; }
    const BigInt& discriminant() const { return disc_; }
    Rational j_invariant() const { return Rational(c4_ * c4_ * c4_, disc_); }

    friend bool operator==(const IntegerCurve& a, const IntegerCurve& b) { return a.a_ == b.a_; }

    std::string to_string() const {
        std::string s = "[";
        for (int i = 0; i < 5; ++i) s += (i ? "," : "") + a_[i].str();
        return s + "]";
    }

    // the model with coefficients reduced mod ell, over F_ell
    WeierstrassCurve reduce(u64 ell) const {
        FieldHandle F = TowerField::prime_field(ell);
        std::array<FieldElement, 5> a;
        for (int i = 0; i < 5; ++i) a[i] = FieldElement::from_big(F, a_[i]);
        return WeierstrassCurve(F, a);
    }

    std::array<u64, 5> coefficients_mod(u64 q) const {
        std::array<u64, 5> r;
        for (int i = 0; i < 5; ++i) r[i] = reduce_big(a_[i], q);
        return r;
    }

private:
    std::array<BigInt, 5> a_;
    BigInt b2_, b4_, b6_, b8_, c4_, c6_, disc_;
};

// Coefficients of the model E' with x = u^2 x' + r, y = u^3 y' + s u^2 x' + t,
// before division by the powers of u: returns u^i a_i'.
inline std::array<BigInt, 5> scaled_transform(const IntegerCurve& E, const BigInt& r, const BigInt& s, const BigInt& t) {
    const auto& [a1, a2, a3, a4, a6] = E.coefficients();
    return {a1 + 2 * s,
            a2 - s * a1 + 3 * r - s * s,
            a3 + r * a1 + 2 * t,
            a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t,
            a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1};
}

inline std::optional<IntegerCurve> transform(const IntegerCurve& E, const BigInt& u, const BigInt& r, const BigInt& s, const BigInt& t) {
    auto a = scaled_transform(E, r, s, t);
    const unsigned w[5] = {1, 2, 3, 4, 6};
    for (int i = 0; i < 5; ++i) {
        BigInt ui = big_pow(u, w[i]);
        if (a[i] % ui != 0) return std::nullopt;
        a[i] /= ui;
    }
    return IntegerCurve(a);
}

} // namespace symcrit
