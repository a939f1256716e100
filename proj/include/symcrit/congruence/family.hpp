#pragma once

// The one-parameter family E(t) whose 5-torsion contains a copy of mu_5,
// with the explicit embedding zeta -> P_t.

#include <cctype>
#include <functional>
#include <string_view>

#include "symcrit/local/integer_curve.hpp"

namespace symcrit {

inline Rational operator*(const Rational& a, const Rational& b) { return Rational(a.num * b.num, a.den * b.den); }
inline Rational operator+(const Rational& a, const Rational& b) { return Rational(a.num * b.den + b.num * a.den, a.den * b.den); }
inline Rational operator-(const Rational& a) { return Rational(-a.num, a.den); }
inline Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

// Parses integers combined with + - * / ^ and parentheses, e.g. "2*11^5", "2/11^5".
inline Rational parse_rational(std::string_view s) {
    std::size_t i = 0;
    auto skip = [&] {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    };
    auto bad = [&](const std::string& what) -> Rational {
        fail(ErrorKind::ParseError, "rational expression '" + std::string(s) + "' at column " + std::to_string(i + 1) + ": " + what);
    };
    std::function<Rational()> expr;
    std::function<Rational()> atom = [&]() -> Rational {
        skip();
        if (i < s.size() && s[i] == '(') {
            ++i;
            Rational r = expr();
            skip();
            if (i >= s.size() || s[i] != ')') return bad("expected ')'");
            ++i;
            return r;
        }
        if (i < s.size() && s[i] == '-') {
            ++i;
            return -atom();
        }
        std::size_t j = i;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        if (j == i) return bad("expected a number");
        Rational r(BigInt(std::string(s.substr(i, j - i))));
        i = j;
        return r;
    };
    auto power = [&]() -> Rational {
        Rational b = atom();
        skip();
        if (i < s.size() && s[i] == '^') {
            ++i;
            skip();
            std::size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            if (j == i || j - i > 4) return bad("expected a small exponent");
            unsigned k = static_cast<unsigned>(std::stoul(std::string(s.substr(i, j - i))));
            i = j;
            return Rational(big_pow(b.num, k), big_pow(b.den, k));
        }
        return b;
    };
    auto term = [&]() -> Rational {
        Rational r = power();
        for (;;) {
            skip();
            if (i < s.size() && s[i] == '*') {
                ++i;
                r = r * power();
            } else if (i < s.size() && s[i] == '/') {
                ++i;
                Rational d = power();
                if (d.num == 0) return bad("division by zero");
                r = r / d;
            } else {
                return r;
            }
        }
    };
    expr = [&]() -> Rational {
        Rational r = term();
        for (;;) {
            skip();
            if (i < s.size() && s[i] == '+') {
                ++i;
                r = r + term();
            } else if (i < s.size() && s[i] == '-') {
                ++i;
                r = r - term();
            } else {
                return r;
            }
        }
    };
    Rational r = expr();
    skip();
    if (i != s.size()) return bad("trailing characters");
    return r;
}

// t (t^2 - 11t - 1)^5 with t = n/d, times d^11 so that it is integral
inline BigInt family_disc_numerator(const Rational& t) {
    const BigInt &n = t.num, &d = t.den;
    return n * big_pow(n * n - 11 * n * d - d * d, 5);
}

// E(t) scaled by u = den(t), which makes every a_i integral
inline IntegerCurve family_curve(const Rational& t) {
    if (family_disc_numerator(t) == 0) fail(ErrorKind::SingularParameter, "E(t) is singular at t = " + t.to_string());
    const BigInt &n = t.num, &d = t.den;
    BigInt n2 = n * n, n3 = n2 * n, n4 = n3 * n, d2 = d * d, d3 = d2 * d, d4 = d3 * d;
    return IntegerCurve({d - n, -n * d, -n * d2, -5 * d * (n3 + 2 * n2 * d - n * d2),
                         -n * (n4 + 10 * n3 * d - 5 * n2 * d2 + 15 * n * d3 - d4) * d});
}

inline WeierstrassCurve family_curve_over(const FieldHandle& K, const FieldElement& t) {
    FieldElement one(K, 1);
    FieldElement t2 = t * t, t3 = t2 * t;
    FieldElement delta = t * (t2 - t * 11 - one).pow(u64(5));
    if (delta.is_zero()) fail(ErrorKind::SingularParameter, "E(t) is singular at t = " + t.to_string());
    return WeierstrassCurve(K, {one - t, -t, -t, (t3 + t2 * 2 - t) * (-5), -t * (t3 * t + t3 * 10 - t2 * 5 + t * 15 - one)});
}

// P_t on E(t) over the field of zeta (char != 2, 5; zeta of exact order 5)
inline Point family_torsion_point(const FieldElement& t, const FieldElement& zeta) {
    FieldHandle K = larger_field(t.field(), zeta.field());
    u64 ch = K->characteristic();
    if (ch == 2 || ch == 5) fail(ErrorKind::InvalidArgument, "family torsion point needs characteristic other than 2 and 5");
    FieldElement T = t.lift_to(K), z = zeta.lift_to(K), one(K, 1);
    if (z.is_one() || !z.pow(u64(5)).is_one()) fail(ErrorKind::InvalidArgument, "zeta must have exact order 5");
    FieldElement delta = T * (T * T - T * 11 - one).pow(u64(5));
    if (delta.is_zero()) fail(ErrorKind::InvalidArgument, "E(t) is singular at this t");
    FieldElement fifth = FieldElement(K, 5).inverse();
    FieldElement t2 = T * T, t3 = t2 * T, z2 = z * z, z3 = z2 * z;
    FieldElement X = -(t2 * 3 - T * 8 + 2) * fifth - (t2 - T * 11 - one) * fifth * (z2 + z3);
    FieldElement Y = -(T * (t2 - T + 14)) * fifth + (t3 - t2 * 9 - T * 23 - 2) * fifth * z - (t3 - t2 * 13 + T * 21 + 2) * fifth * z2 +
                     (t3 - t2 * 10 - T * 12 - one) * fifth * z3;
    return Point(family_curve_over(K, T), X, Y);
}

} // namespace symcrit
