#pragma once

// Long Weierstrass curves y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over a
// tower field, and their points.  Points may have coordinates in any extension
// of the curve's field; binary operations move to the larger field.

#include <array>
#include <map>
#include <mutex>

#include "symcrit/fields/factor.hpp"

namespace symcrit {

class WeierstrassCurve {
public:
    WeierstrassCurve() = default;
    WeierstrassCurve(const FieldHandle& K, const std::array<FieldElement, 5>& a) : d_(std::make_shared<Data>()) {
        d_->field = K;
        for (int i = 0; i < 5; ++i) d_->a[i] = a[i].lift_to(K);
        const auto& [a1, a2, a3, a4, a6] = d_->a;
        d_->b2 = a1 * a1 + 4 * a2;
        d_->b4 = 2 * a4 + a1 * a3;
        d_->b6 = a3 * a3 + 4 * a6;
        d_->b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        const auto &b2 = d_->b2, &b4 = d_->b4, &b6 = d_->b6, &b8 = d_->b8;
        d_->c4 = b2 * b2 - 24 * b4;
        d_->c6 = -(b2 * b2 * b2) + 36 * b2 * b4 - 216 * b6;
        d_->disc = -(b2 * b2 * b8) - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
        if (d_->disc.is_zero()) fail(ErrorKind::InvalidArgument, "singular Weierstrass equation (discriminant zero)");
        d_->j = d_->c4 * d_->c4 * d_->c4 / d_->disc;
    }
    WeierstrassCurve(const FieldHandle& K, i64 a1, i64 a2, i64 a3, i64 a4, i64 a6)
        : WeierstrassCurve(K, {FieldElement(K, a1), FieldElement(K, a2), FieldElement(K, a3), FieldElement(K, a4), FieldElement(K, a6)}) {}

    const FieldHandle& field() const { return d_->field; }
    const FieldElement& a1() const { return d_->a[0]; }
    const FieldElement& a2() const { return d_->a[1]; }
    const FieldElement& a3() const { return d_->a[2]; }
    const FieldElement& a4() const { return d_->a[3]; }
    const FieldElement& a6() const { return d_->a[4]; }
    const std::array<FieldElement, 5>& coefficients() const { return d_->a; }
    const FieldElement& b2() const { return d_->b2; }
    const FieldElement& b4() const { return d_->b4; }
    const FieldElement& b6() const { return d_->b6; }
    const FieldElement& b8() const { return d_->b8; }
    const FieldElement& c4() const { return d_->c4; }
    const FieldElement& c6() const { return d_->c6; }
    const FieldElement& discriminant() const { return d_->disc; }
    const FieldElement& j_invariant() const { return d_->j; }

    WeierstrassCurve base_change(const FieldHandle& L) const { return WeierstrassCurve(L, d_->a); }

    friend bool operator==(const WeierstrassCurve& E, const WeierstrassCurve& F) {
        if (E.d_ == F.d_) return true;
        for (int i = 0; i < 5; ++i)
            if (E.d_->a[i] != F.d_->a[i]) return false;
        return true;
    }
    friend bool operator!=(const WeierstrassCurve& E, const WeierstrassCurve& F) { return !(E == F); }

    bool contains(const FieldElement& x, const FieldElement& y) const {
        const auto& [a1, a2, a3, a4, a6] = d_->a;
        return y * y + a1 * x * y + a3 * y == x * x * x + a2 * x * x + a4 * x + a6;
    }

    std::string to_string() const {
        std::string s = "[";
        for (int i = 0; i < 5; ++i) s += (i ? "," : "") + d_->a[i].to_string();
        return s + "] over " + d_->field->describe();
    }

    // memo table for division polynomials, filled at most once per index
    template <class Make>
    Polynomial cached_division_polynomial(int n, Make make) const {
        {
            std::lock_guard<std::mutex> g(d_->mu);
            auto it = d_->divpolys.find(n);
            if (it != d_->divpolys.end()) return it->second;
        }
        Polynomial p = make();
        std::lock_guard<std::mutex> g(d_->mu);
        return d_->divpolys.emplace(n, std::move(p)).first->second;
    }

private:
    struct Data {
        FieldHandle field;
        std::array<FieldElement, 5> a;
        FieldElement b2, b4, b6, b8, c4, c6, disc, j;
        std::mutex mu;
        std::map<int, Polynomial> divpolys;
    };
    std::shared_ptr<Data> d_;
};

class Point {
public:
    Point() = default;
    static Point infinity(const WeierstrassCurve& E) {
        Point P;
        P.E_ = E;
        P.inf_ = true;
        return P;
    }
    Point(const WeierstrassCurve& E, const FieldElement& x, const FieldElement& y) : E_(E), inf_(false) {
        const FieldHandle& L = larger_field(larger_field(x.field(), y.field()), E.field());
        x_ = x.lift_to(L);
        y_ = y.lift_to(L);
        if (!E.contains(x_, y_)) fail(ErrorKind::InvalidArgument, "point (" + x_.to_string() + " ; " + y_.to_string() + ") is not on the curve");
    }

    const WeierstrassCurve& curve() const { return E_; }
    bool is_infinity() const { return inf_; }
    const FieldElement& x() const { return x_; }
    const FieldElement& y() const { return y_; }
    const FieldHandle& field() const { return inf_ ? E_.field() : x_.field(); }

    Point lift_to(const FieldHandle& L) const {
        if (inf_) return *this;
        Point P = *this;
        P.x_ = x_.lift_to(L);
        P.y_ = y_.lift_to(L);
        return P;
    }

    friend bool operator==(const Point& P, const Point& Q) {
        if (P.inf_ || Q.inf_) return P.inf_ == Q.inf_;
        return P.x_ == Q.x_ && P.y_ == Q.y_;
    }
    friend bool operator!=(const Point& P, const Point& Q) { return !(P == Q); }

    std::string to_string() const { return inf_ ? "O" : "(" + x_.to_string() + " ; " + y_.to_string() + ")"; }

private:
    friend Point make_point_unchecked(const WeierstrassCurve&, FieldElement, FieldElement);
    WeierstrassCurve E_;
    bool inf_ = true;
    FieldElement x_, y_;
};

inline Point make_point_unchecked(const WeierstrassCurve& E, FieldElement x, FieldElement y) {
    Point P;
    P.E_ = E;
    P.inf_ = false;
    P.x_ = std::move(x);
    P.y_ = std::move(y);
    return P;
}

inline Point negate(const Point& P) {
    if (P.is_infinity()) return P;
    const auto& E = P.curve();
    return make_point_unchecked(E, P.x(), -P.y() - E.a1() * P.x() - E.a3());
}

namespace detail {
inline void check_same_curve(const Point& P, const Point& Q) {
    if (P.curve() != Q.curve()) fail(ErrorKind::InvalidArgument, "points lie on different curves");
}
} // namespace detail

// slope and intercept of the line through P and Q (tangent when equal);
// nullopt when the line is vertical
inline std::optional<std::pair<FieldElement, FieldElement>> chord(const Point& P, const Point& Q) {
    const auto& E = P.curve();
    const FieldElement &x1 = P.x(), &y1 = P.y(), &x2 = Q.x(), &y2 = Q.y();
    if (x1 != x2) {
        FieldElement inv = (x2 - x1).inverse();
        return std::make_pair((y2 - y1) * inv, (y1 * x2 - y2 * x1) * inv);
    }
    FieldElement den = 2 * y1 + E.a1() * x1 + E.a3();
    if (y1 != y2 || den.is_zero()) return std::nullopt;
    FieldElement inv = den.inverse();
    FieldElement lam = (3 * x1 * x1 + 2 * E.a2() * x1 + E.a4() - E.a1() * y1) * inv;
    FieldElement nu = (-(x1 * x1 * x1) + E.a4() * x1 + 2 * E.a6() - E.a3() * y1) * inv;
    return std::make_pair(lam, nu);
}

inline Point add(const Point& P, const Point& Q) {
    detail::check_same_curve(P, Q);
    if (P.is_infinity()) return Q;
    if (Q.is_infinity()) return P;
    if (P.field().get() != Q.field().get() && !same_field(*P.field(), *Q.field())) {
        const FieldHandle& L = larger_field(P.field(), Q.field());
        return add(P.lift_to(L), Q.lift_to(L));
    }
    auto ln = chord(P, Q);
    if (!ln) return Point::infinity(P.curve());
    const auto& E = P.curve();
    const auto& [lam, nu] = *ln;
    FieldElement x3 = lam * lam + E.a1() * lam - E.a2() - P.x() - Q.x();
    FieldElement y3 = -(lam + E.a1()) * x3 - nu - E.a3();
    return make_point_unchecked(E, x3, y3);
}

inline Point subtract(const Point& P, const Point& Q) { return add(P, negate(Q)); }

inline Point scalar_mul(const BigInt& n, const Point& P) {
    if (n < 0) return scalar_mul(BigInt(-n), negate(P));
    Point R = Point::infinity(P.curve());
    if (n == 0 || P.is_infinity()) return R;
    for (std::size_t i = boost::multiprecision::msb(n) + 1; i-- > 0;) {
        R = add(R, R);
        if (boost::multiprecision::bit_test(n, static_cast<unsigned>(i))) R = add(R, P);
    }
    return R;
}
inline Point scalar_mul(i64 n, const Point& P) { return scalar_mul(BigInt(n), P); }

// 4x^3 + b2 x^2 + 2 b4 x + b6 = (2y + a1 x + a3)^2
inline FieldElement two_torsion_cubic(const WeierstrassCurve& E, const FieldElement& x) {
    return ((4 * x + E.b2()) * x + 2 * E.b4()) * x + E.b6();
}

// Point with the given x; y is the canonical choice, in a quadratic extension of x's field if needed.
inline Point lift_x(const WeierstrassCurve& E, const FieldElement& x0) {
    const FieldHandle& L0 = larger_field(x0.field(), E.field());
    FieldElement x = x0.lift_to(L0);
    FieldElement d = two_torsion_cubic(E, x);
    FieldElement r(L0);
    if (d.is_zero() || is_square(d)) {
        r = sqrt_in_field(d);
    } else {
        Polynomial g = Polynomial::monomial(FieldElement(L0, 1), 2) - Polynomial::constant(d);
        r = adjoin_root(g);
        x = x.lift_to(r.field());
    }
    const FieldHandle& L = r.field();
    FieldElement y = (r - E.a1().lift_to(L) * x - E.a3().lift_to(L)) * FieldElement(L, 2).inverse();
    return make_point_unchecked(E, x, y);
}

inline std::optional<Point> lift_x_in_field(const WeierstrassCurve& E, const FieldElement& x0) {
    const FieldHandle& L = larger_field(x0.field(), E.field());
    FieldElement x = x0.lift_to(L);
    FieldElement d = two_torsion_cubic(E, x);
    if (!is_square(d)) return std::nullopt;
    FieldElement r = sqrt_in_field(d);
    FieldElement y = (r - E.a1() * x - E.a3()) * FieldElement(L, 2).inverse();
    return make_point_unchecked(E, x, y);
}

inline Point random_point(const WeierstrassCurve& E, const FieldHandle& L, std::mt19937_64& rng) {
    if (!is_subfield(*E.field(), *L)) fail(ErrorKind::InvalidArgument, "sampling field does not contain the curve's field");
    for (int tries = 0; tries < 100000; ++tries) {
        FieldElement x = detail::random_element(L, rng);
        auto P = lift_x_in_field(E, x);
        if (P) {
            if (rng() & 1) return negate(*P);
            return *P;
        }
    }
    fail(ErrorKind::Internal, "could not sample a point");
}

// coordinatewise x -> x^ell; the curve must be defined over the prime field
inline Point frobenius_point(const Point& P) {
    const auto& E = P.curve();
    const FieldHandle& Fp = prime_subfield(E.field());
    for (const auto& a : E.coefficients())
        if (!a.descend_to(Fp)) fail(ErrorKind::InvalidArgument, "curve is not defined over the prime field");
    if (P.is_infinity()) return P;
    const u64 ell = E.field()->characteristic();
    return make_point_unchecked(E, P.x().pow(ell), P.y().pow(ell));
}

} // namespace symcrit
