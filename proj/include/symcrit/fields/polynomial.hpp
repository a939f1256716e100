#pragma once

// Dense univariate polynomials over a tower field.  Coefficients are stored
// flat, stride = absolute degree of the coefficient field, lowest degree first.

#include <initializer_list>
#include <tuple>
#include <string>
#include <utility>
#include <vector>

#include "symcrit/fields/tower.hpp"

namespace symcrit {

namespace detail {

inline std::size_t karatsuba_threshold = 32;

inline void mul_schoolbook(const TowerField& K, const u64* a, std::size_t na, const u64* b, std::size_t nb, u64* out) {
    const std::size_t s = K.absolute_degree();
    std::fill(out, out + (na + nb - 1) * s, 0);
    if (K.is_prime()) {
        const u64 m = K.characteristic();
        for (std::size_t k = 0; k < na + nb - 1; ++k) {
            u128 acc = 0;
            std::size_t lo = k >= nb ? k - nb + 1 : 0, hi = std::min(k, na - 1);
            for (std::size_t i = lo; i <= hi; ++i) {
                acc += static_cast<u128>(a[i]) * b[k - i];
                if (acc >> 126) acc %= m;
            }
            out[k] = static_cast<u64>(acc % m);
        }
        return;
    }
    Scratch prod(s);
    for (std::size_t i = 0; i < na; ++i) {
        if (K.is_zero(a + i * s)) continue;
        for (std::size_t j = 0; j < nb; ++j) {
            K.mul(a + i * s, b + j * s, prod.data());
            K.add(out + (i + j) * s, prod.data(), out + (i + j) * s);
        }
    }
}

// out has room for (na + nb - 1) blocks
inline void mul_poly(const TowerField& K, const u64* a, std::size_t na, const u64* b, std::size_t nb, u64* out) {
    if (na == 0 || nb == 0) return;
    if (std::min(na, nb) < karatsuba_threshold) {
        mul_schoolbook(K, a, na, b, nb, out);
        return;
    }
    const std::size_t s = K.absolute_degree();
    const std::size_t m = (std::max(na, nb) + 1) / 2;
    if (na <= m || nb <= m) {
        // one operand fits in the low half: split the other and add two products
        const u64* big = na > nb ? a : b;
        const u64* small = na > nb ? b : a;
        std::size_t nbig = std::max(na, nb), nsmall = std::min(na, nb);
        std::fill(out, out + (na + nb - 1) * s, 0);
        std::vector<u64> t((m + nsmall - 1) * s);
        mul_poly(K, big, m, small, nsmall, t.data());
        for (std::size_t i = 0; i < t.size(); ++i) out[i] = t[i];
        std::vector<u64> t2((nbig - m + nsmall - 1) * s);
        mul_poly(K, big + m * s, nbig - m, small, nsmall, t2.data());
        for (std::size_t i = 0; i < t2.size(); ++i) out[m * s + i] = addmod(out[m * s + i], t2[i], K.characteristic());
        return;
    }
    const std::size_t na1 = na - m, nb1 = nb - m;
    const u64 ell = K.characteristic();
    std::vector<u64> z0((2 * m - 1) * s), z2((na1 + nb1 - 1) * s);
    mul_poly(K, a, m, b, m, z0.data());
    mul_poly(K, a + m * s, na1, b + m * s, nb1, z2.data());
    std::vector<u64> sa(a, a + m * s), sb(b, b + m * s);
    for (std::size_t i = 0; i < na1 * s; ++i) sa[i] = addmod(sa[i], a[m * s + i], ell);
    for (std::size_t i = 0; i < nb1 * s; ++i) sb[i] = addmod(sb[i], b[m * s + i], ell);
    std::vector<u64> z1((2 * m - 1) * s);
    mul_poly(K, sa.data(), m, sb.data(), m, z1.data());
    for (std::size_t i = 0; i < z0.size(); ++i) z1[i] = submod(z1[i], z0[i], ell);
    for (std::size_t i = 0; i < z2.size(); ++i) z1[i] = submod(z1[i], z2[i], ell);
    std::fill(out, out + (na + nb - 1) * s, 0);
    for (std::size_t i = 0; i < z0.size(); ++i) out[i] = z0[i];
    for (std::size_t i = 0; i < z2.size(); ++i) out[2 * m * s + i] = addmod(out[2 * m * s + i], z2[i], ell);
    for (std::size_t i = 0; i < z1.size(); ++i) out[m * s + i] = addmod(out[m * s + i], z1[i], ell);
}

} // namespace detail

class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(FieldHandle K) : field_(std::move(K)) {}
    Polynomial(FieldHandle K, const std::vector<FieldElement>& coeffs) : field_(std::move(K)) {
        const std::size_t s = stride();
        data_.assign(coeffs.size() * s, 0);
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            FieldElement c = coeffs[i].lift_to(field_);
            std::copy(c.flat().begin(), c.flat().end(), data_.begin() + static_cast<std::ptrdiff_t>(i * s));
        }
        trim();
    }
    Polynomial(FieldHandle K, std::initializer_list<i64> coeffs) : field_(std::move(K)) {
        const std::size_t s = stride();
        data_.assign(coeffs.size() * s, 0);
        std::size_t i = 0;
        for (i64 c : coeffs) data_[s * i++] = reduce_signed(c, field_->characteristic());
        trim();
    }
    Polynomial(FieldHandle K, std::vector<u64> flat) : field_(std::move(K)), data_(std::move(flat)) {
        if (data_.size() % stride()) fail(ErrorKind::InvalidArgument, "flat coefficient data has the wrong length");
        trim();
    }

    static Polynomial x(const FieldHandle& K) { return monomial(FieldElement(K, 1), 1); }
    static Polynomial constant(const FieldElement& c) { return monomial(c, 0); }
    static Polynomial monomial(const FieldElement& c, std::size_t deg) {
        Polynomial p(c.field());
        p.data_.assign((deg + 1) * p.stride(), 0);
        std::copy(c.flat().begin(), c.flat().end(), p.data_.begin() + static_cast<std::ptrdiff_t>(deg * p.stride()));
        p.trim();
        return p;
    }

    const FieldHandle& field() const { return field_; }
    std::size_t stride() const { return field_->absolute_degree(); }
    int degree() const { return static_cast<int>(data_.size() / stride()) - 1; }
    bool is_zero() const { return data_.empty(); }
    bool is_one() const { return degree() == 0 && field_->is_one(data_.data()); }
    const std::vector<u64>& flat() const { return data_; }

    const u64* raw(int i) const { return data_.data() + static_cast<std::size_t>(i) * stride(); }
    FieldElement coeff(int i) const {
        if (i < 0 || i > degree()) return FieldElement(field_);
        return FieldElement(field_, std::vector<u64>(raw(i), raw(i) + stride()));
    }
    FieldElement leading() const {
        if (is_zero()) fail(ErrorKind::InvalidArgument, "zero polynomial has no leading coefficient");
        return coeff(degree());
    }
    std::vector<FieldElement> coefficients() const {
        std::vector<FieldElement> out;
        for (int i = 0; i <= degree(); ++i) out.push_back(coeff(i));
        return out;
    }

    Polynomial lift_to(const FieldHandle& L) const {
        if (L.get() == field_.get()) return *this;
        if (!is_subfield(*field_, *L)) fail(ErrorKind::InvalidArgument, "cannot lift polynomial to " + L->describe());
        const std::size_t s = stride(), t = L->absolute_degree();
        std::vector<u64> out((degree() + 1) * t, 0);
        for (int i = 0; i <= degree(); ++i) std::copy(raw(i), raw(i) + s, out.begin() + static_cast<std::ptrdiff_t>(i * t));
        return Polynomial(L, std::move(out));
    }

    std::optional<Polynomial> descend_to(const FieldHandle& K) const {
        std::vector<FieldElement> cs;
        for (int i = 0; i <= degree(); ++i) {
            auto c = coeff(i).descend_to(K);
            if (!c) return std::nullopt;
            cs.push_back(*c);
        }
        return Polynomial(K, cs);
    }

    Polynomial monic() const {
        if (is_zero()) return *this;
        FieldElement il = leading().inverse();
        return *this * il;
    }

    Polynomial derivative() const {
        if (degree() <= 0) return Polynomial(field_);
        const std::size_t s = stride();
        std::vector<u64> out(degree() * s);
        for (int i = 1; i <= degree(); ++i) field_->scale(raw(i), static_cast<u64>(i) % field_->characteristic(), out.data() + (i - 1) * s);
        return Polynomial(field_, std::move(out));
    }

    FieldElement eval(const FieldElement& t) const {
        const FieldHandle& L = larger_field(field_, t.field());
        FieldElement x = t.lift_to(L), acc(L);
        for (int i = degree(); i >= 0; --i) acc = acc * x + coeff(i).lift_to(L);
        return acc;
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) { return combine(a, b, false); }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return combine(a, b, true); }
    Polynomial operator-() const { return Polynomial(field_) - *this; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.field_.get() != b.field_.get() && !same_field(*a.field_, *b.field_)) {
            const FieldHandle& L = larger_field(a.field_, b.field_);
            return a.lift_to(L) * b.lift_to(L);
        }
        if (a.is_zero() || b.is_zero()) return Polynomial(a.field_);
        const std::size_t na = a.degree() + 1, nb = b.degree() + 1;
        std::vector<u64> out((na + nb - 1) * a.stride());
        detail::mul_poly(*a.field_, a.data_.data(), na, b.data_.data(), nb, out.data());
        return Polynomial(a.field_, std::move(out));
    }
    friend Polynomial operator*(const Polynomial& a, const FieldElement& c) {
        if (!is_subfield(*c.field(), *a.field_)) return a.lift_to(c.field()) * c;
        FieldElement cc = c.lift_to(a.field_);
        std::vector<u64> out(a.data_.size());
        const std::size_t s = a.stride();
        for (int i = 0; i <= a.degree(); ++i) a.field_->mul(a.raw(i), cc.data(), out.data() + i * s);
        return Polynomial(a.field_, std::move(out));
    }
    friend Polynomial operator*(const FieldElement& c, const Polynomial& a) { return a * c; }
    Polynomial& operator+=(const Polynomial& b) { return *this = *this + b; }
    Polynomial& operator-=(const Polynomial& b) { return *this = *this - b; }
    Polynomial& operator*=(const Polynomial& b) { return *this = *this * b; }

    // a = q*b + r with deg r < deg b
    static std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) {
        if (b.is_zero()) fail(ErrorKind::InvalidArgument, "polynomial division by zero");
        if (a.field_.get() != b.field_.get() && !same_field(*a.field_, *b.field_)) {
            const FieldHandle& L = larger_field(a.field_, b.field_);
            return divmod(a.lift_to(L), b.lift_to(L));
        }
        const TowerField& K = *a.field_;
        const std::size_t s = a.stride();
        const int da = a.degree(), db = b.degree();
        if (da < db) return {Polynomial(a.field_), a};
        std::vector<u64> r = a.data_, q((da - db + 1) * s, 0);
        detail::Scratch il(s), c(s), tmp(s);
        K.inv(b.raw(db), il.data());
        const bool monic = K.is_one(b.raw(db));
        for (int k = da - db; k >= 0; --k) {
            u64* top = r.data() + (k + db) * s;
            if (K.is_zero(top)) continue;
            if (monic)
                std::copy(top, top + s, c.begin());
            else
                K.mul(top, il.data(), c.data());
            std::copy(c.begin(), c.end(), q.begin() + static_cast<std::ptrdiff_t>(k * s));
            if (K.is_prime()) {
                const u64 m = K.characteristic(), cc = c[0];
                for (int i = 0; i < db; ++i) r[i + k] = submod(r[i + k], symcrit::mulmod(cc, b.data_[i], m), m);
                r[k + db] = 0;
            } else {
                for (int i = 0; i < db; ++i) {
                    K.mul(c.data(), b.raw(i), tmp.data());
                    K.sub(r.data() + (i + k) * s, tmp.data(), r.data() + (i + k) * s);
                }
                std::fill(top, top + s, 0);
            }
        }
        r.resize(static_cast<std::size_t>(db) * s);
        return {Polynomial(a.field_, std::move(q)), Polynomial(a.field_, std::move(r))};
    }
    friend Polynomial operator/(const Polynomial& a, const Polynomial& b) { return divmod(a, b).first; }
    friend Polynomial operator%(const Polynomial& a, const Polynomial& b) { return divmod(a, b).second; }

    static Polynomial gcd(Polynomial a, Polynomial b) {
        while (!b.is_zero()) {
            Polynomial r = a % b;
            a = std::move(b);
            b = std::move(r);
        }
        return a.monic();
    }

    // returns (g, s, t) with s*a + t*b = g monic
    static std::tuple<Polynomial, Polynomial, Polynomial> xgcd(const Polynomial& a, const Polynomial& b) {
        const FieldHandle& K = larger_field(a.field_, b.field_);
        Polynomial r0 = a.lift_to(K), r1 = b.lift_to(K);
        Polynomial s0 = constant(FieldElement(K, 1)), s1(K), t0(K), t1 = constant(FieldElement(K, 1));
        while (!r1.is_zero()) {
            auto [q, r] = divmod(r0, r1);
            r0 = std::move(r1);
            r1 = std::move(r);
            Polynomial ns = s0 - q * s1, nt = t0 - q * t1;
            s0 = std::move(s1);
            s1 = std::move(ns);
            t0 = std::move(t1);
            t1 = std::move(nt);
        }
        if (r0.is_zero()) return {r0, s0, t0};
        FieldElement il = r0.leading().inverse();
        return {r0 * il, s0 * il, t0 * il};
    }

    static Polynomial mulmod(const Polynomial& a, const Polynomial& b, const Polynomial& m) { return (a * b) % m; }

    static Polynomial powmod(const Polynomial& base, const BigInt& e, const Polynomial& m) {
        if (e < 0) fail(ErrorKind::InvalidArgument, "negative exponent in powmod");
        Polynomial r = constant(FieldElement(m.field_, 1)) % m, b = base % m;
        if (e == 0) return r;
        const std::size_t bits = boost::multiprecision::msb(e);
        for (std::size_t i = bits + 1; i-- > 0;) {
            r = mulmod(r, r, m);
            if (boost::multiprecision::bit_test(e, static_cast<unsigned>(i))) r = mulmod(r, b, m);
        }
        return r;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        if (a.field_.get() == b.field_.get() || same_field(*a.field_, *b.field_)) return a.data_ == b.data_;
        const FieldHandle& L = larger_field(a.field_, b.field_);
        return a.lift_to(L).data_ == b.lift_to(L).data_;
    }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    // canonical order: degree first, then coefficients lexicographically from the constant term
    friend bool canonical_less(const Polynomial& a, const Polynomial& b) {
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        return a.data_ < b.data_;
    }

    u64 hash() const {
        Fnv1a f;
        f.add(field_->characteristic());
        f.add(static_cast<u64>(field_->absolute_degree()));
        for (u64 x : data_) f.add(x);
        return f.h;
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::string out;
        for (int i = degree(); i >= 0; --i) {
            FieldElement c = coeff(i);
            if (c.is_zero()) continue;
            if (!out.empty()) out += " + ";
            bool scalar = c.as_prime_residue().has_value();
            std::string cs = scalar ? c.to_string() : "(" + c.to_string() + ")";
            if (i == 0)
                out += cs;
            else {
                if (!c.is_one()) out += cs + "*";
                out += i == 1 ? "x" : "x^" + std::to_string(i);
            }
        }
        return out;
    }

private:
    void trim() {
        const std::size_t s = stride();
        while (!data_.empty() && field_->is_zero(data_.data() + data_.size() - s)) data_.resize(data_.size() - s);
    }

    static Polynomial combine(const Polynomial& a, const Polynomial& b, bool subtract) {
        if (a.field_.get() != b.field_.get() && !same_field(*a.field_, *b.field_)) {
            const FieldHandle& L = larger_field(a.field_, b.field_);
            return combine(a.lift_to(L), b.lift_to(L), subtract);
        }
        const u64 m = a.field_->characteristic();
        std::vector<u64> out(std::max(a.data_.size(), b.data_.size()), 0);
        for (std::size_t i = 0; i < a.data_.size(); ++i) out[i] = a.data_[i];
        for (std::size_t i = 0; i < b.data_.size(); ++i) out[i] = subtract ? submod(out[i], b.data_[i], m) : addmod(out[i], b.data_[i], m);
        return Polynomial(a.field_, std::move(out));
    }

    FieldHandle field_;
    std::vector<u64> data_;
};

} // namespace symcrit
