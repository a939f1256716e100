#pragma once

// Finite fields as towers of relative extensions over F_ell.
//
// An element of a level-k field is stored as a flat vector of absolute_degree()
// residues: the coefficients over the base of 1, t, t^2, ... laid out one base
// block after another, innermost level first.  Every ancestor field therefore
// sits in the leading block, which makes lifting a zero-pad and descent a check
// that the tail is zero.

#include <boost/container/small_vector.hpp>

#include <algorithm>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "symcrit/fields/modarith.hpp"

namespace symcrit {

class TowerField;
using FieldHandle = std::shared_ptr<const TowerField>;

namespace detail {
using Scratch = boost::container::small_vector<u64, 128>;
}

class TowerField {
public:
    static FieldHandle prime_field(u64 ell) {
        if (ell >= kMaxModulus || !is_prime_u64(ell))
            fail(ErrorKind::InvalidArgument, "field characteristic must be a prime below 2^62, got " + std::to_string(ell));
        auto k = std::shared_ptr<TowerField>(new TowerField());
        k->ell_ = ell;
        return k;
    }

    // Caller guarantees x^d + sum lower_i x^i is irreducible over base.
    static FieldHandle adjoin_unchecked(const FieldHandle& base, std::vector<u64> lower, std::size_t d) {
        if (d < 2) fail(ErrorKind::InvalidArgument, "extension degree must be at least 2");
        if (lower.size() != d * base->absolute_degree()) fail(ErrorKind::Internal, "defining polynomial has the wrong shape");
        auto k = std::shared_ptr<TowerField>(new TowerField());
        k->ell_ = base->ell_;
        k->base_ = base;
        k->rel_ = d;
        k->abs_ = d * base->abs_;
        k->level_ = base->level_ + 1;
        k->modulus_ = std::move(lower);
        return k;
    }

    u64 characteristic() const { return ell_; }
    std::size_t relative_degree() const { return rel_; }
    std::size_t absolute_degree() const { return abs_; }
    std::size_t level() const { return level_; }
    bool is_prime() const { return base_ == nullptr; }
    const FieldHandle& base() const { return base_; }
    const std::vector<u64>& modulus() const { return modulus_; }

    BigInt order() const { return big_pow(BigInt(ell_), static_cast<unsigned>(abs_)); }

    std::string describe() const {
        std::ostringstream os;
        os << "F_" << ell_;
        if (abs_ > 1) os << "^" << abs_;
        return os.str();
    }

    bool is_zero(const u64* a) const {
        for (std::size_t i = 0; i < abs_; ++i)
            if (a[i]) return false;
        return true;
    }
    bool is_one(const u64* a) const {
        if (a[0] != 1) return false;
        for (std::size_t i = 1; i < abs_; ++i)
            if (a[i]) return false;
        return true;
    }
    void add(const u64* a, const u64* b, u64* r) const {
        for (std::size_t i = 0; i < abs_; ++i) r[i] = addmod(a[i], b[i], ell_);
    }
    void sub(const u64* a, const u64* b, u64* r) const {
        for (std::size_t i = 0; i < abs_; ++i) r[i] = submod(a[i], b[i], ell_);
    }
    void neg(const u64* a, u64* r) const {
        for (std::size_t i = 0; i < abs_; ++i) r[i] = negmod(a[i], ell_);
    }
    void scale(const u64* a, u64 c, u64* r) const {
        for (std::size_t i = 0; i < abs_; ++i) r[i] = mulmod(a[i], c, ell_);
    }

    // r may alias a or b
    void mul(const u64* a, const u64* b, u64* r) const {
        if (!base_) {
            r[0] = mulmod(a[0], b[0], ell_);
            return;
        }
        detail::Scratch t;
        if (base_->is_prime())
            mul_over_prime(a, b, t);
        else
            mul_generic(a, b, t);
        std::copy(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(abs_), r);
    }

    void sqr(const u64* a, u64* r) const { mul(a, a, r); }

    // r may alias a
    void inv(const u64* a, u64* r) const;

private:
    TowerField() = default;

    void mul_over_prime(const u64* a, const u64* b, detail::Scratch& t) const {
        const std::size_t d = rel_;
        t.assign(2 * d - 1, 0);
        for (std::size_t i = 0; i < d; ++i) {
            if (!a[i]) continue;
            for (std::size_t j = 0; j < d; ++j) t[i + j] = addmod(t[i + j], mulmod(a[i], b[j], ell_), ell_);
        }
        reduce_over_prime(t);
    }

    void reduce_over_prime(detail::Scratch& t) const {
        const std::size_t d = rel_;
        for (std::size_t m = t.size(); m-- > d;) {
            u64 c = t[m];
            if (!c) continue;
            for (std::size_t i = 0; i < d; ++i) t[m - d + i] = submod(t[m - d + i], mulmod(c, modulus_[i], ell_), ell_);
        }
    }

    void mul_generic(const u64* a, const u64* b, detail::Scratch& t) const {
        const TowerField& B = *base_;
        const std::size_t s = B.abs_, d = rel_;
        t.assign((2 * d - 1) * s, 0);
        detail::Scratch prod(s);
        for (std::size_t i = 0; i < d; ++i) {
            if (B.is_zero(a + i * s)) continue;
            for (std::size_t j = 0; j < d; ++j) {
                B.mul(a + i * s, b + j * s, prod.data());
                B.add(t.data() + (i + j) * s, prod.data(), t.data() + (i + j) * s);
            }
        }
        for (std::size_t m = 2 * d - 1; m-- > d;) {
            const u64* c = t.data() + m * s;
            if (B.is_zero(c)) continue;
            for (std::size_t i = 0; i < d; ++i) {
                B.mul(c, modulus_.data() + i * s, prod.data());
                B.sub(t.data() + (m - d + i) * s, prod.data(), t.data() + (m - d + i) * s);
            }
        }
    }

    u64 ell_ = 0;
    FieldHandle base_;
    std::size_t rel_ = 1, abs_ = 1, level_ = 0;
    std::vector<u64> modulus_;
};

inline void TowerField::inv(const u64* a, u64* r) const {
    if (is_zero(a)) fail(ErrorKind::InvalidArgument, "inverse of zero in " + describe());
    if (!base_) {
        r[0] = invmod(a[0], ell_);
        return;
    }
    // extended Euclid over the base, tracking only the cofactor of a
    const TowerField& B = *base_;
    const std::size_t s = B.abs_, d = rel_;
    auto degree = [&](const std::vector<u64>& p) {
        for (std::size_t i = p.size() / s; i-- > 0;)
            if (!B.is_zero(p.data() + i * s)) return static_cast<long>(i);
        return -1L;
    };
    std::vector<u64> r0((d + 1) * s, 0), r1(a, a + abs_), s0(s, 0), s1(s, 0), c(s), tmp(s), il(s);
    std::copy(modulus_.begin(), modulus_.end(), r0.begin());
    r0[d * s] = 1;
    s1[0] = 1;
    long dr1 = degree(r1);
    while (dr1 >= 0) {
        B.inv(r1.data() + dr1 * s, il.data());
        long dr0 = degree(r0);
        while (dr0 >= dr1) {
            std::size_t k = static_cast<std::size_t>(dr0 - dr1);
            B.mul(r0.data() + dr0 * s, il.data(), c.data());
            for (long i = 0; i <= dr1; ++i) {
                B.mul(c.data(), r1.data() + i * s, tmp.data());
                u64* dst = r0.data() + (i + k) * s;
                B.sub(dst, tmp.data(), dst);
            }
            long ds1 = degree(s1);
            if (s0.size() < (ds1 + 1 + k) * s) s0.resize((ds1 + 1 + k) * s, 0);
            for (long i = 0; i <= ds1; ++i) {
                B.mul(c.data(), s1.data() + i * s, tmp.data());
                u64* dst = s0.data() + (i + k) * s;
                B.sub(dst, tmp.data(), dst);
            }
            dr0 = degree(r0);
        }
        std::swap(r0, r1);
        std::swap(s0, s1);
        dr1 = degree(r1);
    }
    if (degree(r0) != 0) fail(ErrorKind::Internal, "defining polynomial of " + describe() + " is not irreducible");
    B.inv(r0.data(), il.data());
    std::vector<u64> out(abs_, 0);
    long ds0 = degree(s0);
    for (long i = 0; i <= ds0 && i < static_cast<long>(d); ++i) B.mul(s0.data() + i * s, il.data(), out.data() + i * s);
    std::copy(out.begin(), out.end(), r);
}

inline bool same_field(const TowerField& a, const TowerField& b) {
    if (&a == &b) return true;
    return a.is_prime() && b.is_prime() && a.characteristic() == b.characteristic();
}

// true when K is L or one of L's ancestors
inline bool is_subfield(const TowerField& K, const TowerField& L) {
    if (K.characteristic() != L.characteristic() || K.level() > L.level()) return false;
    const TowerField* cur = &L;
    while (cur->level() > K.level()) cur = cur->base().get();
    return same_field(K, *cur);
}

inline const FieldHandle& larger_field(const FieldHandle& a, const FieldHandle& b) {
    if (is_subfield(*a, *b)) return b;
    if (is_subfield(*b, *a)) return a;
    fail(ErrorKind::InvalidArgument, "operands live in unrelated fields " + a->describe() + " and " + b->describe());
}

inline const FieldHandle& prime_subfield(const FieldHandle& K) {
    const FieldHandle* cur = &K;
    while (!(*cur)->is_prime()) cur = &(*cur)->base();
    return *cur;
}

class FieldElement {
public:
    FieldElement() = default;
    explicit FieldElement(FieldHandle K) : field_(std::move(K)), c_(field_->absolute_degree(), 0) {}
    FieldElement(FieldHandle K, i64 v) : FieldElement(std::move(K)) { c_[0] = reduce_signed(v, field_->characteristic()); }
    FieldElement(FieldHandle K, std::vector<u64> flat) : field_(std::move(K)), c_(std::move(flat)) {
        if (c_.size() != field_->absolute_degree()) fail(ErrorKind::InvalidArgument, "coefficient vector has the wrong length");
        for (u64& x : c_) x %= field_->characteristic();
    }
    static FieldElement from_big(FieldHandle K, const BigInt& v) {
        FieldElement e(std::move(K));
        e.c_[0] = reduce_big(v, e.field_->characteristic());
        return e;
    }
    // the root of the top-level defining polynomial
    static FieldElement generator(const FieldHandle& K) {
        FieldElement e(K);
        if (K->is_prime()) fail(ErrorKind::InvalidArgument, "a prime field has no tower generator");
        e.c_[K->base()->absolute_degree()] = 1;
        return e;
    }

    bool valid() const { return field_ != nullptr; }
    const FieldHandle& field() const { return field_; }
    const std::vector<u64>& flat() const { return c_; }
    const u64* data() const { return c_.data(); }
    u64* data() { return c_.data(); }

    bool is_zero() const { return field_->is_zero(c_.data()); }
    bool is_one() const { return field_->is_one(c_.data()); }

    std::optional<u64> as_prime_residue() const {
        for (std::size_t i = 1; i < c_.size(); ++i)
            if (c_[i]) return std::nullopt;
        return c_[0];
    }

    FieldElement lift_to(const FieldHandle& L) const {
        if (field_.get() == L.get()) return *this;
        if (!is_subfield(*field_, *L)) fail(ErrorKind::InvalidArgument, "cannot lift from " + field_->describe() + " to " + L->describe());
        FieldElement e(L);
        std::copy(c_.begin(), c_.end(), e.c_.begin());
        return e;
    }

    std::optional<FieldElement> descend_to(const FieldHandle& K) const {
        if (!is_subfield(*K, *field_)) fail(ErrorKind::InvalidArgument, K->describe() + " is not a subfield of " + field_->describe());
        for (std::size_t i = K->absolute_degree(); i < c_.size(); ++i)
            if (c_[i]) return std::nullopt;
        return FieldElement(K, std::vector<u64>(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(K->absolute_degree())));
    }

    FieldElement operator-() const {
        FieldElement r(field_);
        field_->neg(c_.data(), r.c_.data());
        return r;
    }
    friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
        return binary(a, b, [](const TowerField& K, const u64* x, const u64* y, u64* r) { K.add(x, y, r); });
    }
    friend FieldElement operator-(const FieldElement& a, const FieldElement& b) {
        return binary(a, b, [](const TowerField& K, const u64* x, const u64* y, u64* r) { K.sub(x, y, r); });
    }
    friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
        return binary(a, b, [](const TowerField& K, const u64* x, const u64* y, u64* r) { K.mul(x, y, r); });
    }
    friend FieldElement operator/(const FieldElement& a, const FieldElement& b) { return a * b.inverse(); }
    friend FieldElement operator*(const FieldElement& a, i64 k) {
        FieldElement r(a.field_);
        a.field_->scale(a.c_.data(), reduce_signed(k, a.field_->characteristic()), r.c_.data());
        return r;
    }
    friend FieldElement operator*(i64 k, const FieldElement& a) { return a * k; }
    friend FieldElement operator+(const FieldElement& a, i64 k) { return a + FieldElement(a.field_, k); }
    friend FieldElement operator-(const FieldElement& a, i64 k) { return a - FieldElement(a.field_, k); }
    FieldElement& operator+=(const FieldElement& b) { return *this = *this + b; }
    FieldElement& operator-=(const FieldElement& b) { return *this = *this - b; }
    FieldElement& operator*=(const FieldElement& b) { return *this = *this * b; }

    FieldElement inverse() const {
        FieldElement r(field_);
        field_->inv(c_.data(), r.c_.data());
        return r;
    }

    FieldElement pow(u64 e) const {
        FieldElement r(field_, 1), b = *this;
        while (e) {
            if (e & 1) field_->mul(r.c_.data(), b.c_.data(), r.c_.data());
            field_->mul(b.c_.data(), b.c_.data(), b.c_.data());
            e >>= 1;
        }
        return r;
    }

    FieldElement pow(const BigInt& e) const {
        if (e < 0) return inverse().pow(BigInt(-e));
        FieldElement r(field_, 1);
        if (e == 0) return r;
        const std::size_t bits = boost::multiprecision::msb(e);
        for (std::size_t i = bits + 1; i-- > 0;) {
            field_->mul(r.c_.data(), r.c_.data(), r.c_.data());
            if (boost::multiprecision::bit_test(e, static_cast<unsigned>(i))) field_->mul(r.c_.data(), c_.data(), r.c_.data());
        }
        return r;
    }

    friend bool operator==(const FieldElement& a, const FieldElement& b) {
        if (a.field_.get() == b.field_.get() || same_field(*a.field_, *b.field_)) return a.c_ == b.c_;
        const FieldHandle& L = larger_field(a.field_, b.field_);
        return a.lift_to(L).c_ == b.lift_to(L).c_;
    }
    friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

    // lexicographic on the flat coefficient vector, innermost coefficient first
    bool lex_less(const FieldElement& o) const { return c_ < o.c_; }

    std::string to_string() const {
        std::string s;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(c_[i]);
        }
        return s;
    }

private:
    template <class Op>
    static FieldElement binary(const FieldElement& a, const FieldElement& b, Op op) {
        if (a.field_.get() == b.field_.get() || same_field(*a.field_, *b.field_)) {
            FieldElement r(a.field_);
            op(*a.field_, a.c_.data(), b.c_.data(), r.c_.data());
            return r;
        }
        const FieldHandle& L = larger_field(a.field_, b.field_);
        FieldElement x = a.lift_to(L), y = b.lift_to(L);
        op(*L, x.c_.data(), y.c_.data(), x.c_.data());
        return x;
    }

    FieldHandle field_;
    std::vector<u64> c_;
};

// x -> x^(ell^k); k is taken modulo the absolute degree
inline FieldElement frobenius_power(const FieldElement& x, long k) {
    const long n = static_cast<long>(x.field()->absolute_degree());
    long m = ((k % n) + n) % n;
    FieldElement r = x;
    for (long i = 0; i < m; ++i) r = r.pow(x.field()->characteristic());
    return r;
}

} // namespace symcrit
