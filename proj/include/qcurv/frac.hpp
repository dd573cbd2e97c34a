#pragma once

#include <utility>

#include "qcurv/poly.hpp"

namespace qcurv {

/// Rational function num/den over a coefficient field F.
///
/// Normal form: gcd(num, den) = 1 and den monic, so two values are equal iff
/// their representations are equal. Zero is 0/1.
template <class F>
class Frac {
public:
    using poly_type = Poly<F>;
    using coefficient_type = F;

    Frac() : den_(F(1)) {}
    Frac(int c) : num_(F(c)), den_(F(1)) {}  // NOLINT
    Frac(const F& c) : num_(c), den_(F(1)) {}  // NOLINT
    Frac(poly_type p) : num_(std::move(p)), den_(F(1)) {}  // NOLINT
    Frac(poly_type num, poly_type den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

    // Trusted constructor for operands already in normal form.
    static Frac from_normalized(poly_type num, poly_type den) {
        Frac f;
        f.num_ = std::move(num);
        f.den_ = std::move(den);
        return f;
    }

    static Frac variable() { return Frac(poly_type::variable()); }

    const poly_type& num() const noexcept { return num_; }
    const poly_type& den() const noexcept { return den_; }

    bool is_zero() const noexcept { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }
    bool is_polynomial() const { return den_.degree() == 0; }
    bool is_constant() const { return num_.degree() <= 0 && den_.degree() == 0; }
    // Constant value; only meaningful when is_constant().
    F constant_value() const { return num_.is_zero() ? F(0) : num_.coeff(0); }

    Frac inverse() const {
        if (is_zero()) throw DivisionByZero();
        Frac r;
        r.num_ = den_;
        r.den_ = num_;
        if (!r.den_.is_monic()) {
            F inv = r.den_.lead().inverse();
            r.num_ *= inv;
            r.den_ *= inv;
        }
        return r;
    }

    Frac& operator+=(const Frac& o) { return *this = *this + o; }
    Frac& operator-=(const Frac& o) { return *this = *this - o; }
    Frac& operator*=(const Frac& o) { return *this = *this * o; }
    Frac& operator/=(const Frac& o) { return *this = *this / o; }

    friend Frac operator+(const Frac& a, const Frac& b) { return add(a, b, false); }
    friend Frac operator-(const Frac& a, const Frac& b) { return add(a, b, true); }
    friend Frac operator-(const Frac& a) { return from_normalized(-a.num_, a.den_); }

    friend Frac operator*(const Frac& a, const Frac& b) {
        if (a.is_zero() || b.is_zero()) return {};
        if (a.is_polynomial() && b.is_polynomial()) return scaled(a.num_ * b.num_, a.den_.lead() * b.den_.lead());
        // Cross-cancel before multiplying; the result is already reduced.
        poly_type g1 = gcd(a.num_, b.den_);
        poly_type g2 = gcd(b.num_, a.den_);
        poly_type n1 = g1.is_one() ? a.num_ : a.num_ / g1;
        poly_type d2 = g1.is_one() ? b.den_ : b.den_ / g1;
        poly_type n2 = g2.is_one() ? b.num_ : b.num_ / g2;
        poly_type d1 = g2.is_one() ? a.den_ : a.den_ / g2;
        return make_monic(n1 * n2, d1 * d2);
    }
    friend Frac operator/(const Frac& a, const Frac& b) { return a * b.inverse(); }

    friend bool operator==(const Frac& a, const Frac& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

    Frac pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        return from_normalized(num_.pow(static_cast<unsigned long>(e)), den_.pow(static_cast<unsigned long>(e)));
    }

    // f(s*x)
    Frac scale_variable(const F& s) const {
        return make_monic(num_.scale_variable(s), den_.scale_variable(s));
    }

    // x * d/dx
    Frac euler_derivative() const {
        if (is_polynomial()) return from_normalized(num_.euler_derivative(), den_);
        poly_type n = num_.euler_derivative() * den_ - num_ * den_.euler_derivative();
        return Frac(std::move(n), den_ * den_);
    }

    template <class Fn>
    auto map(Fn&& fn) const {
        using G = std::decay_t<decltype(fn(std::declval<const F&>()))>;
        return Frac<G>(num_.map(fn), den_.map(fn));
    }

private:
    static Frac scaled(poly_type num, const F& den_lead) {
        if (!den_lead.is_one()) num *= den_lead.inverse();
        return from_normalized(std::move(num), poly_type(F(1)));
    }

    static Frac make_monic(poly_type num, poly_type den) {
        if (den.is_zero()) throw DivisionByZero();
        if (!den.is_monic()) {
            F inv = den.lead().inverse();
            num *= inv;
            den *= inv;
        }
        return from_normalized(std::move(num), std::move(den));
    }

    static Frac add(const Frac& a, const Frac& b, bool subtract) {
        if (b.is_zero()) return a;
        if (a.is_zero()) return subtract ? -b : b;
        if (a.den_ == b.den_) {
            poly_type n = subtract ? a.num_ - b.num_ : a.num_ + b.num_;
            if (a.den_.is_one()) return from_normalized(std::move(n), a.den_);
            return Frac(std::move(n), a.den_);
        }
        // Henrici: with g = gcd(da, db), only gcd(n, g) can cancel.
        poly_type g = gcd(a.den_, b.den_);
        if (g.is_one()) {
            poly_type n = subtract ? a.num_ * b.den_ - b.num_ * a.den_ : a.num_ * b.den_ + b.num_ * a.den_;
            return from_normalized(std::move(n), a.den_ * b.den_);
        }
        poly_type da = a.den_ / g, db = b.den_ / g;
        poly_type n = subtract ? a.num_ * db - b.num_ * da : a.num_ * db + b.num_ * da;
        poly_type d = da * b.den_;
        poly_type h = gcd(n, g);
        if (!h.is_one()) {
            n = n / h;
            d = d / h;
        }
        return make_monic(std::move(n), std::move(d));
    }

    void normalize() {
        if (den_.is_zero()) throw DivisionByZero();
        if (num_.is_zero()) {
            den_ = poly_type(F(1));
            return;
        }
        poly_type g = gcd(num_, den_);
        if (!g.is_one()) {
            num_ = num_ / g;
            den_ = den_ / g;
        }
        if (!den_.is_monic()) {
            F inv = den_.lead().inverse();
            num_ *= inv;
            den_ *= inv;
        }
    }

    poly_type num_;
    poly_type den_;
};

}  // namespace qcurv
