#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <utility>
#include <vector>

#include "qcurv/errors.hpp"

namespace qcurv {

template <class F>
class Poly;

/// Coefficient types with a faster whole-polynomial product overload this;
/// nullopt means "use the schoolbook product over F".
template <class F>
std::optional<Poly<F>> fast_product(const Poly<F>&, const Poly<F>&) {
    return std::nullopt;
}

/// Same idea for Euclidean division.
template <class F>
std::optional<std::pair<Poly<F>, Poly<F>>> fast_divmod(const Poly<F>&, const Poly<F>&) {
    return std::nullopt;
}

/// Dense univariate polynomial over a field F, coefficients indexed by degree.
///
/// F must provide construction from int, is_zero(), is_one(), inverse() and
/// the field operators. The zero polynomial has an empty coefficient list;
/// otherwise the leading coefficient is nonzero.
template <class F>
class Poly {
public:
    using coefficient_type = F;

    Poly() = default;
    Poly(const F& c) {  // NOLINT: constants embed implicitly
        if (!c.is_zero()) c_.push_back(c);
    }
    Poly(int c) : Poly(F(c)) {}  // NOLINT
    explicit Poly(std::vector<F> coeffs) : c_(std::move(coeffs)) { trim(); }
    Poly(std::initializer_list<F> coeffs) : c_(coeffs) { trim(); }

    static Poly monomial(const F& c, std::size_t degree) {
        if (c.is_zero()) return {};
        std::vector<F> v(degree + 1, F(0));
        v[degree] = c;
        return Poly(std::move(v));
    }
    static Poly variable() { return monomial(F(1), 1); }

    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }
    bool is_constant() const noexcept { return c_.size() <= 1; }
    bool is_one() const { return c_.size() == 1 && c_[0].is_one(); }
    bool is_monic() const { return !c_.empty() && c_.back().is_one(); }

    const F& lead() const { return c_.back(); }
    F coeff(std::size_t i) const { return i < c_.size() ? c_[i] : F(0); }
    const std::vector<F>& coeffs() const noexcept { return c_; }
    std::size_t size() const noexcept { return c_.size(); }

    // Lowest index with a nonzero coefficient; 0 for the zero polynomial.
    std::size_t valuation() const {
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (!c_[i].is_zero()) return i;
        return 0;
    }

    Poly& operator+=(const Poly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), F(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), F(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        trim();
        return *this;
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }
    Poly& operator*=(const F& s) {
        if (s.is_zero()) {
            c_.clear();
            return *this;
        }
        for (auto& a : c_) a *= s;
        trim();
        return *this;
    }

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator-(Poly a) {
        for (auto& c : a.c_) c = -c;
        return a;
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        if (a.c_.size() == 1) return b * a.c_[0];
        if (b.c_.size() == 1) return a * b.c_[0];
        if (auto p = fast_product(a, b)) return std::move(*p);
        std::vector<F> r(a.c_.size() + b.c_.size() - 1, F(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i].is_zero()) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        }
        return Poly(std::move(r));
    }
    friend Poly operator*(Poly a, const F& s) { return a *= s; }
    friend Poly operator*(const F& s, Poly a) { return a *= s; }

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

    // Euclidean division: a = q*b + r with deg r < deg b.
    friend std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
        if (b.is_zero()) throw DivisionByZero("polynomial division by zero");
        if (a.degree() < b.degree()) return {Poly(), a};
        if (auto qr = fast_divmod(a, b)) return std::move(*qr);
        std::vector<F> rem = a.c_;
        std::vector<F> quo(a.c_.size() - b.c_.size() + 1, F(0));
        const F inv_lead = b.lead().inverse();
        const std::size_t db = b.c_.size() - 1;
        for (std::size_t k = quo.size(); k-- > 0;) {
            const F& top = rem[k + db];
            if (top.is_zero()) continue;
            F factor = b.lead().is_one() ? top : top * inv_lead;
            for (std::size_t j = 0; j <= db; ++j) rem[k + j] -= factor * b.c_[j];
            quo[k] = std::move(factor);
        }
        rem.resize(db);
        return {Poly(std::move(quo)), Poly(std::move(rem))};
    }
    friend Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).first; }
    friend Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }

    Poly monic() const {
        if (is_zero() || lead().is_one()) return *this;
        return *this * lead().inverse();
    }

    Poly derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<F> r(c_.size() - 1, F(0));
        for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * F(static_cast<int>(i));
        return Poly(std::move(r));
    }

    // x * d/dx
    Poly euler_derivative() const {
        std::vector<F> r(c_);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] *= F(static_cast<int>(i));
        return Poly(std::move(r));
    }

    template <class V>
    V evaluate(const V& at) const {
        V acc(0);
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * at + V(c_[i]);
        return acc;
    }

    // p(s*x)
    Poly scale_variable(const F& s) const {
        std::vector<F> r(c_);
        F power(1);
        for (std::size_t i = 1; i < r.size(); ++i) {
            power *= s;
            r[i] *= power;
        }
        return Poly(std::move(r));
    }

    // p(x) * x^k
    Poly shift(std::size_t k) const {
        if (is_zero() || k == 0) return *this;
        std::vector<F> r(k, F(0));
        r.insert(r.end(), c_.begin(), c_.end());
        return Poly(std::move(r));
    }

    // Truncation modulo x^n.
    Poly truncate(std::size_t n) const {
        if (c_.size() <= n) return *this;
        return Poly(std::vector<F>(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(n)));
    }

    Poly pow(unsigned long e) const {
        Poly result(F(1)), base(*this);
        while (e) {
            if (e & 1UL) result *= base;
            e >>= 1;
            if (e) base *= base;
        }
        return result;
    }

    template <class Fn>
    auto map(Fn&& fn) const {
        using G = std::decay_t<decltype(fn(std::declval<const F&>()))>;
        std::vector<G> r;
        r.reserve(c_.size());
        for (const auto& a : c_) r.push_back(fn(a));
        return Poly<G>(std::move(r));
    }

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    std::vector<F> c_;
};

/// Cheap sufficient test for gcd(a, b) = 1. Coefficient types overload it
/// (found by argument-dependent lookup) with a modular image check.
template <class F>
bool certainly_coprime(const Poly<F>&, const Poly<F>&) {
    return false;
}

/// Coefficient types with a multimodular gcd overload this; nullopt means
/// "use the Euclidean algorithm".
template <class F>
std::optional<Poly<F>> modular_gcd(const Poly<F>&, const Poly<F>&) {
    return std::nullopt;
}

/// Monic gcd; gcd(0, 0) = 0.
template <class F>
Poly<F> gcd(Poly<F> a, Poly<F> b) {
    if (a.degree() > 0 && b.degree() > 0) {
        if (certainly_coprime(a, b)) return Poly<F>(F(1));
        if (auto g = modular_gcd(a, b)) return std::move(*g);
    }
    if (a.degree() < b.degree()) std::swap(a, b);
    while (!b.is_zero()) {
        if (b.degree() == 0) return Poly<F>(F(1));
        Poly<F> r = divmod(a, b).second.monic();
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

/// Extended gcd: returns (g, s, t) with s*a + t*b = g, g monic.
template <class F>
struct Bezout {
    Poly<F> g, s, t;
};

template <class F>
Bezout<F> xgcd(const Poly<F>& a, const Poly<F>& b) {
    Poly<F> r0 = a, r1 = b;
    Poly<F> s0(F(1)), s1, t0, t1(F(1));
    while (!r1.is_zero()) {
        auto [quo, rem] = divmod(r0, r1);
        r0 = std::move(r1);
        r1 = std::move(rem);
        Poly<F> s2 = s0 - quo * s1;
        Poly<F> t2 = t0 - quo * t1;
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.is_zero()) return {r0, s0, t0};
    F inv = r0.lead().inverse();
    return {r0 * inv, s0 * inv, t0 * inv};
}

}  // namespace qcurv
