#pragma once

#include <string>

#include "qcurv/errors.hpp"
#include "qcurv/rational.hpp"

namespace qcurv {

/// Closed interval [mid - rad, mid + rad] with an exact rational midpoint.
/// Radii are rounded upwards to 64 significant bits.
class BallValue {
public:
    BallValue() = default;
    BallValue(const Rational& mid, const Rational& rad = Rational(0)) : mid_(mid), rad_(round_up(rad.abs())) {}  // NOLINT

    const Rational& midpoint() const noexcept { return mid_; }
    const Rational& radius() const noexcept { return rad_; }
    bool is_exact() const { return rad_.is_zero(); }
    bool contains(const Rational& v) const { return (v - mid_).abs() <= rad_; }
    bool contains_zero() const { return contains(Rational(0)); }
    bool contains(const BallValue& o) const { return (o.mid_ - mid_).abs() + o.rad_ <= rad_; }

    friend BallValue operator+(const BallValue& a, const BallValue& b) {
        return BallValue(a.mid_ + b.mid_, a.rad_ + b.rad_);
    }
    friend BallValue operator-(const BallValue& a, const BallValue& b) {
        return BallValue(a.mid_ - b.mid_, a.rad_ + b.rad_);
    }
    friend BallValue operator-(const BallValue& a) { return BallValue(-a.mid_, a.rad_); }
    friend BallValue operator*(const BallValue& a, const BallValue& b) {
        return BallValue(a.mid_ * b.mid_, a.mid_.abs() * b.rad_ + b.mid_.abs() * a.rad_ + a.rad_ * b.rad_);
    }
    /// Throws NearZero when the divisor contains 0.
    friend BallValue operator/(const BallValue& a, const BallValue& b) {
        const Rational mb = b.mid_.abs();
        if (mb <= b.rad_) throw NearZero("divisor ball " + b.str() + " contains 0");
        if (b.is_exact()) return BallValue(a.mid_ / b.mid_, a.rad_ / mb);
        // |a/b - ma/mb| <= (ra |mb| + |ma| rb) / ((|mb| - rb) |mb|)
        return BallValue(a.mid_ / b.mid_, (a.rad_ * mb + a.mid_.abs() * b.rad_) / ((mb - b.rad_) * mb));
    }

    std::string str() const { return mid_.str() + " +/- " + rad_.str(); }

private:
    static Rational round_up(const Rational& r) {
        constexpr long kBits = 64;
        if (r.is_zero()) return r;
        const long size = static_cast<long>(mpz_sizeinbase(r.num().get_mpz_t(), 2)) -
                          static_cast<long>(mpz_sizeinbase(r.den().get_mpz_t(), 2));
        const long shift = kBits - size;  // r * 2^shift has about 64 bits
        if (mpz_sizeinbase(r.den().get_mpz_t(), 2) <= 64 && mpz_sizeinbase(r.num().get_mpz_t(), 2) <= 128) return r;
        Integer scaled_num = r.num(), scaled_den = r.den();
        if (shift >= 0)
            mpz_mul_2exp(scaled_num.get_mpz_t(), scaled_num.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
        else
            mpz_mul_2exp(scaled_den.get_mpz_t(), scaled_den.get_mpz_t(), static_cast<mp_bitcnt_t>(-shift));
        Integer c;
        mpz_cdiv_q(c.get_mpz_t(), scaled_num.get_mpz_t(), scaled_den.get_mpz_t());
        Integer one = 1;
        if (shift >= 0) {
            mpz_mul_2exp(one.get_mpz_t(), one.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
            return Rational(c, one);
        }
        mpz_mul_2exp(c.get_mpz_t(), c.get_mpz_t(), static_cast<mp_bitcnt_t>(-shift));
        return Rational(c);
    }

    Rational mid_;
    Rational rad_;
};

}  // namespace qcurv
