#pragma once

#include <cstdint>
#include <deque>
#include <numeric>
#include <map>
#include <optional>
#include <tuple>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "qcurv/frac.hpp"
#include "qcurv/modular.hpp"
#include "qcurv/rational.hpp"

namespace qcurv {

using PolyQ = Poly<Rational>;
using RatQ = Frac<Rational>;

namespace detail {

inline PolyQ q_power_minus_one(long n) {
    std::vector<Rational> c(static_cast<std::size_t>(n) + 1, Rational(0));
    c[0] = Rational(-1);
    c.back() = Rational(1);
    return PolyQ(std::move(c));
}

}  // namespace detail

/// n-th cyclotomic polynomial, from q^n - 1 = prod_{d | n} Phi_d.
inline PolyQ cyclotomic(long n) {
    if (n < 1) throw Error("cyclotomic: n must be positive");
    static std::mutex mu;
    static std::map<long, PolyQ> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        if (auto it = cache.find(n); it != cache.end()) return it->second;
    }
    PolyQ p = detail::q_power_minus_one(n);
    for (long d = 1; d < n; ++d)
        if (n % d == 0) p = p / cyclotomic(d);
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(n, p);
    return p;
}

/// A finite place of Q(q) given by a monic irreducible polynomial phi; the
/// residue field is Q[q]/(phi).
///
/// Cyclotomic places have phi = Phi_n and kappa = n, the order of the image
/// of q. Value places phi = q - a carry the rational a and kappa = 0.
struct Place {
    long n = 0;
    long kappa = 0;
    PolyQ phi;
    Rational value;
    bool cyclotomic = false;
    // A prime p and a root of phi mod p, giving a map from the residue field
    // to Z/p used by the coprimality fast path; mod_p = 0 when unavailable.
    std::uint64_t mod_p = 0;
    std::uint64_t mod_root = 0;

    long degree() const { return phi.degree(); }
    std::string label() const {
        return cyclotomic ? "n=" + std::to_string(n) : "q=" + value.str();
    }
};

namespace detail {

constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

// Largest prime p = 1 mod n below 2^61 together with a primitive n-th root of unity.
inline std::pair<std::uint64_t, std::uint64_t> cyclotomic_prime(long n, const PolyQ& phi) {
    const std::uint64_t step = static_cast<std::uint64_t>(n);
    std::uint64_t p = (kMersenne61 - 1) / step * step + 1;
    while (p > kMersenne61) p -= step;
    for (; p > step; p -= step) {
        if (!modular::is_prime(p)) continue;
        for (std::uint64_t g = 2; g < 200; ++g) {
            std::uint64_t h = modular::power(g, (p - 1) / step, p);
            std::uint64_t acc = 0;
            for (std::size_t i = phi.size(); i-- > 0;)
                acc = (modular::mul(acc, h, p) + *modular::reduce(phi.coeffs()[i], p)) % p;
            if (acc == 0) return {p, h};
        }
    }
    return {0, 0};
}

}  // namespace detail

/// Places are interned: one immutable instance per n (or per value) for the
/// life of the process, so residues compare places by address.
inline const Place* cyclotomic_place(long n) {
    static std::mutex mu;
    static std::map<long, std::unique_ptr<Place>> registry;
    PolyQ phi = cyclotomic(n);
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = registry[n];
    if (!slot) {
        slot = std::make_unique<Place>();
        slot->n = n;
        slot->kappa = n;
        std::tie(slot->mod_p, slot->mod_root) = detail::cyclotomic_prime(n, phi);
        slot->phi = std::move(phi);
        slot->cyclotomic = true;
    }
    return slot.get();
}

inline const Place* value_place(const Rational& a) {
    static std::mutex mu;
    static std::map<std::string, std::unique_ptr<Place>> registry;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = registry[a.str()];
    if (!slot) {
        slot = std::make_unique<Place>();
        slot->phi = PolyQ{-a, Rational(1)};
        slot->value = a;
        if (auto r = modular::reduce(a, detail::kMersenne61)) {
            slot->mod_p = detail::kMersenne61;
            slot->mod_root = *r;
        }
    }
    return slot.get();
}

/// Element of the residue field Q[q]/(phi) of a place.
///
/// A residue without a place is a rational constant; it embeds into every
/// residue field, which lets generic code build 0 and 1 from integers.
class CycNum {
public:
    CycNum() = default;
    CycNum(int c) : r_(Rational(c)) {}  // NOLINT
    CycNum(const Rational& c) : r_(c) {}  // NOLINT
    CycNum(const Place* place, const PolyQ& p) : place_(place), r_(p % place->phi) {}

    static CycNum generator(const Place* place) { return CycNum(place, PolyQ::variable()); }

    const Place* place() const noexcept { return place_; }
    const PolyQ& residue() const noexcept { return r_; }

    bool is_zero() const noexcept { return r_.is_zero(); }
    bool is_one() const { return r_.is_one(); }
    bool is_rational() const { return r_.degree() <= 0; }
    Rational rational_value() const { return r_.is_zero() ? Rational(0) : r_.coeff(0); }

    CycNum inverse() const {
        if (is_zero()) throw DivisionByZero();
        if (is_rational()) return CycNum(place_, rational_value().inverse());
        auto bz = xgcd(r_, place_->phi);
        // phi irreducible, so gcd is 1 and s*r = 1 mod phi.
        return CycNum(place_, bz.s);
    }

    CycNum& operator+=(const CycNum& o) {
        place_ = join(place_, o.place_);
        r_ += o.r_;
        return *this;
    }
    CycNum& operator-=(const CycNum& o) {
        place_ = join(place_, o.place_);
        r_ -= o.r_;
        return *this;
    }
    CycNum& operator*=(const CycNum& o) {
        place_ = join(place_, o.place_);
        if (r_.degree() <= 0 || o.r_.degree() <= 0) {
            r_ = r_ * o.r_;
            return *this;
        }
        r_ = multiply_reduce(r_, o.r_);
        return *this;
    }
    CycNum& operator/=(const CycNum& o) { return *this *= o.inverse(); }

    friend CycNum operator+(CycNum a, const CycNum& b) { return a += b; }
    friend CycNum operator-(CycNum a, const CycNum& b) { return a -= b; }
    friend CycNum operator*(CycNum a, const CycNum& b) { return a *= b; }
    friend CycNum operator/(CycNum a, const CycNum& b) { return a /= b; }
    friend CycNum operator-(CycNum a) {
        a.r_ = -a.r_;
        return a;
    }
    friend bool operator==(const CycNum& a, const CycNum& b) { return a.r_ == b.r_; }

    CycNum pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        CycNum result(place_, PolyQ(Rational(1)));
        CycNum base(*this);
        while (e) {
            if (e & 1L) result *= base;
            e >>= 1;
            if (e) base *= base;
        }
        return result;
    }

private:
    CycNum(const Place* place, const Rational& c) : place_(place), r_(c) {}

    static const Place* join(const Place* a, const Place* b) {
        if (!a) return b;
        if (b && a != b) throw Error("mixing residues from different places");
        return a;
    }

    // Scales p to integer coefficients; returns the scale.
    static Integer integer_coefficients(const PolyQ& p, std::vector<Integer>& out) {
        Integer scale = 1;
        for (const auto& c : p.coeffs())
            if (!c.is_integer()) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), mpq_denref(c.raw().get_mpq_t()));
        out.resize(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) {
            const mpq_srcptr c = p.coeffs()[i].raw().get_mpq_t();
            mpz_divexact(out[i].get_mpz_t(), scale.get_mpz_t(), mpq_denref(c));
            out[i] *= Integer(mpq_numref(c));
        }
        return scale;
    }

    // a * b mod phi in integer arithmetic; phi is monic with integer coefficients.
    PolyQ multiply_reduce(const PolyQ& a, const PolyQ& b) const {
        std::vector<Integer> ia, ib;
        const Integer scale = integer_coefficients(a, ia) * integer_coefficients(b, ib);
        std::vector<Integer> c(ia.size() + ib.size() - 1);
        for (std::size_t i = 0; i < ia.size(); ++i) {
            if (ia[i] == 0) continue;
            for (std::size_t j = 0; j < ib.size(); ++j)
                mpz_addmul(c[i + j].get_mpz_t(), ia[i].get_mpz_t(), ib[j].get_mpz_t());
        }
        const auto& phi = place_->phi.coeffs();
        const std::size_t d = phi.size() - 1;
        for (std::size_t k = c.size(); k-- > d;) {
            if (c[k] == 0) continue;
            for (std::size_t j = 0; j < d; ++j)
                if (!phi[j].is_zero())
                    mpz_submul(c[k - d + j].get_mpz_t(), c[k].get_mpz_t(), mpq_numref(phi[j].raw().get_mpq_t()));
        }
        c.resize(std::min(c.size(), d));
        std::vector<Rational> r;
        r.reserve(c.size());
        for (auto& v : c) r.push_back(v == 0 ? Rational(0) : Rational(v, scale));
        return PolyQ(std::move(r));
    }

    const Place* place_ = nullptr;
    PolyQ r_;
};

using CycPoly = Poly<CycNum>;
using CycRatFun = Frac<CycNum>;

// Coprimality fast paths. If the images of a and b under a ring map to Z/p
// keep both leading coefficients nonzero, deg gcd(a, b) is at most the degree
// of the gcd of the images; an image gcd of degree 0 proves gcd(a, b) = 1.
namespace detail {

template <class F, class Image>
bool coprime_images(const Poly<F>& a, const Poly<F>& b, std::uint64_t p, Image&& image) {
    auto map = [&](const Poly<F>& f, std::vector<std::uint64_t>& out) {
        out.reserve(f.size());
        for (const auto& c : f.coeffs()) {
            auto v = image(c);
            if (!v) return false;
            out.push_back(*v);
        }
        return out.back() != 0;
    };
    std::vector<std::uint64_t> ia, ib;
    if (!map(a, ia) || !map(b, ib)) return false;
    return modular::gcd_degree(std::move(ia), std::move(ib), p) == 0;
}

inline std::optional<std::uint64_t> eval_mod(const PolyQ& f, std::uint64_t at, std::uint64_t p) {
    std::uint64_t acc = 0;
    for (std::size_t i = f.size(); i-- > 0;) {
        auto c = modular::reduce(f.coeffs()[i], p);
        if (!c) return std::nullopt;
        acc = (modular::mul(acc, at, p) + *c) % p;
    }
    return acc;
}

}  // namespace detail

inline bool certainly_coprime(const PolyQ& a, const PolyQ& b) {
    return detail::coprime_images(a, b, detail::kMersenne61,
                                  [](const Rational& c) { return modular::reduce(c, detail::kMersenne61); });
}

inline bool certainly_coprime(const Poly<RatQ>& a, const Poly<RatQ>& b) {
    constexpr std::uint64_t p = detail::kMersenne61;
    for (std::uint64_t at : {std::uint64_t{1000003}, std::uint64_t{982451653}}) {
        auto image = [at](const RatQ& c) -> std::optional<std::uint64_t> {
            auto d = detail::eval_mod(c.den(), at, p);
            if (!d || *d == 0) return std::nullopt;
            auto n = detail::eval_mod(c.num(), at, p);
            if (!n) return std::nullopt;
            return modular::mul(*n, modular::inverse(*d, p), p);
        };
        if (detail::coprime_images(a, b, p, image)) return true;
    }
    return false;
}

namespace detail {

inline const Place* coefficient_place(const CycPoly& a, const CycPoly& b) {
    for (const auto* f : {&a, &b})
        for (const auto& c : f->coeffs())
            if (c.place()) return c.place();
    return nullptr;
}

/// A prime p = 1 mod n, the phi(n) roots of Phi_n mod p, the Vandermonde
/// matrix V[k][i] = root_k^i and its inverse. Z[zeta]/p is isomorphic to
/// (Z/p)^phi(n) through evaluation at the roots.
struct SplitPrime {
    std::uint64_t p = 0;
    std::vector<std::uint64_t> roots;
    std::vector<std::vector<std::uint64_t>> vandermonde, inverse;
};

inline std::vector<std::vector<std::uint64_t>> invert_mod(std::vector<std::vector<std::uint64_t>> m, std::uint64_t p) {
    const std::size_t d = m.size();
    std::vector<std::vector<std::uint64_t>> inv(d, std::vector<std::uint64_t>(d, 0));
    for (std::size_t i = 0; i < d; ++i) inv[i][i] = 1;
    for (std::size_t col = 0; col < d; ++col) {
        std::size_t piv = col;
        while (m[piv][col] == 0) ++piv;  // Vandermonde on distinct roots is invertible
        std::swap(m[piv], m[col]);
        std::swap(inv[piv], inv[col]);
        const std::uint64_t s = modular::inverse(m[col][col], p);
        for (std::size_t j = 0; j < d; ++j) {
            m[col][j] = modular::mul(m[col][j], s, p);
            inv[col][j] = modular::mul(inv[col][j], s, p);
        }
        for (std::size_t r = 0; r < d; ++r) {
            if (r == col || m[r][col] == 0) continue;
            const std::uint64_t f = m[r][col];
            for (std::size_t j = 0; j < d; ++j) {
                m[r][j] = (m[r][j] + p - modular::mul(f, m[col][j], p)) % p;
                inv[r][j] = (inv[r][j] + p - modular::mul(f, inv[col][j], p)) % p;
            }
        }
    }
    return inv;
}

/// The index-th split prime of a cyclotomic place, in decreasing order below 2^61.
inline const SplitPrime& split_prime(const Place* place, std::size_t index) {
    static std::mutex mu;
    static std::map<long, std::deque<SplitPrime>> registry;
    std::lock_guard<std::mutex> lock(mu);
    auto& primes = registry[place->n];
    const std::uint64_t step = static_cast<std::uint64_t>(place->n);
    while (primes.size() <= index) {
        std::uint64_t p = primes.empty() ? (kMersenne61 - 1) / step * step + 1 : primes.back().p - step;
        while (p > kMersenne61) p -= step;
        for (;; p -= step) {
            if (p <= step) throw Error("no split prime left");
            if (!modular::is_prime(p)) continue;
            std::uint64_t w = 0;
            for (std::uint64_t g = 2; g < 1000 && !w; ++g) {
                std::uint64_t h = modular::power(g, (p - 1) / step, p);
                if (*eval_mod(place->phi, h, p) == 0) w = h;
            }
            if (!w) continue;
            SplitPrime sp;
            sp.p = p;
            for (long e = 1; e <= place->n; ++e)
                if (std::gcd(e, place->n) == 1) sp.roots.push_back(modular::power(w, static_cast<std::uint64_t>(e), p));
            for (std::uint64_t r : sp.roots) {
                auto& row = sp.vandermonde.emplace_back();
                std::uint64_t acc = 1;
                for (std::size_t i = 0; i < sp.roots.size(); ++i, acc = modular::mul(acc, r, p)) row.push_back(acc);
            }
            sp.inverse = invert_mod(sp.vandermonde, p);
            primes.push_back(std::move(sp));
            break;
        }
    }
    return primes[index];
}

/// Residues mod p of every coefficient, d entries each; nullopt if p divides a denominator.
inline std::vector<std::uint64_t> image_at(const std::vector<std::vector<std::uint64_t>>& residues,
                                           const std::vector<std::uint64_t>& powers, std::uint64_t p) {
    std::vector<std::uint64_t> out;
    out.reserve(residues.size());
    for (const auto& row : residues) {
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i < row.size(); ++i)
            if (row[i]) acc = (acc + modular::mul(row[i], powers[i], p)) % p;
        out.push_back(acc);
    }
    return out;
}

}  // namespace detail

namespace detail {

/// f = rows / scale with rows[i * d + k] the integer coefficient of zeta^k x^i.
struct ScaledCycPoly {
    Integer scale = 1;
    std::vector<Integer> rows;
};

inline ScaledCycPoly scaled(const CycPoly& f, std::size_t d) {
    ScaledCycPoly out;
    for (const auto& c : f.coeffs())
        for (const auto& r : c.residue().coeffs())
            if (!r.is_integer()) mpz_lcm(out.scale.get_mpz_t(), out.scale.get_mpz_t(), mpq_denref(r.raw().get_mpq_t()));
    out.rows.assign(f.size() * d, Integer(0));
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto& res = f.coeffs()[i].residue().coeffs();
        for (std::size_t k = 0; k < res.size(); ++k) {
            const mpq_srcptr r = res[k].raw().get_mpq_t();
            Integer& v = out.rows[i * d + k];
            mpz_divexact(v.get_mpz_t(), out.scale.get_mpz_t(), mpq_denref(r));
            mpz_mul(v.get_mpz_t(), v.get_mpz_t(), mpq_numref(r));
        }
    }
    return out;
}

// Rows of f modulo p, or nullopt when p divides the scale.
inline std::optional<std::vector<std::vector<std::uint64_t>>> residues_mod(const ScaledCycPoly& f, std::size_t d,
                                                                          std::uint64_t p) {
    const std::uint64_t s = mpz_fdiv_ui(f.scale.get_mpz_t(), p);
    if (s == 0) return std::nullopt;
    const std::uint64_t s_inv = modular::inverse(s, p);
    std::vector<std::vector<std::uint64_t>> out(f.rows.size() / d, std::vector<std::uint64_t>(d, 0));
    for (std::size_t i = 0; i < f.rows.size(); ++i)
        if (f.rows[i] != 0) out[i / d][i % d] = modular::mul(mpz_fdiv_ui(f.rows[i].get_mpz_t(), p), s_inv, p);
    return out;
}

// Reduces v[0 .. width) modulo the monic integer polynomial phi of degree d.
inline void reduce_row(Integer* v, std::size_t width, const Place* place, std::size_t d) {
    const auto& phi = place->phi.coeffs();
    for (std::size_t k = width; k-- > d;) {
        if (v[k] == 0) continue;
        for (std::size_t j = 0; j < d; ++j)
            if (!phi[j].is_zero()) mpz_submul(v[k - d + j].get_mpz_t(), v[k].get_mpz_t(), mpq_numref(phi[j].raw().get_mpq_t()));
        v[k] = 0;
    }
}

inline CycNum residue_over(const Integer* v, std::size_t d, const Integer& den, const Place* place) {
    std::vector<Rational> r(d, Rational(0));
    for (std::size_t k = 0; k < d; ++k)
        if (v[k] != 0) r[k] = Rational(v[k], den);
    return CycNum(place, PolyQ(std::move(r)));
}

inline const Place* integral_place(const CycPoly& a, const CycPoly& b) {
    const Place* place = coefficient_place(a, b);
    return place && place->cyclotomic ? place : nullptr;
}

}  // namespace detail

/// Product over a cyclotomic place in integer arithmetic: both factors are
/// scaled to Z[zeta][x], multiplied as bivariate arrays, reduced by the monic
/// Phi_n row by row and divided by the scale once per coefficient.
inline std::optional<CycPoly> fast_product(const CycPoly& a, const CycPoly& b) {
    const Place* place = detail::integral_place(a, b);
    if (!place) return std::nullopt;
    const std::size_t d = static_cast<std::size_t>(place->degree());
    const detail::ScaledCycPoly sa = detail::scaled(a, d), sb = detail::scaled(b, d);
    const std::size_t width = 2 * d - 1, rows = a.size() + b.size() - 1;
    std::vector<Integer> c(rows * width);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < d; ++k) {
            const Integer& x = sa.rows[i * d + k];
            if (x == 0) continue;
            for (std::size_t j = 0; j < b.size(); ++j)
                for (std::size_t l = 0; l < d; ++l) {
                    const Integer& y = sb.rows[j * d + l];
                    if (y != 0) mpz_addmul(c[(i + j) * width + k + l].get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
                }
        }
    const Integer scale = sa.scale * sb.scale;
    std::vector<CycNum> out;
    out.reserve(rows);
    for (std::size_t row = 0; row < rows; ++row) {
        detail::reduce_row(&c[row * width], width, place, d);
        out.push_back(detail::residue_over(&c[row * width], d, scale, place));
    }
    return CycPoly(std::move(out));
}

/// Fraction-free division by a monic divisor over a cyclotomic place. The
/// remainder is kept as integer rows over one denominator; each step scales
/// it by the divisor's scale and subtracts top * divisor.
inline std::optional<std::pair<CycPoly, CycPoly>> fast_divmod(const CycPoly& a, const CycPoly& b) {
    const Place* place = detail::integral_place(a, b);
    if (!place || !b.lead().is_one()) return std::nullopt;
    const std::size_t d = static_cast<std::size_t>(place->degree());
    const std::size_t db = b.size() - 1, width = 2 * d - 1;
    detail::ScaledCycPoly rem = detail::scaled(a, d);
    const detail::ScaledCycPoly div = detail::scaled(b, d);
    const bool unit = div.scale == 1;
    std::vector<CycNum> quo(a.size() - db, CycNum(0));
    std::vector<Integer> tmp(width);
    for (std::size_t k = quo.size(); k-- > 0;) {
        Integer* top = &rem.rows[(k + db) * d];
        if (std::all_of(top, top + d, [](const Integer& v) { return v == 0; })) continue;
        quo[k] = detail::residue_over(top, d, rem.scale, place);
        if (!unit) {
            for (std::size_t i = 0; i < (k + db) * d; ++i) rem.rows[i] *= div.scale;
            rem.scale *= div.scale;
        }
        for (std::size_t j = 0; j < db; ++j) {
            for (auto& t : tmp) t = 0;
            for (std::size_t x = 0; x < d; ++x) {
                if (top[x] == 0) continue;
                for (std::size_t y = 0; y < d; ++y) {
                    const Integer& w = div.rows[j * d + y];
                    if (w != 0) mpz_addmul(tmp[x + y].get_mpz_t(), top[x].get_mpz_t(), w.get_mpz_t());
                }
            }
            detail::reduce_row(tmp.data(), width, place, d);
            for (std::size_t x = 0; x < d; ++x) rem.rows[(k + j) * d + x] -= tmp[x];
        }
        for (std::size_t x = 0; x < d; ++x) top[x] = 0;
    }
    std::vector<CycNum> r;
    r.reserve(db);
    for (std::size_t i = 0; i < db; ++i) r.push_back(detail::residue_over(&rem.rows[i * d], d, rem.scale, place));
    return std::make_pair(CycPoly(std::move(quo)), CycPoly(std::move(r)));
}

/// Multimodular gcd over Q(zeta_n)[x]: gcd images at every root of Phi_n
/// modulo split primes, interpolation back to residues, Chinese remaindering
/// and rational reconstruction. A candidate is accepted once it is stable
/// across two primes and divides both inputs; its degree equals the image
/// degree, an upper bound for the true gcd degree, so it is the gcd.
inline std::optional<CycPoly> modular_gcd(const CycPoly& a, const CycPoly& b) {
    constexpr std::size_t kMaxPrimes = 400;
    if (a.degree() <= 0 || b.degree() <= 0) return std::nullopt;
    const Place* place = detail::coefficient_place(a, b);
    if (place && !place->cyclotomic) return std::nullopt;
    const Place* split = place ? place : cyclotomic_place(1);
    const std::size_t d = static_cast<std::size_t>(split->degree());

    const detail::ScaledCycPoly sa = detail::scaled(a, d), sb = detail::scaled(b, d);
    long target = -1;
    Integer modulus = 1;
    std::vector<Integer> acc;  // residue i of x^j at index j * d + i
    std::optional<CycPoly> previous;
    for (std::size_t index = 0; index < kMaxPrimes; ++index) {
        const detail::SplitPrime& sp = detail::split_prime(split, index);
        const std::uint64_t p = sp.p;
        auto ra = detail::residues_mod(sa, d, p), rb = detail::residues_mod(sb, d, p);
        if (!ra || !rb) continue;

        std::vector<std::vector<std::uint64_t>> images;
        bool usable = true;
        for (std::size_t k = 0; k < d && usable; ++k) {
            auto ea = detail::image_at(*ra, sp.vandermonde[k], p), eb = detail::image_at(*rb, sp.vandermonde[k], p);
            if (ea.back() == 0 || eb.back() == 0) usable = false;
            else images.push_back(modular::monic_gcd(std::move(ea), std::move(eb), p));
            if (usable && images.back().size() != images.front().size()) usable = false;
        }
        if (!usable) continue;
        const long degree = static_cast<long>(images.front().size()) - 1;
        if (degree == 0) return CycPoly(CycNum(1));
        if (target != -1 && degree > target) continue;
        if (target == -1 || degree < target) {
            target = degree;
            modulus = 1;
            acc.assign(static_cast<std::size_t>(degree) * d, Integer(0));
            previous.reset();
        }

        const std::uint64_t m_inv = modular::inverse(mpz_fdiv_ui(modulus.get_mpz_t(), p), p);
        for (std::size_t j = 0; j < static_cast<std::size_t>(target); ++j)
            for (std::size_t i = 0; i < d; ++i) {
                std::uint64_t v = 0;
                for (std::size_t k = 0; k < d; ++k)
                    v = (v + modular::mul(sp.inverse[i][k], images[k][j], p)) % p;
                Integer& x = acc[j * d + i];
                const std::uint64_t xp = mpz_fdiv_ui(x.get_mpz_t(), p);
                const std::uint64_t t = modular::mul((v + p - xp) % p, m_inv, p);
                x += modulus * Integer(static_cast<unsigned long>(t));
            }
        modulus *= Integer(static_cast<unsigned long>(p));

        std::vector<CycNum> coeffs;
        bool reconstructed = true;
        for (std::size_t j = 0; j < static_cast<std::size_t>(target) && reconstructed; ++j) {
            std::vector<Rational> residue;
            for (std::size_t i = 0; i < d && reconstructed; ++i) {
                auto r = modular::rational_reconstruction(acc[j * d + i], modulus);
                if (r) residue.push_back(std::move(*r));
                else reconstructed = false;
            }
            if (reconstructed)
                coeffs.push_back(place ? CycNum(place, PolyQ(std::move(residue))) : CycNum(residue[0]));
        }
        if (!reconstructed) continue;
        coeffs.push_back(CycNum(1));
        CycPoly candidate(std::move(coeffs));
        if (previous && *previous == candidate && (a % candidate).is_zero() && (b % candidate).is_zero())
            return candidate;
        previous = std::move(candidate);
    }
    return std::nullopt;
}

inline bool certainly_coprime(const CycPoly& a, const CycPoly& b) {
    const Place* place = detail::coefficient_place(a, b);
    std::uint64_t p = place ? place->mod_p : detail::kMersenne61;
    std::uint64_t root = place ? place->mod_root : 0;
    if (p == 0) return false;
    return detail::coprime_images(a, b, p, [=](const CycNum& c) { return detail::eval_mod(c.residue(), root, p); });
}

}  // namespace qcurv
