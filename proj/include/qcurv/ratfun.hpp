#pragma once

#include <optional>
#include <string>
#include <utility>

#include "qcurv/print.hpp"

namespace qcurv {

/// Polynomials in x over Q(q), and the field Q(q)(x).
using PolyX = Poly<RatQ>;
using RatFun = Frac<RatQ>;
/// Rational functions in x over Q; shares its representation with RatQ.
using RatX = Frac<Rational>;

inline RatQ q_var() { return RatQ::variable(); }
inline RatFun x_var() { return RatFun::variable(); }

inline RatQ q_power(long t) { return q_var().pow(t); }

inline detail::Printed print_ratfun(const RatFun& f) {
    return detail::print_frac(f, "x", [](const RatQ& c) { return print_ratq(c, "q"); });
}

inline std::string to_string(const RatFun& f) { return print_ratfun(f).text; }

/// f(q^t x)
inline RatFun sigma_q(const RatFun& f, long t = 1) {
    if (t == 0 || f.is_constant()) return f;
    return f.scale_variable(q_power(t));
}

/// x d/dx
inline RatFun dlog_derive(const RatFun& f) { return f.euler_derivative(); }

inline bool is_q_free(const RatQ& c) { return c.num().degree() <= 0 && c.den().degree() <= 0; }

inline bool is_q_free(const RatFun& f) {
    for (const auto& c : f.num().coeffs())
        if (!is_q_free(c)) return false;
    for (const auto& c : f.den().coeffs())
        if (!is_q_free(c)) return false;
    return true;
}

/// Rational function in x over Q, embedded in Q(q)(x).
inline RatFun lift(const RatX& f) {
    auto up = [](const Rational& r) { return RatQ(r); };
    return RatFun::from_normalized(f.num().map(up), f.den().map(up));
}

/// Inverse of lift; requires is_q_free(f).
inline RatX drop_q(const RatFun& f) {
    auto down = [](const RatQ& c) { return c.constant_value(); };
    return RatX::from_normalized(f.num().map(down), f.den().map(down));
}

namespace detail {

/// Writes p = content * primitive with primitive in Q[q][x] (coefficients
/// with denominator 1) and content in Q(q).
inline std::pair<RatQ, PolyX> primitive_split(const PolyX& p) {
    if (p.is_zero()) return {RatQ(0), p};
    PolyQ common_den(Rational(1));
    for (const auto& c : p.coeffs())
        if (!c.den().is_one()) common_den = common_den / gcd(common_den, c.den()) * c.den();
    std::vector<PolyQ> scaled;
    scaled.reserve(p.size());
    PolyQ g;
    for (const auto& c : p.coeffs()) {
        PolyQ s = c.num() * (common_den / c.den());
        g = gcd(g, s);
        scaled.push_back(std::move(s));
    }
    std::vector<RatQ> prim;
    prim.reserve(scaled.size());
    for (auto& s : scaled) prim.emplace_back(s / g);
    return {RatQ(g, common_den), PolyX(std::move(prim))};
}

}  // namespace detail

/// Image of c in the residue field of the place; nullopt if c has a pole there.
inline std::optional<CycNum> try_reduce(const RatQ& c, const Place* place) {
    if (c.den().is_one()) return CycNum(place, c.num());
    PolyQ den_res = c.den() % place->phi;
    if (den_res.is_zero()) return std::nullopt;
    return CycNum(place, c.num()) / CycNum(place, den_res);
}

inline CycNum reduce_at_place(const RatQ& c, const Place* place) {
    auto r = try_reduce(c, place);
    if (!r) throw BadReduction(place->n, to_string(c.den()));
    return *r;
}

/// Image of f in F_v(x) where F_v = Q[q]/(phi). Defined iff the Gauss
/// valuation of f at phi is nonnegative.
inline CycRatFun reduce_at_place(const RatFun& f, const Place* place) {
    auto reduce_poly = [&](const PolyX& p) -> std::optional<CycPoly> {
        std::vector<CycNum> out;
        out.reserve(p.size());
        for (const auto& c : p.coeffs()) {
            auto r = try_reduce(c, place);
            if (!r) return std::nullopt;
            out.push_back(std::move(*r));
        }
        return CycPoly(std::move(out));
    };
    // Fast path: every coefficient is integral at the place. The denominator
    // is monic in x, so its image is nonzero.
    if (auto n = reduce_poly(f.num())) {
        if (auto d = reduce_poly(f.den())) return CycRatFun(std::move(*n), std::move(*d));
    }
    auto [num_content, num_prim] = detail::primitive_split(f.num());
    auto [den_content, den_prim] = detail::primitive_split(f.den());
    RatQ content = num_content / den_content;
    auto c = try_reduce(content, place);
    if (!c) throw BadReduction(place->n, to_string(content.den()));
    auto n = reduce_poly(num_prim);
    auto d = reduce_poly(den_prim);
    return CycRatFun(*n * *c, *d);
}

inline bool reduces_at(const RatFun& f, const Place* place) {
    try {
        (void)reduce_at_place(f, place);
        return true;
    } catch (const BadReduction&) {
        return false;
    }
}

/// Image of a residue-field rational function when the residue field is Q
/// (value places).
inline RatX to_ratx(const CycRatFun& f) {
    auto down = [](const CycNum& c) { return c.rational_value(); };
    return RatX::from_normalized(f.num().map(down), f.den().map(down));
}

/// sigma applied in the residue field: x -> zeta^t x.
inline CycRatFun sigma_zeta(const CycRatFun& f, const CycNum& zeta_power) {
    if (f.is_constant() || zeta_power.is_one()) return f;
    return f.scale_variable(zeta_power);
}

}  // namespace qcurv
