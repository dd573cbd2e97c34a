#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qcurv/place.hpp"
#include "qcurv/print.hpp"

namespace qcurv {

/// Factorization of a positive integer into primes (trial division, then
/// Pollard-Brent on composite cofactors).
inline std::map<Integer, long> factor_integer(Integer n) {
    std::map<Integer, long> out;
    if (n < 0) n = -n;
    if (n <= 1) return out;
    for (unsigned long p = 2; p < 10000 && p * p <= n; p += (p == 2 ? 1 : 2)) {
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            ++out[Integer(p)];
            n /= p;
        }
    }
    std::vector<Integer> pending;
    if (n > 1) pending.push_back(n);
    while (!pending.empty()) {
        Integer m = pending.back();
        pending.pop_back();
        if (m == 1) continue;
        if (mpz_probab_prime_p(m.get_mpz_t(), 30) > 0) {
            ++out[m];
            continue;
        }
        if (mpz_perfect_square_p(m.get_mpz_t())) {
            Integer r = sqrt(m);
            pending.push_back(r);
            pending.push_back(r);
            continue;
        }
        Integer d = 1;
        for (unsigned long c = 1; d == 1 || d == m; ++c) {
            // Brent's cycle search on x -> x^2 + c.
            Integer y = 2, x, ys, g = 1, acc = 1;
            unsigned long r = 1;
            const unsigned long block = 64;
            do {
                x = y;
                for (unsigned long i = 0; i < r; ++i) y = (y * y + c) % m;
                for (unsigned long k = 0; k < r && g == 1; k += block) {
                    ys = y;
                    for (unsigned long i = 0; i < std::min(block, r - k); ++i) {
                        y = (y * y + c) % m;
                        acc = acc * abs(x - y) % m;
                    }
                    g = gcd(acc, m);
                }
                r *= 2;
            } while (g == 1);
            if (g == m) {
                do {
                    ys = (ys * ys + c) % m;
                    g = gcd(abs(x - ys), m);
                } while (g == 1);
            }
            d = g;
        }
        pending.push_back(d);
        pending.push_back(m / d);
    }
    return out;
}

/// Multiplicative normal form sign * prod p^e * q^k * prod f(q)^e of a
/// nonzero element of Q(q), with f monic irreducible and f != q.
struct FactoredConstant {
    int sign = 1;
    std::map<Integer, long> primes;
    long q_exponent = 0;
    std::vector<std::pair<PolyQ, long>> poly_factors;  // canonical order

    RatQ reconstruct() const {
        Integer num = 1, den = 1;
        for (const auto& [p, e] : primes) (e > 0 ? num : den) *= ipow(p, static_cast<unsigned long>(e > 0 ? e : -e));
        RatQ r(PolyQ(Rational(num * sign, den)));
        r *= RatQ(PolyQ::variable()).pow(q_exponent);
        for (const auto& [f, e] : poly_factors) r *= RatQ(f).pow(e);
        return r;
    }
};

namespace detail {

// Degree first, then coefficients from the top down.
inline bool poly_less(const PolyQ& a, const PolyQ& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    for (std::size_t i = a.size(); i-- > 0;)
        if (a.coeffs()[i] != b.coeffs()[i]) return a.coeffs()[i] < b.coeffs()[i];
    return false;
}

// Positive multiple with coprime integer coefficients and positive leading term.
inline std::vector<Integer> primitive_integer(const PolyQ& f) {
    Integer l = 1;
    for (const auto& c : f.coeffs()) l = ilcm(l, c.den());
    std::vector<Integer> z;
    Integer g = 0;
    for (const auto& c : f.coeffs()) {
        z.push_back(c.num() * (l / c.den()));
        g = igcd(g, z.back());
    }
    if (z.back() < 0) g = -g;
    for (auto& c : z) c /= g;
    return z;
}

inline Integer eval_integer(const std::vector<Integer>& f, const Integer& t) {
    Integer acc = 0;
    for (std::size_t i = f.size(); i-- > 0;) acc = acc * t + f[i];
    return acc;
}

inline std::vector<Integer> positive_divisors(const Integer& n) {
    std::vector<Integer> d{1};
    for (const auto& [p, e] : factor_integer(n)) {
        const std::size_t base = d.size();
        Integer pk = 1;
        for (long k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) d.push_back(d[i] * pk);
        }
    }
    std::sort(d.begin(), d.end());
    return d;
}

inline long euler_phi(long n) {
    long r = n;
    for (long p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            r -= r / p;
        }
    if (n > 1) r -= r / n;
    return r;
}

// Square-free decomposition of a monic f: pairs (a_i, i) with f = prod a_i^i.
inline std::vector<std::pair<PolyQ, long>> squarefree_parts(const PolyQ& f) {
    std::vector<std::pair<PolyQ, long>> out;
    PolyQ a = gcd(f, f.derivative());
    PolyQ b = f / a, c = f.derivative() / a;
    PolyQ d = c - b.derivative();
    for (long i = 1; b.degree() > 0; ++i) {
        PolyQ g = gcd(b, d);
        if (g.degree() > 0) out.emplace_back(g, i);
        b = b / g;
        c = d / g;
        d = c - b.derivative();
    }
    return out;
}

inline void rational_root_factors(PolyQ& f, std::vector<PolyQ>& found) {
    if (f.degree() < 1) return;
    auto z = primitive_integer(f);
    auto num_divs = positive_divisors(z.front());
    auto den_divs = positive_divisors(z.back());
    for (const auto& a : num_divs)
        for (const auto& b : den_divs) {
            if (igcd(a, b) != 1) continue;
            for (int s : {1, -1}) {
                Rational r(a * s, b);
                if (f.degree() >= 1 && f.evaluate(r).is_zero()) {
                    PolyQ lin{-r, Rational(1)};
                    found.push_back(lin);
                    f = f / lin;
                }
            }
        }
}

inline void cyclotomic_factors(PolyQ& f, std::vector<PolyQ>& found) {
    const long d = f.degree();
    for (long n = 3; d >= 2 && n <= 2 * d * d + 2; ++n) {
        if (euler_phi(n) > f.degree()) continue;
        PolyQ phi = cyclotomic(n);
        if ((f % phi).is_zero()) {
            found.push_back(phi);
            f = f / phi;
        }
    }
}

// Kronecker search for quadratic factors of a square-free f with no
// rational roots.
inline void quadratic_factors(PolyQ& f, std::vector<PolyQ>& found) {
    constexpr double kMaxCandidates = 2e6;
    while (f.degree() >= 4) {
        auto z = primitive_integer(f);
        std::vector<std::pair<std::size_t, long>> ranked;
        std::vector<std::vector<Integer>> divs;
        const long points[] = {0, 1, -1, 2, -2, 3, -3};
        for (long t : points) {
            divs.push_back(positive_divisors(eval_integer(z, Integer(t))));
            ranked.emplace_back(divs.back().size(), t);
        }
        std::vector<std::size_t> order(ranked.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return ranked[a] < ranked[b]; });
        const std::size_t i0 = order[0], i1 = order[1], i2 = order[2];
        double candidates = 4.0 * static_cast<double>(divs[i0].size() * divs[i1].size() * divs[i2].size());
        if (candidates > kMaxCandidates)
            throw FactorizationOutOfRange("polynomial " + to_string(f) + " is too large to certify");
        const Rational t0(ranked[i0].second), t1(ranked[i1].second), t2(ranked[i2].second);
        const PolyQ q = PolyQ::variable();
        const PolyQ l0 = (q - PolyQ(t1)) * (q - PolyQ(t2)) * ((t0 - t1) * (t0 - t2)).inverse();
        const PolyQ l1 = (q - PolyQ(t0)) * (q - PolyQ(t2)) * ((t1 - t0) * (t1 - t2)).inverse();
        const PolyQ l2 = (q - PolyQ(t0)) * (q - PolyQ(t1)) * ((t2 - t0) * (t2 - t1)).inverse();
        bool split = false;
        for (const auto& a : divs[i0]) {
            for (const auto& b : divs[i1]) {
                for (const auto& c : divs[i2]) {
                    for (int sb : {1, -1})
                        for (int sc : {1, -1}) {
                            PolyQ g = l0 * Rational(a) + l1 * Rational(Integer(b * sb)) + l2 * Rational(Integer(c * sc));
                            if (g.degree() != 2) continue;
                            bool integral = std::all_of(g.coeffs().begin(), g.coeffs().end(),
                                                        [](const Rational& r) { return r.is_integer(); });
                            if (!integral || (f % g).is_zero() == false) continue;
                            g = g.monic();
                            found.push_back(g);
                            f = f / g;
                            split = true;
                            goto next;
                        }
                }
            }
        }
    next:
        if (!split) return;
    }
}

// Irreducible factors of a monic square-free f with f(0) != 0.
inline std::vector<PolyQ> irreducible_factors(PolyQ f) {
    std::vector<PolyQ> found;
    rational_root_factors(f, found);
    cyclotomic_factors(f, found);
    quadratic_factors(f, found);
    if (f.degree() > 5)
        throw FactorizationOutOfRange("cannot certify irreducibility of " + to_string(f) + " (degree " +
                                      std::to_string(f.degree()) + ")");
    if (f.degree() > 0) found.push_back(f.monic());
    return found;
}

inline void factor_polynomial(const PolyQ& f, long sign, FactoredConstant& out) {
    const std::size_t v = f.valuation();
    out.q_exponent += sign * static_cast<long>(v);
    std::vector<Rational> rest(f.coeffs().begin() + static_cast<std::ptrdiff_t>(v), f.coeffs().end());
    PolyQ g = PolyQ(std::move(rest)).monic();
    if (g.degree() < 1) return;
    for (const auto& [part, mult] : squarefree_parts(g))
        for (auto& irr : irreducible_factors(part)) out.poly_factors.emplace_back(std::move(irr), sign * mult);
}

}  // namespace detail

/// Throws FactorizationOutOfRange when a factor of degree above 5 can be
/// neither split nor recognised as cyclotomic.
inline FactoredConstant factor_constant(const RatQ& c) {
    if (c.is_zero()) throw DivisionByZero("factor_constant of zero");
    FactoredConstant out;
    const Rational lead = c.num().lead();  // denominators are monic
    out.sign = lead.sign();
    for (const auto& [p, e] : factor_integer(lead.num())) out.primes[p] += e;
    for (const auto& [p, e] : factor_integer(lead.den())) out.primes[p] -= e;
    detail::factor_polynomial(c.num(), 1, out);
    detail::factor_polynomial(c.den(), -1, out);
    std::sort(out.poly_factors.begin(), out.poly_factors.end(),
              [](const auto& a, const auto& b) { return detail::poly_less(a.first, b.first); });
    return out;
}

}  // namespace qcurv
