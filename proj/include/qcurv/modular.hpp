#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qcurv/rational.hpp"

namespace qcurv::modular {

// Arithmetic in Z/p for primes below 2^62.

inline std::uint64_t mul(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

inline std::uint64_t power(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    b %= p;
    while (e) {
        if (e & 1) r = mul(r, b, p);
        b = mul(b, b, p);
        e >>= 1;
    }
    return r;
}

/// Inverse of a nonzero a modulo p by the extended Euclidean algorithm.
inline std::uint64_t inverse(std::uint64_t a, std::uint64_t p) {
    std::int64_t t0 = 0, t1 = 1;
    std::uint64_t r0 = p, r1 = a % p;
    while (r1 != 0) {
        const std::uint64_t q = r0 / r1;
        std::uint64_t r2 = r0 - q * r1;
        r0 = r1;
        r1 = r2;
        std::int64_t t2 = t0 - static_cast<std::int64_t>(q) * t1;
        t0 = t1;
        t1 = t2;
    }
    return t0 < 0 ? static_cast<std::uint64_t>(t0 + static_cast<std::int64_t>(p)) : static_cast<std::uint64_t>(t0);
}

inline std::uint64_t reduce(const Integer& z, std::uint64_t p) {
    Integer r;
    mpz_fdiv_r_ui(r.get_mpz_t(), z.get_mpz_t(), p);
    return r.get_ui();
}

/// Image of r in Z/p; nullopt if p divides the denominator.
inline std::optional<std::uint64_t> reduce(const Rational& r, std::uint64_t p) {
    const mpq_srcptr q = r.raw().get_mpq_t();
    const std::uint64_t n = mpz_fdiv_ui(mpq_numref(q), p);
    if (r.is_integer()) return n;
    const std::uint64_t d = mpz_fdiv_ui(mpq_denref(q), p);
    if (d == 0) return std::nullopt;
    return mul(n, inverse(d, p), p);
}

inline bool is_prime(std::uint64_t n) {
    Integer z(static_cast<unsigned long>(n));
    return mpz_probab_prime_p(z.get_mpz_t(), 30) > 0;
}

/// Degree of gcd(a, b) over Z/p (coefficient vectors, lowest degree first,
/// leading coefficients nonzero). Returns -1 when both are zero.
inline int gcd_degree(std::vector<std::uint64_t> a, std::vector<std::uint64_t> b, std::uint64_t p) {
    auto trim = [](std::vector<std::uint64_t>& v) {
        while (!v.empty() && v.back() == 0) v.pop_back();
    };
    trim(a);
    trim(b);
    if (a.size() < b.size()) std::swap(a, b);
    while (!b.empty()) {
        if (b.size() == 1) return 0;
        std::uint64_t inv = inverse(b.back(), p);
        while (a.size() >= b.size()) {
            std::uint64_t f = mul(a.back(), inv, p);
            std::size_t shift = a.size() - b.size();
            for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] = (a[shift + j] + p - mul(f, b[j], p)) % p;
            trim(a);
            if (a.empty()) break;
        }
        std::swap(a, b);
    }
    return static_cast<int>(a.size()) - 1;
}

/// Monic gcd over Z/p of two coefficient vectors (lowest degree first).
/// The zero polynomial is the empty vector.
inline std::vector<std::uint64_t> monic_gcd(std::vector<std::uint64_t> a, std::vector<std::uint64_t> b,
                                            std::uint64_t p) {
    auto trim = [](std::vector<std::uint64_t>& v) {
        while (!v.empty() && v.back() == 0) v.pop_back();
    };
    trim(a);
    trim(b);
    if (a.size() < b.size()) std::swap(a, b);
    while (!b.empty()) {
        std::uint64_t inv = inverse(b.back(), p);
        while (a.size() >= b.size()) {
            std::uint64_t f = mul(a.back(), inv, p);
            std::size_t shift = a.size() - b.size();
            for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] = (a[shift + j] + p - mul(f, b[j], p)) % p;
            trim(a);
            if (a.empty()) break;
        }
        std::swap(a, b);
    }
    if (!a.empty()) {
        std::uint64_t inv = inverse(a.back(), p);
        for (auto& c : a) c = mul(c, inv, p);
    }
    return a;
}

/// The fraction r/s with |r|, |s| <= sqrt(m/2) and r = s u mod m, if any.
inline std::optional<Rational> rational_reconstruction(const Integer& u, const Integer& m) {
    Integer bound;
    mpz_fdiv_q_2exp(bound.get_mpz_t(), m.get_mpz_t(), 1);
    mpz_sqrt(bound.get_mpz_t(), bound.get_mpz_t());
    Integer r0 = m, r1 = u, s0 = 0, s1 = 1;
    mpz_fdiv_r(r1.get_mpz_t(), u.get_mpz_t(), m.get_mpz_t());
    while (r1 > bound) {
        Integer quo = r0 / r1;
        Integer r2 = r0 - quo * r1, s2 = s0 - quo * s1;
        r0 = std::move(r1);
        r1 = std::move(r2);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    if (abs(s1) > bound || s1 == 0) return std::nullopt;
    Integer g;
    mpz_gcd(g.get_mpz_t(), r1.get_mpz_t(), s1.get_mpz_t());
    if (g != 1) return std::nullopt;
    return Rational(r1, s1);
}

}  // namespace qcurv::modular
