#pragma once

// Seeded generators for property tests.

#include <random>
#include <vector>

#include "qcurv/qmodule.hpp"

namespace qcurv::gen {

class Gen {
public:
    explicit Gen(unsigned seed) : rng_(seed) {}

    long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

    PolyQ poly_q(int max_degree, long height) {
        std::vector<Rational> c;
        int d = static_cast<int>(integer(0, max_degree));
        for (int i = 0; i <= d; ++i) c.emplace_back(integer(-height, height));
        return PolyQ(std::move(c));
    }

    RatQ ratq(int max_degree, long height) {
        PolyQ n = poly_q(max_degree, height);
        PolyQ d;
        while (d.is_zero()) d = poly_q(max_degree, height);
        return RatQ(n, d);
    }

    // Polynomial in x whose coefficients are polynomials in q.
    PolyX poly_x(int x_degree, int q_degree, long height) {
        std::vector<RatQ> c;
        int d = static_cast<int>(integer(0, x_degree));
        for (int i = 0; i <= d; ++i) c.emplace_back(poly_q(q_degree, height));
        return PolyX(std::move(c));
    }

    RatFun ratfun(int x_degree, int q_degree, long height) {
        PolyX n = poly_x(x_degree, q_degree, height);
        PolyX d;
        while (d.is_zero()) d = poly_x(x_degree, q_degree, height);
        return RatFun(n, d);
    }

    MatrixQX matrix(std::size_t n, int x_degree, int q_degree, long height) {
        MatrixQX m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = RatFun(poly_x(x_degree, q_degree, height));
        return m;
    }

    MatrixQX invertible_matrix(std::size_t n, int x_degree, int q_degree, long height) {
        for (;;) {
            MatrixQX m = matrix(n, x_degree, q_degree, height);
            if (!m.determinant().is_zero()) return m;
        }
    }

    std::mt19937& engine() { return rng_; }

private:
    std::mt19937 rng_;
};

}  // namespace qcurv::gen
