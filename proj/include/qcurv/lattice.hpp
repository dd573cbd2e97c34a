#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "qcurv/rational.hpp"

namespace qcurv {

using IntVector = std::vector<Integer>;
using IntMatrix = std::vector<IntVector>;  // row-major

namespace detail {

struct ExtendedGcd {
    Integer g, s, t;  // s*a + t*b = g >= 0
};

inline ExtendedGcd extended_gcd(const Integer& a, const Integer& b) {
    ExtendedGcd r;
    mpz_gcdext(r.g.get_mpz_t(), r.s.get_mpz_t(), r.t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Integer floor_div(const Integer& a, const Integer& b) {
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline bool is_zero_vector(const IntVector& v) {
    return std::all_of(v.begin(), v.end(), [](const Integer& x) { return x == 0; });
}

}  // namespace detail

/// Basis of {m in Z^cols : E m = 0}, by unimodular column reduction of E
/// tracked in an identity block.
inline IntMatrix integer_kernel(const IntMatrix& e, std::size_t cols) {
    const std::size_t rows = e.size();
    IntMatrix a = e;
    IntMatrix u(cols, IntVector(cols, Integer(0)));
    for (std::size_t i = 0; i < cols; ++i) u[i][i] = 1;
    auto combine = [&](std::size_t k, std::size_t j, const Integer& s, const Integer& t, const Integer& x,
                       const Integer& y) {
        // col_k <- s col_k + t col_j ; col_j <- x col_k + y col_j
        for (auto* m : {&a, &u})
            for (auto& row : *m) {
                Integer ck = row[k], cj = row[j];
                row[k] = s * ck + t * cj;
                row[j] = x * ck + y * cj;
            }
    };
    std::size_t pivot = 0;
    for (std::size_t i = 0; i < rows && pivot < cols; ++i) {
        for (std::size_t j = pivot + 1; j < cols; ++j) {
            if (a[i][j] == 0) continue;
            if (a[i][pivot] == 0) {
                combine(pivot, j, Integer(0), Integer(1), Integer(1), Integer(0));
                continue;
            }
            Integer av = a[i][pivot], bv = a[i][j];
            auto eg = detail::extended_gcd(av, bv);
            combine(pivot, j, eg.s, eg.t, Integer(-bv / eg.g), Integer(av / eg.g));
        }
        if (a[i][pivot] != 0) ++pivot;
    }
    IntMatrix kernel;
    for (std::size_t j = pivot; j < cols; ++j) {
        IntVector v(cols);
        for (std::size_t r = 0; r < cols; ++r) v[r] = u[r][j];
        kernel.push_back(std::move(v));
    }
    return kernel;
}

/// Row Hermite normal form: pivots (first nonzero) positive, entries above a
/// pivot reduced into [0, pivot), zero rows dropped.
inline IntMatrix hermite_normal_form(IntMatrix m) {
    if (m.empty()) return m;
    const std::size_t cols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
        for (std::size_t i = r + 1; i < m.size(); ++i) {
            if (m[i][c] == 0) continue;
            if (m[r][c] == 0) {
                std::swap(m[r], m[i]);
                continue;
            }
            auto eg = detail::extended_gcd(m[r][c], m[i][c]);
            Integer x = -m[i][c] / eg.g, y = m[r][c] / eg.g;
            for (std::size_t j = c; j < cols; ++j) {
                Integer a = m[r][j], b = m[i][j];
                m[r][j] = eg.s * a + eg.t * b;
                m[i][j] = x * a + y * b;
            }
        }
        if (m[r][c] == 0) continue;
        if (m[r][c] < 0)
            for (auto& v : m[r]) v = -v;
        for (std::size_t i = 0; i < r; ++i) {
            Integer f = detail::floor_div(m[i][c], m[r][c]);
            if (f != 0)
                for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        ++r;
    }
    m.resize(r);
    return m;
}

/// Canonical basis of a lattice: each vector's last nonzero entry is its
/// positive pivot, other vectors are reduced into [0, pivot) there, and
/// vectors are ordered by pivot position.
inline IntMatrix canonical_basis(const IntMatrix& rows) {
    if (rows.empty()) return rows;
    IntMatrix m = rows;
    for (auto& r : m) std::reverse(r.begin(), r.end());
    m = hermite_normal_form(std::move(m));
    for (auto& r : m) std::reverse(r.begin(), r.end());
    std::reverse(m.begin(), m.end());
    return m;
}

/// Membership test against a basis in canonical form.
inline bool lattice_contains(const IntMatrix& canonical, IntVector v) {
    for (std::size_t k = canonical.size(); k-- > 0;) {
        const IntVector& row = canonical[k];
        std::size_t p = row.size();
        while (p-- > 0 && row[p] == 0) {
        }
        for (std::size_t j = p + 1; j < v.size(); ++j)
            if (v[j] != 0) return false;
        if (v[p] % row[p] != 0) return false;
        Integer f = v[p] / row[p];
        for (std::size_t j = 0; j <= p; ++j) v[j] -= f * row[j];
    }
    return detail::is_zero_vector(v);
}

/// Nonzero diagonal entries d_1 | d_2 | ... of the Smith normal form.
inline std::vector<Integer> smith_invariants(IntMatrix m) {
    std::vector<Integer> d;
    if (m.empty()) return d;
    const std::size_t rows = m.size(), cols = m[0].size();
    for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
        // Pivot: smallest nonzero entry in the remaining block.
        for (;;) {
            std::size_t pi = rows, pj = cols;
            for (std::size_t i = t; i < rows; ++i)
                for (std::size_t j = t; j < cols; ++j)
                    if (m[i][j] != 0 && (pi == rows || abs(m[i][j]) < abs(m[pi][pj]))) {
                        pi = i;
                        pj = j;
                    }
            if (pi == rows) return d;
            std::swap(m[t], m[pi]);
            for (auto& row : m) std::swap(row[t], row[pj]);
            bool clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                Integer f = detail::floor_div(m[i][t], m[t][t]);
                for (std::size_t j = t; j < cols; ++j) m[i][j] -= f * m[t][j];
                if (m[i][t] != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                Integer f = detail::floor_div(m[t][j], m[t][t]);
                for (std::size_t i = t; i < rows; ++i) m[i][j] -= f * m[i][t];
                if (m[t][j] != 0) clean = false;
            }
            if (!clean) continue;
            // Divisibility: fold a violating row into row t and retry.
            bool divides = true;
            for (std::size_t i = t + 1; i < rows && divides; ++i)
                for (std::size_t j = t + 1; j < cols; ++j)
                    if (m[i][j] % m[t][t] != 0) {
                        for (std::size_t k = t; k < cols; ++k) m[t][k] += m[i][k];
                        divides = false;
                        break;
                    }
            if (divides) break;
        }
        d.push_back(abs(m[t][t]));
    }
    return d;
}

/// (L tensor Q) intersected with Z^n, for L spanned by the rows of basis.
inline IntMatrix saturation(const IntMatrix& basis, std::size_t n) {
    if (basis.empty()) return {};
    IntMatrix w = integer_kernel(basis, n);  // vectors orthogonal to L
    if (w.empty()) {
        IntMatrix id(n, IntVector(n, Integer(0)));
        for (std::size_t i = 0; i < n; ++i) id[i][i] = 1;
        return canonical_basis(id);
    }
    return canonical_basis(integer_kernel(w, n));
}

}  // namespace qcurv
