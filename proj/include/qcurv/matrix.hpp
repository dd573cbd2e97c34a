#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "qcurv/errors.hpp"

namespace qcurv {

/// Dense row-major matrix over a field T.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, T(0)) {}
    Matrix(std::initializer_list<std::initializer_list<T>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        for (const auto& r : rows) {
            if (r.size() != cols_) throw DimensionMismatch("ragged matrix literal");
            a_.insert(a_.end(), r.begin(), r.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }
    static Matrix diagonal(const std::vector<T>& d) {
        Matrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    bool is_identity() const {
        if (!is_square()) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (i == j ? !(*this)(i, j).is_one() : !(*this)(i, j).is_zero()) return false;
        return true;
    }
    bool is_diagonal() const {
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (i != j && !(*this)(i, j).is_zero()) return false;
        return true;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) {
        check_same(a, b);
        for (std::size_t i = 0; i < a.a_.size(); ++i) a.a_[i] += b.a_[i];
        return a;
    }
    friend Matrix operator-(Matrix a, const Matrix& b) {
        check_same(a, b);
        for (std::size_t i = 0; i < a.a_.size(); ++i) a.a_[i] -= b.a_[i];
        return a;
    }
    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product shape mismatch");
        Matrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& aik = a(i, k);
                if (aik.is_zero()) continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    if (!b(k, j).is_zero()) r(i, j) += aik * b(k, j);
            }
        return r;
    }
    friend Matrix operator*(const T& s, Matrix a) {
        for (auto& v : a.a_) v = s * v;
        return a;
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    template <class Fn>
    auto map(Fn&& fn) const {
        using U = std::decay_t<decltype(fn(std::declval<const T&>()))>;
        Matrix<U> r(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(i, j) = fn((*this)(i, j));
        return r;
    }

    // Gaussian elimination with first-nonzero pivoting (exact fields).
    T determinant() const {
        if (!is_square()) throw DimensionMismatch("determinant of a non-square matrix");
        Matrix m(*this);
        T det(1);
        for (std::size_t c = 0; c < cols_; ++c) {
            std::size_t p = pivot_row(m, c, c);
            if (p == rows_) return T(0);
            if (p != c) {
                m.swap_rows(p, c);
                det = -det;
            }
            det *= m(c, c);
            T inv = m(c, c).inverse();
            for (std::size_t r = c + 1; r < rows_; ++r) {
                if (m(r, c).is_zero()) continue;
                T f = m(r, c) * inv;
                for (std::size_t j = c; j < cols_; ++j)
                    if (!m(c, j).is_zero()) m(r, j) -= f * m(c, j);
            }
        }
        return det;
    }

    // Gauss-Jordan; throws SingularMatrix.
    Matrix inverse() const {
        if (!is_square()) throw DimensionMismatch("inverse of a non-square matrix");
        const std::size_t n = rows_;
        Matrix m(*this);
        Matrix inv = identity(n);
        for (std::size_t c = 0; c < n; ++c) {
            std::size_t p = pivot_row(m, c, c);
            if (p == n) throw SingularMatrix();
            if (p != c) {
                m.swap_rows(p, c);
                inv.swap_rows(p, c);
            }
            T s = m(c, c).inverse();
            for (std::size_t j = 0; j < n; ++j) {
                if (!m(c, j).is_zero()) m(c, j) = m(c, j) * s;
                if (!inv(c, j).is_zero()) inv(c, j) = inv(c, j) * s;
            }
            for (std::size_t r = 0; r < n; ++r) {
                if (r == c || m(r, c).is_zero()) continue;
                T f = m(r, c);
                for (std::size_t j = 0; j < n; ++j) {
                    if (!m(c, j).is_zero()) m(r, j) -= f * m(c, j);
                    if (!inv(c, j).is_zero()) inv(r, j) -= f * inv(c, j);
                }
            }
        }
        return inv;
    }

private:
    static void check_same(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionMismatch("matrix shape mismatch");
    }
    static std::size_t pivot_row(const Matrix& m, std::size_t col, std::size_t from) {
        for (std::size_t r = from; r < m.rows_; ++r)
            if (!m(r, col).is_zero()) return r;
        return m.rows_;
    }
    void swap_rows(std::size_t a, std::size_t b) {
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }

    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> a_;
};

template <class T>
Matrix<T> kronecker(const Matrix<T>& a, const Matrix<T>& b) {
    Matrix<T> r(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l) r(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return r;
}

template <class T>
Matrix<T> block_diagonal(const Matrix<T>& a, const Matrix<T>& b) {
    Matrix<T> r(a.rows() + b.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) r(a.rows() + i, a.cols() + j) = b(i, j);
    return r;
}

// [[a, b], [c, d]]
template <class T>
Matrix<T> block_2x2(const Matrix<T>& a, const Matrix<T>& b, const Matrix<T>& c, const Matrix<T>& d) {
    const std::size_t n = a.rows(), m = a.cols();
    Matrix<T> r(n + c.rows(), m + b.cols());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            r(i, j) = a(i, j);
        }
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) r(i, m + j) = b(i, j);
    for (std::size_t i = 0; i < c.rows(); ++i)
        for (std::size_t j = 0; j < c.cols(); ++j) r(n + i, j) = c(i, j);
    for (std::size_t i = 0; i < d.rows(); ++i)
        for (std::size_t j = 0; j < d.cols(); ++j) r(n + i, m + j) = d(i, j);
    return r;
}

}  // namespace qcurv
