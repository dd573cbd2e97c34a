#pragma once

#include <string>
#include <vector>

#include "qcurv/matrix.hpp"
#include "qcurv/parse.hpp"

namespace qcurv {

using MatrixQX = Matrix<RatFun>;

/// Square or rectangular matrix from rows of expression strings.
inline MatrixQX parse_matrix(const std::vector<std::vector<std::string>>& rows) {
    if (rows.empty()) throw DimensionMismatch("empty matrix");
    MatrixQX m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols()) throw DimensionMismatch("ragged matrix");
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = parse_ratfun(rows[i][j]);
    }
    return m;
}

inline MatrixQX sigma_q(const MatrixQX& m, long t = 1) {
    return m.map([t](const RatFun& f) { return sigma_q(f, t); });
}

inline MatrixQX dlog_derive(const MatrixQX& m) {
    return m.map([](const RatFun& f) { return dlog_derive(f); });
}

/// A q-difference module over Q(q)(x) in a fixed basis e.
///
/// Stores the matrix A of the semilinear operator, Sigma(e) = e A. Solutions
/// of the associated system satisfy Y(q x) = A(x)^{-1} Y(x). Iterated
/// modules keep the same representation with operator sigma_{q^step}.
class QDiffModule {
public:
    /// Throws SingularMatrix when det A = 0.
    explicit QDiffModule(MatrixQX sigma_matrix, long step = 1) : a_(std::move(sigma_matrix)), step_(step) {
        if (!a_.is_square() || a_.rows() == 0) throw DimensionMismatch("module matrix must be square and nonempty");
        if (step_ < 1) throw Error("module step must be positive");
        det_ = a_.determinant();
        if (det_.is_zero()) throw SingularMatrix();
    }

    std::size_t dim() const noexcept { return a_.rows(); }
    const MatrixQX& sigma_matrix() const noexcept { return a_; }
    // Y(q x) = system_matrix() Y(x).
    MatrixQX system_matrix() const { return a_.inverse(); }
    const RatFun& determinant() const noexcept { return det_; }
    // The operator substitutes x -> q^step x.
    long step() const noexcept { return step_; }

    friend bool operator==(const QDiffModule& a, const QDiffModule& b) {
        return a.step_ == b.step_ && a.a_ == b.a_;
    }

private:
    MatrixQX a_;
    long step_;
    RatFun det_;
};

inline QDiffModule module_new(MatrixQX a) { return QDiffModule(std::move(a)); }

enum class Construction { dual, tensor, direct_sum };

namespace detail {
inline void check_same_step(const QDiffModule& a, const QDiffModule& b) {
    if (a.step() != b.step()) throw DimensionMismatch("modules over different iterates of sigma_q");
}
}  // namespace detail

inline QDiffModule dual(const QDiffModule& m) {
    return QDiffModule(m.sigma_matrix().inverse().transpose(), m.step());
}

inline QDiffModule tensor(const QDiffModule& a, const QDiffModule& b) {
    detail::check_same_step(a, b);
    return QDiffModule(kronecker(a.sigma_matrix(), b.sigma_matrix()), a.step());
}

inline QDiffModule direct_sum(const QDiffModule& a, const QDiffModule& b) {
    detail::check_same_step(a, b);
    return QDiffModule(block_diagonal(a.sigma_matrix(), b.sigma_matrix()), a.step());
}

inline QDiffModule construct(Construction kind, const std::vector<QDiffModule>& operands) {
    switch (kind) {
        case Construction::dual:
            if (operands.size() != 1) throw DimensionMismatch("dual takes one module");
            return dual(operands[0]);
        case Construction::tensor:
        case Construction::direct_sum: {
            if (operands.empty()) throw DimensionMismatch("construction needs at least one module");
            QDiffModule acc = operands[0];
            for (std::size_t i = 1; i < operands.size(); ++i)
                acc = kind == Construction::tensor ? tensor(acc, operands[i]) : direct_sum(acc, operands[i]);
            return acc;
        }
    }
    throw Error("unknown construction");
}

/// Prolongation by the derivation x d/dx: basis (e, de) with matrix
/// [[A, dA], [0, A]].
inline QDiffModule prolong(const QDiffModule& m) {
    const MatrixQX& a = m.sigma_matrix();
    MatrixQX zero(a.rows(), a.cols());
    return QDiffModule(block_2x2(a, dlog_derive(a), zero, a), m.step());
}

/// Ordered product A(x) A(q^s x) ... A(q^{s(t-1)} x), s the module step.
inline MatrixQX ordered_product(const MatrixQX& a, long step, long t) {
    MatrixQX acc = a;
    for (long i = 1; i < t; ++i) acc = acc * sigma_q(a, step * i);
    return acc;
}

/// Module of Sigma^t; its operator substitutes x -> q^{step t} x.
inline QDiffModule iterate(const QDiffModule& m, long t) {
    if (t < 1) throw Error("iterate: t must be positive");
    if (t == 1) return m;
    return QDiffModule(ordered_product(m.sigma_matrix(), m.step(), t), m.step() * t);
}

/// Base change e' = e P: matrix P^{-1} A sigma(P).
inline QDiffModule gauge(const QDiffModule& m, const MatrixQX& p) {
    if (!p.is_square() || p.rows() != m.dim()) throw DimensionMismatch("gauge matrix has the wrong shape");
    MatrixQX p_inv = p.inverse();
    return QDiffModule(p_inv * m.sigma_matrix() * sigma_q(p, m.step()), m.step());
}

}  // namespace qcurv
