#pragma once

#include <string>
#include <vector>

#include "qcurv/curvature.hpp"

namespace qcurv {

using MatrixX = Matrix<RatX>;

/// Differential module over Q(x): nabla(d/dx) e = e G.
class DiffModule {
public:
    explicit DiffModule(MatrixX g) : g_(std::move(g)) {
        if (!g_.is_square() || g_.rows() == 0) throw DimensionMismatch("connection matrix must be square and nonempty");
    }
    std::size_t dim() const noexcept { return g_.rows(); }
    const MatrixX& matrix() const noexcept { return g_; }
    friend bool operator==(const DiffModule& a, const DiffModule& b) { return a.g_ == b.g_; }

private:
    MatrixX g_;
};

/// Parses rows of expressions in x; q is rejected.
inline DiffModule parse_diff_module(const std::vector<std::vector<std::string>>& rows) {
    MatrixQX m = parse_matrix(rows);
    MatrixX g(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (!is_q_free(m(i, j))) throw Error("connection matrix entry depends on q: " + rows[i][j]);
            g(i, j) = drop_q(m(i, j));
        }
    return DiffModule(std::move(g));
}

inline MatrixQX lift(const MatrixX& m) {
    return m.map([](const RatX& f) { return lift(f); });
}

/// Base change e' = e P: G' = P^{-1} G P + P^{-1} dP/dx.
inline DiffModule diff_gauge(const DiffModule& d, const MatrixX& p) {
    if (!p.is_square() || p.rows() != d.dim()) throw DimensionMismatch("gauge matrix has the wrong shape");
    const RatX x = RatX::variable();
    MatrixX dp = p.map([&x](const RatX& f) { return f.euler_derivative() / x; });
    MatrixX p_inv = p.inverse();
    return DiffModule(p_inv * d.matrix() * p + p_inv * dp);
}

/// The q-deformation A = I + (q - 1) x G(x).
inline QDiffModule deform(const DiffModule& d) {
    const RatFun factor = RatFun(PolyX(q_var() - RatQ(1))) * x_var();
    MatrixQX a = MatrixQX::identity(d.dim()) + factor * lift(d.matrix());
    return QDiffModule(std::move(a));
}

/// G = (A - I) / ((q - 1) x) at q = 1. Throws NotSpecializable.
inline DiffModule specialize_q1(const QDiffModule& m) {
    if (m.step() != 1) throw NotSpecializable("iterated modules have no specialization at q = 1");
    const Place* one = value_place(Rational(1));
    const RatFun divisor = RatFun(PolyX(q_var() - RatQ(1))) * x_var();
    const MatrixQX& a = m.sigma_matrix();
    MatrixX g(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            RatFun e = (a(i, j) - RatFun(i == j ? 1 : 0)) / divisor;
            try {
                g(i, j) = to_ratx(reduce_at_place(e, one));
            } catch (const BadReduction&) {
                throw NotSpecializable("entry (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) + ") = " +
                                       to_string(a(i, j)) + " is not congruent to the identity modulo q - 1");
            }
        }
    return DiffModule(std::move(g));
}

/// A module over Q(x) obtained by fixing q to a nonzero rational.
struct SpecializedModule {
    MatrixX matrix;
    Rational q_value;
    bool root_of_unity = false;

    std::size_t dim() const noexcept { return matrix.rows(); }
    friend bool operator==(const SpecializedModule& a, const SpecializedModule& b) {
        return a.q_value == b.q_value && a.matrix == b.matrix;
    }
};

/// Throws BadSpecialization when an entry has a pole at q = a or the
/// determinant vanishes there.
inline SpecializedModule specialize_q_value(const QDiffModule& m, const Rational& a) {
    if (a.is_zero()) throw BadSpecialization("q = 0 is not an admissible value");
    const Place* place = value_place(a);
    const MatrixQX& s = m.sigma_matrix();
    SpecializedModule out{MatrixX(s.rows(), s.cols()), a, a == Rational(1) || a == Rational(-1)};
    for (std::size_t i = 0; i < s.rows(); ++i)
        for (std::size_t j = 0; j < s.cols(); ++j) {
            try {
                out.matrix(i, j) = to_ratx(reduce_at_place(s(i, j), place));
            } catch (const BadReduction& e) {
                throw BadSpecialization("entry (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) +
                                        ") has a pole at q = " + a.str() + ": denominator " + e.witness());
            }
        }
    if (out.matrix.determinant().is_zero())
        throw BadSpecialization("determinant " + to_string(m.determinant()) + " vanishes at q = " + a.str());
    return out;
}

inline SpecializedModule construct(Construction kind, const std::vector<SpecializedModule>& operands) {
    if (operands.empty()) throw DimensionMismatch("construction needs at least one module");
    for (const auto& o : operands)
        if (o.q_value != operands[0].q_value) throw DimensionMismatch("modules specialized at different values");
    SpecializedModule acc = operands[0];
    switch (kind) {
        case Construction::dual:
            if (operands.size() != 1) throw DimensionMismatch("dual takes one module");
            acc.matrix = acc.matrix.inverse().transpose();
            return acc;
        case Construction::tensor:
            for (std::size_t i = 1; i < operands.size(); ++i) acc.matrix = kronecker(acc.matrix, operands[i].matrix);
            return acc;
        case Construction::direct_sum:
            for (std::size_t i = 1; i < operands.size(); ++i)
                acc.matrix = block_diagonal(acc.matrix, operands[i].matrix);
            return acc;
    }
    throw Error("unknown construction");
}

/// Ordered product over i = 0..n-1 of I + (zeta - 1) zeta^i x G(zeta^i x),
/// formed factor by factor in Q(zeta_n)(x). Throws BadPlace.
inline CurvatureReport diff_curvature(const DiffModule& d, long n) {
    PlaceStatus status = good_place(deform(d), n);
    if (!status.good) throw BadPlace("place n=" + std::to_string(n) + " is bad: " + status.witness);
    const Place* place = status.place;
    const CycNum zeta = CycNum::generator(place);
    const MatrixCyc g = d.matrix().map([](const RatX& f) {
        auto up = [](const Rational& r) { return CycNum(r); };
        return CycRatFun::from_normalized(f.num().map(up), f.den().map(up));
    });
    const detail::CommonDenominator gc = detail::CommonDenominator::from(g);
    const std::size_t dim = d.dim();
    detail::CommonDenominator acc{dim, dim, std::vector<CycPoly>(dim * dim), CycPoly(CycNum(1))};
    for (std::size_t i = 0; i < dim; ++i) acc.num[i * dim + i] = CycPoly(CycNum(1));
    CycNum zeta_i(place, PolyQ(Rational(1)));
    for (long i = 0; i < n; ++i) {
        // I + s G(zeta^i x) = (den I + s num) / den with s = (zeta - 1) zeta^i x
        detail::CommonDenominator factor = gc.scale_variable(zeta_i);
        const CycPoly s = CycPoly{CycNum(0), (zeta - CycNum(1)) * zeta_i};
        for (std::size_t k = 0; k < dim * dim; ++k) factor.num[k] = s * factor.num[k];
        for (std::size_t k = 0; k < dim; ++k) factor.num[k * dim + k] += factor.den;
        acc = acc * factor;
        zeta_i *= zeta;
    }
    CurvatureReport r;
    r.place = place;
    r.matrix = acc.to_matrix();
    r.is_identity = r.matrix.is_identity();
    return r;
}

inline Verdict diff_triviality_scan(const DiffModule& d, const ScanOptions& opt) {
    const QDiffModule deformed = deform(d);
    auto places = evaluate_places(opt, [&](long n) {
        PlaceStatus status = good_place(deformed, n);
        return detail::outcome_of(n, status, [&] { return diff_curvature(d, n); });
    });
    return aggregate(opt, std::move(places));
}

inline Verdict diff_triviality_scan(const DiffModule& d, long n_min, long n_max, long threshold = 3) {
    ScanOptions opt;
    opt.n_min = n_min;
    opt.n_max = n_max;
    opt.threshold = threshold;
    return diff_triviality_scan(d, opt);
}

}  // namespace qcurv
