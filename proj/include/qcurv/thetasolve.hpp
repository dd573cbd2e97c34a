#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "qcurv/ball.hpp"
#include "qcurv/qmodule.hpp"

namespace qcurv {

using BallMatrix = std::vector<std::vector<BallValue>>;

namespace detail {

struct ThetaSums {
    BallValue theta;  // Theta(x)
    BallValue euler;  // x Theta'(x)
    long terms = 0;   // summation range [1 - terms, terms]
};

inline void check_theta_arguments(const Rational& x, const Rational& q, const Rational& tol) {
    if (x.is_zero()) throw Error("theta argument must be nonzero");
    if (q <= Rational(1)) throw Error("q_val must be a rational greater than 1");
    if (tol <= Rational(0)) throw Error("tolerance must be positive");
}

/// Sums t_n = q^{-n(n-1)/2} x^n over n in [1 - N, N]; the range is invariant
/// under n -> 1 - n, which fixes the exponent n(n-1)/2.
///
/// Omitted terms: for n >= N+1, |t_{n+1}/t_n| = |x| q^{-n}; for n <= -N,
/// |t_{n-1}/t_n| = q^{n-1}/|x|. When q^{N+1} >= 4 max(|x|, 1/|x|) every ratio
/// is at most 1/4, and for the weighted terms n t_n at most 1/2, so each
/// one-sided tail is at most twice its first term.
inline ThetaSums theta_sums(const Rational& x, const Rational& q, const Rational& tol) {
    check_theta_arguments(x, q, tol);
    const Rational ax = x.abs();
    const Rational spread = Rational(4) * std::max(ax, ax.inverse());
    auto term = [&](long n) { return q.pow(-(n * (n - 1) / 2)) * x.pow(n); };
    Rational value = term(0) + term(1), euler = term(1);
    for (long n = 1;; ++n) {
        const bool ratio_ok = q.pow(n + 1) >= spread;
        const Rational up = term(n + 1).abs(), down = term(-n).abs();
        const Rational tail_value = Rational(2) * (up + down);
        const Rational tail_euler = Rational(2) * (Rational(n + 1) * up + Rational(n) * down);
        if (ratio_ok && tail_value <= tol && tail_euler <= tol) return {BallValue(value, tail_value), BallValue(euler, tail_euler), n};
        const Rational a = term(n + 1), b = term(-n);
        value += a + b;
        euler += Rational(n + 1) * a - Rational(n) * b;
    }
}

}  // namespace detail

/// Theta_q(x) = sum over n of q^{-n(n-1)/2} x^n, with Theta(q x) = q x Theta(x).
inline BallValue theta_eval(const Rational& x0, const Rational& q_val, const Rational& tol) {
    return detail::theta_sums(x0, q_val, tol).theta;
}

/// e_c(x) = Theta(c x) / Theta(x), a solution of y(q x) = c y(x).
/// Throws NearZero when the Theta(x0) ball contains 0.
inline BallValue char_solution_eval(const Rational& c, const Rational& x0, const Rational& q_val, const Rational& tol) {
    if (c.is_zero()) throw Error("character must be nonzero");
    return theta_eval(c * x0, q_val, tol) / theta_eval(x0, q_val, tol);
}

/// l(x) = x Theta'(x) / Theta(x), a solution of y(q x) = y(x) + 1.
inline BallValue log_solution_eval(const Rational& x0, const Rational& q_val, const Rational& tol) {
    detail::ThetaSums s = detail::theta_sums(x0, q_val, tol);
    return s.euler / s.theta;
}

using MatrixQ = Matrix<RatQ>;

/// Formal solution F(x) = sum F_k x^k of F(q x) B_0 = B(x) F(x), B = A^{-1}.
struct SeriesSolution {
    long order = 0;
    std::vector<MatrixQ> coefficients;  // F_0 .. F_order
    std::vector<RatQ> exponents;        // diagonal of B_0
    long residual_order = 0;            // identity holds modulo x^{residual_order + 1}
    std::vector<MatrixQ> system;        // B_0 .. B_order
};

namespace detail {

/// Power series num/den modulo x^{order+1}; den(0) must be nonzero.
template <class F>
std::vector<F> series_expansion(const Poly<F>& num, const Poly<F>& den, std::size_t order) {
    std::vector<F> e(order + 1, F(0));
    const F inv = den.coeff(0).inverse();
    for (std::size_t k = 0; k <= order; ++k) {
        F acc = num.coeff(k);
        for (std::size_t i = 1; i <= k && i < den.size(); ++i)
            if (!den.coeffs()[i].is_zero() && !e[k - i].is_zero()) acc -= den.coeffs()[i] * e[k - i];
        e[k] = acc.is_zero() ? acc : acc * inv;
    }
    return e;
}

template <class T>
bool is_zero_matrix(const Matrix<T>& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!m(i, j).is_zero()) return false;
    return true;
}

inline std::string entry_label(std::size_t i, std::size_t j) {
    return "(" + std::to_string(i + 1) + ", " + std::to_string(j + 1) + ")";
}

inline std::vector<MatrixQ> system_expansion(const QDiffModule& m, std::size_t order) {
    const MatrixQX b = m.system_matrix();
    const std::size_t nu = b.rows();
    std::vector<MatrixQ> out(order + 1, MatrixQ(nu, nu));
    for (std::size_t i = 0; i < nu; ++i)
        for (std::size_t j = 0; j < nu; ++j) {
            const RatFun& f = b(i, j);
            if (f.is_zero()) continue;
            if (f.den().coeff(0).is_zero())
                throw NotRegularSingular("system matrix entry " + entry_label(i, j) + " has a pole at x = 0");
            auto e = series_expansion(f.num(), f.den(), order);
            for (std::size_t k = 0; k <= order; ++k) out[k](i, j) = e[k];
        }
    return out;
}

inline std::vector<RatQ> diagonal_exponents(const MatrixQ& b0) {
    std::vector<RatQ> c;
    for (std::size_t i = 0; i < b0.rows(); ++i)
        for (std::size_t j = 0; j < b0.cols(); ++j) {
            if (i != j && !b0(i, j).is_zero())
                throw NotRegularSingular("constant term of the system matrix is not diagonal at " + entry_label(i, j));
            if (i == j) {
                if (b0(i, i).is_zero()) throw NotRegularSingular("constant term of the system matrix is singular");
                c.push_back(b0(i, i));
            }
        }
    return c;
}

inline void check_resonance(const std::vector<RatQ>& c, long order) {
    for (long k = 1; k <= order; ++k) {
        const RatQ qk = q_power(k);
        for (std::size_t l = 0; l < c.size(); ++l)
            for (std::size_t m = 0; m < c.size(); ++m)
                if (qk * c[m] == c[l]) throw Resonant(static_cast<int>(k), static_cast<int>(l + 1), static_cast<int>(m + 1));
    }
}

}  // namespace detail

/// Requires B = A^{-1} finite at 0 with diagonal invertible B_0 = diag(c)
/// and q^k c_m != c_l for 1 <= k <= N. Throws NotRegularSingular, Resonant.
inline SeriesSolution frobenius_series(const QDiffModule& m, long order) {
    if (order < 0) throw Error("series order must be nonnegative");
    if (m.step() != 1) throw Error("series solutions are computed for sigma_q itself");
    SeriesSolution s;
    s.order = order;
    s.residual_order = order;
    s.system = detail::system_expansion(m, static_cast<std::size_t>(order));
    s.exponents = detail::diagonal_exponents(s.system[0]);
    detail::check_resonance(s.exponents, order);
    const std::size_t nu = m.dim();
    s.coefficients.push_back(MatrixQ::identity(nu));
    for (long k = 1; k <= order; ++k) {
        MatrixQ rhs(nu, nu);
        for (long j = 1; j <= k; ++j)
            if (!detail::is_zero_matrix(s.system[static_cast<std::size_t>(j)]))
                rhs = rhs + s.system[static_cast<std::size_t>(j)] * s.coefficients[static_cast<std::size_t>(k - j)];
        const RatQ qk = q_power(k);
        MatrixQ f(nu, nu);
        for (std::size_t l = 0; l < nu; ++l)
            for (std::size_t c = 0; c < nu; ++c)
                if (!rhs(l, c).is_zero()) f(l, c) = rhs(l, c) / (qk * s.exponents[c] - s.exponents[l]);
        s.coefficients.push_back(std::move(f));
    }
    return s;
}

struct FundamentalSolution {
    BallMatrix value;     // U(x0) = F(x0) diag(e_{c_i}(x0))
    BallMatrix residual;  // U(q x0) - B(x0) U(x0)
    Rational truncation_bound;  // entrywise bound on F - F_N at x0 and q x0
    long order = 0;             // N, the truncation order of F
};

namespace detail {

inline Rational at_q(const RatQ& c, const Rational& q) {
    const Rational d = c.den().evaluate(q);
    if (d.is_zero()) throw BadSpecialization(to_string(c) + " has a pole at q = " + q.str());
    return c.num().evaluate(q) / d;
}

inline Rational max_abs(const Matrix<Rational>& m) {
    Rational r(0);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r = std::max(r, m(i, j).abs());
    return r;
}

/// Numeric series data of the system at q = q_val.
class NumericSeries {
public:
    NumericSeries(const QDiffModule& m, const std::vector<RatQ>& exponents, const Rational& q) : q_(q), nu_(m.dim()) {
        const MatrixQX b = m.system_matrix();
        b_ = Matrix<RatX>(nu_, nu_);
        const Place* place = value_place(q);
        for (std::size_t i = 0; i < nu_; ++i)
            for (std::size_t j = 0; j < nu_; ++j) {
                try {
                    b_(i, j) = to_ratx(reduce_at_place(b(i, j), place));
                } catch (const BadReduction&) {
                    throw BadSpecialization("system matrix entry " + entry_label(i, j) + " has a pole at q = " + q.str());
                }
                if (b_(i, j).den().coeff(0).is_zero())
                    throw BadSpecialization("system matrix at q = " + q.str() + " has a pole at x = 0");
                if (b_(i, j).den().degree() > 0 || b_(i, j).num().degree() > 0) constant_ = false;
            }
        for (const auto& c : exponents) {
            c_.push_back(at_q(c, q));
            if (c_.back().is_zero()) throw BadSpecialization("exponent " + to_string(c) + " vanishes at q = " + q.str());
        }
        common_den_ = PolyQ(Rational(1));
        for (std::size_t i = 0; i < nu_; ++i)
            for (std::size_t j = 0; j < nu_; ++j) {
                const PolyQ& d = b_(i, j).den();
                common_den_ = common_den_ * (d / gcd(common_den_, d));
            }
        f_.push_back(Matrix<Rational>::identity(nu_));
    }

    bool constant() const noexcept { return constant_; }
    const std::vector<Rational>& exponents() const noexcept { return c_; }
    std::size_t dim() const noexcept { return nu_; }

    /// B(x) at a point; throws on a pole.
    Matrix<Rational> system_at(const Rational& x) const {
        Matrix<Rational> out(nu_, nu_);
        for (std::size_t i = 0; i < nu_; ++i)
            for (std::size_t j = 0; j < nu_; ++j) {
                const Rational d = b_(i, j).den().evaluate(x);
                if (d.is_zero()) throw Error("system matrix has a pole at x = " + x.str());
                out(i, j) = b_(i, j).num().evaluate(x) / d;
            }
        return out;
    }

    const Matrix<Rational>& coefficient(std::size_t k) {
        extend(k);
        return f_[k];
    }

    /// Truncated sum F_0 + ... + F_n x^n.
    Matrix<Rational> partial_sum(std::size_t n, const Rational& x) {
        extend(n);
        Matrix<Rational> acc(nu_, nu_);
        Rational xp(1);
        for (std::size_t k = 0; k <= n; ++k) {
            acc = acc + xp * f_[k];
            xp *= x;
        }
        return acc;
    }

    /// Certified entrywise bound on sum_{k > n} F_k x^k for |x| = r, or
    /// nullopt when it cannot be established with at most max_terms exact
    /// coefficients.
    ///
    /// With B = P/d, s(t) = sum_{i>=1} |d_i/d_0| t^i < 1 and
    /// K = |P|(r) / (|d_0| (1 - s(r))), Cauchy's estimate gives
    /// nu max|B_j| <= nu K r^{-j}. For k > M with q^{M+1} c_min >= 2 c_max,
    /// |q^k c_m - c_l| >= c_min q^k / 2, so psi_k = max|F_k| r^k satisfies
    /// psi_k <= tau_k (psi_0 + ... + psi_{k-1}), tau_k = 2 nu K / (c_min q^k).
    /// With T = sum_{k>M} tau_k < 1 the partial sums grow by at most
    /// 1/(1 - T), so sum_{k>M} psi_k <= S_M T / (1 - T).
    std::optional<Rational> tail_bound(std::size_t n, const Rational& r, const Rational& target, std::size_t max_terms) {
        if (constant_) return Rational(0);
        const Rational d0 = common_den_.coeff(0).abs();
        Rational s(0), rp(1);
        for (std::size_t i = 1; i < common_den_.size(); ++i) {
            rp *= r;
            s += common_den_.coeffs()[i].abs() * rp / d0;
        }
        if (s >= Rational(1)) return std::nullopt;
        Rational p_norm(0);
        {
            std::vector<Rational> coeff_max;
            for (std::size_t i = 0; i < nu_; ++i)
                for (std::size_t j = 0; j < nu_; ++j) {
                    PolyQ pij = b_(i, j).num() * (common_den_ / b_(i, j).den());
                    if (coeff_max.size() < pij.size()) coeff_max.resize(pij.size(), Rational(0));
                    for (std::size_t k = 0; k < pij.size(); ++k) coeff_max[k] = std::max(coeff_max[k], pij.coeffs()[k].abs());
                }
            Rational pw(1);
            for (const auto& c : coeff_max) {
                p_norm += c * pw;
                pw *= r;
            }
        }
        const Rational k_const = p_norm / (d0 * (Rational(1) - s));
        Rational c_min = c_.front().abs(), c_max = c_min;
        for (const auto& c : c_) {
            c_min = std::min(c_min, c.abs());
            c_max = std::max(c_max, c.abs());
        }
        const Rational nu(static_cast<long>(nu_));
        for (std::size_t m = std::max<std::size_t>(2 * n, n + 1); m <= max_terms; m *= 2) {
            extend(m);
            const Rational qm1 = q_.pow(static_cast<long>(m + 1));
            if (qm1 * c_min < Rational(2) * c_max) continue;
            const Rational t = Rational(2) * nu * k_const * q_ / (c_min * qm1 * (q_ - Rational(1)));
            if (t >= Rational(1)) continue;
            Rational head(0), s_m(0), rk(1);
            for (std::size_t k = 0; k <= m; ++k) {
                const Rational psi = max_abs(f_[k]) * rk;
                s_m += psi;
                if (k > n) head += psi;
                rk *= r;
            }
            const Rational bound = head + s_m * t / (Rational(1) - t);
            if (s_m * t / (Rational(1) - t) <= target / Rational(2) || m * 2 > max_terms) return bound;
        }
        return std::nullopt;
    }

private:
    void extend(std::size_t k) {
        while (f_.size() <= k) {
            const std::size_t n = f_.size();
            while (b_series_.size() <= n) grow_system_series();
            Matrix<Rational> rhs(nu_, nu_);
            for (std::size_t j = 1; j <= n; ++j)
                if (!is_zero_matrix(b_series_[j])) rhs = rhs + b_series_[j] * f_[n - j];
            const Rational qk = q_.pow(static_cast<long>(n));
            Matrix<Rational> f(nu_, nu_);
            for (std::size_t l = 0; l < nu_; ++l)
                for (std::size_t c = 0; c < nu_; ++c) {
                    if (rhs(l, c).is_zero()) continue;
                    const Rational den = qk * c_[c] - c_[l];
                    if (den.is_zero())
                        throw Resonant(static_cast<int>(n), static_cast<int>(l + 1), static_cast<int>(c + 1));
                    f(l, c) = rhs(l, c) / den;
                }
            f_.push_back(std::move(f));
        }
    }

    void grow_system_series() {
        const std::size_t order = std::max<std::size_t>(2 * b_series_.size(), 16);
        std::vector<Matrix<Rational>> out(order + 1, Matrix<Rational>(nu_, nu_));
        for (std::size_t i = 0; i < nu_; ++i)
            for (std::size_t j = 0; j < nu_; ++j) {
                if (b_(i, j).is_zero()) continue;
                auto e = series_expansion(b_(i, j).num(), b_(i, j).den(), order);
                for (std::size_t k = 0; k <= order; ++k) out[k](i, j) = e[k];
            }
        b_series_ = std::move(out);
    }

    Rational q_;
    std::size_t nu_;
    bool constant_ = true;
    Matrix<RatX> b_;
    PolyQ common_den_;
    std::vector<Rational> c_;
    std::vector<Matrix<Rational>> b_series_;
    std::vector<Matrix<Rational>> f_;
};

}  // namespace detail

/// Evaluates U(x0) = F(x0) diag(e_{c_i}(x0)) with certified balls, and the
/// residual U(q x0) - B(x0) U(x0). Throws TruncationDominates when the bound
/// on the discarded series terms exceeds tol or cannot be established.
inline FundamentalSolution fundamental_eval(const QDiffModule& m, const Rational& x0, const Rational& q_val, long order,
                                            const Rational& tol) {
    detail::check_theta_arguments(x0, q_val, tol);
    if (order < 0) throw Error("series order must be nonnegative");
    if (m.step() != 1) throw Error("series solutions are computed for sigma_q itself");
    const auto b0 = detail::system_expansion(m, 0);
    const auto exponents = detail::diagonal_exponents(b0[0]);
    detail::check_resonance(exponents, order);
    detail::NumericSeries series(m, exponents, q_val);
    const std::size_t nu = m.dim();
    const std::size_t n = static_cast<std::size_t>(order);
    constexpr std::size_t kMaxTerms = 512;

    FundamentalSolution out;
    auto evaluate_at = [&](const Rational& x) {
        auto tail = series.tail_bound(n, x.abs(), tol, std::max<std::size_t>(kMaxTerms, 4 * n));
        if (!tail) throw TruncationDominates("cannot bound the series tail at x = " + x.str());
        if (*tail > tol)
            throw TruncationDominates("series tail bound " + BallValue(*tail).radius().str() + " at x = " + x.str() +
                                      " exceeds the tolerance");
        out.truncation_bound = std::max(out.truncation_bound, *tail);
        const Matrix<Rational> f = series.partial_sum(n, x);
        std::vector<BallValue> e;
        for (const auto& c : series.exponents())
            e.push_back(c == Rational(1) ? BallValue(Rational(1)) : char_solution_eval(c, x, q_val, tol));
        BallMatrix u(nu, std::vector<BallValue>(nu));
        for (std::size_t i = 0; i < nu; ++i)
            for (std::size_t j = 0; j < nu; ++j) u[i][j] = BallValue(f(i, j), *tail) * e[j];
        return u;
    };
    out.value = evaluate_at(x0);
    const BallMatrix shifted = evaluate_at(q_val * x0);
    const Matrix<Rational> b = series.system_at(x0);
    out.residual.assign(nu, std::vector<BallValue>(nu));
    for (std::size_t i = 0; i < nu; ++i)
        for (std::size_t j = 0; j < nu; ++j) {
            BallValue acc = shifted[i][j];
            for (std::size_t k = 0; k < nu; ++k)
                if (!b(i, k).is_zero()) acc = acc - BallValue(b(i, k)) * out.value[k][j];
            out.residual[i][j] = acc;
        }
    out.order = order;
    return out;
}

}  // namespace qcurv
