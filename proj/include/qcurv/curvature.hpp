#pragma once

#include <algorithm>
#include <atomic>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "qcurv/qmodule.hpp"

namespace qcurv {

using MatrixCyc = Matrix<CycRatFun>;

inline MatrixCyc reduce_at_place(const MatrixQX& m, const Place* place) {
    return m.map([place](const RatFun& f) { return reduce_at_place(f, place); });
}

inline MatrixCyc sigma_zeta(const MatrixCyc& m, const CycNum& zeta_power) {
    return m.map([&](const CycRatFun& f) { return sigma_zeta(f, zeta_power); });
}

inline MatrixCyc euler_derivative(const MatrixCyc& m) {
    return m.map([](const CycRatFun& f) { return f.euler_derivative(); });
}

namespace detail {

/// Matrix num / den over a single polynomial denominator. Products only
/// multiply polynomials; cancel() removes the common factor once per step.
struct CommonDenominator {
    std::size_t rows = 0, cols = 0;
    std::vector<CycPoly> num;
    CycPoly den;

    static CommonDenominator from(const MatrixCyc& m) {
        CommonDenominator c{m.rows(), m.cols(), {}, CycPoly(CycNum(1))};
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) {
                const CycPoly& d = m(i, j).den();
                if (d.degree() > 0) c.den = c.den * (d / gcd(c.den, d));
            }
        c.num.reserve(m.rows() * m.cols());
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) c.num.push_back(m(i, j).num() * (c.den / m(i, j).den()));
        return c;
    }

    MatrixCyc to_matrix() const {
        MatrixCyc m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = CycRatFun(num[i * cols + j], den);
        return m;
    }

    CommonDenominator scale_variable(const CycNum& g) const {
        CommonDenominator c{rows, cols, {}, den.scale_variable(g)};
        c.num.reserve(num.size());
        for (const auto& e : num) c.num.push_back(e.scale_variable(g));
        return c;
    }

    friend CommonDenominator operator*(const CommonDenominator& a, const CommonDenominator& b) {
        CommonDenominator c{a.rows, b.cols, std::vector<CycPoly>(a.rows * b.cols), a.den * b.den};
        for (std::size_t i = 0; i < a.rows; ++i)
            for (std::size_t j = 0; j < b.cols; ++j) {
                CycPoly& e = c.num[i * b.cols + j];
                for (std::size_t k = 0; k < a.cols; ++k) {
                    const CycPoly& l = a.num[i * a.cols + k];
                    const CycPoly& r = b.num[k * b.cols + j];
                    if (!l.is_zero() && !r.is_zero()) e += l * r;
                }
            }
        c.cancel();
        return c;
    }

    void cancel() {
        if (den.degree() <= 0) return;
        CycPoly g = den;
        for (const auto& e : num) {
            if (e.is_zero()) continue;
            g = gcd(g, e);
            if (g.degree() <= 0) return;
        }
        den = den / g;
        for (auto& e : num)
            if (!e.is_zero()) e = e / g;
    }
};

}  // namespace detail

/// Ordered product M(x) M(g x) M(g^2 x) ... M(g^{k-1} x) over a residue field,
/// by binary splitting: P_{a+b}(x) = P_a(x) P_b(g^a x).
inline MatrixCyc twisted_power(const MatrixCyc& m, const CycNum& g, long k) {
    if (k < 1) throw Error("twisted_power: k must be positive");
    int top = 63;
    while (!((k >> top) & 1L)) --top;
    const detail::CommonDenominator base = detail::CommonDenominator::from(m);
    detail::CommonDenominator acc = base;
    long len = 1;
    for (int bit = top - 1; bit >= 0; --bit) {
        acc = acc * acc.scale_variable(g.pow(len));
        len *= 2;
        if ((k >> bit) & 1L) {
            acc = acc * base.scale_variable(g.pow(len));
            len += 1;
        }
    }
    return acc.to_matrix();
}

struct PlaceStatus {
    const Place* place = nullptr;
    bool good = false;
    std::string witness;  // vanishing denominator or determinant when bad
};

struct CurvatureReport {
    const Place* place = nullptr;
    MatrixCyc matrix;
    bool is_identity = false;
};

/// Good iff every entry of A reduces at Phi_n and det A reduces to a nonzero value.
inline PlaceStatus good_place(const QDiffModule& m, long n) {
    const Place* place = cyclotomic_place(n);
    PlaceStatus status{place, true, {}};
    const MatrixQX& a = m.sigma_matrix();
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            try {
                (void)reduce_at_place(a(i, j), place);
            } catch (const BadReduction& e) {
                status.good = false;
                status.witness = e.witness();
                return status;
            }
        }
    try {
        if (reduce_at_place(m.determinant(), place).is_zero()) {
            status.good = false;
            status.witness = "det = " + to_string(m.determinant());
        }
    } catch (const BadReduction& e) {
        status.good = false;
        status.witness = e.witness();
    }
    return status;
}

namespace detail {

inline long order_of_step(long n, long step) { return n / std::gcd(n, step); }

inline CurvatureReport curvature_of_reduced(const MatrixCyc& reduced, const Place* place, long step) {
    const long kappa = order_of_step(place->n, step);
    CycNum g = CycNum::generator(place).pow(step);
    CurvatureReport r;
    r.place = place;
    r.matrix = twisted_power(reduced, g, kappa);
    r.is_identity = r.matrix.is_identity();
    return r;
}

}  // namespace detail

/// Matrix of Sigma^kappa reduced mod Phi_n: red(A)(x) red(A)(z x) ... red(A)(z^{kappa-1} x)
/// with z the image of q^step. Throws BadPlace at bad places.
inline CurvatureReport curvature_at(const QDiffModule& m, long n) {
    PlaceStatus status = good_place(m, n);
    if (!status.good) throw BadPlace("bad place n=" + std::to_string(n) + ": " + status.witness);
    return detail::curvature_of_reduced(reduce_at_place(m.sigma_matrix(), status.place), status.place, m.step());
}

inline CurvatureReport prolongation_curvature(const QDiffModule& m, long n) { return curvature_at(prolong(m), n); }

// ---------------------------------------------------------------------------
// Scans

enum class Conclusion { consistent_with_trivial, nontrivial_heuristic };

inline const char* to_string(Conclusion c) {
    return c == Conclusion::consistent_with_trivial ? "consistent_with_trivial" : "nontrivial_heuristic";
}

struct PlaceOutcome {
    long n = 0;
    bool good = false;
    bool identity = false;
    std::string witness;  // bad places only
    std::string summary;  // one-line description of the curvature
};

struct Verdict {
    long n_min = 0, n_max = 0;
    long threshold = 3;
    long good_places = 0;
    long identity_places = 0;
    std::vector<PlaceOutcome> bad_places;
    std::vector<long> failure_places;
    Conclusion conclusion = Conclusion::consistent_with_trivial;
    std::vector<PlaceOutcome> places;  // ascending n
};

struct ScanOptions {
    long n_min = 1;
    long n_max = 50;
    long threshold = 3;
    bool parallel = false;
    unsigned workers = 0;  // 0: hardware concurrency (at least 2)
};

/// Evaluates fn on every n in the range, possibly concurrently; the result is
/// ordered by ascending n either way.
inline std::vector<PlaceOutcome> evaluate_places(const ScanOptions& opt, const std::function<PlaceOutcome(long)>& fn) {
    if (opt.n_min < 1 || opt.n_min > opt.n_max) throw Error("invalid place range");
    const long count = opt.n_max - opt.n_min + 1;
    std::vector<PlaceOutcome> out(static_cast<std::size_t>(count));
    if (!opt.parallel) {
        for (long i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = fn(opt.n_min + i);
        return out;
    }
    unsigned workers = opt.workers ? opt.workers : std::max(2u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<long>(workers, count));
    std::atomic<long> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (long i = next++; i < count; i = next++) out[static_cast<std::size_t>(i)] = fn(opt.n_min + i);
            } catch (...) {
                errors[w] = std::current_exception();
                next = count;
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

inline Verdict aggregate(const ScanOptions& opt, std::vector<PlaceOutcome> places) {
    Verdict v;
    v.n_min = opt.n_min;
    v.n_max = opt.n_max;
    v.threshold = opt.threshold;
    for (const auto& p : places) {
        if (!p.good) {
            v.bad_places.push_back(p);
            continue;
        }
        ++v.good_places;
        if (p.identity)
            ++v.identity_places;
        else
            v.failure_places.push_back(p.n);
    }
    if (v.good_places == 0)
        throw NoGoodPlaces("no good place in range " + std::to_string(opt.n_min) + ".." + std::to_string(opt.n_max));
    v.conclusion = static_cast<long>(v.failure_places.size()) >= opt.threshold ? Conclusion::nontrivial_heuristic
                                                                                : Conclusion::consistent_with_trivial;
    v.places = std::move(places);
    return v;
}

namespace detail {

inline std::string summarize(const MatrixCyc& m) {
    std::string s = "[";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        s += i ? ", [" : "[";
        for (std::size_t j = 0; j < m.cols(); ++j) s += (j ? ", " : "") + to_string(m(i, j));
        s += "]";
    }
    return s + "]";
}

inline PlaceOutcome outcome_of(long n, const PlaceStatus& status, const std::function<CurvatureReport()>& compute) {
    PlaceOutcome o;
    o.n = n;
    o.good = status.good;
    if (!status.good) {
        o.witness = status.witness;
        return o;
    }
    CurvatureReport r = compute();
    o.identity = r.is_identity;
    o.summary = r.is_identity ? "identity" : summarize(r.matrix);
    return o;
}

}  // namespace detail

/// Curvature scan over cyclotomic places; see Verdict for the semantics of
/// the conclusion. Throws NoGoodPlaces.
inline Verdict triviality_scan(const QDiffModule& m, const ScanOptions& opt) {
    auto places = evaluate_places(opt, [&m](long n) {
        PlaceStatus status = good_place(m, n);
        return detail::outcome_of(n, status, [&] {
            return detail::curvature_of_reduced(reduce_at_place(m.sigma_matrix(), status.place), status.place,
                                                m.step());
        });
    });
    return aggregate(opt, std::move(places));
}

inline Verdict triviality_scan(const QDiffModule& m, long n_min, long n_max, long threshold = 3) {
    ScanOptions opt;
    opt.n_min = n_min;
    opt.n_max = n_max;
    opt.threshold = threshold;
    return triviality_scan(m, opt);
}

}  // namespace qcurv
