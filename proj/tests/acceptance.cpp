// Acceptance run: one PASS/FAIL line per criterion, each with its runtime
// budget. Exit status is nonzero when any criterion fails. Criterion numbers
// given as arguments restrict the run to those criteria.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "qcurv/qcurv.hpp"
#include "random_objects.hpp"

using namespace qcurv;
namespace fs = std::filesystem;

namespace {

/// Records the first failed check of a criterion.
class Check {
public:
    void expect(bool cond, const std::string& what) {
        ++count_;
        if (!cond && first_failure_.empty()) first_failure_ = what;
    }
    bool ok() const { return first_failure_.empty(); }
    const std::string& failure() const { return first_failure_; }
    long count() const { return count_; }

private:
    std::string first_failure_;
    long count_ = 0;
};

MatrixQX M(const std::vector<std::vector<std::string>>& rows) { return parse_matrix(rows); }

std::string str(long v) { return std::to_string(v); }

// 1

void positive_side(Check& c) {
    gen::Gen g(101);
    for (int trial = 0; trial < 100; ++trial) {
        const auto rank = static_cast<std::size_t>(g.integer(1, 3));
        MatrixQX p = g.invertible_matrix(rank, 2, 0, 5);
        QDiffModule m = gauge(module_new(MatrixQX::identity(rank)), p);
        Verdict v = triviality_scan(m, 1, 20);
        c.expect(v.conclusion == Conclusion::consistent_with_trivial && v.failure_places.empty(),
                 "gauge transform " + str(trial) + " has curvature failures");
    }
}

// 2

void negative_side(Check& c) {
    Verdict two = triviality_scan(module_new(M({{"2"}})), 1, 50);
    c.expect(two.conclusion == Conclusion::nontrivial_heuristic, "A = [2] not flagged");
    c.expect(two.good_places == 50 && static_cast<long>(two.failure_places.size()) == two.good_places,
             "A = [2] passes at some good place");
    for (long k = -3; k <= 3; ++k) {
        Verdict v = triviality_scan(module_new(M({{k >= 0 ? "q^" + str(k) : "1/q^" + str(-k)}})), 1, 50);
        c.expect(v.good_places == 50 && v.identity_places == 50, "A = [q^" + str(k) + "] fails somewhere");
    }
}

// 3

void theta_curvature(Check& c) {
    QDiffModule theta = module_new(M({{"q*x"}}));
    for (long n = 1; n <= 20; ++n) {
        const Place* v = cyclotomic_place(n);
        MatrixQX ordered = MatrixQX::identity(1);
        for (long i = 0; i < n; ++i) ordered = ordered * M({{"q^" + str(i + 1) + "*x"}});
        MatrixCyc oracle = reduce_at_place(ordered, v);
        MatrixCyc got = curvature_at(theta, n).matrix;
        CycRatFun closed = reduce_at_place(parse_ratfun("q^" + str(n * (n + 1) / 2) + "*x^" + str(n)), v);
        c.expect(got == oracle && got(0, 0) == closed, "theta curvature mismatch at n = " + str(n));
    }
    CycRatFun x3 = reduce_at_place(parse_ratfun("x^3"), cyclotomic_place(3));
    c.expect(curvature_at(theta, 3).matrix(0, 0) == x3, "theta curvature at n = 3 is not x^3");
}

// 4

bool all_good(const std::vector<const QDiffModule*>& ms, long n) {
    for (const auto* m : ms)
        if (!good_place(*m, n).good) return false;
    return true;
}

void structural_invariants(Check& c) {
    gen::Gen g(404);
    auto random_module = [&g] {
        return module_new(g.invertible_matrix(static_cast<std::size_t>(g.integer(1, 2)), 1, 1, 3));
    };
    for (int trial = 0; trial < 50; ++trial) {
        QDiffModule a = random_module(), b = random_module();
        MatrixQX p = g.invertible_matrix(a.dim(), 1, 1, 3);
        QDiffModule ab = tensor(a, b), da = dual(a), ga = gauge(a, p), pa = prolong(a);
        const std::string tag = "instance " + str(trial) + ", n = ";
        for (long n = 1; n <= 12; ++n) {
            if (!all_good({&a, &b, &ab, &da, &ga, &pa}, n)) continue;
            const Place* v = cyclotomic_place(n);
            MatrixCyc ca = curvature_at(a, n).matrix;
            c.expect(curvature_at(ab, n).matrix == kronecker(ca, curvature_at(b, n).matrix), "tensor, " + tag + str(n));
            c.expect(curvature_at(da, n).matrix == ca.inverse().transpose(), "dual, " + tag + str(n));
            if (reduces_at(p.determinant(), v) && !reduce_at_place(p.determinant(), v).is_zero()) {
                MatrixCyc rp = reduce_at_place(p, v);
                c.expect(curvature_at(ga, n).matrix == rp.inverse() * ca * rp, "gauge, " + tag + str(n));
            }
            MatrixCyc zero(ca.rows(), ca.cols());
            c.expect(curvature_at(pa, n).matrix == block_2x2(ca, euler_derivative(ca), zero, ca),
                     "prolongation, " + tag + str(n));
        }
    }
}

// 5

bool in_q_powers(const RatQ& r) {
    auto monomial = [](const PolyQ& p) { return p.is_monic() && p.valuation() == static_cast<std::size_t>(p.degree()); };
    return monomial(r.num()) && monomial(r.den());
}

void box_relations(const std::vector<std::vector<RatQ>>& powers, std::size_t i, const RatQ& prefix, IntVector& m,
                   std::set<IntVector>& out) {
    if (i == powers.size()) {
        if (in_q_powers(prefix)) out.insert(m);
        return;
    }
    for (long e = -5; e <= 5; ++e) {
        m[i] = e;
        box_relations(powers, i + 1, prefix * powers[i][static_cast<std::size_t>(e + 5)], m, out);
    }
}

void box_members(const IntMatrix& basis, std::size_t nu, std::size_t i, IntVector& m, std::set<IntVector>& out) {
    if (i == nu) {
        if (lattice_contains(basis, m)) out.insert(m);
        return;
    }
    for (long e = -5; e <= 5; ++e) {
        m[i] = e;
        box_members(basis, nu, i + 1, m, out);
    }
}

void diagonal_galois(Check& c) {
    const std::vector<std::string> atoms = {"-1", "2", "3", "q", "q-1", "q+1"};
    gen::Gen g(505);
    for (int trial = 0; trial < 50; ++trial) {
        const auto nu = static_cast<std::size_t>(g.integer(1, 3));
        std::vector<RatQ> cs;
        for (std::size_t i = 0; i < nu; ++i) {
            RatQ value(1);
            for (const auto& a : atoms) value *= parse_ratq(a).pow(g.integer(-2, 2));
            cs.push_back(value);
        }
        RelationLattice lat = relation_lattice(cs);

        std::vector<std::vector<RatQ>> powers(nu);
        for (std::size_t i = 0; i < nu; ++i)
            for (long e = -5; e <= 5; ++e) powers[i].push_back(cs[i].pow(e));
        std::set<IntVector> brute, members;
        IntVector m(nu);
        box_relations(powers, 0, RatQ(1), m, brute);
        box_members(lat.basis, nu, 0, m, members);
        c.expect(brute == members, "tuple " + str(trial) + ": lattice differs from the box kernel");

        Verdict v = verify_by_curvatures(cs, lat, 1, 30);
        c.expect(v.failure_places.empty(), "tuple " + str(trial) + ": curvature failures");
    }
}

// 6

DiffModule random_diff_module(gen::Gen& g) {
    const auto dim = static_cast<std::size_t>(g.integer(1, 3));
    auto poly = [&g] {
        std::vector<Rational> coeffs;
        for (long i = 0, d = g.integer(0, 2); i <= d; ++i) coeffs.emplace_back(g.integer(-3, 3));
        return PolyQ(std::move(coeffs));
    };
    MatrixX m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            if (g.coin(0.3)) continue;
            PolyQ den;
            while (den.is_zero()) den = poly();
            m(i, j) = RatX(poly(), den);
        }
    return DiffModule(std::move(m));
}

void deformation_bridge(Check& c) {
    gen::Gen g(606);
    for (int trial = 0; trial < 50; ++trial) {
        DiffModule d = random_diff_module(g);
        QDiffModule m = deform(d);
        c.expect(specialize_q1(m) == d, "roundtrip fails for instance " + str(trial));
        for (long n = 1; n <= 12; ++n) {
            if (!good_place(m, n).good) continue;
            c.expect(diff_curvature(d, n).matrix == curvature_at(m, n).matrix,
                     "bridge fails for instance " + str(trial) + " at n = " + str(n));
        }
    }
}

// 7

void differential_criterion(Check& c) {
    for (long k = -3; k <= 3; ++k) {
        DiffModule d = parse_diff_module({{str(k) + "/x"}});
        for (long n = 2; n <= 30; ++n) {
            const Place* v = cyclotomic_place(n);
            CycNum exact = (CycNum(1) + CycNum(Rational(k)) * (CycNum::generator(v) - CycNum(1))).pow(n);
            if (exact.is_zero()) continue;
            c.expect(diff_curvature(d, n).matrix(0, 0) == CycRatFun(exact),
                     "k = " + str(k) + ": literal curvature value at n = " + str(n));
        }
        MatrixX p(1, 1);
        p(0, 0) = RatX::variable().pow(-k);
        Verdict flat = diff_triviality_scan(diff_gauge(d, p), 1, 30);
        c.expect(flat.conclusion == Conclusion::consistent_with_trivial && flat.identity_places == 30,
                 "k = " + str(k) + ": trivializing basis is not the identity at every place");
    }

    DiffModule half = parse_diff_module({{"1/(2*x)"}});
    c.expect(diff_curvature(half, 3).matrix(0, 0) == CycRatFun(CycNum(Rational(-1, 8))), "witness at n = 3 is not -1/8");
    c.expect(diff_triviality_scan(half, 1, 30).conclusion == Conclusion::nontrivial_heuristic,
             "[1/(2x)] is not flagged");

    DiffModule unipotent = parse_diff_module({{"0", "1/x"}, {"0", "0"}});
    c.expect(diff_curvature(unipotent, 1).is_identity, "unipotent curvature at n = 1 is not the identity");
    for (long n = 2; n <= 30; ++n) {
        const Place* v = cyclotomic_place(n);
        CycNum expected = CycNum(Rational(n)) * (CycNum::generator(v) - CycNum(1));
        MatrixCyc r = diff_curvature(unipotent, n).matrix;
        c.expect(!expected.is_zero() && r(0, 1) == CycRatFun(expected) && r(0, 0) == CycRatFun(1) &&
                     r(1, 1) == CycRatFun(1) && r(1, 0) == CycRatFun(0),
                 "unipotent off-diagonal entry at n = " + str(n));
    }
}

// 8

void theta_certification(Check& c) {
    const Rational q(2), tol = parse_rational("2^-40");
    const std::vector<Rational> points = {Rational(1), Rational(1, 2), Rational(3)};
    for (const auto& x0 : points) {
        BallValue res = theta_eval(q * x0, q, tol) - BallValue(q * x0) * theta_eval(x0, q, tol);
        c.expect(res.contains_zero(), "theta residual at x0 = " + x0.str());
        for (const char* cv : {"2", "3", "1/2"}) {
            const Rational cr = parse_rational(cv);
            BallValue e = char_solution_eval(cr, q * x0, q, tol) - BallValue(cr) * char_solution_eval(cr, x0, q, tol);
            c.expect(e.contains_zero(), std::string("e_c residual, c = ") + cv + ", x0 = " + x0.str());
        }
        BallValue l = log_solution_eval(q * x0, q, tol) - log_solution_eval(x0, q, tol) - BallValue(1);
        c.expect(l.contains_zero(), "log residual at x0 = " + x0.str());
    }
    BallValue l1 = log_solution_eval(Rational(1), q, tol);
    c.expect(l1.contains(Rational(1, 2)) && l1.radius() <= tol, "l(1) is not 1/2 within the certified radius");

    QDiffModule qexp = module_new(M({{"1/(1+x)"}}));
    SeriesSolution s = frobenius_series(qexp, 16);
    RatQ expected(1);
    for (long k = 1; k <= 16; ++k) {
        expected /= RatQ(PolyQ::variable()).pow(k) - RatQ(1);
        c.expect(s.coefficients[static_cast<std::size_t>(k)](0, 0) == expected, "F_" + str(k) + " mismatch");
    }
    FundamentalSolution f = fundamental_eval(qexp, Rational(1, 2), q, 16, tol);
    c.expect(f.residual[0][0].contains_zero() && f.residual[0][0].radius() < parse_rational("2^-20"),
             "fundamental solution residual radius at x0 = 1/2, N = 16");
}

// 9

struct CliRun {
    int code;
    std::string out;
};

CliRun cli(const std::string& args) {
    const std::string cmd = std::string(QCURV_CLI) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, ""};
    std::string out;
    char buf[4096];
    for (std::size_t got; (got = fread(buf, 1, sizeof buf, pipe)) > 0;) out.append(buf, got);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

void cli_determinism(Check& c) {
    const fs::path modules = fs::path(QCURV_DOCS_DIR) / "modules";
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(modules)) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::set<int> seen;
    for (const auto& f : files) {
        std::ifstream in(f);
        const auto doc = nlohmann::json::parse(in, nullptr, false);
        const std::string kind = doc.is_object() ? doc.value("kind", "") : "";
        const std::string command = kind == "differential"         ? "diff-scan"
                                    : kind == "diagonal_constants" ? "galois-diagonal"
                                                                   : "scan";
        const std::string base = command + " " + f.string() + " --no-timing --json -";
        CliRun seq = cli(base), par = cli(base + " --parallel");
        c.expect(seq.code == par.code && seq.out == par.out && !seq.out.empty(),
                 "parallel and sequential reports differ for " + f.filename().string());
        seen.insert(seq.code);
    }
    const std::string m = modules.string() + "/";
    seen.insert(cli("scan " + m + "bad_everywhere.json --range 1:3").code);
    seen.insert(cli("specialize " + m + "constant_two.json").code);
    seen.insert(cli("theta-solve " + m + "resonant.json").code);
    seen.insert(cli("theta-solve " + m + "char_three.json --at -1").code);
    for (int code : {0, 2, 3, 4, 5, 10}) c.expect(seen.count(code) == 1, "exit code " + str(code) + " not exercised");
}

struct Criterion {
    int id;
    const char* title;
    double budget_seconds;
    std::function<void(Check&)> run;
};

}  // namespace

int main(int argc, char** argv) {
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    const std::vector<Criterion> criteria = {
        {1, "curvature triviality, positive side (100 gauge transforms, n <= 20)", 60, positive_side},
        {2, "curvature triviality, negative side ([2], [q^k], n <= 50)", 5, negative_side},
        {3, "theta module curvature against ordered products (n <= 20)", 5, theta_curvature},
        {4, "tensor, dual, gauge and prolongation invariants (50 instances, n <= 12)", 120, structural_invariants},
        {5, "diagonal Galois lattices against the [-5,5]^nu box (50 tuples)", 60, diagonal_galois},
        {6, "deformation roundtrip and curvature bridge (50 modules, n <= 12)", 60, deformation_bridge},
        {7, "differential triviality criterion (n <= 30)", 10, differential_criterion},
        {8, "theta certification (q = 2, tol = 2^-40)", 30, theta_certification},
        {9, "CLI determinism and exit codes over docs/modules", 30, cli_determinism},
    };
    int failed = 0;
    for (const auto& cr : criteria) {
        if (!only.empty() && !only.count(cr.id)) continue;
        Check check;
        const auto start = std::chrono::steady_clock::now();
        try {
            cr.run(check);
        } catch (const std::exception& e) {
            check.expect(false, std::string("unexpected exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_budget = secs <= cr.budget_seconds;
        const bool pass = check.ok() && in_budget;
        failed += pass ? 0 : 1;
        std::ostringstream line;
        line << (pass ? "PASS" : "FAIL") << "  [" << cr.id << "] " << cr.title << "  (" << check.count()
             << " checks, " << std::fixed << std::setprecision(2) << secs << " s of " << cr.budget_seconds << " s)";
        if (!check.ok()) line << "  first failure: " << check.failure();
        if (!in_budget) line << "  over time budget";
        std::cout << line.str() << std::endl;
    }
    std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed") << std::endl;
    return failed ? 1 : 0;
}
