// qcurv: command-line front end for the q-difference curvature library.

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "qcurv/qcurv.hpp"

using nlohmann::json;
using namespace qcurv;

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr int kFormat = 1;

enum Exit : int { ok = 0, input_error = 2, no_good_places = 3, out_of_range = 4, numeric = 5, nontrivial = 10 };

class InputError : public Error {
public:
    using Error::Error;
};

struct Options {
    std::string file;
    std::string range;
    long threshold = 3;
    bool exclude_n1 = false;
    std::string json_out;
    bool parallel = false;
    std::string tol = "2^-40";
    long order = 16;
    std::string q_val;
    std::string at = "1";
    bool no_timing = false;
};

struct Document {
    std::string kind;
    std::size_t dimension = 0;
    std::vector<std::vector<std::string>> matrix;
    std::vector<std::string> constants;
    json echo;
};

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

std::vector<std::vector<std::string>> read_matrix(const json& m, std::size_t dim) {
    if (!m.is_array() || m.size() != dim) throw InputError("matrix must have " + std::to_string(dim) + " rows");
    std::vector<std::vector<std::string>> rows;
    for (const auto& row : m) {
        if (!row.is_array() || row.size() != dim)
            throw InputError("every matrix row must have " + std::to_string(dim) + " entries");
        auto& r = rows.emplace_back();
        for (const auto& e : row) {
            if (!e.is_string()) throw InputError("matrix entries must be expression strings");
            r.push_back(e.get<std::string>());
        }
    }
    return rows;
}

/// Accepts a module document, or a report whose results carry one.
Document load_document(const std::string& path) {
    json j = read_json(path);
    if (j.is_object() && j.contains("results") && j["results"].is_object() && j["results"].contains("module"))
        j = j["results"]["module"];
    if (!j.is_object()) throw InputError("module document must be a JSON object");
    if (j.value("format", 0) != kFormat) throw InputError("unsupported or missing \"format\" (expected 1)");
    Document d;
    d.kind = j.value("kind", "");
    if (d.kind == "diagonal_constants") {
        if (!j.contains("constants") || !j["constants"].is_array() || j["constants"].empty())
            throw InputError("\"constants\" must be a nonempty array");
        for (const auto& c : j["constants"]) {
            if (!c.is_string()) throw InputError("constants must be expression strings");
            d.constants.push_back(c.get<std::string>());
        }
        d.dimension = d.constants.size();
    } else if (d.kind == "q_difference" || d.kind == "differential") {
        if (!j.contains("dimension") || !j["dimension"].is_number_unsigned() || j["dimension"].get<std::size_t>() == 0)
            throw InputError("\"dimension\" must be a positive integer");
        d.dimension = j["dimension"].get<std::size_t>();
        if (!j.contains("matrix")) throw InputError("missing \"matrix\"");
        d.matrix = read_matrix(j["matrix"], d.dimension);
    } else {
        throw InputError("unknown module kind \"" + d.kind + "\"");
    }
    d.echo = j;
    return d;
}

void require_kind(const Document& d, const std::string& kind) {
    if (d.kind != kind) throw InputError("expected a " + kind + " document, got " + d.kind);
}

QDiffModule q_module(const Document& d) {
    require_kind(d, "q_difference");
    return module_new(parse_matrix(d.matrix));
}

json matrix_json(const MatrixQX& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

json matrix_json(const MatrixX& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j), "x"));
        rows.push_back(row);
    }
    return rows;
}

json module_json(const std::string& kind, const json& matrix, std::size_t dim) {
    return {{"format", kFormat}, {"kind", kind}, {"dimension", dim}, {"matrix", matrix}};
}

json int_matrix_json(const IntMatrix& m) {
    json rows = json::array();
    for (const auto& v : m) {
        json row = json::array();
        for (const auto& e : v) row.push_back(e.get_str());
        rows.push_back(row);
    }
    return rows;
}

json integers_json(const std::vector<Integer>& v) {
    json out = json::array();
    for (const auto& e : v) out.push_back(e.get_str());
    return out;
}

json ball_json(const BallValue& b) {
    return {{"midpoint", b.midpoint().str()}, {"radius", b.radius().str()}, {"approx", b.midpoint().to_double()},
            {"radius_approx", b.radius().to_double()}};
}

json ball_matrix_json(const BallMatrix& m) {
    json rows = json::array();
    for (const auto& r : m) {
        json row = json::array();
        for (const auto& b : r) row.push_back(ball_json(b));
        rows.push_back(row);
    }
    return rows;
}

json verdict_json(const Verdict& v) {
    json places = json::array();
    for (const auto& p : v.places) {
        json e = {{"n", p.n}, {"good", p.good}};
        if (p.good) {
            e["identity"] = p.identity;
            e["summary"] = p.summary;
        } else {
            e["witness"] = p.witness;
        }
        places.push_back(e);
    }
    json bad = json::array();
    for (const auto& p : v.bad_places) bad.push_back({{"n", p.n}, {"witness", p.witness}});
    return {{"conclusion", to_string(v.conclusion)},
            {"n_min", v.n_min},
            {"n_max", v.n_max},
            {"threshold", v.threshold},
            {"good_places", v.good_places},
            {"identity_places", v.identity_places},
            {"failure_places", v.failure_places},
            {"bad_places", bad},
            {"places", places}};
}

std::string verdict_text(const Verdict& v) {
    std::ostringstream os;
    os << "verdict: " << to_string(v.conclusion) << "\n";
    os << "places " << v.n_min << ".." << v.n_max << ": " << v.good_places << " good, " << v.identity_places
       << " identity, " << v.failure_places.size() << " failures, " << v.bad_places.size() << " bad\n";
    for (const auto& p : v.places) {
        os << "  n=" << p.n << ": ";
        if (!p.good)
            os << "bad (" << p.witness << ")";
        else if (p.identity)
            os << "identity";
        else
            os << "FAIL " << p.summary;
        os << "\n";
    }
    return os.str();
}

ScanOptions scan_options(const Options& o, long default_max) {
    ScanOptions s;
    s.n_max = default_max;
    if (!o.range.empty()) {
        const auto colon = o.range.find(':');
        if (colon == std::string::npos) throw InputError("--range expects n_min:n_max");
        try {
            std::size_t used = 0;
            const std::string lo = o.range.substr(0, colon), hi = o.range.substr(colon + 1);
            s.n_min = std::stol(lo, &used);
            if (used != lo.size()) throw InputError("bad --range");
            s.n_max = std::stol(hi, &used);
            if (used != hi.size()) throw InputError("bad --range");
        } catch (const std::logic_error&) {
            throw InputError("--range expects integers n_min:n_max");
        }
    }
    if (o.exclude_n1 && s.n_min == 1) s.n_min = 2;
    if (s.n_min < 1 || s.n_min > s.n_max) throw InputError("--range must satisfy 1 <= n_min <= n_max");
    if (o.threshold < 1) throw InputError("--threshold must be positive");
    s.threshold = o.threshold;
    s.parallel = o.parallel;
    return s;
}

Rational rational_flag(const std::string& name, const std::string& text) {
    try {
        return parse_rational(text);
    } catch (const Error& e) {
        throw InputError(name + ": " + e.what());
    }
}

struct Outcome {
    json inputs;
    json results;
    std::string text;
    int code = ok;
};

Outcome run_scan(const Options& o) {
    Document d = load_document(o.file);
    ScanOptions s = scan_options(o, 50);
    Verdict v = triviality_scan(q_module(d), s);
    return {{{"module", d.echo}}, verdict_json(v), verdict_text(v),
            v.conclusion == Conclusion::consistent_with_trivial ? ok : nontrivial};
}

Outcome run_diff_scan(const Options& o) {
    Document d = load_document(o.file);
    require_kind(d, "differential");
    ScanOptions s = scan_options(o, 30);
    Verdict v = diff_triviality_scan(parse_diff_module(d.matrix), s);
    return {{{"module", d.echo}}, verdict_json(v), verdict_text(v),
            v.conclusion == Conclusion::consistent_with_trivial ? ok : nontrivial};
}

Outcome run_galois(const Options& o) {
    Document d = load_document(o.file);
    require_kind(d, "diagonal_constants");
    std::vector<RatQ> constants;
    for (const auto& c : d.constants) constants.push_back(parse_ratq(c));
    ScanOptions s = scan_options(o, 30);
    DiagonalGroupDescription g = diagonal_galois_group(constants);
    Verdict v = verify_by_curvatures(constants, g.lattice, s);

    json results = {{"rank", g.lattice.rank},
                     {"basis", int_matrix_json(g.lattice.basis)},
                     {"torus_dimension", g.torus_dimension},
                     {"finite_part", integers_json(g.finite_part)},
                     {"elementary_divisors", integers_json(g.elementary_divisors)},
                     {"characters", int_matrix_json(g.characters)},
                     {"verification", verdict_json(v)}};
    std::ostringstream os;
    os << "relation lattice rank " << g.lattice.rank << ", torus dimension " << g.torus_dimension << "\n";
    for (const auto& b : g.lattice.basis) os << "  " << to_string(b) << "\n";
    os << "finite part " << to_string(g.finite_part) << "\n";
    os << "verification: " << v.failure_places.size() << " curvature failures, " << to_string(v.conclusion) << "\n";
    return {{{"module", d.echo}, {"range", {s.n_min, s.n_max}}}, results, os.str(),
            v.conclusion == Conclusion::consistent_with_trivial ? ok : nontrivial};
}

Outcome run_deform(const Options& o) {
    Document d = load_document(o.file);
    require_kind(d, "differential");
    QDiffModule m = deform(parse_diff_module(d.matrix));
    json mj = matrix_json(m.sigma_matrix());
    std::ostringstream os;
    os << "A = " << mj.dump() << "\n";
    return {{{"module", d.echo}}, {{"module", module_json("q_difference", mj, m.dim())}}, os.str(), ok};
}

Outcome run_specialize(const Options& o) {
    Document d = load_document(o.file);
    QDiffModule m = q_module(d);
    const Rational a = rational_flag("--q-val", o.q_val.empty() ? "1" : o.q_val);
    json inputs = {{"module", d.echo}, {"q_val", a.str()}};
    std::ostringstream os;
    if (a == Rational(1)) {
        DiffModule g = specialize_q1(m);
        json mj = matrix_json(g.matrix());
        os << "G = " << mj.dump() << "\n";
        return {inputs, {{"q_value", "1"}, {"module", module_json("differential", mj, g.dim())}}, os.str(), ok};
    }
    SpecializedModule s = specialize_q_value(m, a);
    json mj = matrix_json(s.matrix);
    os << "A(q=" << a.str() << ") = " << mj.dump() << (s.root_of_unity ? " (root of unity)" : "") << "\n";
    return {inputs, {{"q_value", a.str()}, {"root_of_unity", s.root_of_unity}, {"matrix", mj}}, os.str(), ok};
}

Outcome run_theta(const Options& o) {
    Document d = load_document(o.file);
    QDiffModule m = q_module(d);
    const Rational x0 = rational_flag("--at", o.at);
    const Rational q = rational_flag("--q-val", o.q_val.empty() ? "2" : o.q_val);
    const Rational tol = rational_flag("--tol", o.tol);
    if (o.order < 0) throw InputError("--order must be nonnegative");
    FundamentalSolution f = fundamental_eval(m, x0, q, o.order, tol);

    bool contains_zero = true;
    for (const auto& row : f.residual)
        for (const auto& b : row) contains_zero = contains_zero && b.contains_zero();
    json results = {{"order", f.order},
                    {"truncation_bound", f.truncation_bound.str()},
                    {"value", ball_matrix_json(f.value)},
                    {"residual", ball_matrix_json(f.residual)},
                    {"residual_contains_zero", contains_zero},
                    {"theta", ball_json(theta_eval(x0, q, tol))}};
    std::ostringstream os;
    os << "U(" << x0.str() << ") at q = " << q.str() << ", N = " << f.order << "\n";
    for (std::size_t i = 0; i < f.value.size(); ++i)
        for (std::size_t j = 0; j < f.value[i].size(); ++j)
            os << "  U[" << i + 1 << "," << j + 1 << "] = " << f.value[i][j].midpoint().to_double() << " +/- "
               << f.value[i][j].radius().to_double() << "\n";
    os << "residual balls " << (contains_zero ? "contain 0" : "DO NOT contain 0") << "\n";
    json inputs = {{"module", d.echo}, {"at", x0.str()}, {"q_val", q.str()}, {"order", o.order}, {"tol", tol.str()}};
    return {inputs, results, os.str(), contains_zero ? ok : nontrivial};
}

/// Maps a library error to its exit code and a stable type name.
std::pair<int, std::string> classify(const std::exception& e) {
    if (dynamic_cast<const NoGoodPlaces*>(&e)) return {no_good_places, "NoGoodPlaces"};
    if (dynamic_cast<const FactorizationOutOfRange*>(&e)) return {out_of_range, "FactorizationOutOfRange"};
    if (dynamic_cast<const NotSpecializable*>(&e)) return {numeric, "NotSpecializable"};
    if (dynamic_cast<const BadSpecialization*>(&e)) return {numeric, "BadSpecialization"};
    if (dynamic_cast<const Resonant*>(&e)) return {numeric, "Resonant"};
    if (dynamic_cast<const NearZero*>(&e)) return {numeric, "NearZero"};
    if (dynamic_cast<const NotRegularSingular*>(&e)) return {numeric, "NotRegularSingular"};
    if (dynamic_cast<const TruncationDominates*>(&e)) return {numeric, "TruncationDominates"};
    if (dynamic_cast<const BadPlace*>(&e)) return {numeric, "BadPlace"};
    if (dynamic_cast<const SyntaxError*>(&e)) return {input_error, "SyntaxError"};
    if (dynamic_cast<const InputError*>(&e)) return {input_error, "InputError"};
    if (dynamic_cast<const SingularMatrix*>(&e)) return {input_error, "SingularMatrix"};
    if (dynamic_cast<const DimensionMismatch*>(&e)) return {input_error, "DimensionMismatch"};
    if (dynamic_cast<const DivisionByZero*>(&e)) return {input_error, "DivisionByZero"};
    if (dynamic_cast<const Error*>(&e)) return {input_error, "Error"};
    return {input_error, "InternalError"};
}

int emit(const std::string& command, const Options& o, const json& inputs, const json& body, bool is_error,
         const std::string& text, int code, double seconds) {
    json report = {{"format", kFormat}, {"command", command}, {"version", kVersion}, {"inputs", inputs},
                   {"exit_code", code}};
    report[is_error ? "error" : "results"] = body;
    if (!o.no_timing) report["timing"] = {{"seconds", seconds}};
    const std::string dumped = report.dump(2) + "\n";
    if (o.json_out == "-") {
        std::cout << dumped;
    } else {
        if (is_error)
            std::cerr << "error: " << body["message"].get<std::string>() << "\n";
        else
            std::cout << text;
        if (!o.json_out.empty()) {
            std::ofstream out(o.json_out, std::ios::binary);
            if (!out) {
                std::cerr << "error: cannot write " << o.json_out << "\n";
                return input_error;
            }
            out << dumped;
        }
    }
    return code;
}

int dispatch(const std::string& command, const Options& o, Outcome (*run)(const Options&)) {
    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
    try {
        Outcome out = run(o);
        return emit(command, o, out.inputs, out.results, false, out.text, out.code, elapsed());
    } catch (const std::exception& e) {
        auto [code, type] = classify(e);
        json inputs = {{"file", o.file}};
        return emit(command, o, inputs, {{"type", type}, {"message", e.what()}}, true, "", code, elapsed());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Curvatures, Galois lattices and theta solutions of q-difference modules"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    Options o;

    auto common = [&o](CLI::App* sub) {
        sub->add_option("file", o.file, "module document (JSON)")->required();
        sub->add_option("--json", o.json_out, "write the JSON report to this path ('-' for stdout)");
        sub->add_flag("--no-timing", o.no_timing, "omit the timing field from the report");
    };
    auto scanning = [&o](CLI::App* sub) {
        sub->add_option("--range", o.range, "place range n_min:n_max");
        sub->add_option("--threshold", o.threshold, "failures needed for a nontrivial verdict");
        sub->add_flag("--exclude-n1", o.exclude_n1, "skip the place n = 1");
        sub->add_flag("--parallel", o.parallel, "evaluate places concurrently");
    };

    struct Entry {
        const char* name;
        const char* help;
        Outcome (*run)(const Options&);
        bool scans;
    };
    const Entry entries[] = {
        {"scan", "curvature triviality scan of a q-difference module", run_scan, true},
        {"galois-diagonal", "relation lattice and Galois group of a diagonal module", run_galois, true},
        {"deform", "q-deformation 1 + (q-1)xG of a differential module", run_deform, false},
        {"specialize", "specialize a q-difference module at q = --q-val (default 1)", run_specialize, false},
        {"diff-scan", "curvature scan of a differential module", run_diff_scan, true},
        {"theta-solve", "certified fundamental solution at --at", run_theta, false},
    };
    std::vector<std::pair<CLI::App*, const Entry*>> subs;
    for (const auto& e : entries) {
        CLI::App* sub = app.add_subcommand(e.name, e.help);
        common(sub);
        if (e.scans) scanning(sub);
        if (std::string(e.name) == "specialize") sub->add_option("--q-val", o.q_val, "rational value of q");
        if (std::string(e.name) == "theta-solve") {
            sub->add_option("--q-val", o.q_val, "rational value of q, |q| > 1 (default 2)");
            sub->add_option("--at", o.at, "evaluation point x0 (default 1)");
            sub->add_option("--order", o.order, "series truncation order N (default 16)");
            sub->add_option("--tol", o.tol, "target radius (default 2^-40)");
        }
        subs.emplace_back(sub, &e);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : input_error;
    }
    for (const auto& [sub, entry] : subs)
        if (sub->parsed()) return dispatch(entry->name, o, entry->run);
    return input_error;
}
