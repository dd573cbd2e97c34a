#pragma once

#include <sstream>
#include <string>

#include "qcurv/place.hpp"

namespace qcurv {

// Canonical printing. Everything printed here is accepted by parse_ratfun
// (residues are printed as their representative polynomial in q).

namespace detail {

// How a printed coefficient may be placed in front of "*x^j".
enum class Shape { Rational, Product, Sum };

struct Printed {
    std::string text;
    Shape shape;
};

inline std::string power_of(const char* var, std::size_t e) {
    if (e == 1) return var;
    return std::string(var) + "^" + std::to_string(e);
}

// Joins signed terms: "a + b", "a - b".
inline std::string join_terms(const std::vector<std::string>& terms) {
    if (terms.empty()) return "0";
    std::string out = terms.front();
    for (std::size_t i = 1; i < terms.size(); ++i) {
        const std::string& t = terms[i];
        if (!t.empty() && t[0] == '-')
            out += " - " + t.substr(1);
        else
            out += " + " + t;
    }
    return out;
}

inline std::string monomial_term(const Printed& coeff, const char* var, std::size_t e) {
    if (e == 0) return coeff.text;
    std::string p = power_of(var, e);
    switch (coeff.shape) {
        case Shape::Rational:
            if (coeff.text == "1") return p;
            if (coeff.text == "-1") return "-" + p;
            return coeff.text + "*" + p;
        case Shape::Product:
            return coeff.text + "*" + p;
        case Shape::Sum:
        default:
            return "(" + coeff.text + ")*" + p;
    }
}

template <class F, class CoeffPrinter>
Printed print_poly(const Poly<F>& p, const char* var, CoeffPrinter&& coeff_printer) {
    if (p.is_zero()) return {"0", Shape::Rational};
    std::vector<std::string> terms;
    Shape shape = Shape::Product;
    for (std::size_t i = p.size(); i-- > 0;) {
        const F& c = p.coeffs()[i];
        if (c.is_zero()) continue;
        Printed pc = coeff_printer(c);
        terms.push_back(monomial_term(pc, var, i));
        if (i == 0) shape = pc.shape;
    }
    if (terms.size() > 1) return {join_terms(terms), Shape::Sum};
    if (p.degree() == 0) return {terms[0], shape};
    return {terms[0], Shape::Product};
}

inline Printed print_rational(const Rational& r) { return {r.str(), Shape::Rational}; }

inline Printed print_polyq(const PolyQ& p, const char* var) { return print_poly(p, var, print_rational); }

inline std::string wrap(const Printed& p) { return p.shape == Shape::Sum ? "(" + p.text + ")" : p.text; }

// Denominators are wrapped unless they are a bare integer or a single power.
inline std::string wrap_den(const Printed& p, bool monomial) {
    if (p.shape == Shape::Rational && p.text.find('/') == std::string::npos) return p.text;
    if (monomial && p.shape == Shape::Product && p.text.find('*') == std::string::npos) return p.text;
    return "(" + p.text + ")";
}

template <class F, class CoeffPrinter>
Printed print_frac(const Frac<F>& f, const char* var, CoeffPrinter&& coeff_printer) {
    Printed n = print_poly(f.num(), var, coeff_printer);
    if (f.den().is_one()) return n;
    Printed d = print_poly(f.den(), var, coeff_printer);
    bool den_monomial = f.den().size() >= 1 && f.den().valuation() + 1 == f.den().size();
    std::string num_text = n.shape == Shape::Sum || n.text.find('/') != std::string::npos ? "(" + n.text + ")" : n.text;
    return {num_text + "/" + wrap_den(d, den_monomial), Shape::Sum};
}

}  // namespace detail

inline std::string to_string(const Rational& r) { return r.str(); }

inline std::string to_string(const PolyQ& p, const char* var = "q") { return detail::print_polyq(p, var).text; }

inline detail::Printed print_ratq(const RatQ& f, const char* var = "q") {
    return detail::print_frac(f, var, detail::print_rational);
}

inline std::string to_string(const RatQ& f, const char* var = "q") { return print_ratq(f, var).text; }

inline std::string to_string(const CycNum& c) { return detail::print_polyq(c.residue(), "q").text; }

inline detail::Printed print_cycnum(const CycNum& c) { return detail::print_polyq(c.residue(), "q"); }

inline std::string to_string(const CycRatFun& f) { return detail::print_frac(f, "x", print_cycnum).text; }

template <class T>
std::string to_string(const std::vector<T>& v) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
    os << ")";
    return os.str();
}

}  // namespace qcurv
