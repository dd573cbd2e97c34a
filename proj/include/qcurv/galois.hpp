#pragma once

#include <string>
#include <vector>

#include "qcurv/curvature.hpp"
#include "qcurv/factor.hpp"
#include "qcurv/lattice.hpp"

namespace qcurv {

/// Lattice of m in Z^nu with prod c_i^{m_i} in q^Z.
struct RelationLattice {
    std::size_t nu = 0;
    long rank = 0;
    IntMatrix basis;  // canonical form, see canonical_basis
};

struct DiagonalGroupDescription {
    long torus_dimension = 0;
    std::vector<Integer> finite_part;          // cyclic orders > 1
    std::vector<Integer> elementary_divisors;  // all nonzero SNF entries
    IntMatrix characters;                      // saturated lattice basis
    RelationLattice lattice;
};

/// Exponent matrix over the generators (primes, polynomial factors) with
/// the q column dropped. The sign is an order-two generator: its row gets an
/// auxiliary column with entry 2.
inline RelationLattice relation_lattice(const std::vector<RatQ>& constants) {
    const std::size_t nu = constants.size();
    std::vector<FactoredConstant> fs;
    fs.reserve(nu);
    for (const auto& c : constants) fs.push_back(factor_constant(c));

    std::vector<Integer> primes;
    std::vector<PolyQ> polys;
    for (const auto& f : fs) {
        for (const auto& [p, e] : f.primes)
            if (std::find(primes.begin(), primes.end(), p) == primes.end()) primes.push_back(p);
        for (const auto& [g, e] : f.poly_factors)
            if (std::find(polys.begin(), polys.end(), g) == polys.end()) polys.push_back(g);
    }
    IntMatrix e;
    for (const auto& p : primes) {
        IntVector row(nu + 1, Integer(0));
        for (std::size_t i = 0; i < nu; ++i)
            if (auto it = fs[i].primes.find(p); it != fs[i].primes.end()) row[i] = it->second;
        e.push_back(std::move(row));
    }
    for (const auto& g : polys) {
        IntVector row(nu + 1, Integer(0));
        for (std::size_t i = 0; i < nu; ++i)
            for (const auto& [h, k] : fs[i].poly_factors)
                if (h == g) row[i] = k;
        e.push_back(std::move(row));
    }
    IntVector sign_row(nu + 1, Integer(0));
    for (std::size_t i = 0; i < nu; ++i) sign_row[i] = fs[i].sign < 0 ? 1 : 0;
    sign_row[nu] = 2;
    e.push_back(std::move(sign_row));

    IntMatrix kernel = integer_kernel(e, nu + 1);
    for (auto& v : kernel) v.pop_back();  // injective on the kernel
    RelationLattice lat;
    lat.nu = nu;
    lat.basis = canonical_basis(kernel);
    lat.rank = static_cast<long>(lat.basis.size());
    return lat;
}

inline DiagonalGroupDescription diagonal_galois_group(const std::vector<RatQ>& constants) {
    DiagonalGroupDescription d;
    d.lattice = relation_lattice(constants);
    d.elementary_divisors = smith_invariants(d.lattice.basis);
    for (const auto& x : d.elementary_divisors)
        if (x > 1) d.finite_part.push_back(x);
    d.torus_dimension = static_cast<long>(d.lattice.nu) - static_cast<long>(d.elementary_divisors.size());
    d.characters = saturation(d.lattice.basis, d.lattice.nu);
    return d;
}

/// Checks at each cyclotomic place that the curvatures c_i^n satisfy every
/// defining character of the lattice. A place is bad when some c_i has a
/// zero or pole there.
inline Verdict verify_by_curvatures(const std::vector<RatQ>& constants, const RelationLattice& lattice,
                                    const ScanOptions& opt) {
    for (const auto& v : lattice.basis)
        if (v.size() != constants.size()) throw DimensionMismatch("lattice vector length differs from constants");
    auto places = evaluate_places(opt, [&](long n) {
        const Place* place = cyclotomic_place(n);
        PlaceOutcome o;
        o.n = n;
        std::vector<CycNum> curv;
        for (std::size_t i = 0; i < constants.size(); ++i) {
            auto r = try_reduce(constants[i], place);
            if (!r || r->is_zero()) {
                o.witness = "c" + std::to_string(i + 1) + " = " + to_string(constants[i]);
                return o;
            }
            curv.push_back(r->pow(n));
        }
        o.good = true;
        o.identity = true;
        for (std::size_t k = 0; k < lattice.basis.size(); ++k) {
            CycNum prod(1);
            for (std::size_t i = 0; i < curv.size(); ++i)
                if (lattice.basis[k][i] != 0) prod *= curv[i].pow(lattice.basis[k][i].get_si());
            if (!prod.is_one()) {
                o.identity = false;
                o.summary += (o.summary.empty() ? "" : "; ") + std::string("character ") + std::to_string(k + 1) +
                             " = " + to_string(prod);
            }
        }
        if (o.identity) o.summary = "identity";
        return o;
    });
    return aggregate(opt, std::move(places));
}

inline Verdict verify_by_curvatures(const std::vector<RatQ>& constants, const RelationLattice& lattice, long n_min,
                                    long n_max) {
    ScanOptions opt;
    opt.n_min = n_min;
    opt.n_max = n_max;
    return verify_by_curvatures(constants, lattice, opt);
}

}  // namespace qcurv
