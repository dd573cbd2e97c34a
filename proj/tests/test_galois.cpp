#include <gtest/gtest.h>

#include <algorithm>

#include "qcurv/galois.hpp"
#include "random_objects.hpp"

using namespace qcurv;

namespace {

RatQ C(const char* s) { return parse_ratq(s); }
PolyQ P(const char* s) { return parse_ratq(s).num(); }

std::vector<RatQ> Cs(std::initializer_list<const char*> xs) {
    std::vector<RatQ> out;
    for (const char* x : xs) out.push_back(C(x));
    return out;
}

IntMatrix I(std::initializer_list<std::initializer_list<long>> rows) {
    IntMatrix m;
    for (const auto& r : rows) {
        IntVector v;
        for (long x : r) v.emplace_back(x);
        m.push_back(std::move(v));
    }
    return m;
}

bool in_q_powers(const RatQ& r) {
    auto monomial = [](const PolyQ& p) { return p.is_monic() && p.valuation() == static_cast<std::size_t>(p.degree()); };
    return monomial(r.num()) && monomial(r.den());
}

// Exponent vectors of the box [-5, 5]^nu with prod c_i^{m_i} in q^Z,
// enumerated with running prefix products.
void brute_force_rec(const std::vector<std::vector<RatQ>>& powers, std::size_t i, const RatQ& prefix,
                     IntVector& m, std::vector<IntVector>& out) {
    if (i == powers.size()) {
        if (in_q_powers(prefix)) out.push_back(m);
        return;
    }
    for (long e = -5; e <= 5; ++e) {
        m[i] = e;
        brute_force_rec(powers, i + 1, prefix * powers[i][static_cast<std::size_t>(e + 5)], m, out);
    }
}

std::vector<IntVector> brute_force_relations(const std::vector<RatQ>& cs) {
    std::vector<std::vector<RatQ>> powers(cs.size());
    for (std::size_t i = 0; i < cs.size(); ++i)
        for (long e = -5; e <= 5; ++e) powers[i].push_back(cs[i].pow(e));
    std::vector<IntVector> out;
    IntVector m(cs.size());
    brute_force_rec(powers, 0, RatQ(1), m, out);
    return out;
}

}  // namespace

TEST(Lattice, KernelHermiteSmith) {
    IntMatrix k = integer_kernel(I({{1, 1, 0}}), 3);
    EXPECT_EQ(canonical_basis(k), I({{-1, 1, 0}, {0, 0, 1}}));
    EXPECT_TRUE(integer_kernel(I({{1, 0}, {0, 1}}), 2).empty());
    EXPECT_EQ(smith_invariants(I({{2, 4}, {6, 8}})), (std::vector<Integer>{2, 4}));
    EXPECT_EQ(smith_invariants(I({{2, 0}, {0, 3}})), (std::vector<Integer>{1, 6}));
    EXPECT_EQ(saturation(I({{2, 0}}), 2), I({{1, 0}}));
    EXPECT_EQ(saturation(I({{2, 4}}), 2), I({{1, 2}}));
    EXPECT_TRUE(lattice_contains(canonical_basis(I({{2, 4}})), IntVector{Integer(-4), Integer(-8)}));
    EXPECT_FALSE(lattice_contains(canonical_basis(I({{2, 4}})), IntVector{Integer(1), Integer(2)}));
}

TEST(Lattice, KernelIsExactOnRandomMatrices) {
    gen::Gen g(11);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t rows = static_cast<std::size_t>(g.integer(1, 3)), cols = static_cast<std::size_t>(g.integer(1, 5));
        IntMatrix e(rows, IntVector(cols));
        for (auto& r : e)
            for (auto& x : r) x = g.integer(-4, 4);
        IntMatrix k = integer_kernel(e, cols);
        for (const auto& v : k)
            for (const auto& r : e) {
                Integer dot = 0;
                for (std::size_t j = 0; j < cols; ++j) dot += r[j] * v[j];
                EXPECT_EQ(dot, 0);
            }
        // Kernel basis is saturated, and its rank is cols - rank(e).
        EXPECT_EQ(saturation(k, cols), canonical_basis(k));
        EXPECT_EQ(k.size() + smith_invariants(e).size(), cols);
    }
}

TEST(FactorConstant, Examples) {
    FactoredConstant a = factor_constant(C("2*q"));
    EXPECT_EQ(a.sign, 1);
    EXPECT_EQ(a.primes, (std::map<Integer, long>{{Integer(2), 1}}));
    EXPECT_EQ(a.q_exponent, 1);
    EXPECT_TRUE(a.poly_factors.empty());

    FactoredConstant b = factor_constant(C("q^3/(q-1)"));
    EXPECT_EQ(b.q_exponent, 3);
    ASSERT_EQ(b.poly_factors.size(), 1u);
    EXPECT_EQ(b.poly_factors[0], std::make_pair(P("q-1"), -1L));

    FactoredConstant c = factor_constant(C("q^2-1"));
    ASSERT_EQ(c.poly_factors.size(), 2u);
    EXPECT_EQ(c.poly_factors[0], std::make_pair(P("q-1"), 1L));
    EXPECT_EQ(c.poly_factors[1], std::make_pair(P("q+1"), 1L));

    FactoredConstant d = factor_constant(C("-3/4"));
    EXPECT_EQ(d.sign, -1);
    EXPECT_EQ(d.primes, (std::map<Integer, long>{{Integer(2), -2}, {Integer(3), 1}}));

    EXPECT_THROW(factor_constant(C("q^7-2")), FactorizationOutOfRange);
    EXPECT_THROW(factor_constant(C("(q^3-2)*(q^3-q-1)")), FactorizationOutOfRange);
    EXPECT_EQ(factor_constant(C("(q^3-2)*(q^2+3)^2")).poly_factors.size(), 2u);
    EXPECT_EQ(factor_constant(C("q^12-1")).poly_factors.size(), 6u);
    EXPECT_THROW(factor_constant(C("0")), DivisionByZero);
    EXPECT_EQ(factor_integer(Integer("1000000016000000063")).size(), 2u);  // 1000000007 * 1000000009
}

TEST(FactorConstant, SplitsKnownIrreducibles) {
    const std::vector<PolyQ> pool = {P("q-1"),       P("q+1"),         P("q+2"),         P("q+3/2"),
                                     P("q^2+1"),     P("q^2+q+1"),     P("q^2-2"),       P("q^3-2"),
                                     P("q^4+1"),     P("q^4-2"),       P("q^5-q-1"),     P("q^6+q^3+1"),
                                     P("q^3-q-1"),   P("q^4+q^3+q^2+q+1")};
    gen::Gen g(5);
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<std::pair<PolyQ, long>> expected;
        RatQ c(PolyQ(Rational(g.integer(1, 30) * (g.coin() ? 1 : -1), g.integer(1, 30))));
        bool hard = false;  // at most one non-cyclotomic factor of degree >= 3
        for (const auto& f : pool) {
            if (!g.coin(0.2)) continue;
            const bool is_hard = f.degree() >= 3 && f != P("q^4+1") && f != P("q^6+q^3+1") &&
                                 f != P("q^4+q^3+q^2+q+1");
            if (is_hard && hard) continue;
            hard = hard || is_hard;
            long e = g.integer(-2, 2);
            if (e == 0) continue;
            expected.emplace_back(f, e);
            c *= RatQ(f).pow(e);
        }
        c *= RatQ(PolyQ::variable()).pow(g.integer(-3, 3));
        FactoredConstant fc = factor_constant(c);
        EXPECT_EQ(fc.reconstruct(), c);
        std::sort(expected.begin(), expected.end(),
                  [](const auto& a, const auto& b) { return detail::poly_less(a.first, b.first); });
        EXPECT_EQ(fc.poly_factors, expected);
    }
}

TEST(RelationLattice, Examples) {
    RelationLattice a = relation_lattice(Cs({"q^2"}));
    EXPECT_EQ(a.rank, 1);
    EXPECT_EQ(a.basis, I({{1}}));
    EXPECT_EQ(relation_lattice(Cs({"2"})).rank, 0);
    RelationLattice b = relation_lattice(Cs({"2", "2*q", "q^3"}));
    EXPECT_EQ(b.rank, 2);
    EXPECT_EQ(b.basis, I({{-1, 1, 0}, {0, 0, 1}}));
    EXPECT_EQ(relation_lattice(Cs({"-1"})).basis, I({{2}}));
    EXPECT_EQ(relation_lattice(Cs({"-q", "q"})).basis, I({{2, 0}, {0, 1}}));
    EXPECT_EQ(relation_lattice(Cs({"-q", "-1/q"})).basis, I({{2, 0}, {1, 1}}));
}

TEST(DiagonalGaloisGroup, Examples) {
    DiagonalGroupDescription a = diagonal_galois_group(Cs({"q^2"}));
    EXPECT_EQ(a.torus_dimension, 0);
    EXPECT_TRUE(a.finite_part.empty());
    DiagonalGroupDescription b = diagonal_galois_group(Cs({"2"}));
    EXPECT_EQ(b.torus_dimension, 1);
    EXPECT_TRUE(b.finite_part.empty());
    DiagonalGroupDescription c = diagonal_galois_group(Cs({"2", "2*q", "q^3"}));
    EXPECT_EQ(c.torus_dimension, 1);
    EXPECT_TRUE(c.finite_part.empty());
    EXPECT_EQ(c.characters, I({{-1, 1, 0}, {0, 0, 1}}));
    DiagonalGroupDescription d = diagonal_galois_group(Cs({"-1", "3"}));
    EXPECT_EQ(d.torus_dimension, 1);
    EXPECT_EQ(d.finite_part, std::vector<Integer>{Integer(2)});
    EXPECT_EQ(d.characters, I({{1, 0}}));
}

TEST(VerifyByCurvatures, Examples) {
    auto one = Cs({"q^2"});
    Verdict a = verify_by_curvatures(one, relation_lattice(one), 1, 30);
    EXPECT_TRUE(a.failure_places.empty());
    EXPECT_EQ(a.good_places, 30);

    auto three = Cs({"2", "2*q", "q^3"});
    Verdict b = verify_by_curvatures(three, relation_lattice(three), 1, 30);
    EXPECT_TRUE(b.failure_places.empty());

    RelationLattice wrong;
    wrong.nu = 1;
    wrong.rank = 1;
    wrong.basis = I({{1}});
    Verdict c = verify_by_curvatures(Cs({"2"}), wrong, 1, 30);
    EXPECT_EQ(c.failure_places.size(), 30u);
    EXPECT_EQ(c.conclusion, Conclusion::nontrivial_heuristic);

    Verdict d = verify_by_curvatures(Cs({"q-1"}), RelationLattice{1, 0, {}}, 1, 4);
    EXPECT_FALSE(d.places[0].good);
    EXPECT_EQ(d.good_places, 3);
    EXPECT_THROW(verify_by_curvatures(Cs({"q+1"}), RelationLattice{1, 0, {}}, 2, 2), NoGoodPlaces);
    EXPECT_THROW(verify_by_curvatures(Cs({"2"}), RelationLattice{1, 1, I({{1, 1}})}, 1, 2), DimensionMismatch);
}

TEST(RelationLattice, MatchesBruteForceAndCurvatures) {
    const std::vector<RatQ> atoms = Cs({"-1", "2", "3", "q", "q-1", "q+1"});
    gen::Gen g(2024);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t nu = static_cast<std::size_t>(g.integer(1, 3));
        std::vector<RatQ> cs;
        for (std::size_t i = 0; i < nu; ++i) {
            RatQ c(1);
            for (const auto& a : atoms) c *= a.pow(g.integer(-3, 3));
            if (g.coin(0.3) && i > 0) c = cs[0].pow(g.integer(-2, 2)) * RatQ(PolyQ::variable()).pow(g.integer(-2, 2));
            cs.push_back(c);
        }
        DiagonalGroupDescription d = diagonal_galois_group(cs);
        const RelationLattice& lat = d.lattice;

        // Soundness: every basis vector is a relation.
        for (const auto& v : lat.basis) {
            RatQ prod(1);
            for (std::size_t i = 0; i < nu; ++i) prod *= cs[i].pow(v[i].get_si());
            EXPECT_TRUE(in_q_powers(prod));
        }
        // Completeness on the box, both directions.
        auto brute = brute_force_relations(cs);
        std::size_t members = 0;
        std::vector<long> m(nu, -5);
        for (const auto& v : brute) EXPECT_TRUE(lattice_contains(lat.basis, v));
        for (;;) {
            IntVector v;
            for (long x : m) v.emplace_back(x);
            if (lattice_contains(lat.basis, v)) ++members;
            std::size_t k = 0;
            while (k < nu && m[k] == 5) m[k++] = -5;
            if (k == nu) break;
            ++m[k];
        }
        EXPECT_EQ(members, brute.size());

        EXPECT_EQ(d.torus_dimension + lat.rank, static_cast<long>(nu));
        Verdict v = verify_by_curvatures(cs, lat, 1, 30);
        EXPECT_TRUE(v.failure_places.empty());
    }
}
