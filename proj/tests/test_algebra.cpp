#include <gtest/gtest.h>

#include "qcurv/parse.hpp"
#include "random_objects.hpp"

using namespace qcurv;

namespace {

RatFun P(const char* s) { return parse_ratfun(s); }

CycPoly random_cyc_poly(gen::Gen& g, const Place* v, int max_degree) {
    std::vector<CycNum> c;
    for (long i = 0, d = g.integer(0, max_degree); i <= d; ++i) {
        RatQ r = g.ratq(3, 4);
        c.emplace_back(v, r.num() * PolyQ(Rational(1, g.integer(1, 3))));
    }
    return CycPoly(std::move(c));
}

// Coefficientwise reference arithmetic, independent of the integer fast paths.
CycPoly naive_product(const CycPoly& a, const CycPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<CycNum> r(a.size() + b.size() - 1, CycNum(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a.coeffs()[i] * b.coeffs()[j];
    return CycPoly(std::move(r));
}

std::pair<CycPoly, CycPoly> naive_divmod(const CycPoly& a, const CycPoly& b) {
    CycPoly q, r = a;
    while (!r.is_zero() && r.degree() >= b.degree()) {
        CycPoly t = CycPoly::monomial(r.lead() / b.lead(), r.degree() - b.degree());
        q += t;
        r -= naive_product(t, b);
    }
    return {q, r};
}

CycPoly naive_gcd(CycPoly a, CycPoly b) {
    while (!b.is_zero()) {
        CycPoly r = naive_divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.is_zero() ? a : CycPoly(a.lead().inverse()) * a;
}

}  // namespace

TEST(Rational, LowestTermsPositiveDenominator) {
    Rational r(Integer(6), Integer(-4));
    EXPECT_EQ(r.num(), -3);
    EXPECT_EQ(r.den(), 2);
    EXPECT_THROW(Rational(Integer(1), Integer(0)), DivisionByZero);
    EXPECT_EQ(parse_rational("2^-3"), Rational(Integer(1), Integer(8)));
    EXPECT_EQ(parse_rational("-0.25"), Rational(Integer(-1), Integer(4)));
}

TEST(Parse, LiteralReadBack) {
    RatFun f = P("q*x - 1");
    EXPECT_TRUE(f.den().is_one());
    ASSERT_EQ(f.num().degree(), 1);
    EXPECT_EQ(f.num().coeff(1), q_var());
    EXPECT_EQ(f.num().coeff(0), RatQ(-1));
}

TEST(Parse, CancellationByNormalization) { EXPECT_EQ(P("(x^2-1)/(x-1)"), P("x + 1")); }

TEST(Parse, ZeroDenominator) {
    EXPECT_THROW(P("1/(q-q)"), DivisionByZero);
    EXPECT_THROW(P("x/0"), DivisionByZero);
}

TEST(Parse, SyntaxErrorsCarryPosition) {
    try {
        P("x + * 2");
        FAIL();
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.position(), 4u);
    }
    EXPECT_THROW(P("(x + 1"), SyntaxError);
    EXPECT_THROW(P("x^-1"), SyntaxError);
    EXPECT_THROW(P("y"), SyntaxError);
    EXPECT_THROW(P(""), SyntaxError);
    EXPECT_THROW(P("x x"), SyntaxError);
}

TEST(Parse, PrecedenceAndUnaryMinus) {
    EXPECT_EQ(P("-x^2"), -(x_var() * x_var()));
    EXPECT_THROW(P("2^3^1"), SyntaxError);
    EXPECT_EQ(P("010"), P("10"));
    EXPECT_EQ(P("1/2*q"), RatFun(q_var() * RatQ(Rational(Integer(1), Integer(2)))));
    EXPECT_EQ(P("--x"), x_var());
}

TEST(Cyclotomic, SmallValues) {
    EXPECT_EQ(cyclotomic(1), (PolyQ{-1, 1}));
    EXPECT_EQ(cyclotomic(4), (PolyQ{1, 0, 1}));
    EXPECT_EQ(cyclotomic(6), (PolyQ{1, -1, 1}));
}

TEST(Cyclotomic, ProductOverDivisorsIsQnMinusOne) {
    for (long n = 1; n <= 100; ++n) {
        PolyQ prod(Rational(1));
        for (long d = 1; d <= n; ++d)
            if (n % d == 0) prod *= cyclotomic(d);
        EXPECT_EQ(prod, PolyQ::monomial(Rational(1), static_cast<std::size_t>(n)) - PolyQ(Rational(1))) << n;
    }
}

TEST(Cyclotomic, GeneratorIsPrimitive) {
    for (long n = 1; n <= 40; ++n) {
        const Place* v = cyclotomic_place(n);
        CycNum z = CycNum::generator(v);
        EXPECT_TRUE(z.pow(n).is_one()) << n;
        for (long d = 1; d < n; ++d) EXPECT_FALSE(z.pow(d).is_one()) << n << " " << d;
    }
}

TEST(Operators, SigmaExamples) {
    EXPECT_EQ(sigma_q(P("x/(x-1)"), 1), P("q*x/(q*x-1)"));
    RatFun f = P("(q*x^2 + 3)/(x - q)");
    EXPECT_EQ(sigma_q(f, 0), f);
    EXPECT_EQ(sigma_q(P("x^2"), -1), P("x^2/q^2"));
}

TEST(Operators, EulerDerivativeExamples) {
    EXPECT_EQ(dlog_derive(P("x^2")), P("2*x^2"));
    EXPECT_TRUE(dlog_derive(P("(q^2+1)/(q-3)")).is_zero());
    EXPECT_EQ(dlog_derive(P("1/x")), P("-1/x"));
}

TEST(Reduction, Examples) {
    CycRatFun one = reduce_at_place(P("q^3"), cyclotomic_place(3));
    EXPECT_TRUE(one.is_one());
    EXPECT_THROW(reduce_at_place(P("1/(q-1)"), cyclotomic_place(1)), BadReduction);
    // q^2 + q + 1 = 1*(q^2 + 1) + q
    CycRatFun r = reduce_at_place(P("(q^2+q+1)*x"), cyclotomic_place(4));
    const Place* v = cyclotomic_place(4);
    EXPECT_EQ(r, CycRatFun(CycPoly::monomial(CycNum::generator(v), 1)));
}

TEST(Reduction, ContentCancellationAllowsReduction) {
    // ((q-1)x + 1)/((q-1)x + 2): the coefficientwise route divides by zero at
    // q = 1 but the value is 1/2 there.
    RatFun f = P("((q-1)*x + 1)/((q-1)*x + 2)");
    CycRatFun r = reduce_at_place(f, cyclotomic_place(1));
    EXPECT_TRUE(r.is_constant());
    EXPECT_EQ(r.constant_value().rational_value(), Rational(Integer(1), Integer(2)));
    try {
        reduce_at_place(P("x/(q-1) + 1"), cyclotomic_place(1));
        FAIL();
    } catch (const BadReduction& e) {
        EXPECT_EQ(e.witness(), "q - 1");
    }
}

TEST(Properties, SigmaCommutesWithEulerDerivative) {
    gen::Gen g(11);
    for (int i = 0; i < 60; ++i) {
        RatFun f = g.ratfun(3, 2, 4);
        long t = g.integer(-2, 3);
        EXPECT_EQ(sigma_q(dlog_derive(f), t), dlog_derive(sigma_q(f, t))) << to_string(f);
    }
}

TEST(Properties, PrintParseRoundTrip) {
    gen::Gen g(12);
    for (int i = 0; i < 100; ++i) {
        RatFun f = g.ratfun(3, 2, 5);
        if (g.coin()) f = f * RatFun(g.ratq(2, 3));
        std::string s = to_string(f);
        EXPECT_EQ(parse_ratfun(s), f) << s;
    }
    for (const char* s : {"0", "1", "-1", "1/2", "-x", "x/q", "q^3/(q - 1)", "-1/(2*x)", "(1/2*x)/(x - q)"})
        EXPECT_EQ(parse_ratfun(to_string(P(s))), P(s)) << s;
}

TEST(Properties, FieldLaws) {
    gen::Gen g(13);
    for (int i = 0; i < 60; ++i) {
        RatFun f = g.ratfun(2, 2, 4), h = g.ratfun(2, 2, 4);
        if (h.is_zero()) continue;
        EXPECT_EQ((f * h) / h, f);
        EXPECT_EQ((f + h) - h, f);
        EXPECT_EQ(RatFun(f.num(), f.den()), f) << "normalization is idempotent";
        EXPECT_EQ(f * (h + RatFun(1)), f * h + f);
    }
}

TEST(Properties, ReductionIsARingHomomorphism) {
    gen::Gen g(14);
    int checked = 0;
    for (int i = 0; i < 120; ++i) {
        RatFun f = g.ratfun(2, 3, 4), h = g.ratfun(2, 3, 4);
        long n = g.integer(1, 12);
        const Place* v = cyclotomic_place(n);
        if (!reduces_at(f, v) || !reduces_at(h, v)) continue;
        CycRatFun rf = reduce_at_place(f, v), rh = reduce_at_place(h, v);
        EXPECT_EQ(reduce_at_place(f + h, v), rf + rh);
        EXPECT_EQ(reduce_at_place(f * h, v), rf * rh);
        ++checked;
    }
    EXPECT_GT(checked, 60);
}

TEST(CyclotomicPolys, IntegerProductAndDivisionMatchReference) {
    gen::Gen g(15);
    for (int i = 0; i < 80; ++i) {
        const Place* v = cyclotomic_place(g.integer(1, 12));
        CycPoly a = random_cyc_poly(g, v, 5), b = random_cyc_poly(g, v, 3);
        if (b.is_zero()) continue;
        EXPECT_EQ(a * b, naive_product(a, b));
        CycPoly m = b.monic();
        EXPECT_EQ(divmod(a, m), naive_divmod(a, m));
        EXPECT_EQ(divmod(a, b), naive_divmod(a, b));
    }
}

TEST(CyclotomicPolys, ModularGcdMatchesEuclid) {
    gen::Gen g(16);
    for (int i = 0; i < 60; ++i) {
        const Place* v = cyclotomic_place(g.integer(1, 12));
        CycPoly common = random_cyc_poly(g, v, 2);
        if (common.is_zero()) continue;
        CycPoly a = random_cyc_poly(g, v, 3) * common, b = random_cyc_poly(g, v, 3) * common;
        EXPECT_EQ(gcd(a, b), naive_gcd(a, b)) << i;
        if (auto m = modular_gcd(a, b)) EXPECT_EQ(*m, naive_gcd(a, b)) << i;
    }
}

TEST(Modular, RationalReconstruction) {
    const Integer m("1000000007");
    for (auto [n, d] : std::vector<std::pair<long, long>>{{1, 3}, {-5, 7}, {22, 1}, {-1, 200}}) {
        const std::uint64_t u = *modular::reduce(Rational(Integer(n), Integer(d)), 1000000007);
        auto r = modular::rational_reconstruction(Integer(static_cast<unsigned long>(u)), m);
        ASSERT_TRUE(r);
        EXPECT_EQ(*r, Rational(Integer(n), Integer(d)));
    }
    EXPECT_EQ(*modular::rational_reconstruction(Integer(500000003), m), Rational(Integer(-1), Integer(2)));
    EXPECT_FALSE(modular::rational_reconstruction(Integer(8), Integer(101)));
}
