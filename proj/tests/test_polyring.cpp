#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "owcad/parse.hpp"
#include "owcad/polyalg.hpp"

using namespace owcad;

namespace {

struct Ring {
  Context ctx;
  explicit Ring(std::vector<std::string> names) : ctx(std::move(names)) {}
  MPoly operator()(std::string_view s) const { return parse_poly(s, ctx); }
  Var v(std::string_view s) const { return ctx.var(s); }
  std::string str(const MPoly& f) const { return to_string(f, ctx); }
};

}  // namespace

TEST(Arith, DifferenceOfSquares) {
  Ring R({"x"});
  EXPECT_EQ(R("(x+1)*(x-1)"), R("x^2-1"));
  EXPECT_EQ(R("x^2-1") + MPoly(1), R("x^2-1"));
}

TEST(Arith, BinomialExpansion) {
  Ring R({"x", "y"});
  EXPECT_EQ(R("(x+y)^2"), R("x^2+2*x*y+y^2"));
  EXPECT_EQ(R.str(R("(x+y)^2")), "y^2+2*y*x+x^2");
}

TEST(Arith, ContextMismatchThrows) {
  Ring A({"x"}), B({"x", "y"});
  EXPECT_THROW(A("x") + B("x"), ContextMismatch);
}

TEST(Level, Basic) {
  Ring R({"x1", "x2", "x3"});
  EXPECT_EQ(R("x1^2*x3+x2").level(), 3u);
  EXPECT_EQ(R("7").level(), 0u);
  EXPECT_EQ(R("x2^4-1").level(), 2u);
  EXPECT_EQ(MPoly(3).level(), 0u);
}

TEST(LcDerivative, Basic) {
  Ring R({"a", "b", "c", "x"});
  EXPECT_EQ(lc(R("a*x^4+b*x^2+c"), R.v("x")), R("a"));
  EXPECT_EQ(derivative(R("x^3"), R.v("x")), R("3*x^2"));
  EXPECT_EQ(lc(R("a+b"), R.v("x")), R("a+b"));
}

TEST(Gcd, Basic) {
  Ring R({"x"});
  EXPECT_EQ(gcd(R("(x^2-1)*(x+2)"), R("(x^2-1)*(x-5)")), R("x^2-1"));
  EXPECT_EQ(gcd(R("x+1"), R("x-1")), R("1"));
  EXPECT_EQ(gcd(R("-2*x-2"), MPoly(1)), R("x+1"));
  EXPECT_THROW(gcd(MPoly(1), MPoly(1)), std::domain_error);
}

TEST(Gcd, MultivariatePlanted) {
  Ring R({"x", "y", "z"});
  MPoly g = R("x*y-z^2+3");
  MPoly a = g * R("x^2+y+1") * R("z-x");
  MPoly b = g * R("y^3-x*z") * R("z-x");
  EXPECT_EQ(gcd(a, b), normalize(g * R("z-x")));
}

TEST(Gcd, SeededPlantedFactors) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 40; ++t) {
    MPoly g = oracle::random_poly(rng, 3, 3, 4);
    MPoly a = oracle::random_poly(rng, 3, 3, 4), b = oracle::random_poly(rng, 3, 3, 4);
    if (g.is_zero() || a.is_zero() || b.is_zero()) continue;
    MPoly d = gcd(g * a, g * b);
    EXPECT_TRUE(divides(d, g * a));
    EXPECT_TRUE(divides(d, g * b));
    if (!g.is_constant()) EXPECT_TRUE(divides(normalize(primitive(g)), d) || divides(primitive(g), d));
    // cofactors are coprime
    MPoly ca = divide(g * a, d), cb = divide(g * b, d);
    EXPECT_TRUE(gcd(ca, cb).is_constant());
  }
}

TEST(Resultant, SylvesterSmall) {
  Ring R({"x", "y"});
  EXPECT_EQ(resultant(R("x^2-2"), R("x^2-3"), R.v("x")), R("1"));
  EXPECT_EQ(oracle::sylvester_resultant(R("x^2-2"), R("x^2-3"), R.v("x")), R("1"));
  EXPECT_EQ(resultant(R("x-y"), R("x+y"), R.v("x")), R("2*y"));
  EXPECT_THROW(resultant(R("y"), R("y+1"), R.v("x")), std::domain_error);
}

TEST(Resultant, QuarticSymbolicIdentity) {
  Ring R({"a", "b", "c", "d", "e", "f", "y", "x"});
  MPoly F = R("a*x^4+b*x^2*y^2+c*y^4+d*x^2+e*y^2+f");
  MPoly F1 = R("a*(4*a*c*y^4+4*a*e*y^2+4*a*f-b^2*y^4-2*b*y^2*d-d^2)");
  MPoly expect = R("16*(c*y^4+e*y^2+f)") * F1 * F1;
  EXPECT_EQ(resultant(F, derivative(F, R.v("x")), R.v("x")), expect);
}

TEST(Resultant, MatchesSylvesterOracleOnSeededCorpus) {
  std::mt19937_64 rng(2024);
  int checked = 0;
  for (int t = 0; t < 220; ++t) {
    unsigned nv = 1 + t % 3;
    MPoly a = oracle::random_poly(rng, nv, 1 + t % 6, 2 + t % 5);
    MPoly b = oracle::random_poly(rng, nv, 1 + (t / 3) % 6, 2 + (t / 2) % 5);
    Var v{nv};
    if (a.degree(v) == 0 && b.degree(v) == 0) continue;
    if (a.is_zero() || b.is_zero()) continue;
    MPoly want = oracle::sylvester_resultant(a, b, v);
    ASSERT_EQ(subresultant_resultant(a, b, v), want) << t;
    ASSERT_EQ(resultant(a, b, v), want) << t;
    ++checked;
  }
  EXPECT_GE(checked, 200);
}

TEST(Resultant, ModularMatchesSylvesterOracle) {
  std::mt19937_64 rng(31);
  int checked = 0;
  for (int t = 0; t < 80; ++t) {
    const unsigned nv = 1 + t % 2;
    const Var v{nv};
    MPoly a = oracle::random_poly(rng, nv, 3 + t % 8, 3 + t % 6, t % 4 ? 9 : 100000);
    MPoly b = oracle::random_poly(rng, nv, 2 + t % 7, 2 + t % 5);
    if (t % 5 == 0 && nv == 2) {
      // leading coefficient vanishing at the first evaluation points
      Ring R({"x", "y"});
      a = a + R("x*(x-1)*(x-2)*y^9");
    }
    if (a.degree(v) == 0 || b.degree(v) == 0) continue;
    ASSERT_EQ(modular_resultant(a, b, v), oracle::sylvester_resultant(a, b, v)) << t;
    ++checked;
  }
  EXPECT_GE(checked, 60);
  Ring R({"x", "y", "z"});
  EXPECT_THROW(modular_resultant(R("x*y+z"), R("y^2-x"), R.v("y")), std::invalid_argument);
  // exact multiple: the resultant vanishes
  EXPECT_TRUE(modular_resultant(R("(y^2-x)*(y+3)"), R("(y^2-x)*(y-x)"), R.v("y")).is_zero());
}

TEST(Resultant, ZeroIffCommonFactor) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 30; ++t) {
    MPoly g = oracle::random_poly(rng, 2, 2, 3) + MPoly::variable(2, Var{2});
    MPoly a = oracle::random_poly(rng, 2, 2, 3), b = oracle::random_poly(rng, 2, 2, 3);
    if (g.degree(Var{2}) == 0) continue;
    EXPECT_TRUE(resultant(g * a, g * b, Var{2}).is_zero());
    MPoly p = a + MPoly::variable(2, Var{2}, 2), q = b + MPoly::variable(2, Var{2}, 3);
    bool common = !gcd(p, q).is_constant() && gcd(p, q).involves(Var{2});
    EXPECT_EQ(resultant(p, q, Var{2}).is_zero(), common);
  }
}

TEST(Discriminant, Examples) {
  Ring R({"x1", "x2"});
  MPoly f = R("x1-x2^4+10*x2^3-35*x2^2+50*x2-24");
  EXPECT_EQ(discriminant(f, R.v("x2")), R("-16*(16*x1-9)*(x1+1)^2"));
  Ring Q({"a", "b", "c", "x"});
  EXPECT_EQ(discriminant(Q("a*x^2+b*x+c"), Q.v("x")), Q("b^2-4*a*c"));
  EXPECT_EQ(discriminant(Q("x^2-2"), Q.v("x")), Q("8"));
  EXPECT_THROW(discriminant(Q("a*x+b"), Q.v("x")), std::domain_error);
}

TEST(Discriminant, ConsistentWithResultant) {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 60; ++t) {
    MPoly f = oracle::random_poly(rng, 3, 5, 5);
    // also exercise polynomials in x3^2
    if (t % 3 == 0) {
      auto c = coefficients(f, Var{3});
      std::vector<MPoly> d(2 * c.size() - 1, MPoly(3));
      for (std::size_t i = 0; i < c.size(); ++i) d[2 * i] = c[i];
      f = from_coefficients(d, Var{3}, 3);
    }
    if (f.degree(Var{3}) < 2) continue;
    MPoly lhs = lc(f, Var{3}) * discriminant(f, Var{3});
    MPoly r = oracle::sylvester_resultant(f, derivative(f, Var{3}), Var{3});
    EXPECT_TRUE(lhs == r || lhs == -r) << t;
  }
}

TEST(Sqf, ParitySplit) {
  Ring R({"x"});
  auto d = sqf_decompose(R("(x+1)^3*(x-1)^2"));
  EXPECT_EQ(d.odd_part(), std::vector<MPoly>{R("x+1")});
  EXPECT_EQ(d.even_part(), std::vector<MPoly>{R("x-1")});
  auto e = sqf_decompose(R("x^2+1"));
  EXPECT_EQ(e.odd_part(), std::vector<MPoly>{R("x^2+1")});
  EXPECT_TRUE(e.even_part().empty());
  EXPECT_TRUE(sqf_decompose(R("5")).factors.empty());
  EXPECT_EQ(sqrfree(R("5")), R("1"));
  EXPECT_THROW(sqf_decompose(MPoly(1)), std::domain_error);
}

TEST(Sqf, DiscriminantExample) {
  Ring R({"x1"});
  auto d = sqf_decompose(R("-16*(16*x1-9)*(x1+1)^2"));
  EXPECT_EQ(d.unit_sign * d.content, Int(-16));
  EXPECT_EQ(d.odd_part(), std::vector<MPoly>{R("16*x1-9")});
  EXPECT_EQ(d.even_part(), std::vector<MPoly>{R("x1+1")});
}

TEST(Sqf, RoundTripSeeded) {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 40; ++t) {
    MPoly h = MPoly::constant(3, t % 2 ? -6 : 4);
    for (int k = 0; k < 3; ++k) {
      MPoly p = oracle::random_poly(rng, 3, 2, 3);
      if (p.is_zero()) continue;
      h *= p.pow(1 + (t + k) % 3);
    }
    if (h.total_degree() > 8 || h.is_zero()) continue;
    auto d = sqf_decompose(h);
    MPoly back = MPoly::constant(3, d.content * d.unit_sign);
    for (const auto& f : d.factors) back *= f.poly.pow(f.multiplicity);
    EXPECT_EQ(back, h) << t;
    MPoly s = d.sqrfree(3);
    for (Var v : h.variables()) {
      if (s.degree(v) == 0) continue;
      EXPECT_TRUE(gcd(s, derivative(s, v)).is_constant() || !gcd(s, derivative(s, v)).involves(v));
    }
    EXPECT_TRUE(is_squarefree(s));
    for (std::size_t i = 0; i < d.factors.size(); ++i)
      for (std::size_t j = i + 1; j < d.factors.size(); ++j)
        EXPECT_TRUE(gcd(d.factors[i].poly, d.factors[j].poly).is_constant());
  }
}

TEST(CoprimeBasis, ExponentsReassemble) {
  Ring R({"x", "y"});
  std::vector<MPoly> in{R("(x+y)^2*(x-1)"), R("(x-1)^3*y"), R("x+y")};
  auto b = coprime_basis(in);
  for (std::size_t j = 0; j < in.size(); ++j) {
    MPoly p = MPoly::constant(2, 1);
    for (const auto& e : b) p *= e.poly.pow(e.exponents[j]);
    EXPECT_EQ(normalize(p), normalize(in[j]));
  }
}

TEST(Evaluate, Substitution) {
  Ring R({"x", "y"});
  MPoly f = R("x^2+y^2-1");
  QPoly q = evaluate(f, {{R.v("y"), Rat(0)}});
  EXPECT_EQ(q.num, R("x^2-1"));
  EXPECT_EQ(q.den, 1);
  EXPECT_EQ(evaluate_value(f, {{R.v("x"), Rat(3, 5)}, {R.v("y"), Rat(4, 5)}}), 0);
  EXPECT_EQ(evaluate(f, {}).num, f);
  EXPECT_EQ(evaluate_value(R("x+1"), {{R.v("x"), Rat(1, 2)}, {R.v("y"), Rat(7)}}), Rat(3, 2));
}

TEST(Normalize, PositiveLexLeading) {
  Ring R({"x1", "x2"});
  EXPECT_EQ(normalize(R("-4*x2+6*x1")), R("2*x2-3*x1"));
}

TEST(Parse, Errors) {
  Ring R({"x1", "x2"});
  EXPECT_THROW(R("x1 + y"), UndeclaredVariable);
  try {
    R("x1 +\n  * x2");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 3u);
  }
  EXPECT_EQ(R("123456789012345678901234567890*x1"),
            MPoly::constant(2, Int("123456789012345678901234567890")) * R("x1"));
}
