#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "owcad/parse.hpp"
#include "owcad/polyalg.hpp"
#include "owcad/realroot.hpp"

using namespace owcad;

namespace {

UPoly up(std::string_view s) {
  static const Context ctx({"x"});
  return to_upoly(parse_poly(s, ctx), Var{1});
}

UPoly random_upoly(std::mt19937_64& rng, int deg) {
  std::uniform_int_distribution<long> c(-20, 20);
  std::vector<Int> v(deg + 1);
  for (auto& x : v) x = c(rng);
  if (v.back() == 0) v.back() = 1;
  // sprinkle rational roots so exact midpoints and repeated roots occur
  UPoly p(std::move(v));
  if (rng() % 3 == 0) p = p * UPoly(std::vector<Int>{-1, 2});
  if (rng() % 4 == 0) p = p * UPoly(std::vector<Int>{3, 1}) * UPoly(std::vector<Int>{3, 1});
  if (rng() % 5 == 0) p = p * UPoly(std::vector<Int>{0, 1});
  return p;
}

}  // namespace

TEST(Isolate, SqrtTwo) {
  auto l = isolate(up("x^2-2"));
  ASSERT_EQ(l.roots.size(), 2u);
  for (const auto& r : l.roots) {
    ASSERT_FALSE(r.exact());
    // sign-change oracle: the isolating endpoints straddle the root
    EXPECT_LT(sign_at(up("x^2-2"), r.lo) * sign_at(up("x^2-2"), r.hi), 0);
  }
  EXPECT_LE(l.roots[0].hi, l.roots[1].lo);
}

TEST(Isolate, NoRealRoots) { EXPECT_TRUE(isolate(up("x^2+1")).roots.empty()); }

TEST(Isolate, RepeatedRootsAreDistinct) {
  auto l = isolate(up("(x-1)^2*(x+3)"));
  ASSERT_EQ(l.roots.size(), 2u);
  std::vector<RealRoot> rr = real_roots(up("(x-1)^2*(x+3)"));
  EXPECT_EQ(rr[0].compare(Rat(-3)), 0);
  EXPECT_EQ(rr[1].compare(Rat(1)), 0);
}

TEST(Isolate, ZeroPolynomialThrows) { EXPECT_THROW(isolate(UPoly()), std::domain_error); }

TEST(Count, Examples) {
  EXPECT_EQ(count_real_roots(up("x^3-x")), 3u);
  EXPECT_EQ(count_real_roots(up("x^4+1")), 0u);
  EXPECT_EQ(count_real_roots(up("(16*x-9)*(x+1)")), 2u);
}

TEST(Count, MatchesSturmOracle) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 300; ++t) {
    UPoly p = random_upoly(rng, 1 + t % 12);
    ASSERT_EQ(count_real_roots(p), oracle::sturm_count(p.c)) << t;
  }
}

TEST(Isolate, IntervalsDisjointAndSorted) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 100; ++t) {
    UPoly p = random_upoly(rng, 2 + t % 10);
    auto roots = real_roots(p);
    for (std::size_t i = 0; i + 1 < roots.size(); ++i) EXPECT_LE(roots[i].hi(), roots[i + 1].lo());
    for (auto& r : roots) {
      if (r.exact()) {
        EXPECT_EQ(sign_at(p, r.lo()), 0);
      } else {
        r.refine_to(Rat(1, 1000));
        EXPECT_LE(r.hi() - r.lo(), Rat(1, 1000));
      }
    }
  }
}

TEST(SimplestRational, Rule) {
  EXPECT_EQ(simplest_between(Rat(-1), Rat(1)), 0);
  EXPECT_EQ(simplest_between(Rat(0), Rat(1)), Rat(1, 2));
  EXPECT_EQ(simplest_between(Rat(-1), Rat(0)), Rat(-1, 2));
  EXPECT_EQ(simplest_between(Rat(1, 3), Rat(1, 2)), Rat(2, 5));
  EXPECT_EQ(simplest_between(Rat(3, 2), Rat(7, 2)), 2);
  EXPECT_EQ(simplest_between(Rat(-27, 32), Rat(0)), Rat(-1, 2));
  EXPECT_TRUE(simpler(Rat(1, 2), Rat(-1, 2)));
  EXPECT_FALSE(simpler(Rat(-1, 2), Rat(1, 2)));
}

TEST(SpOne, Examples) {
  EXPECT_EQ(sp_one(up("x^2-1"), up("1")), (std::vector<Rat>{-2, 0, 2}));
  EXPECT_EQ(sp_one(up("x^2-1"), up("x")), (std::vector<Rat>{-2, Rat(1, 2), 2}));
  auto c = sp_one(up("5"), up("x-1"));
  ASSERT_EQ(c.size(), 1u);
  EXPECT_NE(c[0], 1);
  EXPECT_THROW(sp_one(UPoly(), up("1")), std::domain_error);
  EXPECT_THROW(sp_one(up("x"), UPoly()), std::domain_error);
}

TEST(SpOne, AvoidsGInUnboundedGaps) {
  auto s = sp_one(up("x"), up("(x-1)*(x+1)*(x-2)"));
  EXPECT_EQ(s, (std::vector<Rat>{-2, 3}));
  auto w = sp_one(up("1"), up("x*(x-1)"));
  EXPECT_EQ(w, (std::vector<Rat>{-1}));
}

TEST(SpOne, SoundAndComplete) {
  std::mt19937_64 rng(123);
  for (int t = 0; t < 150; ++t) {
    UPoly f = random_upoly(rng, 1 + t % 9);
    UPoly g = random_upoly(rng, 1 + t % 5);
    auto pts = sp_one(f, g);
    ASSERT_EQ(pts.size(), count_real_roots(f) + 1) << t;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      EXPECT_NE(sign_at(f, pts[i]), 0);
      EXPECT_NE(sign_at(g, pts[i]), 0);
      if (i) EXPECT_LT(pts[i - 1], pts[i]);
    }
    // exactly one root of f between consecutive points
    auto roots = real_roots(f);
    for (std::size_t i = 0; i < roots.size(); ++i) {
      EXPECT_LT(roots[i].compare(pts[i + 1]), 0);
      EXPECT_GT(roots[i].compare(pts[i]), 0);
    }
    EXPECT_EQ(pts, sp_one(f, g));
  }
}
