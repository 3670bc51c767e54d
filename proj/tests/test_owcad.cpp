#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "oracles.hpp"
#include "owcad/owcad.hpp"
#include "owcad/parse.hpp"

using namespace owcad;

namespace {

struct Ring {
  Context ctx;
  explicit Ring(std::vector<std::string> names) : ctx(std::move(names)) {}
  MPoly operator()(std::string_view s) const { return parse_poly(s, ctx); }
  Var v(std::string_view s) const { return ctx.var(s); }
};

const char* kSphereTimesPlane = "(x3^2+x2^2+x1^2-1)*(4*x3+3*x2+2*x1-1)";
const char* kQuartic = "x^4-2*x^2*y^2+2*x^2*z^2+y^4-2*y^2*z^2+z^4+2*x^2+2*y^2-4*z^2-4";

Rat value(const MPoly& f, const SamplePoint& p) {
  VarList vars;
  for (unsigned i = 1; i <= p.level(); ++i) vars.push_back(Var{i});
  return evaluate_value(f, vars, p.coords);
}

// Connected components of f != 0 seen through a rational grid. Two grid
// nodes are joined when the segment between them misses the zero set of f
// (checked exactly with Sturm sequences), so labels never merge distinct
// components; a coarse grid may split one.
class GridRegions {
 public:
  GridRegions(const MPoly& f, unsigned dim, const Rat& radius, unsigned cells)
      : f_(f), dim_(dim), radius_(radius), cells_(cells) {
    std::size_t total = 1;
    for (unsigned k = 0; k < dim; ++k) total *= cells + 1;
    parent_.resize(total);
    std::iota(parent_.begin(), parent_.end(), 0);
    alive_.assign(total, false);
    for (std::size_t i = 0; i < total; ++i) alive_[i] = sgn(value_at(node(i))) != 0;
    for (std::size_t i = 0; i < total; ++i) {
      if (!alive_[i]) continue;
      std::size_t stride = 1;
      for (unsigned k = 0; k < dim; ++k) {
        std::size_t idx = (i / stride) % (cells + 1);
        if (idx < cells && alive_[i + stride] && clear(node(i), node(i + stride))) unite(i, i + stride);
        stride *= cells + 1;
      }
    }
  }

  /// Label of the component containing p, or -1 when no nearby node is
  /// reachable by a clear segment.
  long label(const std::vector<Rat>& p) {
    std::vector<long> base(dim_);
    Rat h = 2 * radius_ / cells_;
    for (unsigned k = 0; k < dim_; ++k) {
      Rat t = (p[k] + radius_) / h;
      base[k] = floor_rat(t).get_si();
    }
    // try the 2^dim corners of the enclosing cell and their neighbours
    std::vector<long> off(dim_, -1);
    while (true) {
      std::size_t id = 0, stride = 1;
      bool ok = true;
      for (unsigned k = 0; k < dim_; ++k) {
        long c = base[k] + off[k];
        if (c < 0 || c > static_cast<long>(cells_)) ok = false;
        id += static_cast<std::size_t>(std::max(c, 0L)) * stride;
        stride *= cells_ + 1;
      }
      if (ok && alive_[id] && clear(p, node(id))) return static_cast<long>(find(id));
      unsigned k = 0;
      while (k < dim_ && off[k] == 2) off[k++] = -1;
      if (k == dim_) return -1;
      ++off[k];
    }
  }

  bool clear_segment(const std::vector<Rat>& p, const std::vector<Rat>& q) const { return clear(p, q); }

 private:
  std::vector<Rat> node(std::size_t i) const {
    std::vector<Rat> p(dim_);
    Rat h = 2 * radius_ / cells_;
    for (unsigned k = 0; k < dim_; ++k) {
      p[k] = -radius_ + h * static_cast<long>(i % (cells_ + 1));
      i /= cells_ + 1;
    }
    return p;
  }

  Rat value_at(const std::vector<Rat>& p) const {
    VarList vars;
    for (unsigned i = 1; i <= dim_; ++i) vars.push_back(Var{i});
    return evaluate_value(f_, vars, p);
  }

  // f restricted to the segment p + t (q - p), as a polynomial in t.
  std::vector<Rat> restrict(const std::vector<Rat>& p, const std::vector<Rat>& q) const {
    std::vector<Rat> out(1, Rat(0));
    for (std::size_t i = 0; i < f_.size(); ++i) {
      std::vector<Rat> term{Rat(f_.coef(i))};
      for (unsigned k = 0; k < dim_; ++k) {
        for (Exp e = 0; e < f_.exp(i, Var{k + 1}); ++e) {
          std::vector<Rat> next(term.size() + 1, Rat(0));
          for (std::size_t j = 0; j < term.size(); ++j) {
            next[j] += term[j] * p[k];
            next[j + 1] += term[j] * (q[k] - p[k]);
          }
          term = std::move(next);
        }
      }
      if (term.size() > out.size()) out.resize(term.size(), Rat(0));
      for (std::size_t j = 0; j < term.size(); ++j) out[j] += term[j];
    }
    return out;
  }

  bool clear(const std::vector<Rat>& p, const std::vector<Rat>& q) const {
    if (p == q) return sgn(value_at(p)) != 0;
    auto r = restrict(p, q);
    if (r[0] == 0) return false;
    return oracle::sturm_count_between(r, Rat(0), Rat(1)) == 0;
  }

  std::size_t find(std::size_t i) {
    while (parent_[i] != i) i = parent_[i] = parent_[parent_[i]];
    return i;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

  MPoly f_;
  unsigned dim_;
  Rat radius_;
  unsigned cells_;
  std::vector<std::size_t> parent_;
  std::vector<bool> alive_;
};

// Every region holding a reference sample also holds a candidate sample.
::testing::AssertionResult covers(const MPoly& f, const std::vector<SamplePoint>& reference,
                                  const std::vector<SamplePoint>& candidate, unsigned max_cells) {
  const unsigned dim = f.nvars();
  Rat radius = 1;
  for (const auto* set : {&reference, &candidate})
    for (const auto& p : *set)
      for (const auto& c : p.coords) radius = std::max(radius, Rat(ceil_rat(abs(c)) + 1));
  for (unsigned cells = 8; cells <= max_cells; cells *= 2) {
    GridRegions g(f, dim, radius, cells);
    std::set<long> have;
    for (const auto& p : candidate) have.insert(g.label(p.coords));
    bool ok = true;
    for (const auto& p : reference) {
      long l = g.label(p.coords);
      if (l >= 0 && have.count(l)) continue;
      // a straight segment to some candidate also proves a shared region
      bool joined = std::any_of(candidate.begin(), candidate.end(),
                                [&](const SamplePoint& c) { return g.clear_segment(p.coords, c.coords); });
      if (!joined) ok = false;
    }
    if (ok) return ::testing::AssertionSuccess();
  }
  return ::testing::AssertionFailure() << "some region of f != 0 has no candidate sample";
}

}  // namespace

TEST(OpenWeakCad, SphereTimesPlaneGolden) {
  Ring R({"x1", "x2", "x3"});
  OwcadOutput out = open_weak_cad(R(kSphereTimesPlane));
  ASSERT_EQ(out.h.size(), 2u);
  EXPECT_EQ(out.h[0], normalize(R("(x1-1)*(x1+1)*(29*x1^2-4*x1-24)*((20*x1^2-4*x1-15)^2+(13*x1^2-4*x1-8)^2)")));
  EXPECT_EQ(out.h[1], normalize(R("(x2^2+x1^2-1)*(25*x2^2+12*x2*x1+20*x1^2-6*x2-4*x1-15)")));
  // j = 1 branches: t = 2 then t = 3
  ASSERT_EQ(out.branch_factors[0].size(), 2u);
  EXPECT_EQ(out.branch_factors[0][0], normalize(R("(x1-1)*(x1+1)*(29*x1^2-4*x1-24)*(13*x1^2-4*x1-8)")));
  EXPECT_EQ(out.branch_factors[0][1], normalize(R("(x1-1)*(x1+1)*(29*x1^2-4*x1-24)*(20*x1^2-4*x1-15)")));
  EXPECT_EQ(out.branch_factors[1][0], normalize(R("(x2^2+x1^2-1)*(25*x2^2+12*x2*x1+20*x1^2-6*x2-4*x1-15)")));
  EXPECT_EQ(out.hp[0], normalize(R("(x1-1)*(x1+1)*(29*x1^2-4*x1-24)")));
}

TEST(OpenWeakCad, QuarticInOneVariable) {
  Ring R({"x1", "x2"});
  OwcadOutput out = open_weak_cad(R("x1-x2^4+10*x2^3-35*x2^2+50*x2-24"));
  EXPECT_EQ(out.h[0], R("16*x1^2+7*x1-9"));  // (16x1-9)(x1+1)
  EXPECT_EQ(count_real_roots(out.h[0]), 2u);
}

TEST(OpenWeakCad, DefiniteInputHasNoRealCut) {
  Ring R({"x1", "x2"});
  OwcadOutput out = open_weak_cad(R("x1^2+x2^2+1"));
  // Bp = 4(x1^2+1): nonconstant but without real zeros
  EXPECT_EQ(out.h[0], R("x1^2+1"));
  EXPECT_EQ(count_real_roots(out.h[0]), 0u);
}

TEST(OpenWeakCad, UnivariateRejected) {
  Ring R({"x"});
  EXPECT_THROW(open_weak_cad(R("x^2-1")), std::invalid_argument);
}

TEST(OpenWeakCad, ZeroSetOfHIsCommonZeroSetOfBranches) {
  std::mt19937_64 rng(41);
  Ring R({"x1", "x2", "x3"});
  int checked = 0;
  for (int trial = 0; trial < 12; ++trial) {
    MPoly f = oracle::random_poly(rng, 3, 3, 5, 5);
    if (f.level() != 3 || f.degree(Var{2}) == 0) continue;
    OwcadOutput out = open_weak_cad(f);
    // j = 1: univariate, compare with the gcd of the branches
    MPoly g(3);
    for (const auto& b : out.branch_factors[0]) g = gcd(g, b);
    if (!g.is_constant()) EXPECT_TRUE(divides(g, out.h[0]));
    EXPECT_EQ(count_real_roots(out.h[0].is_constant() ? R("1") : out.h[0]),
              count_real_roots(g.is_constant() ? R("1") : g));
    // hp divides every branch
    for (std::size_t j = 0; j < out.hp.size(); ++j)
      for (const auto& b : out.branch_factors[j]) EXPECT_TRUE(divides(out.hp[j], b));
    ++checked;
  }
  EXPECT_GE(checked, 6);
}

TEST(OpenCad, Counts) {
  Ring R1({"a", "b", "c", "x"});
  EXPECT_EQ(open_cad(R1("a*x^3+(a+b+c)*x^2+(a^2+b^2+c^2)*x+a^3+b^3+c^3-1")).size(), 132u);
  Ring R2({"x", "y", "z"});
  EXPECT_EQ(open_cad(R2(kQuartic)).size(), 113u);
  Ring R3({"x"});
  auto s = open_cad(R3("x^2-1"));
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0].coords[0], Rat(-2));
  EXPECT_EQ(s[1].coords[0], Rat(0));
  EXPECT_EQ(s[2].coords[0], Rat(2));
}

TEST(OpenCad, SamplesAvoidZeroSet) {
  Ring R({"x1", "x2", "x3"});
  MPoly f = R(kSphereTimesPlane);
  for (const auto& p : open_cad(f)) EXPECT_NE(value(f, p), 0);
}

TEST(ReducedOpenCad, SphereTimesPlaneFromGivenBase) {
  Ring R({"x1", "x2", "x3"});
  std::vector<SamplePoint> base;
  for (Rat r : {Rat(-2), Rat(-27, 32), Rat(0), Rat(63, 64), Rat(2)}) base.push_back(SamplePoint{{r}});
  LiftStats stats;
  auto pts = reduced_open_cad(R(kSphereTimesPlane), 1, base, &stats);
  EXPECT_EQ(stats.per_level, (std::vector<std::size_t>{5, 13, 36}));
  EXPECT_EQ(pts.size(), 36u);
}

TEST(ReducedOpenCad, SphereTimesPlaneOwnBase) {
  Ring R({"x1", "x2", "x3"});
  LiftStats stats;
  auto pts = reduced_open_cad(R(kSphereTimesPlane), 1, std::nullopt, &stats);
  EXPECT_EQ(stats.per_level, (std::vector<std::size_t>{5, 13, 36}));
}

TEST(ReducedOpenCad, HigherBaseLevel) {
  Ring R({"x1", "x2", "x3"});
  MPoly f = R(kSphereTimesPlane);
  auto pts = reduced_open_cad(f, 2);
  for (const auto& p : pts) EXPECT_NE(value(f, p), 0);
  EXPECT_TRUE(covers(f, open_cad(f), pts, 16));
}

TEST(ReducedOpenCad, DefiniteTopLevel) {
  Ring R({"x", "y"});
  LiftStats stats;
  auto pts = reduced_open_cad(R("y^2+x^2+1"), 1, std::nullopt, &stats);
  EXPECT_EQ(pts.size(), 1u);
}

TEST(ReducedOpenCad, BadLevelRejected) {
  Ring R({"x", "y"});
  EXPECT_THROW(reduced_open_cad(R("x*y-1"), 2), std::invalid_argument);
  EXPECT_THROW(reduced_open_cad(R("x*y-1"), 0), std::invalid_argument);
}

TEST(OpenSp, EmptyAndTrivial) {
  ProjectionSet L(2);
  EXPECT_TRUE(open_sp(L, {}).empty());
  ProjectionSet same(1);
  std::vector<SamplePoint> s{SamplePoint{{Rat(1)}}};
  EXPECT_EQ(open_sp(same, s), s);
}

TEST(OpenSp, DegenerateFiberWithoutGapThrows) {
  Ring R({"x", "y"});
  ProjectionSet L(2);
  L.add_f({R("x*y-1")});
  try {
    open_sp(L, {SamplePoint{{Rat(0)}}});
    // x*y - 1 at x = 0 is the constant -1, not degenerate
  } catch (...) {
    FAIL();
  }
  ProjectionSet M(2);
  M.f[2] = {R("x*y-x")};
  EXPECT_THROW(open_sp(M, {SamplePoint{{Rat(0)}}}), DegenerateFiber);
}

TEST(OpenSp, DegenerateFiberIsPerturbed) {
  Ring R({"x", "y"});
  // the middle gap of x^2 - 1 first offers x = 0, where x*y - x vanishes
  ProjectionSet L(2);
  L.f[1] = {R("x^2-1")};
  L.f[2] = {R("x*y-x")};
  LiftStats stats;
  auto pts = open_sample(L, &stats);
  EXPECT_EQ(stats.perturbations, 1u);
  ASSERT_EQ(pts.size(), 6u);
  EXPECT_GT(pts[2].coords[0], Rat(-1));
  EXPECT_LT(pts[2].coords[0], Rat(1));
  EXPECT_NE(pts[2].coords[0], Rat(0));
  EXPECT_EQ(pts[2].coords[0], pts[3].coords[0]);
}

TEST(OpenSp, PerturbationChecksEveryFactor) {
  Ring R({"x", "y"});
  // every rational x in (-1, 1) makes the fiber vanish only at 0, but the
  // perturbed point is tried against both factors
  ProjectionSet L(2);
  L.f[1] = {R("x^2-1")};
  L.f[2] = {R("x*y-x"), R("y-1")};
  EXPECT_EQ(open_sample(L).size(), 6u);
}

TEST(HpTwo, Counts) {
  Ring R({"x", "y", "z"});
  MPoly f = R(kQuartic);
  auto pts = hp_two(f);
  EXPECT_EQ(pts.size(), 87u);
  for (const auto& p : pts) EXPECT_NE(value(f, p), 0);
}

TEST(HpTwo, CubicExampleDominatedByOpenCad) {
  Ring R({"a", "b", "c", "x"});
  MPoly f = R("a*x^3+(a+b+c)*x^2+(a^2+b^2+c^2)*x+a^3+b^3+c^3-1");
  auto pts = hp_two(f);
  EXPECT_LE(pts.size(), 132u);
  for (const auto& p : pts) EXPECT_NE(value(f, p), 0);
}

TEST(HpTwo, UnivariateMatchesSpOne) {
  Ring R({"x"});
  MPoly f = R("x^3-2*x");
  auto pts = hp_two(f);
  auto ref = sp_one(f, R("1"));
  ASSERT_EQ(pts.size(), ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_EQ(pts[i].coords[0], ref[i]);
}

TEST(HpTwo, ProjectionKeepsInputOnTop) {
  Ring R({"x", "y"});
  ProjectionSet L = hp_two_projection(R("y^2+x^2-1"));
  EXPECT_EQ(L.f[2], (FactorList{R("y^2+x^2-1")}));
  EXPECT_EQ(L.f[1], (FactorList{R("x^2-1")}));
}

TEST(Samples, Deterministic) {
  Ring R({"x", "y", "z"});
  MPoly f = R(kQuartic);
  EXPECT_EQ(hp_two(f), hp_two(f));
  EXPECT_EQ(open_cad(f), open_cad(f));
  EXPECT_EQ(reduced_open_cad(f, 1), reduced_open_cad(f, 1));
}

TEST(Samples, CountsIndependentOfChoiceRule) {
  std::mt19937_64 rng(7);
  Ring R({"x", "y", "z"});
  std::vector<MPoly> cases{R(kQuartic), R("(z^2+y^2+x^2-1)*(4*z+3*y+2*x-1)")};
  for (int i = 0; i < 8; ++i) {
    MPoly f = oracle::random_poly(rng, 3, 3, 5, 5);
    if (f.level() == 3) cases.push_back(f);
  }
  for (const auto& f : cases) {
    std::size_t a = open_cad(f).size(), b = hp_two(f).size(), c = reduced_open_cad(f, 1).size();
    ScopedChoiceRule rule(ChoiceRule::Midpoint);
    EXPECT_EQ(open_cad(f).size(), a) << to_string(f, R.ctx);
    EXPECT_EQ(hp_two(f).size(), b) << to_string(f, R.ctx);
    EXPECT_EQ(reduced_open_cad(f, 1).size(), c) << to_string(f, R.ctx);
  }
}

TEST(Samples, ScaleDominance) {
  std::mt19937_64 rng(99);
  int checked = 0;
  for (int i = 0; i < 20; ++i) {
    unsigned nv = 2 + i % 2;
    MPoly f = oracle::random_poly(rng, nv, 4, 5, 6);
    if (f.level() != nv) continue;
    EXPECT_LE(hp_two(f).size(), open_cad(f).size());
    EXPECT_LE(reduced_open_cad(f, 1).size(), open_cad(f).size());
    ++checked;
  }
  EXPECT_GE(checked, 10);
}

TEST(Samples, OpenSampleSoundnessBivariate) {
  std::mt19937_64 rng(2024);
  int checked = 0;
  for (int i = 0; i < 25; ++i) {
    MPoly f = oracle::random_poly(rng, 2, 4, 5, 5);
    if (f.level() != 2) continue;
    auto ref = open_cad(f);
    EXPECT_TRUE(covers(f, ref, hp_two(f), 64));
    EXPECT_TRUE(covers(f, ref, reduced_open_cad(f, 1), 64));
    ++checked;
  }
  EXPECT_GE(checked, 15);
}

TEST(Samples, OpenSampleSoundnessTrivariate) {
  std::mt19937_64 rng(77);
  Ring R({"x1", "x2", "x3"});
  std::vector<MPoly> cases{R(kSphereTimesPlane)};
  for (int i = 0; i < 6; ++i) {
    MPoly f = oracle::random_poly(rng, 3, 2, 4, 4);
    if (f.level() == 3) cases.push_back(f);
  }
  for (const auto& f : cases) {
    auto ref = open_cad(f);
    EXPECT_TRUE(covers(f, ref, hp_two(f), 16)) << to_string(f, R.ctx);
    EXPECT_TRUE(covers(f, ref, reduced_open_cad(f, 1), 16)) << to_string(f, R.ctx);
  }
}

TEST(Samples, RegionOracleNoticesMissingRegion) {
  Ring R({"x", "y"});
  MPoly f = R("(x^2+y^2-1)*(x-y)");
  auto ref = open_cad(f);
  std::vector<SamplePoint> outside;
  for (const auto& p : ref)
    if (value(R("x^2+y^2-1"), p) > 0) outside.push_back(p);
  ASSERT_LT(outside.size(), ref.size());
  EXPECT_FALSE(covers(f, ref, outside, 32));
  EXPECT_TRUE(covers(f, ref, ref, 32));
}
