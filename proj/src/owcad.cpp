#include "owcad/owcad.hpp"

#include <algorithm>
#include <string>

namespace owcad {

namespace {

std::string describe(const SamplePoint& p, unsigned level) {
  std::string s = "degenerate fiber at level " + std::to_string(level) + " over (";
  for (std::size_t i = 0; i < p.coords.size(); ++i) {
    if (i) s += ", ";
    s += p.coords[i].get_str();
  }
  return s + ")";
}

VarMask range_mask(unsigned lo, unsigned hi) {
  VarMask m = 0;
  for (unsigned i = lo; i <= hi; ++i) m |= VarMask{1} << (i - 1);
  return m;
}

void add_unique(FactorList& dst, const MPoly& p) {
  if (p.is_constant()) return;
  if (std::find(dst.begin(), dst.end(), p) == dst.end()) dst.push_back(p);
}

// A sample under construction. The gap of the last coordinate is kept so the
// coordinate can be moved when a fiber above it degenerates.
struct Node {
  std::vector<Rat> coords;
  std::optional<Gap> gap;
  UPoly avoided;  // g used when the last coordinate was chosen
};

VarList prefix(unsigned k) {
  VarList v;
  for (unsigned i = 1; i <= k; ++i) v.push_back(Var{i});
  return v;
}

// Product of the fibers of `fs` over `at` in x_{k+1}; nullopt if one vanishes.
std::optional<UPoly> fiber_product(const FactorList& fs, const VarList& vars,
                                   const std::vector<Rat>& at, Var v) {
  UPoly r = UPoly::constant(1);
  for (const auto& p : fs) {
    UPoly u = fiber(p, vars, at, v);
    if (u.is_zero()) return std::nullopt;
    if (u.degree() > 0) r = r * u;
  }
  return r;
}

constexpr int kMaxPerturb = 16;

std::vector<Node> lift(const ProjectionSet& L, std::vector<Node> nodes, LiftStats* stats) {
  if (nodes.empty()) return nodes;
  for (unsigned k = nodes.front().coords.size(); k < L.n; ++k) {
    const Var v{k + 1};
    const VarList vars = prefix(k);
    std::vector<Node> next;
    for (auto& node : nodes) {
      auto F = fiber_product(L.f[k + 1], vars, node.coords, v);
      auto G = F ? fiber_product(L.g[k + 1], vars, node.coords, v) : std::nullopt;
      if (!F || !G) {
        // move the last coordinate inside its gap, away from every value tried
        if (!node.gap || k == 0) throw DegenerateFiber(SamplePoint{node.coords}, k + 1);
        UPoly avoid = node.avoided.is_zero() ? UPoly::constant(1) : node.avoided;
        for (int attempt = 0; attempt < kMaxPerturb && !(F && G); ++attempt) {
          const Rat& bad = node.coords.back();
          avoid = avoid * UPoly(std::vector<Int>{-bad.get_num(), bad.get_den()});
          Gap gap = *node.gap;
          node.coords.back() = choose_in_gap(gap, avoid);
          if (stats) ++stats->perturbations;
          F = fiber_product(L.f[k + 1], vars, node.coords, v);
          G = F ? fiber_product(L.g[k + 1], vars, node.coords, v) : std::nullopt;
        }
        if (!F || !G) throw DegenerateFiber(SamplePoint{node.coords}, k + 1);
      }
      SampleChoice c = sp_one_detailed(*F, *G);
      for (std::size_t i = 0; i < c.points.size(); ++i) {
        Node child;
        child.coords = node.coords;
        child.coords.push_back(c.points[i]);
        child.gap = std::move(c.gaps[i]);
        child.avoided = *G;
        next.push_back(std::move(child));
      }
    }
    nodes = std::move(next);
    if (stats) stats->per_level.push_back(nodes.size());
  }
  return nodes;
}

std::vector<Node> base_nodes(const FactorList& f, const FactorList& g) {
  UPoly F = UPoly::constant(1), G = UPoly::constant(1);
  for (const auto& p : f)
    if (p.level() == 1) F = F * to_upoly(p, Var{1});
  for (const auto& p : g)
    if (p.level() == 1) G = G * to_upoly(p, Var{1});
  SampleChoice c = sp_one_detailed(F, G);
  std::vector<Node> nodes;
  for (std::size_t i = 0; i < c.points.size(); ++i)
    nodes.push_back(Node{{c.points[i]}, std::move(c.gaps[i]), G});
  return nodes;
}

std::vector<SamplePoint> to_points(std::vector<Node> nodes) {
  std::vector<SamplePoint> out;
  out.reserve(nodes.size());
  for (auto& n : nodes) out.push_back(SamplePoint{std::move(n.coords)});
  return out;
}

std::vector<SamplePoint> run(const ProjectionSet& L, std::vector<Node> base, LiftStats* stats) {
  if (stats) stats->per_level.assign(1, base.size());
  return to_points(lift(L, std::move(base), stats));
}

// Levels j+1..top of the reduced open CAD of f, as a polynomial in x1..x_top.
ProjectionSet reduced_levels(HpCache& cache, unsigned top, unsigned j) {
  ProjectionSet L(top);
  for (unsigned i = j + 2; i <= top; ++i) {
    VarMask set = range_mask(i, top);
    L.f[i - 1] = cache.hp(set);
    L.g[i - 1] = cache.branch(set, Var{i});
  }
  L.f[top] = cache.hp(0);
  L.g[top] = L.f[top];
  return L;
}

std::vector<SamplePoint> reduced_impl(const MPoly& f, unsigned top, unsigned j,
                                      const std::optional<std::vector<SamplePoint>>& base,
                                      LiftStats* stats) {
  if (j < 1 || j >= top) throw std::invalid_argument("reduced open CAD needs 1 <= j < n");
  const unsigned nv = f.nvars();
  HpCache cache(f, std::make_shared<ProjectionKernel>());
  ProjectionSet L = reduced_levels(cache, top, j);

  VarMask low = range_mask(j + 1, top);
  std::vector<Node> nodes;
  if (base) {
    for (const auto& p : *base) {
      if (p.level() != j) throw std::invalid_argument("base samples must have level j");
      nodes.push_back(Node{p.coords, std::nullopt, {}});
    }
  } else if (j == 1) {
    nodes = base_nodes(cache.hp(low), cache.branch(low, Var{2}));
  } else {
    MPoly pq = product(cache.hp(low), nv) * product(cache.branch(low, Var{j + 1}), nv);
    for (const auto& p : reduced_impl(pq, j, 1, std::nullopt, nullptr))
      nodes.push_back(Node{p.coords, std::nullopt, {}});
  }
  return run(L, std::move(nodes), stats);
}

}  // namespace

DegenerateFiber::DegenerateFiber(SamplePoint point, unsigned level)
    : std::runtime_error(describe(point, level)), point_(std::move(point)), level_(level) {}

void ProjectionSet::add_f(const FactorList& fs) {
  for (const auto& p : fs)
    if (p.level() >= 1 && p.level() <= n) add_unique(f[p.level()], p);
}

void ProjectionSet::add_g(const FactorList& gs) {
  for (const auto& p : gs)
    if (p.level() >= 1 && p.level() <= n) add_unique(g[p.level()], p);
}

MPoly ProjectionSet::f_poly(unsigned level, unsigned nvars) const { return product(f.at(level), nvars); }
MPoly ProjectionSet::g_poly(unsigned level, unsigned nvars) const { return product(g.at(level), nvars); }

std::vector<SamplePoint> base_samples(const FactorList& f, const FactorList& g, unsigned) {
  return to_points(base_nodes(f, g));
}

std::vector<SamplePoint> open_sp(const ProjectionSet& L, const std::vector<SamplePoint>& S,
                                 LiftStats* stats) {
  std::vector<Node> nodes;
  for (const auto& p : S) nodes.push_back(Node{p.coords, std::nullopt, {}});
  return run(L, std::move(nodes), stats);
}

std::vector<SamplePoint> open_sample(const ProjectionSet& L, LiftStats* stats) {
  if (L.n == 0) return {};
  return run(L, base_nodes(L.f[1], L.g[1]), stats);
}

OwcadOutput open_weak_cad(const MPoly& f, bool literal_h) {
  const unsigned n = f.nvars();
  if (n < 2) throw std::invalid_argument("open weak CAD needs at least two variables");
  HpCache cache(f);
  OwcadOutput out;
  out.n = n;
  for (unsigned j = 1; j < n; ++j) {
    VarMask set = range_mask(j + 1, n);
    std::vector<MPoly> branches;
    for (unsigned t = j + 1; t <= n; ++t) branches.push_back(normalize(product(cache.branch(set, Var{t}), n)));
    out.hp.push_back(normalize(product(cache.hp(set), n)));
    if (literal_h) {
      MPoly sum(n);
      for (const auto& b : branches) sum += b * b;
      out.h.push_back(sqrfree(sum));
    }
    out.branch_factors.push_back(std::move(branches));
  }
  return out;
}

std::vector<SamplePoint> open_cad(const MPoly& f, LiftStats* stats) {
  const unsigned n = f.nvars();
  if (n == 0 || f.is_zero()) throw std::invalid_argument("open CAD needs a nonzero polynomial in at least one variable");
  ProjectionKernel kernel;
  ProjectionSet L(n);
  FactorList P = squarefree_factors(f);
  L.add_f(P);
  for (unsigned k = n; k >= 2; --k) {
    P = bp_factors(P, Var{k}, &kernel);
    L.add_f(P);
  }
  return run(L, base_nodes(L.f[1], {}), stats);
}

ProjectionSet reduced_projection(const MPoly& f, unsigned top) {
  if (top == 0 || top > f.nvars()) throw std::invalid_argument("reduced projection level out of range");
  HpCache cache(f, std::make_shared<ProjectionKernel>());
  if (top == 1) {
    ProjectionSet L(1);
    L.f[1] = cache.hp(0);
    L.g[1] = L.f[1];
    return L;
  }
  ProjectionSet L = reduced_levels(cache, top, 1);
  VarMask low = range_mask(2, top);
  L.f[1] = cache.hp(low);
  L.g[1] = cache.branch(low, Var{2});
  return L;
}

std::vector<SamplePoint> reduced_open_cad(const MPoly& f, unsigned j,
                                          const std::optional<std::vector<SamplePoint>>& base,
                                          LiftStats* stats) {
  return reduced_impl(f, f.nvars(), j, base, stats);
}

namespace {

// Files every factor of one list member under the level of the whole product.
void add_member(std::vector<FactorList>& dst, const FactorList& member) {
  unsigned level = 0;
  for (const auto& p : member) level = std::max(level, p.level());
  if (level == 0 || level >= dst.size()) return;
  for (const auto& p : member) add_unique(dst[level], p);
}

}  // namespace

ProjectionSet hp_two_projection(const MPoly& f) {
  const unsigned n = f.nvars();
  if (n == 0 || f.is_zero()) throw std::invalid_argument("pairwise Hp needs a nonzero polynomial");
  auto kernel = std::make_shared<ProjectionKernel>();
  ProjectionSet L(n);
  FactorList g = squarefree_factors(f);
  // f itself goes in at the top level even when it does not involve x_n
  for (const auto& p : g) {
    add_unique(L.f[n], p);
    add_unique(L.g[n], p);
  }
  auto bit = [](unsigned i) { return VarMask{1} << (i - 1); };
  unsigned i = n;
  while (i >= 3) {
    HpCache c(g, n, kernel);
    FactorList one = c.hp(bit(i)), two = c.hp(bit(i) | bit(i - 1));
    add_member(L.f, g);
    add_member(L.f, one);
    add_member(L.f, two);
    add_member(L.g, g);
    add_member(L.g, c.branch(bit(i), Var{i}));
    add_member(L.g, c.branch(bit(i) | bit(i - 1), Var{i - 1}));
    g = std::move(two);
    i -= 2;
  }
  if (i == 2) {
    HpCache c(g, n, kernel);
    add_member(L.f, g);
    add_member(L.f, c.hp(bit(2)));
    add_member(L.g, g);
    add_member(L.g, c.branch(bit(2), Var{2}));
  }
  return L;
}

std::vector<SamplePoint> hp_two(const MPoly& f, LiftStats* stats) {
  return open_sample(hp_two_projection(f), stats);
}

}  // namespace owcad
