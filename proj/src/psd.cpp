#include "owcad/psd.hpp"

#include <algorithm>
#include <unordered_map>

namespace owcad {

std::string to_string(PsdAnswer a) { return a == PsdAnswer::PSD ? "PSD" : "NotPSD"; }

std::string to_string(Definiteness d) {
  switch (d) {
    case Definiteness::PSD: return "PSD";
    case Definiteness::NSD: return "NSD";
    default: return "Indefinite";
  }
}

namespace {

// f rewritten over the variables it actually involves, in the same order.
struct Compact {
  MPoly g;
  std::vector<unsigned> vars;  // original index of each new variable
};

Compact compact(const MPoly& f) {
  Compact c;
  for (unsigned v = 1; v <= f.nvars(); ++v)
    if (f.involves(Var{v})) c.vars.push_back(v);
  const unsigned k = c.vars.size();
  std::vector<Exp> exps;
  std::vector<Int> coefs;
  for (std::size_t t = 0; t < f.size(); ++t) {
    auto e = f.exps(t);
    for (unsigned i = 0; i < k; ++i) exps.push_back(e[c.vars[i] - 1]);
    coefs.push_back(f.coef(t));
  }
  c.g = MPoly::from_terms(k, std::move(exps), std::move(coefs));
  return c;
}

std::vector<Rat> expand(const std::vector<Rat>& w, const std::vector<unsigned>& vars, unsigned n) {
  std::vector<Rat> out(n, Rat(0));
  for (std::size_t i = 0; i < vars.size(); ++i) out[vars[i] - 1] = w[i];
  return out;
}

VarList all_vars(unsigned n) {
  VarList v;
  for (unsigned i = 1; i <= n; ++i) v.push_back(Var{i});
  return v;
}

Rat value(const MPoly& f, const std::vector<Rat>& p) {
  if (f.is_constant()) return Rat(f.constant_value());
  return evaluate_value(f, all_vars(f.nvars()), p);
}

using Names = std::vector<std::string>;

Names default_names(unsigned n) {
  Names s;
  for (unsigned i = 1; i <= n; ++i) s.push_back("x" + std::to_string(i));
  return s;
}

std::string show(const MPoly& f, const Names& names) {
  if (f.is_constant()) return f.constant_value().get_str();
  return to_string(f, Context(names));
}

PsdVerdict open_cad_check(const MPoly& f) {
  PsdVerdict v;
  const unsigned n = f.nvars();
  if (f.is_constant()) {
    if (sgn(f.constant_value()) < 0) {
      v.answer = PsdAnswer::NotPSD;
      v.witness = SamplePoint{std::vector<Rat>(n, Rat(0))};
    }
    return v;
  }
  Compact c = compact(f);
  for (const auto& s : open_cad(c.g)) {
    if (sgn(value(c.g, s.coords)) < 0) {
      v.answer = PsdAnswer::NotPSD;
      v.witness = SamplePoint{expand(s.coords, c.vars, n)};
      return v;
    }
  }
  return v;
}

struct Undecided {
  std::string reason;
};

struct MPolyHash {
  std::size_t operator()(const MPoly& f) const { return f.hash(); }
};

class Solver {
 public:
  std::vector<std::string> trace;

  PsdVerdict decide(const MPoly& f, const Names& names) {
    if (auto it = memo_.find(f); it != memo_.end()) return it->second;
    PsdVerdict v = decide_uncached(f, names);
    v.trace.clear();
    memo_.emplace(f, v);
    return v;
  }

 private:
  std::unordered_map<MPoly, PsdVerdict, MPolyHash> memo_;
  std::shared_ptr<ProjectionKernel> kernel_ = std::make_shared<ProjectionKernel>();

  PsdVerdict decide_uncached(const MPoly& f, const Names& names) {
    const unsigned n = f.nvars();
    if (f.is_zero()) return {};
    if (f.is_constant()) return open_cad_check(f);
    SqfDecomp d = sqf_decompose(f);
    MPoly odd = product(d.odd_part(), n) * Int(d.unit_sign);
    if (odd.is_constant()) {
      if (sgn(odd.constant_value()) > 0) {
        trace.push_back(show(f, names) + ": even powers only, PSD");
        return {};
      }
      return open_cad_check(f);
    }
    Compact c = compact(odd);
    Names sub;
    for (unsigned v : c.vars) sub.push_back(names[v - 1]);
    std::optional<std::vector<Rat>> w;
    try {
      w = core(c.g, sub);
    } catch (const Undecided& e) {
      return fallback(f, names, e.reason);
    } catch (const WellDefinednessBreach& e) {
      return fallback(f, names, e.what());
    } catch (const DegenerateFiber& e) {
      return fallback(f, names, e.what());
    }
    PsdVerdict v;
    if (!w) return v;
    std::vector<Rat> full = expand(*w, c.vars, n);
    if (sgn(value(f, full)) < 0) {
      v.answer = PsdAnswer::NotPSD;
      v.witness = SamplePoint{std::move(full)};
      return v;
    }
    // the witness sits on a zero of an even factor; any open cell of f < 0 will do
    v = open_cad_check(f);
    if (v.answer != PsdAnswer::NotPSD) throw std::logic_error("odd part negative but f is not");
    return v;
  }

  PsdVerdict fallback(const MPoly& f, const Names& names, const std::string& why) {
    trace.push_back("fallback on " + show(f, names) + ": " + why);
    PsdVerdict v = open_cad_check(f);
    v.fallback = true;
    return v;
  }

  Definiteness definiteness(const MPoly& h, const Names& names) {
    if (decide(h, names).answer == PsdAnswer::PSD) return Definiteness::PSD;
    if (decide(-h, names).answer == PsdAnswer::PSD) return Definiteness::NSD;
    return Definiteness::Indefinite;
  }

  // g squarefree and involving each of its variables. nullopt when g >= 0.
  std::optional<std::vector<Rat>> core(const MPoly& g, const Names& names) {
    const unsigned k = g.nvars();
    if (k <= 2) {
      PsdVerdict v = open_cad_check(g);
      trace.push_back(show(g, names) + ": base " + to_string(v.answer));
      if (v.witness) return v.witness->coords;
      return std::nullopt;
    }
    NpCache cache(g, kernel_);
    const VarMask top2 = (VarMask{1} << (k - 1)) | (VarMask{1} << (k - 2));
    FactorList L2 = cache.np(top2);
    FactorList avoid = cache.branch(top2, Var{k});
    for (const auto& h : cache.branch(top2, Var{k - 1})) avoid.push_back(h);

    ProjectionSet L = reduced_projection(product(L2, k), k - 2);
    L.add_g(avoid);
    std::vector<SamplePoint> samples;
    try {
      samples = open_sample(L);
    } catch (const DegenerateFiber& e) {
      // simplest rationals tend to sit on special loci; midpoints rarely do
      trace.push_back(std::string(e.what()) + ", resampling at midpoints");
      ScopedChoiceRule rule(ChoiceRule::Midpoint);
      samples = open_sample(L);
    }

    for (const auto& s : samples) {
      std::map<Var, Rat> at;
      for (unsigned i = 0; i < k - 2; ++i) at[Var{i + 1}] = s.coords[i];
      MPoly fib = evaluate(g, at).num;
      if (fib.is_zero()) throw Undecided{"fiber of " + show(g, names) + " vanishes at a sample"};
      PsdVerdict v = open_cad_check(fib);
      if (v.witness) {
        std::vector<Rat> w = s.coords;
        w.push_back(v.witness->coords[k - 2]);
        w.push_back(v.witness->coords[k - 1]);
        trace.push_back(show(g, names) + ": negative over a sample of Np(f,[" + names[k - 1] + "," +
                        names[k - 2] + "])");
        return w;
      }
    }
    // a negative fiber refutes g whatever the Np1 members do, so they are
    // only needed once every fiber passed
    FactorList L1 = cache.parts(Var{k}).np1;
    for (const auto& h : cache.parts(Var{k - 1}).np1)
      if (std::find(L1.begin(), L1.end(), h) == L1.end()) L1.push_back(h);
    for (const auto& h : L1) {
      Definiteness d = definiteness(h, names);
      trace.push_back("Np1 member " + show(h, names) + ": " + to_string(d));
      if (d == Definiteness::Indefinite) throw Undecided{"Np1 member " + show(h, names) + " changes sign"};
    }

    trace.push_back(show(g, names) + ": " + std::to_string(samples.size()) +
                    " bivariate fibers PSD");
    return std::nullopt;
  }
};

}  // namespace

PsdVerdict psd_base(const MPoly& f) {
  if (f.is_zero()) throw std::invalid_argument("psd_base needs a nonzero polynomial");
  if (compact(f).vars.size() > 2) throw std::invalid_argument("psd_base needs at most two variables");
  return open_cad_check(f);
}

PsdVerdict psd_via_open_cad(const MPoly& f) {
  if (f.is_zero()) throw std::invalid_argument("psd_via_open_cad needs a nonzero polynomial");
  return open_cad_check(f);
}

PsdVerdict psd_hp_two(const MPoly& f) { return psd_hp_two(f, default_names(f.nvars())); }

PsdVerdict psd_hp_two(const MPoly& f, const std::vector<std::string>& names) {
  if (f.is_zero()) throw std::invalid_argument("psd_hp_two needs a nonzero polynomial");
  if (names.size() != f.nvars()) throw std::invalid_argument("psd_hp_two: one name per variable");
  Solver s;
  PsdVerdict v = s.decide(f, names);
  for (const auto& t : s.trace)
    if (t.rfind("fallback", 0) == 0) v.fallback = true;
  v.trace = std::move(s.trace);
  return v;
}

Definiteness semidefinite(const MPoly& f) {
  if (f.is_zero()) throw std::invalid_argument("semidefinite needs a nonzero polynomial");
  if (psd_hp_two(f).answer == PsdAnswer::PSD) return Definiteness::PSD;
  if (psd_hp_two(-f).answer == PsdAnswer::PSD) return Definiteness::NSD;
  return Definiteness::Indefinite;
}

}  // namespace owcad
