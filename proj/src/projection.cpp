#include "owcad/projection.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace owcad {

namespace {

enum Kind { kLc = 0, kDisc = 1, kRes = 2 };

VarMask bit(Var v) { return VarMask(1) << (v.index - 1); }

ProjectionKernel& default_kernel(ProjectionKernel* k, std::unique_ptr<ProjectionKernel>& owned) {
  if (k) return *k;
  owned = std::make_unique<ProjectionKernel>();
  return *owned;
}

}  // namespace

std::size_t ProjectionKernel::KeyHash::operator()(const Key& k) const {
  std::size_t h = k.a.hash() * 1000003u ^ k.b.hash();
  return h * 31u + k.v * 7u + static_cast<std::size_t>(k.kind);
}

FactorList ProjectionKernel::lookup(Key key, const std::function<MPoly()>& compute) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }
  MPoly r = compute();
  if (r.is_zero()) throw WellDefinednessBreach("projection factor vanishes identically");
  FactorList fl = squarefree_factors(r);
  std::lock_guard<std::mutex> lock(mu_);
  memo_.emplace(std::move(key), fl);
  return fl;
}

FactorList ProjectionKernel::lc_factors(const MPoly& f, Var v) {
  return lookup({f, MPoly(), v.index, kLc}, [&] { return lc(f, v); });
}

FactorList ProjectionKernel::discriminant_factors(const MPoly& f, Var v) {
  if (f.degree(v) < 2) return {};
  return lookup({f, MPoly(), v.index, kDisc}, [&] { return discriminant(f, v); });
}

FactorList ProjectionKernel::resultant_factors(const MPoly& f, const MPoly& g, Var v) {
  const bool swap = g.hash() < f.hash();
  const MPoly& a = swap ? g : f;
  const MPoly& b = swap ? f : g;
  return lookup({a, b, v.index, kRes}, [&] { return resultant(a, b, v); });
}

FactorList bp_factors(const FactorList& p, Var v, ProjectionKernel* kernel) {
  std::unique_ptr<ProjectionKernel> owned;
  ProjectionKernel& k = default_kernel(kernel, owned);
  std::vector<MPoly> parts;
  std::vector<const MPoly*> moving;
  for (const auto& f : p) {
    if (f.is_zero()) throw WellDefinednessBreach("Bp of the zero polynomial");
    if (f.degree(v) == 0) parts.push_back(f);
    else moving.push_back(&f);
  }
  for (std::size_t i = 0; i < moving.size(); ++i) {
    for (auto& g : k.lc_factors(*moving[i], v)) parts.push_back(std::move(g));
    for (auto& g : k.discriminant_factors(*moving[i], v)) parts.push_back(std::move(g));
    for (std::size_t j = i + 1; j < moving.size(); ++j)
      for (auto& g : k.resultant_factors(*moving[i], *moving[j], v)) parts.push_back(std::move(g));
  }
  FactorList out;
  for (auto& e : coprime_basis(parts)) out.push_back(std::move(e.poly));
  return out;
}

MPoly bp(const MPoly& f, Var v) {
  if (f.is_zero()) throw WellDefinednessBreach("Bp of the zero polynomial");
  if (f.degree(v) == 0) return f;
  return normalize(product(bp_factors(squarefree_factors(f), v), f.nvars()));
}

std::vector<MPoly> bp_set(const std::vector<MPoly>& L, Var v) {
  if (L.empty()) throw std::invalid_argument("Bp of an empty set");
  std::vector<MPoly> sq;
  for (const auto& f : L) {
    if (f.is_zero()) throw WellDefinednessBreach("Bp of the zero polynomial");
    sq.push_back(sqrfree(f));
  }
  std::vector<MPoly> out;
  auto add = [&](const MPoly& r) {
    if (r.is_zero()) throw WellDefinednessBreach("resultant vanishes identically");
    if (r.is_constant()) return;
    MPoly s = sqrfree(r);
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(std::move(s));
  };
  for (std::size_t i = 0; i < sq.size(); ++i) {
    if (sq[i].degree(v) == 0) add(sq[i]);
    else add(resultant(sq[i], derivative(sq[i], v), v));
    for (std::size_t j = i + 1; j < sq.size(); ++j) {
      if (sq[i].degree(v) == 0 && sq[j].degree(v) == 0) continue;
      add(resultant(sq[i], sq[j], v));
    }
  }
  return out;
}

VarMask mask_of(const VarList& ys) {
  VarMask m = 0;
  for (Var y : ys) {
    if (y.index == 0 || y.index > 58) throw std::out_of_range("variable index out of range");
    if (m & bit(y)) throw std::invalid_argument("repeated variable in projection order");
    m |= bit(y);
  }
  return m;
}

// ---- Hp

HpCache::HpCache(const MPoly& f, std::shared_ptr<ProjectionKernel> kernel)
    : f_(f), kernel_(kernel ? std::move(kernel) : std::make_shared<ProjectionKernel>()) {
  if (f_.is_zero()) throw WellDefinednessBreach("Hp of the zero polynomial");
}

HpCache::HpCache(FactorList factors, unsigned nvars, std::shared_ptr<ProjectionKernel> kernel)
    : f_(product(factors, nvars)),
      kernel_(kernel ? std::move(kernel) : std::make_shared<ProjectionKernel>()),
      base_(std::move(factors)) {}

FactorList HpCache::hp(VarMask set) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = hp_.find(set);
    if (it != hp_.end()) return it->second;
  }
  FactorList r;
  if (set == 0) {
    r = base_ ? *base_ : squarefree_factors(f_);
  } else {
    bool first = true;
    for (unsigned i = 0; i < 58; ++i) {
      if (!(set >> i & 1)) continue;
      FactorList b = branch(set, Var{i + 1});
      r = first ? std::move(b) : gcd_factors(r, b);
      first = false;
    }
  }
  std::lock_guard<std::mutex> lock(mu_);
  hp_.emplace(set, r);
  return r;
}

FactorList HpCache::branch(VarMask set, Var y) {
  if (!(set & bit(y))) throw std::invalid_argument("branch variable not in the projection set");
  const VarMask key = set | (VarMask(y.index) << 58);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = branch_.find(key);
    if (it != branch_.end()) return it->second;
  }
  FactorList r = bp_factors(hp(set & ~bit(y)), y, kernel_.get());
  std::lock_guard<std::mutex> lock(mu_);
  branch_.emplace(key, r);
  return r;
}

std::string HpCache::dump(const Context& ctx) {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<VarMask> keys;
  for (const auto& [k, _] : hp_) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  std::ostringstream os;
  for (VarMask k : keys) {
    os << "{";
    bool first = true;
    for (unsigned i = 0; i < ctx.size(); ++i)
      if (k >> i & 1) {
        os << (first ? "" : ",") << ctx.name(Var{i + 1});
        first = false;
      }
    os << "}:";
    for (const auto& f : hp_[k]) os << " (" << to_string(f, ctx) << ")";
    os << "\n";
  }
  return os.str();
}

MPoly hp(const MPoly& f, const VarList& ys, HpCache* cache) {
  if (ys.empty()) return f;
  VarMask m = mask_of(ys);
  if (cache) return normalize(product(cache->hp(m), f.nvars()));
  HpCache local(f);
  return normalize(product(local.hp(m), f.nvars()));
}

MPoly hp_branch(const MPoly& f, const VarList& ys, Var yi, HpCache* cache) {
  VarMask m = mask_of(ys);
  if (!(m & bit(yi))) throw std::invalid_argument("branch variable not in the projection order");
  if (cache) return normalize(product(cache->branch(m, yi), f.nvars()));
  HpCache local(f);
  return normalize(product(local.branch(m, yi), f.nvars()));
}

// ---- Np

namespace {

// Classifies a joint coprime basis of lc/discriminant pairs.
void split_parity(const std::vector<BasisElement>& basis, FactorList& odd, std::vector<bool>& is_odd) {
  is_odd.assign(basis.size(), false);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (unsigned e : basis[i].exponents)
      if (e % 2 == 1) is_odd[i] = true;
    if (is_odd[i]) odd.push_back(basis[i].poly);
  }
}

std::vector<MPoly> lc_and_discriminant(const MPoly& f, Var v) {
  if (f.is_zero()) throw WellDefinednessBreach("Np of the zero polynomial");
  if (f.degree(v) == 0) throw WellDefinednessBreach("Np with respect to a variable the polynomial does not involve");
  MPoly d = f.degree(v) >= 2 ? discriminant(f, v) : MPoly::constant(f.nvars(), 1);
  if (d.is_zero()) throw WellDefinednessBreach("discriminant vanishes identically");
  return {lc(f, v), d};
}

}  // namespace

NpParts np_parts(const MPoly& f, Var v, ProjectionKernel*) {
  auto basis = coprime_basis(lc_and_discriminant(f, v));
  NpParts out;
  std::vector<bool> is_odd;
  split_parity(basis, out.np1, is_odd);
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (!is_odd[i]) out.np2_factors.push_back(basis[i].poly);
  out.np2 = product(out.np2_factors, f.nvars());
  return out;
}

NpSetParts np_parts(const std::vector<MPoly>& L, Var v) {
  if (L.empty()) throw std::invalid_argument("Np of an empty set");
  std::vector<MPoly> inputs;
  for (const auto& g : L)
    for (auto& p : lc_and_discriminant(g, v)) inputs.push_back(std::move(p));
  auto basis = coprime_basis(inputs);
  NpSetParts out;
  std::vector<bool> is_odd;
  split_parity(basis, out.np1, is_odd);
  const unsigned nv = L.front().nvars();
  for (std::size_t k = 0; k < L.size(); ++k) {
    MPoly p = MPoly::constant(nv, 1);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (is_odd[i]) continue;
      if (basis[i].exponents[2 * k] > 0 || basis[i].exponents[2 * k + 1] > 0) p *= basis[i].poly;
    }
    out.np2.push_back(std::move(p));
  }
  return out;
}

NpCache::NpCache(const MPoly& f, std::shared_ptr<ProjectionKernel> kernel)
    : f_(f), kernel_(kernel ? std::move(kernel) : std::make_shared<ProjectionKernel>()) {
  if (f_.is_zero()) throw WellDefinednessBreach("Np of the zero polynomial");
}

NpParts NpCache::parts(Var v) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = parts_.find(v.index);
    if (it != parts_.end()) return it->second;
  }
  NpParts p = np_parts(f_, v, kernel_.get());
  std::lock_guard<std::mutex> lock(mu_);
  parts_.emplace(v.index, p);
  return p;
}

FactorList NpCache::np(VarMask set) {
  if (set == 0) throw std::invalid_argument("Np over an empty variable list");
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = np_.find(set);
    if (it != np_.end()) return it->second;
  }
  FactorList r;
  if (std::popcount(set) == 1) {
    r = parts(Var{static_cast<unsigned>(std::countr_zero(set)) + 1}).np2_factors;
  } else {
    bool first = true;
    for (unsigned i = 0; i < 58; ++i) {
      if (!(set >> i & 1)) continue;
      FactorList b = branch(set, Var{i + 1});
      r = first ? std::move(b) : gcd_factors(r, b);
      first = false;
    }
  }
  std::lock_guard<std::mutex> lock(mu_);
  np_.emplace(set, r);
  return r;
}

FactorList NpCache::branch(VarMask set, Var y) {
  if (!(set & bit(y))) throw std::invalid_argument("branch variable not in the projection set");
  if (std::popcount(set) == 1) return parts(y).np1;
  const VarMask key = set | (VarMask(y.index) << 58);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = branch_.find(key);
    if (it != branch_.end()) return it->second;
  }
  FactorList r = bp_factors(np(set & ~bit(y)), y, kernel_.get());
  std::lock_guard<std::mutex> lock(mu_);
  branch_.emplace(key, r);
  return r;
}

MPoly np(const MPoly& f, const VarList& ys, NpCache* cache) {
  VarMask m = mask_of(ys);
  if (cache) return normalize(product(cache->np(m), f.nvars()));
  NpCache local(f);
  return normalize(product(local.np(m), f.nvars()));
}

MPoly np_branch(const MPoly& f, const VarList& ys, Var yi, NpCache* cache) {
  VarMask m = mask_of(ys);
  if (!(m & bit(yi))) throw std::invalid_argument("branch variable not in the projection order");
  if (cache) return normalize(product(cache->branch(m, yi), f.nvars()));
  NpCache local(f);
  return normalize(product(local.branch(m, yi), f.nvars()));
}

}  // namespace owcad
