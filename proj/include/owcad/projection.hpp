#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "owcad/polyalg.hpp"

namespace owcad {

/// A projection step met a degenerate input (zero polynomial, or a variable the
/// operator needs is absent) for which the operator is not defined.
class WellDefinednessBreach : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Memoizes per-factor projection data: factors of lc, discriminant and
/// pairwise resultants. Thread safe; entries are deterministic, so concurrent
/// duplicate computation is harmless.
class ProjectionKernel {
 public:
  FactorList lc_factors(const MPoly& f, Var v);
  FactorList discriminant_factors(const MPoly& f, Var v);
  FactorList resultant_factors(const MPoly& f, const MPoly& g, Var v);

 private:
  struct Key {
    MPoly a, b;
    unsigned v;
    int kind;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };
  std::mutex mu_;
  std::unordered_map<Key, FactorList, KeyHash> memo_;

  FactorList lookup(Key key, const std::function<MPoly()>& compute);
};

/// Bp of the product of a squarefree coprime factor list, as such a list.
/// Factors free of v pass through.
FactorList bp_factors(const FactorList& p, Var v, ProjectionKernel* kernel = nullptr);

/// Res(sqrfree(f), d sqrfree(f)/dv, v) up to its squarefree part, normalized;
/// f itself when deg(f, v) = 0.
MPoly bp(const MPoly& f, Var v);
/// Squarefree parts of all self and pairwise resultants of the members,
/// normalized, deduplicated, constants dropped; v-free members pass through.
std::vector<MPoly> bp_set(const std::vector<MPoly>& L, Var v);

using VarMask = std::uint64_t;
VarMask mask_of(const VarList& ys);

/// Hp of one polynomial over variable subsets, memoized by the unordered set.
class HpCache {
 public:
  explicit HpCache(const MPoly& f, std::shared_ptr<ProjectionKernel> kernel = nullptr);
  /// Starts from a squarefree coprime factor list of f.
  HpCache(FactorList factors, unsigned nvars, std::shared_ptr<ProjectionKernel> kernel = nullptr);

  const MPoly& poly() const { return f_; }
  /// Hp(f, set); the empty set gives the squarefree factors of f.
  FactorList hp(VarMask set);
  /// Hp(f, set, y) = Bp(Hp(f, set \ {y}), y); y must be in the set.
  FactorList branch(VarMask set, Var y);
  /// Canonical text listing of every cached subset.
  std::string dump(const Context& ctx);

 private:
  MPoly f_;
  std::shared_ptr<ProjectionKernel> kernel_;
  std::optional<FactorList> base_;
  std::mutex mu_;
  std::unordered_map<VarMask, FactorList> hp_;
  std::unordered_map<VarMask, FactorList> branch_;  // key: set | (y << 58)
};

MPoly hp(const MPoly& f, const VarList& ys, HpCache* cache = nullptr);
MPoly hp_branch(const MPoly& f, const VarList& ys, Var yi, HpCache* cache = nullptr);

/// Secondary part (odd-multiplicity classes of lc and discriminant) and
/// principal part (the remaining even classes) of the Np operator.
struct NpParts {
  FactorList np1;
  FactorList np2_factors;
  MPoly np2;  // normalized product of np2_factors
};

NpParts np_parts(const MPoly& f, Var v, ProjectionKernel* kernel = nullptr);

/// Set version: np1 is the union over members, np2[i] the principal part of
/// member i with every class of the union removed.
struct NpSetParts {
  FactorList np1;
  std::vector<MPoly> np2;
};
NpSetParts np_parts(const std::vector<MPoly>& L, Var v);

/// Np of one polynomial over variable subsets, memoized like HpCache.
class NpCache {
 public:
  explicit NpCache(const MPoly& f, std::shared_ptr<ProjectionKernel> kernel = nullptr);

  const MPoly& poly() const { return f_; }
  /// Np(f, set) for a nonempty set.
  FactorList np(VarMask set);
  /// Np(f, set, y); for a one-element set this is the factors of prod Np1.
  FactorList branch(VarMask set, Var y);
  NpParts parts(Var v);

 private:
  MPoly f_;
  std::shared_ptr<ProjectionKernel> kernel_;
  std::mutex mu_;
  std::unordered_map<VarMask, FactorList> np_;
  std::unordered_map<VarMask, FactorList> branch_;
  std::unordered_map<unsigned, NpParts> parts_;
};

MPoly np(const MPoly& f, const VarList& ys, NpCache* cache = nullptr);
MPoly np_branch(const MPoly& f, const VarList& ys, Var yi, NpCache* cache = nullptr);

}  // namespace owcad
