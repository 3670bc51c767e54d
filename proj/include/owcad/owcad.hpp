#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "owcad/projection.hpp"
#include "owcad/realroot.hpp"

namespace owcad {

/// Exact point of R^level for the ambient prefix x1..x_level.
struct SamplePoint {
  std::vector<Rat> coords;
  unsigned level() const { return static_cast<unsigned>(coords.size()); }
  friend bool operator==(const SamplePoint&, const SamplePoint&) = default;
};

/// A lifting polynomial vanished identically over a sample point and no
/// perturbation of the point's last coordinate inside its interval helped.
class DegenerateFiber : public std::runtime_error {
 public:
  DegenerateFiber(SamplePoint point, unsigned level);
  const SamplePoint& point() const { return point_; }
  unsigned level() const { return level_; }

 private:
  SamplePoint point_;
  unsigned level_;
};

/// Lifting data: at level i, sample the roots of f[i] avoiding the roots of g[i].
/// Both are stored as factor lists; an empty list means the constant 1.
struct ProjectionSet {
  unsigned n = 0;
  std::vector<FactorList> f;  // index i = level i (index 0 unused)
  std::vector<FactorList> g;

  explicit ProjectionSet(unsigned nlevels = 0) : n(nlevels), f(nlevels + 1), g(nlevels + 1) {}
  /// Puts every factor of `fs` into the list of its own level.
  void add_f(const FactorList& fs);
  void add_g(const FactorList& gs);
  MPoly f_poly(unsigned level, unsigned nvars) const;
  MPoly g_poly(unsigned level, unsigned nvars) const;
};

struct LiftStats {
  std::vector<std::size_t> per_level;  // sample count after each level, base first
  std::size_t perturbations = 0;
};

/// One sample per open interval of f(x1), avoiding the roots of g(x1).
std::vector<SamplePoint> base_samples(const FactorList& f, const FactorList& g, unsigned nvars);

/// Lifts samples of level j to level n, calling sp_one on the exact fibers of
/// f[i] and g[i] for i = j+1..n.
std::vector<SamplePoint> open_sp(const ProjectionSet& L, const std::vector<SamplePoint>& S,
                                 LiftStats* stats = nullptr);

/// Base samples from f[1] avoiding g[1], lifted through every level of L.
/// Degenerate fibers over these samples are handled by moving the offending
/// coordinate inside its interval.
std::vector<SamplePoint> open_sample(const ProjectionSet& L, LiftStats* stats = nullptr);

/// Output of the open weak CAD projection.
struct OwcadOutput {
  unsigned n = 0;
  /// h[j-1] = sqrfree(sum_t Hp(f,[xn..x_{j+1}],x_t)^2), j = 1..n-1 (empty when
  /// the literal polynomials were not requested).
  std::vector<MPoly> h;
  /// branch_factors[j-1] = { Hp(f,[xn..x_{j+1}],x_t) : t = j+1..n }.
  std::vector<std::vector<MPoly>> branch_factors;
  /// hp[j-1] = Hp(f,[xn..x_{j+1}]).
  std::vector<MPoly> hp;
};

OwcadOutput open_weak_cad(const MPoly& f, bool literal_h = true);

/// Open CAD by iterated Brown projection, one rational sample per open cell.
std::vector<SamplePoint> open_cad(const MPoly& f, LiftStats* stats = nullptr);

/// Reduced open CAD of f with respect to [xn..x_{j+1}], 1 <= j < n. When
/// `base` is absent it is computed as an open sample of Hp(f,[xn..x_{j+1}])
/// avoiding Hp(f,[xn..x_{j+1}],x_{j+1}).
std::vector<SamplePoint> reduced_open_cad(const MPoly& f, unsigned j,
                                          const std::optional<std::vector<SamplePoint>>& base = std::nullopt,
                                          LiftStats* stats = nullptr);

/// Lifting data of the reduced open CAD of f w.r.t. [x_top..x2], treating f
/// as a polynomial in x1..x_top; open_sample() of it equals
/// reduced_open_cad(f, 1) when top = n.
ProjectionSet reduced_projection(const MPoly& f, unsigned top);

/// Lifting data of the pairwise Hp scheme (eliminating two variables at a time).
ProjectionSet hp_two_projection(const MPoly& f);
/// Open sample of f by the pairwise Hp scheme.
std::vector<SamplePoint> hp_two(const MPoly& f, LiftStats* stats = nullptr);

}  // namespace owcad
