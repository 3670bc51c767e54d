#pragma once

#include <optional>
#include <vector>

#include "owcad/mpoly.hpp"
#include "owcad/upoly.hpp"

namespace owcad {

/// One real root of a squarefree integer polynomial, either an exact rational
/// (lo == hi) or the only root in the open interval (lo, hi).
class RealRoot {
 public:
  RealRoot(UPoly sqf, Rat lo, Rat hi);

  bool exact() const { return lo_ == hi_; }
  const Rat& lo() const { return lo_; }
  const Rat& hi() const { return hi_; }
  const UPoly& poly() const { return p_; }

  /// Halves the isolating interval (may make the root exact).
  void refine();
  /// Refines until hi - lo <= width.
  void refine_to(const Rat& width);
  /// Sign of (root - q).
  int compare(const Rat& q);
  Int floor();
  Int ceil();

 private:
  // sign of p just to the right of lo
  int sign_lo() const;

  UPoly p_;
  Rat lo_, hi_;
};

/// Open intervals (or exact points) isolating the distinct real roots, sorted.
struct RootInterval {
  Rat lo, hi;
  bool exact() const { return lo == hi; }
};

struct IsolationList {
  std::vector<RootInterval> roots;
};

/// Distinct real roots of f; throws std::domain_error on the zero polynomial.
IsolationList isolate(const UPoly& f);
IsolationList isolate(const MPoly& f);
/// Same roots as isolate(), as refinable objects.
std::vector<RealRoot> real_roots(const UPoly& f);

unsigned count_real_roots(const UPoly& f);
unsigned count_real_roots(const MPoly& f);

/// An open interval between consecutive roots; a missing end is infinite.
struct Gap {
  std::optional<RealRoot> lo, hi;
};

/// Canonical point of a gap: the simplest rational (least denominator, then
/// least absolute numerator, positive on ties) for bounded gaps, floor(r1)-1 or
/// ceil(rm)+1 for unbounded ones and 0 for the whole line. When g vanishes at
/// the choice, the gap is split there (bounded) or the point steps outward.
Rat choose_in_gap(Gap& gap, const UPoly& g);

/// How choose_in_gap picks its point. Midpoint exists to check that sample
/// counts do not depend on the rule; it is per thread.
enum class ChoiceRule { Simplest, Midpoint };
ChoiceRule choice_rule();

class ScopedChoiceRule {
 public:
  explicit ScopedChoiceRule(ChoiceRule r);
  ~ScopedChoiceRule();
  ScopedChoiceRule(const ScopedChoiceRule&) = delete;
  ScopedChoiceRule& operator=(const ScopedChoiceRule&) = delete;

 private:
  ChoiceRule saved_;
};

struct SampleChoice {
  std::vector<Rat> points;
  std::vector<Gap> gaps;  // gaps[i] contains points[i]
};

/// One rational point in each open interval cut out by the real roots of f,
/// none of them a root of g. f and g must be nonzero.
SampleChoice sp_one_detailed(const UPoly& f, const UPoly& g);
std::vector<Rat> sp_one(const UPoly& f, const UPoly& g);
std::vector<Rat> sp_one(const MPoly& f, const MPoly& g);

/// Order used to pick the simpler of two rationals.
bool simpler(const Rat& a, const Rat& b);
/// Simplest rational strictly inside (a, b), a < b; infinite ends as nullopt.
Rat simplest_between(const std::optional<Rat>& a, const std::optional<Rat>& b);

}  // namespace owcad
