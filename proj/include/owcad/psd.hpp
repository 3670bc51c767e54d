#pragma once

#include <optional>
#include <string>
#include <vector>

#include "owcad/owcad.hpp"

namespace owcad {

enum class PsdAnswer { PSD, NotPSD };
enum class Definiteness { PSD, NSD, Indefinite };

std::string to_string(PsdAnswer a);
std::string to_string(Definiteness d);

struct PsdVerdict {
  PsdAnswer answer = PsdAnswer::PSD;
  /// Point of R^nvars with f(witness) < 0; set iff answer is NotPSD.
  std::optional<SamplePoint> witness;
  /// Subproblems decided on the way, outermost last.
  std::vector<std::string> trace;
  /// True if the recursion could not decide and the open CAD check was used.
  bool fallback = false;
};

/// Sign check over an open sample of f; f may involve at most two variables.
PsdVerdict psd_base(const MPoly& f);

/// Sign check of f at every sample of open_cad(f). Complete, but slow.
PsdVerdict psd_via_open_cad(const MPoly& f);

/// Np based recursion on the odd-multiplicity part of f, two variables at a
/// time. Falls back to psd_via_open_cad when a step is not applicable.
PsdVerdict psd_hp_two(const MPoly& f);
/// Same, with `names` used in the trace.
PsdVerdict psd_hp_two(const MPoly& f, const std::vector<std::string>& names);

Definiteness semidefinite(const MPoly& f);

}  // namespace owcad
