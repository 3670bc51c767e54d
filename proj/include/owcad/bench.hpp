#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "owcad/mpoly.hpp"

namespace owcad {

/// `terms` distinct monomials of total degree <= degree drawn uniformly, each
/// with a nonzero coefficient in [-coef_bound, coef_bound].
MPoly random_dense_poly(std::mt19937_64& rng, unsigned nvars, unsigned degree, unsigned terms = 6,
                        long coef_bound = 99);

/// Real root counts of the univariate projections of f(x,y,z), with z the
/// highest variable.
struct RootCountRow {
  unsigned trial = 0;
  unsigned bp_zy = 0;  // Bp(Bp(f,z),y)
  unsigned bp_yz = 0;  // Bp(Bp(f,y),z)
  unsigned hp = 0;     // Hp(f,[z,y])
  bool dominance = false;
};

/// Polynomials not involving y or z are redrawn. Throws std::invalid_argument
/// when trials == 0.
std::vector<RootCountRow> bench_roots(unsigned trials, unsigned degree, std::uint64_t seed);

}  // namespace owcad
