#pragma once

#include <map>
#include <vector>

#include "owcad/mpoly.hpp"

namespace owcad {

/// gcd normalized to be primitive with positive lexicographic leading
/// coefficient. gcd(a, 0) = normalize(a). Throws when both are zero.
MPoly gcd(const MPoly& a, const MPoly& b);

/// gcd of the coefficients of f viewed as a polynomial in v (normalized).
MPoly content_in(const MPoly& f, Var v);

/// Pseudo-remainder of a by b in v: lc(b)^(deg a - deg b + 1) a = q b + r.
MPoly prem(const MPoly& a, const MPoly& b, Var v);

/// Resultant eliminating v (the Sylvester determinant with a's rows first).
/// Uses modular_resultant when at most one other variable occurs, the
/// subresultant PRS otherwise.
MPoly resultant(const MPoly& a, const MPoly& b, Var v);
MPoly subresultant_resultant(const MPoly& a, const MPoly& b, Var v);
/// Evaluation and interpolation modulo 62-bit primes, recombined by CRT up to
/// a proven coefficient bound. At most one variable besides v may occur;
/// throws std::invalid_argument otherwise.
MPoly modular_resultant(const MPoly& a, const MPoly& b, Var v);

/// (-1)^(d(d-1)/2) Res(f, df/dv, v) / lc(f, v) for d = deg(f, v) >= 2.
MPoly discriminant(const MPoly& f, Var v);

struct SqfFactor {
  MPoly poly;  // squarefree, primitive, positive leading coefficient
  unsigned multiplicity = 1;
};

/// h = unit_sign * content * prod(factor^multiplicity). The factors are
/// pairwise coprime; factors sharing a multiplicity are not merged, and a
/// factor is not necessarily irreducible.
struct SqfDecomp {
  int unit_sign = 1;
  Int content = 1;
  std::vector<SqfFactor> factors;

  std::vector<MPoly> odd_part() const;
  std::vector<MPoly> even_part() const;
  /// Product of all factors (1 for constants).
  MPoly sqrfree(unsigned nvars) const;
};

SqfDecomp sqf_decompose(const MPoly& h);
/// Squarefree part, normalized; 1 for nonzero constants.
MPoly sqrfree(const MPoly& h);
bool is_squarefree(const MPoly& h);

/// A coprime basis element with its exponent in each input polynomial.
struct BasisElement {
  MPoly poly;
  std::vector<unsigned> exponents;
};

/// Splits the inputs into pairwise coprime squarefree normalized polynomials
/// such that each input equals a constant times the product of basis
/// elements raised to the recorded exponents. Constant inputs contribute
/// nothing; zero inputs are rejected.
std::vector<BasisElement> coprime_basis(const std::vector<MPoly>& inputs);

/// Squarefree, pairwise coprime, normalized nonconstant factors whose product
/// has the same zero set as every polynomial they were built from.
using FactorList = std::vector<MPoly>;

FactorList squarefree_factors(const MPoly& h);
/// Refines the union of two factor lists to a coprime list.
FactorList merge_factors(const FactorList& a, const FactorList& b);
/// gcd of the products, as a factor list. Inputs must be coprime lists.
FactorList gcd_factors(const FactorList& a, const FactorList& b);

/// f with its variables substituted; value = num / den with den > 0.
struct QPoly {
  MPoly num;
  Int den = 1;
};

QPoly evaluate(const MPoly& f, const std::map<Var, Rat>& at);
/// Full evaluation; throws if f involves a variable outside `at`.
Rat evaluate_value(const MPoly& f, const std::map<Var, Rat>& at);
/// Evaluation at (x_{vars[0]}, ..., x_{vars[k-1]}) = point.
Rat evaluate_value(const MPoly& f, const VarList& vars, const std::vector<Rat>& point);

}  // namespace owcad
