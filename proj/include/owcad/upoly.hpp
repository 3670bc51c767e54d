#pragma once

#include <vector>

#include "owcad/mpoly.hpp"

namespace owcad {

/// Dense univariate polynomial over Z; c[i] is the coefficient of x^i.
/// The zero polynomial has an empty coefficient vector.
struct UPoly {
  std::vector<Int> c;

  UPoly() = default;
  explicit UPoly(std::vector<Int> coefs) : c(std::move(coefs)) { trim(); }
  static UPoly constant(const Int& v) { return UPoly(std::vector<Int>{v}); }

  int degree() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  const Int& lead() const { return c.back(); }
  void trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }
  friend bool operator==(const UPoly&, const UPoly&) = default;
};

UPoly operator*(const UPoly& a, const UPoly& b);
UPoly operator+(const UPoly& a, const UPoly& b);
UPoly operator-(const UPoly& a, const UPoly& b);

UPoly derivative(const UPoly& f);
Int content(const UPoly& f);
/// Primitive part with positive leading coefficient.
UPoly primitive(const UPoly& f);
UPoly prem(const UPoly& a, const UPoly& b);
/// Exact quotient over Z; throws std::domain_error if b does not divide a.
UPoly divide(const UPoly& a, const UPoly& b);
/// Primitive gcd with positive leading coefficient; gcd(0,0) = 0.
UPoly gcd(const UPoly& a, const UPoly& b);
/// Primitive squarefree part with positive leading coefficient.
UPoly squarefree_part(const UPoly& f);

/// Sign of f(r).
int sign_at(const UPoly& f, const Rat& r);
Rat value_at(const UPoly& f, const Rat& r);
/// Polynomial whose roots are -1 times the roots of f.
UPoly reflect(const UPoly& f);

/// Converts a polynomial that involves at most the variable v.
UPoly to_upoly(const MPoly& f, Var v);
MPoly to_mpoly(const UPoly& f, Var v, unsigned nvars);

/// f(point, v) for f involving only vars and v, scaled by a positive integer so
/// that the result has integer coefficients.
UPoly fiber(const MPoly& f, const VarList& vars, const std::vector<Rat>& point, Var v);

}  // namespace owcad
