#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "owcad/numeric.hpp"

namespace owcad {

/// A variable of the ambient order x1 < x2 < ... < xn. Indices start at 1.
struct Var {
  unsigned index = 0;
  friend auto operator<=>(const Var&, const Var&) = default;
};

using VarList = std::vector<Var>;

class ContextMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Variable names of an ambient order; name(Var{1}) is the lowest variable.
class Context {
 public:
  explicit Context(std::vector<std::string> names);

  unsigned size() const { return static_cast<unsigned>(names_.size()); }
  const std::string& name(Var v) const { return names_.at(v.index - 1); }
  std::optional<Var> find(std::string_view name) const;
  Var var(std::string_view name) const;
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
};

using Exp = std::uint32_t;

/// Sparse multivariate polynomial with integer coefficients.
///
/// Terms are stored in descending graded lexicographic order where x_n is the
/// most significant variable, so equal polynomials have identical storage.
class MPoly {
 public:
  MPoly() = default;
  explicit MPoly(unsigned nvars) : nvars_(nvars) {}

  static MPoly constant(unsigned nvars, const Int& c);
  static MPoly variable(unsigned nvars, Var v, Exp power = 1);
  static MPoly monomial(unsigned nvars, std::span<const Exp> exps, const Int& c);
  /// Builds a polynomial from terms in any order; duplicates are summed.
  static MPoly from_terms(unsigned nvars, std::vector<Exp> exps, std::vector<Int> coefs);

  unsigned nvars() const { return nvars_; }
  std::size_t size() const { return coefs_.size(); }
  bool is_zero() const { return coefs_.empty(); }
  bool is_constant() const;
  /// Value of a constant polynomial (zero for the zero polynomial).
  Int constant_value() const;

  const Int& coef(std::size_t i) const { return coefs_[i]; }
  std::span<const Exp> exps(std::size_t i) const {
    return {exps_.data() + i * nvars_, nvars_};
  }
  Exp exp(std::size_t i, Var v) const { return exps_[i * nvars_ + v.index - 1]; }

  unsigned degree(Var v) const;
  unsigned total_degree() const;
  /// Largest variable index with positive degree; 0 for constants.
  unsigned level() const;
  bool involves(Var v) const { return degree(v) > 0; }
  std::vector<Var> variables() const;

  /// Coefficient of the lexicographically largest term.
  const Int& lex_leading_coef() const;
  /// gcd of the integer coefficients (non-negative).
  Int int_content() const;

  MPoly operator-() const;
  MPoly& operator+=(const MPoly& o);
  MPoly& operator-=(const MPoly& o);
  MPoly& operator*=(const MPoly& o);
  MPoly& operator*=(const Int& c);

  friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
  friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
  friend MPoly operator*(const MPoly& a, const MPoly& b);
  friend MPoly operator*(MPoly a, const Int& c) { return a *= c; }
  friend MPoly operator*(const Int& c, MPoly a) { return a *= c; }
  friend bool operator==(const MPoly& a, const MPoly& b) {
    return a.nvars_ == b.nvars_ && a.exps_ == b.exps_ && a.coefs_ == b.coefs_;
  }

  MPoly pow(unsigned e) const;
  /// Divides every coefficient by c; throws if some coefficient is not divisible.
  MPoly divexact(const Int& c) const;
  /// Multiplies by v^k.
  MPoly shift(Var v, Exp k) const;

  std::size_t hash() const;

 private:
  friend class TermBuilder;
  void check_same(const MPoly& o) const;

  unsigned nvars_ = 0;
  std::vector<Exp> exps_;
  std::vector<Int> coefs_;
};

/// Coefficients of f as a polynomial in v: result[k] is the coefficient of v^k.
std::vector<MPoly> coefficients(const MPoly& f, Var v);
MPoly from_coefficients(const std::vector<MPoly>& c, Var v, unsigned nvars);
MPoly lc(const MPoly& f, Var v);
MPoly coeff(const MPoly& f, Var v, unsigned k);
MPoly derivative(const MPoly& f, Var v);

/// Primitive over Z with positive lexicographic leading coefficient.
MPoly normalize(const MPoly& f);
/// Divides by the positive integer content.
MPoly primitive(const MPoly& f);

/// Exact quotient a / b, or nullopt when b does not divide a.
std::optional<MPoly> try_divide(const MPoly& a, const MPoly& b);
/// Exact quotient a / b; throws std::domain_error when b does not divide a.
MPoly divide(const MPoly& a, const MPoly& b);
bool divides(const MPoly& b, const MPoly& a);

/// Canonical text: graded lex order, decimal coefficients, '^' and explicit '*'.
std::string to_string(const MPoly& f, const Context& ctx);

/// Product of a list (1 for an empty list).
MPoly product(const std::vector<MPoly>& fs, unsigned nvars);

}  // namespace owcad
