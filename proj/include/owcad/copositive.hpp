#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "owcad/polyalg.hpp"

namespace owcad {

/// f(x) = (x,1) A (x,1)^T with A symmetric of order n+1; the last row and
/// column hold the affine part. A pure quadratic form has a zero border.
struct QForm {
  unsigned n = 0;
  std::vector<std::vector<Int>> A;

  /// `affine` selects between an (n+1)x(n+1) matrix with border and a pure
  /// n x n form. Throws std::invalid_argument unless M is square and symmetric.
  static QForm from_matrix(std::vector<std::vector<Int>> M, bool affine);
  Rat value(const std::vector<Rat>& x) const;
};

/// A form whose entries are polynomials in parameters z_1..z_s. The ring has
/// s + n variables, z first, then x_1..x_n.
struct ParamForm {
  unsigned n = 0, nvars = 0;
  std::vector<std::vector<MPoly>> A;

  Var x(unsigned i) const { return Var{nvars - n + i}; }
  static ParamForm of(const QForm& q);
  /// Keeps the x variables listed in J (1-based, increasing) and the border.
  ParamForm restrict_to(const std::vector<unsigned>& J) const;
};

/// F(x) = f(x1^2, ..., xn^2).
MPoly quartic_lift(const ParamForm& q);
MPoly quartic_lift(const QForm& q);
/// The form of 2F for an even quartic F; throws std::invalid_argument otherwise.
QForm qform_of_even_quartic(const MPoly& F);

/// F = (x_I^2, 1) P_I (x_I^2, 1)^T with P_I = [[A_I, p], [p^T, corner]].
struct BorderedMatrix {
  std::vector<unsigned> I;
  std::vector<std::vector<MPoly>> AI;
  std::vector<MPoly> border;
  MPoly corner;
};

BorderedMatrix bordered(const ParamForm& q, const std::vector<unsigned>& I);
BorderedMatrix bordered(const QForm& q, const std::vector<unsigned>& I);
/// (x_I^2, 1) P_I (x_I^2, 1)^T expanded.
MPoly expand_bordered(const ParamForm& q, const BorderedMatrix& b);
/// det(P_I) by expansion along the polynomial border, so only minors of the
/// constant block are computed; works for singular A_I.
MPoly det_bordered(const BorderedMatrix& b);
/// Fraction-free determinant of a polynomial matrix.
MPoly determinant(std::vector<std::vector<MPoly>> M, unsigned nvars);

/// Failed checkable hypotheses of the closed form for Np: every face
/// F|x_i=0 nonzero and squarefree, det A_I and det P_I nonzero and squarefree
/// and coprime, principal minors of A_I coprime; plus F itself squarefree.
/// The gcd condition on the minors of P_I is not checked.
std::vector<std::string> genericity_flags(const ParamForm& q);

struct IdentityReport {
  std::vector<std::string> flags;  // nonempty: the comparison was skipped
  bool holds = false;
  MPoly np;        // normalized Np(F, [x_1..x_n])
  MPoly expected;  // normalized det(A_n) det(A_{n+1})
};

/// Compares Np(F,[x_1..x_n]) with det(A_n) det(A_{n+1}) up to sign and content.
IdentityReport np_identity_check(const ParamForm& q);

struct CmtOptions {
  /// Keep at most two positive samples per fiber: the unbounded interval and
  /// intervals where g has the opposite sign at infinity.
  bool two_point = false;
  /// Decide Inconclusive cases with psd_hp_two on the quartic lift.
  bool escalate = false;
};

enum class CopositiveAnswer { Copositive, NotCopositive, Inconclusive };
std::string to_string(CopositiveAnswer a);

struct CopositivityVerdict {
  CopositiveAnswer answer = CopositiveAnswer::Copositive;
  /// x >= 0 componentwise with f(x) < 0.
  std::optional<std::vector<Rat>> witness;
  std::vector<std::string> genericity_flags;
  std::size_t faces = 0;       // distinct faces decided
  std::size_t cache_hits = 0;  // faces answered from the memo
  std::size_t samples = 0;     // sign checks of F
  bool escalated = false;
};

CopositivityVerdict cmt(const QForm& q, const CmtOptions& opts = {});
/// F must be even in every variable of total degree at most 4.
CopositivityVerdict cmt(const MPoly& F, const CmtOptions& opts = {});

}  // namespace owcad
