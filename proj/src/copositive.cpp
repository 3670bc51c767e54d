#include "owcad/copositive.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "owcad/projection.hpp"
#include "owcad/psd.hpp"
#include "owcad/realroot.hpp"
#include "owcad/upoly.hpp"

namespace owcad {

std::string to_string(CopositiveAnswer a) {
  switch (a) {
    case CopositiveAnswer::Copositive: return "Copositive";
    case CopositiveAnswer::NotCopositive: return "NotCopositive";
    default: return "Inconclusive";
  }
}

QForm QForm::from_matrix(std::vector<std::vector<Int>> M, bool affine) {
  const std::size_t m = M.size();
  for (const auto& row : M)
    if (row.size() != m) throw std::invalid_argument("matrix is not square");
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (M[i][j] != M[j][i]) throw std::invalid_argument("matrix is not symmetric");
  if (affine && m == 0) throw std::invalid_argument("affine form needs a border row");
  QForm q;
  if (affine) {
    q.n = m - 1;
    q.A = std::move(M);
  } else {
    q.n = m;
    q.A.assign(m + 1, std::vector<Int>(m + 1, 0));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) q.A[i][j] = M[i][j];
  }
  return q;
}

Rat QForm::value(const std::vector<Rat>& x) const {
  if (x.size() != n) throw std::invalid_argument("point has the wrong dimension");
  Rat s = 0;
  auto at = [&](unsigned i) { return i < n ? x[i] : Rat(1); };
  for (unsigned i = 0; i <= n; ++i)
    for (unsigned j = 0; j <= n; ++j) s += Rat(A[i][j]) * at(i) * at(j);
  return s;
}

ParamForm ParamForm::of(const QForm& q) {
  ParamForm p;
  p.n = q.n;
  p.nvars = q.n;
  p.A.assign(q.n + 1, std::vector<MPoly>(q.n + 1));
  for (unsigned i = 0; i <= q.n; ++i)
    for (unsigned j = 0; j <= q.n; ++j) p.A[i][j] = MPoly::constant(q.n, q.A[i][j]);
  return p;
}

namespace {

// Drops the x variables of a polynomial not kept in J and renumbers the rest.
MPoly rename_x(const MPoly& f, unsigned s, const std::vector<unsigned>& J) {
  const unsigned nv = s + J.size();
  std::vector<Exp> exps;
  std::vector<Int> coefs;
  for (std::size_t t = 0; t < f.size(); ++t) {
    auto e = f.exps(t);
    bool drop = false;
    for (unsigned k = s; k < f.nvars(); ++k)
      if (e[k] && std::find(J.begin(), J.end(), k - s + 1) == J.end()) drop = true;
    if (drop) continue;
    for (unsigned k = 0; k < s; ++k) exps.push_back(e[k]);
    for (unsigned j : J) exps.push_back(e[s + j - 1]);
    coefs.push_back(f.coef(t));
  }
  return MPoly::from_terms(nv, std::move(exps), std::move(coefs));
}

}  // namespace

ParamForm ParamForm::restrict_to(const std::vector<unsigned>& J) const {
  const unsigned s = nvars - n;
  ParamForm p;
  p.n = J.size();
  p.nvars = s + p.n;
  std::vector<unsigned> idx(J.begin(), J.end());
  idx.push_back(n + 1);
  p.A.assign(p.n + 1, std::vector<MPoly>(p.n + 1));
  for (unsigned i = 0; i <= p.n; ++i)
    for (unsigned j = 0; j <= p.n; ++j) p.A[i][j] = rename_x(A[idx[i] - 1][idx[j] - 1], s, J);
  return p;
}

MPoly quartic_lift(const ParamForm& q) {
  const unsigned n = q.n;
  auto sq = [&](unsigned i) { return MPoly::variable(q.nvars, q.x(i), 2); };
  MPoly F = q.A[n][n];
  for (unsigned i = 1; i <= n; ++i) {
    F += q.A[i - 1][n] * sq(i) * Int(2);
    for (unsigned j = 1; j <= n; ++j) F += q.A[i - 1][j - 1] * sq(i) * sq(j);
  }
  return F;
}

MPoly quartic_lift(const QForm& q) { return quartic_lift(ParamForm::of(q)); }

QForm qform_of_even_quartic(const MPoly& F) {
  const unsigned n = F.nvars();
  if (F.is_zero()) throw std::invalid_argument("zero polynomial");
  QForm q;
  q.n = n;
  q.A.assign(n + 1, std::vector<Int>(n + 1, 0));
  for (std::size_t t = 0; t < F.size(); ++t) {
    auto e = F.exps(t);
    std::vector<unsigned> at;  // variable slots of y_i = x_i^2, with repetition
    unsigned deg = 0;
    for (unsigned k = 0; k < n; ++k) {
      if (e[k] % 2) throw std::invalid_argument("polynomial is not even in every variable");
      deg += e[k];
      for (unsigned r = 0; r < e[k] / 2; ++r) at.push_back(k);
    }
    if (deg > 4) throw std::invalid_argument("polynomial is not quartic");
    const Int& c = F.coef(t);
    if (at.empty()) {
      q.A[n][n] = 2 * c;
    } else if (at.size() == 1) {
      q.A[at[0]][n] = q.A[n][at[0]] = c;
    } else if (at[0] == at[1]) {
      q.A[at[0]][at[0]] = 2 * c;
    } else {
      q.A[at[0]][at[1]] = q.A[at[1]][at[0]] = c;
    }
  }
  return q;
}

BorderedMatrix bordered(const ParamForm& q, const std::vector<unsigned>& I) {
  const unsigned n = q.n;
  for (std::size_t i = 0; i < I.size(); ++i)
    if (I[i] < 1 || I[i] > n || (i && I[i] <= I[i - 1]))
      throw std::invalid_argument("index list must be increasing within 1..n");
  std::vector<bool> in(n + 1, false);
  for (unsigned i : I) in[i] = true;
  auto sq = [&](unsigned i) { return MPoly::variable(q.nvars, q.x(i), 2); };
  const std::size_t m = I.size();
  BorderedMatrix b;
  b.I = I;
  b.AI.assign(m, std::vector<MPoly>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) b.AI[i][j] = q.A[I[i] - 1][I[j] - 1];
  for (std::size_t i = 0; i < m; ++i) {
    MPoly p = q.A[I[i] - 1][n];
    for (unsigned j = 1; j <= n; ++j)
      if (!in[j]) p += q.A[I[i] - 1][j - 1] * sq(j);
    b.border.push_back(std::move(p));
  }
  b.corner = q.A[n][n];
  for (unsigned j = 1; j <= n; ++j) {
    if (in[j]) continue;
    b.corner += q.A[j - 1][n] * sq(j) * Int(2);
    for (unsigned k = 1; k <= n; ++k)
      if (!in[k]) b.corner += q.A[j - 1][k - 1] * sq(j) * sq(k);
  }
  return b;
}

BorderedMatrix bordered(const QForm& q, const std::vector<unsigned>& I) {
  return bordered(ParamForm::of(q), I);
}

MPoly expand_bordered(const ParamForm& q, const BorderedMatrix& b) {
  const std::size_t m = b.I.size();
  std::vector<MPoly> y;
  for (unsigned i : b.I) y.push_back(MPoly::variable(q.nvars, q.x(i), 2));
  MPoly F = b.corner;
  for (std::size_t i = 0; i < m; ++i) {
    F += b.border[i] * y[i] * Int(2);
    for (std::size_t j = 0; j < m; ++j) F += b.AI[i][j] * y[i] * y[j];
  }
  return F;
}

MPoly determinant(std::vector<std::vector<MPoly>> M, unsigned nvars) {
  const std::size_t m = M.size();
  if (m == 0) return MPoly::constant(nvars, 1);
  MPoly prev = MPoly::constant(nvars, 1);
  bool negate = false;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    std::size_t p = k;
    while (p < m && M[p][k].is_zero()) ++p;
    if (p == m) return MPoly(nvars);
    if (p != k) {
      std::swap(M[p], M[k]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < m; ++i) {
      for (std::size_t j = k + 1; j < m; ++j)
        M[i][j] = divide(M[i][j] * M[k][k] - M[i][k] * M[k][j], prev);
      M[i][k] = MPoly(nvars);
    }
    prev = M[k][k];
  }
  return negate ? -M[m - 1][m - 1] : M[m - 1][m - 1];
}

namespace {

std::vector<std::vector<MPoly>> minor_matrix(const std::vector<std::vector<MPoly>>& M, std::size_t r,
                                             std::size_t c) {
  std::vector<std::vector<MPoly>> out;
  for (std::size_t i = 0; i < M.size(); ++i) {
    if (i == r) continue;
    std::vector<MPoly> row;
    for (std::size_t j = 0; j < M.size(); ++j)
      if (j != c) row.push_back(M[i][j]);
    out.push_back(std::move(row));
  }
  return out;
}

unsigned ring_of(const BorderedMatrix& b) {
  return b.corner.nvars();
}

}  // namespace

MPoly det_bordered(const BorderedMatrix& b) {
  const std::size_t m = b.I.size();
  const unsigned nv = ring_of(b);
  // det [[A, p], [p^T, c]] = c det A - sum_ij p_i p_j adj(A)_ij
  MPoly d = b.corner * determinant(b.AI, nv);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      MPoly cof = determinant(minor_matrix(b.AI, j, i), nv);
      if (cof.is_zero()) continue;
      if ((i + j) % 2) cof = -cof;
      d -= b.border[i] * b.border[j] * cof;
    }
  }
  return d;
}

namespace {

std::string show_set(const std::vector<unsigned>& I) {
  std::string s = "[";
  for (std::size_t i = 0; i < I.size(); ++i) s += (i ? "," : "") + std::to_string(I[i]);
  return s + "]";
}

bool coprime(const MPoly& a, const MPoly& b) { return gcd(a, b).is_constant(); }

// Nonempty increasing index lists of 1..n.
std::vector<std::vector<unsigned>> subsequences(unsigned n) {
  std::vector<std::vector<unsigned>> out;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<unsigned> I;
    for (unsigned i = 0; i < n; ++i)
      if (mask >> i & 1) I.push_back(i + 1);
    out.push_back(std::move(I));
  }
  return out;
}

}  // namespace

std::vector<std::string> genericity_flags(const ParamForm& q) {
  std::vector<std::string> flags;
  const unsigned n = q.n;
  MPoly F = quartic_lift(q);
  if (!F.is_zero() && !is_squarefree(F)) flags.push_back("F is not squarefree");
  for (unsigned i = 1; i <= n; ++i) {
    std::vector<unsigned> J;
    for (unsigned j = 1; j <= n; ++j)
      if (j != i) J.push_back(j);
    MPoly face = quartic_lift(q.restrict_to(J));
    if (face.is_zero() || !is_squarefree(face))
      flags.push_back("(1) F|x" + std::to_string(i) + "=0 is zero or not squarefree");
  }
  for (const auto& I : subsequences(n)) {
    BorderedMatrix b = bordered(q, I);
    MPoly dA = determinant(b.AI, q.nvars);
    if (dA.is_zero() || !is_squarefree(dA)) flags.push_back("(2) det A_I is zero or not squarefree, I=" + show_set(I));
    if (I.size() >= 2) {
      MPoly g(q.nvars);
      for (std::size_t k = 0; k < I.size(); ++k) {
        MPoly mk = determinant(minor_matrix(b.AI, k, k), q.nvars);
        if (!mk.is_zero()) g = g.is_zero() ? normalize(mk) : gcd(g, mk);
      }
      if (g.is_zero() || !g.is_constant())
        flags.push_back("(2) principal minors of A_I share a factor, I=" + show_set(I));
    }
    MPoly dP = det_bordered(b);
    if (dP.is_zero() || !is_squarefree(dP)) flags.push_back("(4) det P_I is zero or not squarefree, I=" + show_set(I));
    else if (!dA.is_zero() && !coprime(dP, dA)) flags.push_back("(5) det P_I and det A_I share a factor, I=" + show_set(I));
  }
  return flags;
}

IdentityReport np_identity_check(const ParamForm& q) {
  IdentityReport r;
  r.flags = genericity_flags(q);
  if (!r.flags.empty()) return r;
  std::vector<unsigned> all;
  for (unsigned i = 1; i <= q.n; ++i) all.push_back(i);
  BorderedMatrix top = bordered(q, all);
  r.expected = normalize(determinant(top.AI, q.nvars) * det_bordered(top));
  VarList xs;
  for (unsigned i = q.n; i >= 1; --i) xs.push_back(q.x(i));
  r.np = np(quartic_lift(q), xs);
  r.holds = r.np == r.expected;
  return r;
}

namespace {

// Positive rational samples of the open intervals of (0, oo) cut by u.
std::vector<Rat> positive_samples(const UPoly& u, bool two_point) {
  UPoly h = u * UPoly(std::vector<Int>{0, 1});
  std::vector<Rat> pts;
  for (auto& p : sp_one(h, h))
    if (sgn(p) > 0) pts.push_back(p);
  if (two_point && pts.size() > 2) {
    const int at_inf = sgn(u.lead());
    std::vector<Rat> keep;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
      if (sign_at(u, pts[i]) == -at_inf && keep.empty()) keep.push_back(pts[i]);
    keep.push_back(pts.back());
    pts = std::move(keep);
  }
  return pts;
}

struct FaceResult {
  CopositiveAnswer answer = CopositiveAnswer::Copositive;
  std::optional<std::vector<Rat>> witness;  // local x = alpha^2
  std::vector<std::string> flags;           // in local indices
};

struct MPolyHash {
  std::size_t operator()(const MPoly& f) const { return f.hash(); }
};

class Cmt {
 public:
  Cmt(const QForm& q, const CmtOptions& opts) : q_(q), opts_(opts) {}

  CopositivityVerdict run() {
    std::vector<unsigned> all;
    for (unsigned i = 1; i <= q_.n; ++i) all.push_back(i);
    FaceResult r = solve(all);
    CopositivityVerdict v;
    v.answer = r.answer;
    v.witness = r.witness;
    v.genericity_flags = r.flags;
    v.faces = memo_.size();
    v.cache_hits = hits_;
    v.samples = samples_;
    return v;
  }

 private:
  const QForm& q_;
  CmtOptions opts_;
  std::unordered_map<MPoly, FaceResult, MPolyHash> memo_;  // the set Q and known failures
  std::size_t hits_ = 0, samples_ = 0;

  static std::string relabel(const std::string& flag, const std::vector<unsigned>& J) {
    return flag + " on face " + show_set(J);
  }

  FaceResult solve(const std::vector<unsigned>& J) {
    ParamForm p = ParamForm::of(q_).restrict_to(J);
    MPoly F = quartic_lift(p);
    if (auto it = memo_.find(F); it != memo_.end()) {
      ++hits_;
      return lift_back(it->second, J);
    }
    FaceResult local = solve_face(p, F, J);
    memo_.emplace(F, local);
    return lift_back(local, J);
  }

  // Local results are stored per polynomial; J maps them into the input's indices.
  FaceResult lift_back(const FaceResult& r, const std::vector<unsigned>& J) const {
    FaceResult out;
    out.answer = r.answer;
    out.flags = r.flags;
    if (r.witness) {
      std::vector<Rat> x(q_.n, Rat(0));
      for (std::size_t i = 0; i < J.size(); ++i) x[J[i] - 1] = (*r.witness)[i];
      out.witness = std::move(x);
    }
    return out;
  }

  FaceResult solve_face(const ParamForm& p, const MPoly& F, const std::vector<unsigned>& J) {
    const unsigned m = p.n;
    FaceResult r;
    if (m == 0) {
      if (sgn(F.constant_value()) < 0) {
        r.answer = CopositiveAnswer::NotCopositive;
        r.witness = std::vector<Rat>{};
      }
      return r;
    }
    bool unsure = false;
    for (unsigned i = 1; i <= m; ++i) {
      std::vector<unsigned> sub;
      for (unsigned j = 1; j <= m; ++j)
        if (j != i) sub.push_back(J[j - 1]);
      FaceResult f = solve(sub);
      if (f.answer == CopositiveAnswer::NotCopositive) {
        // back to local coordinates
        r.answer = CopositiveAnswer::NotCopositive;
        std::vector<Rat> x(m, Rat(0));
        for (unsigned k = 0; k < m; ++k) x[k] = (*f.witness)[J[k] - 1];
        r.witness = std::move(x);
        return r;
      }
      if (f.answer == CopositiveAnswer::Inconclusive) unsure = true;
      for (auto& fl : f.flags)
        if (std::find(r.flags.begin(), r.flags.end(), fl) == r.flags.end()) r.flags.push_back(fl);
    }
    // one variable: the samples are cut by the roots of F itself, nothing to assume
    if (m >= 2)
      for (const auto& fl : genericity_flags(p)) r.flags.push_back(relabel(fl, J));

    // g_k = det P_[1..k-1] lives in x_k..x_m; lift x_m first, F last.
    std::vector<std::vector<Rat>> O{{}};  // coordinates of x_{k+1}..x_m
    for (unsigned k = m; k >= 1; --k) {
      std::vector<unsigned> I;
      for (unsigned i = 1; i < k; ++i) I.push_back(i);
      MPoly g = k == 1 ? F : det_bordered(bordered(p, I));
      VarList vars;
      for (unsigned i = k + 1; i <= m; ++i) vars.push_back(p.x(i));
      std::vector<std::vector<Rat>> next;
      for (const auto& a : O) {
        UPoly u = fiber(g, vars, a, p.x(k));
        if (u.is_zero()) {
          unsure = true;
          r.flags.push_back(relabel("zero fiber of det P at level " + std::to_string(k), J));
          u = UPoly::constant(1);
        }
        for (const auto& t : positive_samples(u, opts_.two_point)) {
          std::vector<Rat> b{t};
          b.insert(b.end(), a.begin(), a.end());
          next.push_back(std::move(b));
        }
      }
      O = std::move(next);
    }
    VarList xs;
    for (unsigned i = 1; i <= m; ++i) xs.push_back(p.x(i));
    for (const auto& a : O) {
      ++samples_;
      if (sgn(evaluate_value(F, xs, a)) < 0) {
        r.answer = CopositiveAnswer::NotCopositive;
        std::vector<Rat> x;
        for (const auto& t : a) x.push_back(t * t);
        r.witness = std::move(x);
        r.flags.clear();
        return r;
      }
    }
    if (unsure || !r.flags.empty()) r.answer = CopositiveAnswer::Inconclusive;
    return r;
  }
};

}  // namespace

CopositivityVerdict cmt(const QForm& q, const CmtOptions& opts) {
  bool pure = q.n > 0;
  for (unsigned i = 0; i <= q.n; ++i) pure = pure && q.A[i][q.n] == 0;
  if (pure) {
    // x A x^T >= 0 on the orthant iff it holds on the slice x_n = 1
    QForm slice;
    slice.n = q.n - 1;
    slice.A.assign(q.n, std::vector<Int>(q.n));
    for (unsigned i = 0; i < q.n; ++i)
      for (unsigned j = 0; j < q.n; ++j) slice.A[i][j] = q.A[i][j];
    CopositivityVerdict v = cmt(slice, opts);
    if (v.witness) v.witness->push_back(Rat(1));
    return v;
  }
  CopositivityVerdict v = Cmt(q, opts).run();
  if (v.answer == CopositiveAnswer::Inconclusive && opts.escalate) {
    v.escalated = true;
    MPoly F = quartic_lift(q);
    PsdVerdict p = F.is_zero() ? PsdVerdict{} : psd_hp_two(F);
    if (p.answer == PsdAnswer::PSD) {
      v.answer = CopositiveAnswer::Copositive;
    } else {
      v.answer = CopositiveAnswer::NotCopositive;
      std::vector<Rat> x;
      for (const auto& t : p.witness->coords) x.push_back(t * t);
      v.witness = std::move(x);
    }
  }
  return v;
}

CopositivityVerdict cmt(const MPoly& F, const CmtOptions& opts) {
  return cmt(qform_of_even_quartic(F), opts);
}

}  // namespace owcad
