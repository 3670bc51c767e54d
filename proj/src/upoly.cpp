#include "owcad/upoly.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

namespace owcad {

UPoly operator*(const UPoly& a, const UPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Int> r(a.c.size() + b.c.size() - 1, 0);
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (std::size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
  }
  return UPoly(std::move(r));
}

UPoly operator+(const UPoly& a, const UPoly& b) {
  std::vector<Int> r(std::max(a.c.size(), b.c.size()), 0);
  for (std::size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
  for (std::size_t i = 0; i < b.c.size(); ++i) r[i] += b.c[i];
  return UPoly(std::move(r));
}

UPoly operator-(const UPoly& a, const UPoly& b) {
  std::vector<Int> r(std::max(a.c.size(), b.c.size()), 0);
  for (std::size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
  for (std::size_t i = 0; i < b.c.size(); ++i) r[i] -= b.c[i];
  return UPoly(std::move(r));
}

UPoly derivative(const UPoly& f) {
  if (f.c.size() <= 1) return {};
  std::vector<Int> r(f.c.size() - 1);
  for (std::size_t i = 1; i < f.c.size(); ++i) r[i - 1] = f.c[i] * static_cast<unsigned long>(i);
  return UPoly(std::move(r));
}

Int content(const UPoly& f) {
  Int g = 0;
  for (const auto& x : f.c) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

UPoly primitive(const UPoly& f) {
  if (f.is_zero()) return f;
  Int g = content(f);
  if (sgn(f.lead()) < 0) g = -g;
  UPoly r = f;
  if (g != 1)
    for (auto& x : r.c) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  return r;
}

UPoly prem(const UPoly& a, const UPoly& b) {
  if (b.is_zero()) throw std::domain_error("pseudo-remainder by zero");
  const int db = b.degree();
  std::vector<Int> r = a.c;
  int dr = a.degree();
  if (dr < db) return a;
  int e = dr - db + 1;
  const Int& lb = b.lead();
  while (dr >= db && !r.empty()) {
    Int lr = r.back();
    int k = dr - db;
    for (int i = 0; i < dr; ++i) {
      r[i] *= lb;
      if (i >= k) r[i] -= lr * b.c[i - k];
    }
    r.pop_back();
    while (!r.empty() && r.back() == 0) r.pop_back();
    dr = static_cast<int>(r.size()) - 1;
    --e;
  }
  if (e > 0) {
    Int m = ipow(lb, e);
    for (auto& x : r) x *= m;
  }
  return UPoly(std::move(r));
}

UPoly divide(const UPoly& a, const UPoly& b) {
  if (b.is_zero()) throw std::domain_error("division by zero polynomial");
  if (a.is_zero()) return {};
  int da = a.degree(), db = b.degree();
  if (da < db) throw std::domain_error("inexact univariate division");
  std::vector<Int> r = a.c;
  std::vector<Int> q(da - db + 1, 0);
  const Int& lb = b.lead();
  for (int k = da - db; k >= 0; --k) {
    const Int& top = r[k + db];
    if (top == 0) continue;
    if (!mpz_divisible_p(top.get_mpz_t(), lb.get_mpz_t()))
      throw std::domain_error("inexact univariate division");
    Int t;
    mpz_divexact(t.get_mpz_t(), top.get_mpz_t(), lb.get_mpz_t());
    for (int i = 0; i <= db; ++i) r[k + i] -= t * b.c[i];
    q[k] = t;
  }
  for (const auto& x : r)
    if (x != 0) throw std::domain_error("inexact univariate division");
  return UPoly(std::move(q));
}

namespace {

Int max_norm(const UPoly& f) {
  Int m = 0;
  for (const auto& x : f.c)
    if (mpz_cmpabs(x.get_mpz_t(), m.get_mpz_t()) > 0) m = abs(x);
  return m;
}

std::optional<UPoly> try_divide(const UPoly& a, const UPoly& b) {
  try {
    return divide(a, b);
  } catch (const std::domain_error&) {
    return std::nullopt;
  }
}

// Heuristic gcd of primitive a, b: integer gcd of values at a large point,
// read back in symmetric base-xi digits and confirmed by division.
std::optional<UPoly> heu_gcd(const UPoly& a, const UPoly& b) {
  Int fn = max_norm(a), gn = max_norm(b);
  Int B = 2 * std::min(fn, gn) + 29;
  Int xi = std::min(B, Int(99 * sqrt(B)));
  Int alt = 2 * std::min(Int(fn / abs(a.lead())), Int(gn / abs(b.lead()))) + 4;
  if (alt > xi) xi = alt;
  for (int attempt = 0; attempt < 6; ++attempt) {
    Int va = 0, vb = 0;
    for (int i = a.degree(); i >= 0; --i) va = va * xi + a.c[i];
    for (int i = b.degree(); i >= 0; --i) vb = vb * xi + b.c[i];
    if (va != 0 && vb != 0) {
      Int h = igcd(va, vb);
      Int half = xi / 2;
      std::vector<Int> digits;
      while (h != 0) {
        Int r;
        mpz_fdiv_r(r.get_mpz_t(), h.get_mpz_t(), xi.get_mpz_t());
        if (r > half) r -= xi;
        h -= r;
        mpz_divexact(h.get_mpz_t(), h.get_mpz_t(), xi.get_mpz_t());
        digits.push_back(std::move(r));
      }
      UPoly g = primitive(UPoly(std::move(digits)));
      if (!g.is_zero() && (g.degree() == 0 || (try_divide(a, g) && try_divide(b, g)))) {
        if (g.degree() == 0) return UPoly::constant(1);
        return g;
      }
    }
    xi = 73794 * xi * sqrt(sqrt(xi)) / 27011;
  }
  return std::nullopt;
}

}  // namespace

UPoly gcd(const UPoly& a, const UPoly& b) {
  if (a.is_zero()) return primitive(b);
  if (b.is_zero()) return primitive(a);
  UPoly A = primitive(a), B = primitive(b);
  if (A.degree() == 0 || B.degree() == 0) return UPoly::constant(1);
  if (auto h = heu_gcd(A, B)) return *h;
  if (A.degree() < B.degree()) std::swap(A, B);
  while (!B.is_zero()) {
    if (B.degree() == 0) return UPoly::constant(1);
    UPoly R = prem(A, B);
    A = std::move(B);
    B = primitive(R);
  }
  return primitive(A);
}

UPoly squarefree_part(const UPoly& f) {
  if (f.degree() <= 0) return f.is_zero() ? f : UPoly::constant(1);
  UPoly g = gcd(f, derivative(f));
  return primitive(divide(primitive(f), g));
}

int sign_at(const UPoly& f, const Rat& r) {
  if (f.is_zero()) return 0;
  const Int& a = r.get_num();
  const Int& b = r.get_den();
  Int acc = f.lead();
  Int pw = 1;
  for (int i = f.degree() - 1; i >= 0; --i) {
    pw *= b;
    acc *= a;
    acc += f.c[i] * pw;
  }
  return sgn(acc);
}

Rat value_at(const UPoly& f, const Rat& r) {
  Rat acc = 0;
  for (int i = f.degree(); i >= 0; --i) acc = acc * r + f.c[i];
  return acc;
}

UPoly reflect(const UPoly& f) {
  UPoly r = f;
  for (std::size_t i = 1; i < r.c.size(); i += 2) r.c[i] = -r.c[i];
  return r;
}

UPoly to_upoly(const MPoly& f, Var v) {
  std::vector<Int> c(f.degree(v) + 1, 0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto e = f.exps(i);
    for (unsigned k = 0; k < f.nvars(); ++k)
      if (k + 1 != v.index && e[k] != 0)
        throw std::invalid_argument("polynomial involves more than one variable");
    c[e[v.index - 1]] += f.coef(i);
  }
  return UPoly(std::move(c));
}

MPoly to_mpoly(const UPoly& f, Var v, unsigned nvars) {
  std::vector<Exp> exps;
  std::vector<Int> coefs;
  for (std::size_t i = 0; i < f.c.size(); ++i) {
    if (f.c[i] == 0) continue;
    std::vector<Exp> e(nvars, 0);
    e[v.index - 1] = static_cast<Exp>(i);
    exps.insert(exps.end(), e.begin(), e.end());
    coefs.push_back(f.c[i]);
  }
  return MPoly::from_terms(nvars, std::move(exps), std::move(coefs));
}

UPoly fiber(const MPoly& f, const VarList& vars, const std::vector<Rat>& point, Var v) {
  const unsigned n = f.nvars();
  if (point.size() > vars.size()) throw std::invalid_argument("point longer than variable list");
  // slot[k] = index into point for variable k+1, or -1
  std::vector<int> slot(n, -1);
  for (std::size_t i = 0; i < point.size(); ++i) slot[vars[i].index - 1] = static_cast<int>(i);
  std::vector<unsigned> deg(n, 0);
  for (std::size_t t = 0; t < f.size(); ++t) {
    auto e = f.exps(t);
    for (unsigned k = 0; k < n; ++k) {
      if (e[k] == 0) continue;
      if (k + 1 != v.index && slot[k] < 0)
        throw std::invalid_argument("fiber: polynomial involves an unassigned variable");
      deg[k] = std::max<unsigned>(deg[k], e[k]);
    }
  }
  // powers of numerators and denominators
  std::vector<std::vector<Int>> npow(n), dpow(n);
  for (unsigned k = 0; k < n; ++k) {
    if (slot[k] < 0 || deg[k] == 0 || k + 1 == v.index) continue;
    const Rat& r = point[slot[k]];
    npow[k].resize(deg[k] + 1);
    dpow[k].resize(deg[k] + 1);
    npow[k][0] = 1;
    dpow[k][0] = 1;
    for (unsigned j = 1; j <= deg[k]; ++j) {
      npow[k][j] = npow[k][j - 1] * r.get_num();
      dpow[k][j] = dpow[k][j - 1] * r.get_den();
    }
  }
  std::vector<Int> c(f.degree(v) + 1, 0);
  Int term;
  for (std::size_t t = 0; t < f.size(); ++t) {
    auto e = f.exps(t);
    term = f.coef(t);
    for (unsigned k = 0; k < n; ++k) {
      if (npow[k].empty()) continue;
      if (e[k]) term *= npow[k][e[k]];
      if (deg[k] != e[k]) term *= dpow[k][deg[k] - e[k]];
    }
    c[e[v.index - 1]] += term;
  }
  UPoly r(std::move(c));
  Int g = content(r);
  if (g > 1)
    for (auto& x : r.c) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  return r;
}

}  // namespace owcad
