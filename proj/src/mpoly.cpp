#include "owcad/mpoly.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace owcad {

Context::Context(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i)
    for (std::size_t j = i + 1; j < names_.size(); ++j)
      if (names_[i] == names_[j])
        throw std::invalid_argument("duplicate variable name '" + names_[i] + "'");
}

std::optional<Var> Context::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return Var{static_cast<unsigned>(i + 1)};
  return std::nullopt;
}

Var Context::var(std::string_view name) const {
  auto v = find(name);
  if (!v) throw std::invalid_argument("unknown variable '" + std::string(name) + "'");
  return *v;
}

namespace {

// Graded lex comparison, x_n most significant. Returns >0 when a comes first.
int cmp_mono(const Exp* a, const Exp* b, unsigned n) {
  std::uint64_t da = 0, db = 0;
  for (unsigned i = 0; i < n; ++i) {
    da += a[i];
    db += b[i];
  }
  if (da != db) return da > db ? 1 : -1;
  for (unsigned i = n; i-- > 0;)
    if (a[i] != b[i]) return a[i] > b[i] ? 1 : -1;
  return 0;
}

int cmp_lex(const Exp* a, const Exp* b, unsigned n) {
  for (unsigned i = n; i-- > 0;)
    if (a[i] != b[i]) return a[i] > b[i] ? 1 : -1;
  return 0;
}

}  // namespace

class TermBuilder {
 public:
  // Merges two sorted polynomials with coefficient combination (sign = +1 or -1 for b).
  static MPoly merge(const MPoly& a, const MPoly& b, bool subtract) {
    const unsigned n = a.nvars_;
    MPoly r(n);
    r.exps_.reserve(a.exps_.size() + b.exps_.size());
    r.coefs_.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      int c;
      if (i == a.size()) c = -1;
      else if (j == b.size()) c = 1;
      else c = cmp_mono(&a.exps_[i * n], &b.exps_[j * n], n);
      if (c > 0) {
        r.exps_.insert(r.exps_.end(), a.exps_.begin() + i * n, a.exps_.begin() + (i + 1) * n);
        r.coefs_.push_back(a.coefs_[i]);
        ++i;
      } else if (c < 0) {
        r.exps_.insert(r.exps_.end(), b.exps_.begin() + j * n, b.exps_.begin() + (j + 1) * n);
        r.coefs_.push_back(subtract ? Int(-b.coefs_[j]) : b.coefs_[j]);
        ++j;
      } else {
        Int s = subtract ? Int(a.coefs_[i] - b.coefs_[j]) : Int(a.coefs_[i] + b.coefs_[j]);
        if (s != 0) {
          r.exps_.insert(r.exps_.end(), a.exps_.begin() + i * n, a.exps_.begin() + (i + 1) * n);
          r.coefs_.push_back(std::move(s));
        }
        ++i;
        ++j;
      }
    }
    return r;
  }

  // a * (c * m) for a single term; keeps the order since grlex is a monomial order.
  static MPoly mul_term(const MPoly& a, const Exp* m, const Int& c) {
    const unsigned n = a.nvars_;
    MPoly r(n);
    r.exps_ = a.exps_;
    r.coefs_.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (unsigned k = 0; k < n; ++k) r.exps_[i * n + k] += m[k];
      r.coefs_[i] = a.coefs_[i] * c;
    }
    return r;
  }

  static MPoly mul(const MPoly& a, const MPoly& b) {
    const unsigned n = a.nvars_;
    if (a.is_zero() || b.is_zero()) return MPoly(n);
    const MPoly& small = a.size() <= b.size() ? a : b;
    const MPoly& big = a.size() <= b.size() ? b : a;
    std::vector<MPoly> parts;
    parts.reserve(small.size());
    for (std::size_t i = 0; i < small.size(); ++i)
      parts.push_back(mul_term(big, &small.exps_[i * n], small.coefs_[i]));
    while (parts.size() > 1) {
      std::vector<MPoly> next;
      next.reserve((parts.size() + 1) / 2);
      for (std::size_t i = 0; i + 1 < parts.size(); i += 2)
        next.push_back(merge(parts[i], parts[i + 1], false));
      if (parts.size() % 2) next.push_back(std::move(parts.back()));
      parts = std::move(next);
    }
    return std::move(parts.front());
  }

  static std::vector<Exp>& exps(MPoly& p) { return p.exps_; }
  static std::vector<Int>& coefs(MPoly& p) { return p.coefs_; }
};

void MPoly::check_same(const MPoly& o) const {
  if (nvars_ != o.nvars_)
    throw ContextMismatch("polynomials belong to different contexts");
}

MPoly MPoly::constant(unsigned nvars, const Int& c) {
  MPoly r(nvars);
  if (c != 0) {
    r.exps_.assign(nvars, 0);
    r.coefs_.push_back(c);
  }
  return r;
}

MPoly MPoly::variable(unsigned nvars, Var v, Exp power) {
  if (v.index == 0 || v.index > nvars) throw std::out_of_range("variable index out of range");
  MPoly r(nvars);
  r.exps_.assign(nvars, 0);
  r.exps_[v.index - 1] = power;
  r.coefs_.push_back(1);
  return r;
}

MPoly MPoly::monomial(unsigned nvars, std::span<const Exp> exps, const Int& c) {
  if (exps.size() != nvars) throw std::invalid_argument("exponent arity mismatch");
  MPoly r(nvars);
  if (c != 0) {
    r.exps_.assign(exps.begin(), exps.end());
    r.coefs_.push_back(c);
  }
  return r;
}

MPoly MPoly::from_terms(unsigned nvars, std::vector<Exp> exps, std::vector<Int> coefs) {
  const std::size_t m = coefs.size();
  if (exps.size() != m * nvars) throw std::invalid_argument("exponent arity mismatch");
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return cmp_mono(&exps[a * nvars], &exps[b * nvars], nvars) > 0;
  });
  MPoly r(nvars);
  for (std::size_t k = 0; k < m;) {
    std::size_t i = idx[k];
    Int s = coefs[i];
    std::size_t l = k + 1;
    while (l < m && cmp_mono(&exps[idx[l] * nvars], &exps[i * nvars], nvars) == 0) {
      s += coefs[idx[l]];
      ++l;
    }
    if (s != 0) {
      r.exps_.insert(r.exps_.end(), exps.begin() + i * nvars, exps.begin() + (i + 1) * nvars);
      r.coefs_.push_back(std::move(s));
    }
    k = l;
  }
  return r;
}

bool MPoly::is_constant() const {
  if (coefs_.empty()) return true;
  if (coefs_.size() > 1) return false;
  return std::all_of(exps_.begin(), exps_.end(), [](Exp e) { return e == 0; });
}

Int MPoly::constant_value() const {
  if (!is_constant()) throw std::domain_error("polynomial is not constant");
  return coefs_.empty() ? Int(0) : coefs_[0];
}

unsigned MPoly::degree(Var v) const {
  unsigned d = 0;
  for (std::size_t i = 0; i < size(); ++i) d = std::max<unsigned>(d, exp(i, v));
  return d;
}

unsigned MPoly::total_degree() const {
  // terms are sorted by total degree first
  if (coefs_.empty()) return 0;
  unsigned d = 0;
  for (unsigned k = 0; k < nvars_; ++k) d += exps_[k];
  return d;
}

unsigned MPoly::level() const {
  for (unsigned k = nvars_; k > 0; --k)
    if (degree(Var{k}) > 0) return k;
  return 0;
}

std::vector<Var> MPoly::variables() const {
  std::vector<bool> seen(nvars_, false);
  for (std::size_t i = 0; i < size(); ++i)
    for (unsigned k = 0; k < nvars_; ++k)
      if (exps_[i * nvars_ + k]) seen[k] = true;
  std::vector<Var> out;
  for (unsigned k = 0; k < nvars_; ++k)
    if (seen[k]) out.push_back(Var{k + 1});
  return out;
}

const Int& MPoly::lex_leading_coef() const {
  if (coefs_.empty()) throw std::domain_error("zero polynomial has no leading coefficient");
  std::size_t best = 0;
  for (std::size_t i = 1; i < size(); ++i)
    if (cmp_lex(&exps_[i * nvars_], &exps_[best * nvars_], nvars_) > 0) best = i;
  return coefs_[best];
}

Int MPoly::int_content() const {
  Int g = 0;
  for (const auto& c : coefs_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

MPoly MPoly::operator-() const {
  MPoly r = *this;
  for (auto& c : r.coefs_) c = -c;
  return r;
}

MPoly& MPoly::operator+=(const MPoly& o) {
  check_same(o);
  if (o.is_zero()) return *this;
  *this = TermBuilder::merge(*this, o, false);
  return *this;
}

MPoly& MPoly::operator-=(const MPoly& o) {
  check_same(o);
  if (o.is_zero()) return *this;
  *this = TermBuilder::merge(*this, o, true);
  return *this;
}

MPoly operator*(const MPoly& a, const MPoly& b) {
  a.check_same(b);
  return TermBuilder::mul(a, b);
}

MPoly& MPoly::operator*=(const MPoly& o) {
  *this = *this * o;
  return *this;
}

MPoly& MPoly::operator*=(const Int& c) {
  if (c == 0) {
    exps_.clear();
    coefs_.clear();
    return *this;
  }
  for (auto& x : coefs_) x *= c;
  return *this;
}

MPoly MPoly::pow(unsigned e) const {
  MPoly result = constant(nvars_, 1);
  MPoly base = *this;
  while (e) {
    if (e & 1u) result *= base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

MPoly MPoly::divexact(const Int& c) const {
  if (c == 0) throw std::domain_error("division by zero");
  MPoly r = *this;
  for (auto& x : r.coefs_) {
    if (!mpz_divisible_p(x.get_mpz_t(), c.get_mpz_t()))
      throw std::domain_error("inexact integer division");
    mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), c.get_mpz_t());
  }
  return r;
}

MPoly MPoly::shift(Var v, Exp k) const {
  MPoly r = *this;
  for (std::size_t i = 0; i < size(); ++i) r.exps_[i * nvars_ + v.index - 1] += k;
  return r;
}

std::size_t MPoly::hash() const {
  std::size_t h = nvars_;
  auto mix = [&h](std::size_t x) { h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
  for (Exp e : exps_) mix(e);
  for (const auto& c : coefs_) mix(mpz_get_ui(c.get_mpz_t()) ^ (mpz_sgn(c.get_mpz_t()) < 0));
  return h;
}

std::vector<MPoly> coefficients(const MPoly& f, Var v) {
  const unsigned n = f.nvars();
  std::vector<MPoly> out(f.degree(v) + 1, MPoly(n));
  const unsigned k = v.index - 1;
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto e = f.exps(i);
    MPoly& dst = out[e[k]];
    auto& de = TermBuilder::exps(dst);
    de.insert(de.end(), e.begin(), e.end());
    de[de.size() - n + k] = 0;
    TermBuilder::coefs(dst).push_back(f.coef(i));
  }
  return out;
}

MPoly from_coefficients(const std::vector<MPoly>& c, Var v, unsigned nvars) {
  std::vector<MPoly> parts;
  for (std::size_t k = 0; k < c.size(); ++k)
    if (!c[k].is_zero()) parts.push_back(c[k].shift(v, static_cast<Exp>(k)));
  if (parts.empty()) return MPoly(nvars);
  while (parts.size() > 1) {
    std::vector<MPoly> next;
    for (std::size_t i = 0; i + 1 < parts.size(); i += 2) next.push_back(parts[i] + parts[i + 1]);
    if (parts.size() % 2) next.push_back(std::move(parts.back()));
    parts = std::move(next);
  }
  return std::move(parts.front());
}

MPoly lc(const MPoly& f, Var v) { return coeff(f, v, f.degree(v)); }

MPoly coeff(const MPoly& f, Var v, unsigned k) {
  const unsigned n = f.nvars();
  std::vector<Exp> exps;
  std::vector<Int> coefs;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.exp(i, v) != k) continue;
    auto e = f.exps(i);
    exps.insert(exps.end(), e.begin(), e.end());
    exps[exps.size() - n + v.index - 1] = 0;
    coefs.push_back(f.coef(i));
  }
  // removing a fixed exponent keeps the relative order, but from_terms is cheap enough
  return MPoly::from_terms(n, std::move(exps), std::move(coefs));
}

MPoly derivative(const MPoly& f, Var v) {
  const unsigned n = f.nvars();
  std::vector<Exp> exps;
  std::vector<Int> coefs;
  for (std::size_t i = 0; i < f.size(); ++i) {
    Exp d = f.exp(i, v);
    if (d == 0) continue;
    auto e = f.exps(i);
    exps.insert(exps.end(), e.begin(), e.end());
    exps[exps.size() - n + v.index - 1] = d - 1;
    coefs.push_back(f.coef(i) * d);
  }
  return MPoly::from_terms(n, std::move(exps), std::move(coefs));
}

MPoly primitive(const MPoly& f) {
  if (f.is_zero()) return f;
  Int c = f.int_content();
  return c == 1 ? f : f.divexact(c);
}

MPoly normalize(const MPoly& f) {
  if (f.is_zero()) return f;
  MPoly p = primitive(f);
  if (sgn(p.lex_leading_coef()) < 0) return -p;
  return p;
}

std::optional<MPoly> try_divide(const MPoly& a, const MPoly& b) {
  if (a.nvars() != b.nvars()) throw ContextMismatch("polynomials belong to different contexts");
  if (b.is_zero()) throw std::domain_error("division by zero polynomial");
  const unsigned n = a.nvars();
  if (a.is_zero()) return MPoly(n);
  if (b.is_constant()) {
    const Int c = b.constant_value();
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!mpz_divisible_p(a.coef(i).get_mpz_t(), c.get_mpz_t())) return std::nullopt;
    return a.divexact(c);
  }
  // Distributed division by the leading term in graded lex order.
  auto lead = b.exps(0);
  const Int& lead_c = b.coef(0);
  MPoly rest = b - MPoly::monomial(n, lead, lead_c);
  MPoly r = a;
  std::vector<Exp> qexps;
  std::vector<Int> qcoefs;
  std::vector<Exp> m(n);
  while (!r.is_zero()) {
    auto re = r.exps(0);
    for (unsigned k = 0; k < n; ++k) {
      if (re[k] < lead[k]) return std::nullopt;
      m[k] = re[k] - lead[k];
    }
    if (!mpz_divisible_p(r.coef(0).get_mpz_t(), lead_c.get_mpz_t())) return std::nullopt;
    Int q;
    mpz_divexact(q.get_mpz_t(), r.coef(0).get_mpz_t(), lead_c.get_mpz_t());
    // drop the leading term of r, then subtract q*m*rest
    MPoly tail(n);
    {
      auto& te = TermBuilder::exps(tail);
      auto& tc = TermBuilder::coefs(tail);
      auto& rexp = TermBuilder::exps(r);
      auto& rc = TermBuilder::coefs(r);
      te.assign(rexp.begin() + n, rexp.end());
      tc.assign(std::make_move_iterator(rc.begin() + 1), std::make_move_iterator(rc.end()));
    }
    if (!rest.is_zero()) tail -= TermBuilder::mul_term(rest, m.data(), q);
    r = std::move(tail);
    qexps.insert(qexps.end(), m.begin(), m.end());
    qcoefs.push_back(std::move(q));
  }
  // quotient terms were produced in descending order
  MPoly quot(n);
  TermBuilder::exps(quot) = std::move(qexps);
  TermBuilder::coefs(quot) = std::move(qcoefs);
  return quot;
}

MPoly divide(const MPoly& a, const MPoly& b) {
  auto q = try_divide(a, b);
  if (!q) throw std::domain_error("inexact polynomial division");
  return std::move(*q);
}

bool divides(const MPoly& b, const MPoly& a) { return try_divide(a, b).has_value(); }

std::string to_string(const MPoly& f, const Context& ctx) {
  if (f.nvars() != ctx.size()) throw ContextMismatch("polynomial arity differs from context");
  if (f.is_zero()) return "0";
  std::ostringstream os;
  for (std::size_t i = 0; i < f.size(); ++i) {
    Int c = f.coef(i);
    bool neg = sgn(c) < 0;
    if (neg) c = -c;
    if (i == 0) {
      if (neg) os << '-';
    } else {
      os << (neg ? '-' : '+');
    }
    auto e = f.exps(i);
    bool any_var = std::any_of(e.begin(), e.end(), [](Exp x) { return x != 0; });
    bool wrote = false;
    if (c != 1 || !any_var) {
      os << c.get_str();
      wrote = true;
    }
    for (unsigned k = f.nvars(); k-- > 0;) {
      if (e[k] == 0) continue;
      if (wrote) os << '*';
      os << ctx.name(Var{k + 1});
      if (e[k] > 1) os << '^' << e[k];
      wrote = true;
    }
  }
  return os.str();
}

MPoly product(const std::vector<MPoly>& fs, unsigned nvars) {
  MPoly r = MPoly::constant(nvars, 1);
  for (const auto& f : fs) r *= f;
  return r;
}

}  // namespace owcad
