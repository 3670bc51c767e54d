#include "owcad/polyalg.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "owcad/upoly.hpp"

namespace owcad {

namespace {

using Coeffs = std::vector<MPoly>;

int deg(const Coeffs& a) { return static_cast<int>(a.size()) - 1; }

void trim(Coeffs& a) {
  while (!a.empty() && a.back().is_zero()) a.pop_back();
}

// Pseudo-remainder on coefficient vectors (all coefficients free of v).
Coeffs prem_coeffs(Coeffs a, const Coeffs& b) {
  const int db = deg(b);
  int da = deg(a);
  if (da < db) return a;
  int e = da - db + 1;
  const MPoly& lb = b.back();
  while (!a.empty() && deg(a) >= db) {
    MPoly la = a.back();
    int k = deg(a) - db;
    for (int i = 0; i < deg(a); ++i) {
      if (!a[i].is_zero()) a[i] *= lb;
      if (i >= k && !b[i - k].is_zero()) a[i] -= la * b[i - k];
    }
    a.pop_back();
    trim(a);
    --e;
  }
  if (e > 0 && !a.empty()) {
    MPoly m = lb.pow(e);
    for (auto& x : a) x *= m;
  }
  return a;
}

Coeffs divide_coeffs(const Coeffs& a, const MPoly& d) {
  Coeffs r;
  r.reserve(a.size());
  for (const auto& x : a) r.push_back(x.is_zero() ? x : divide(x, d));
  return r;
}

// gcd of all v-exponents occurring in the given polynomials (0 if none).
unsigned exponent_gcd(std::initializer_list<const MPoly*> ps, Var v) {
  unsigned g = 0;
  for (const MPoly* p : ps)
    for (std::size_t i = 0; i < p->size(); ++i) g = std::gcd(g, static_cast<unsigned>(p->exp(i, v)));
  return g;
}

MPoly deflate(const MPoly& f, Var v, unsigned k) {
  Coeffs c = coefficients(f, v);
  Coeffs d;
  for (std::size_t i = 0; i < c.size(); i += k) d.push_back(c[i]);
  return from_coefficients(d, v, f.nvars());
}

MPoly inflate(const MPoly& f, Var v, unsigned k) {
  Coeffs c = coefficients(f, v);
  Coeffs d((c.size() - 1) * k + 1, MPoly(f.nvars()));
  for (std::size_t i = 0; i < c.size(); ++i) d[i * k] = c[i];
  return from_coefficients(d, v, f.nvars());
}

MPoly one(unsigned n) { return MPoly::constant(n, 1); }

// Subresultant PRS resultant; a and b nonzero, not both free of v.
MPoly subresultant(const MPoly& a, const MPoly& b, Var v) {
  const unsigned n = a.nvars();
  Coeffs A = coefficients(a, v), B = coefficients(b, v);
  int s = 1;
  if (deg(A) < deg(B)) {
    if ((deg(A) & 1) && (deg(B) & 1)) s = -s;
    std::swap(A, B);
  }
  if (deg(B) == 0) {
    MPoly r = B[0].pow(deg(A));
    return s < 0 ? -r : r;
  }
  MPoly g = one(n), h = one(n);
  while (true) {
    const int da = deg(A), db = deg(B);
    const int delta = da - db;
    if ((da & 1) && (db & 1)) s = -s;
    Coeffs R = prem_coeffs(A, B);
    A = std::move(B);
    if (R.empty()) return MPoly(n);
    MPoly div = g * h.pow(delta);
    B = divide_coeffs(R, div);
    g = A.back();
    if (delta == 1) h = g;
    else if (delta > 1) h = divide(g.pow(delta), h.pow(delta - 1));
    if (deg(B) == 0) break;
  }
  const int da = deg(A);
  MPoly r = (da == 1) ? B[0] : divide(B[0].pow(da), h.pow(da - 1));
  return s < 0 ? -r : r;
}

// Montgomery arithmetic modulo an odd prime below 2^62. Residues are kept
// as a R mod p with R = 2^64; `of` and `value` convert.
struct Zp {
  using u128 = unsigned __int128;
  std::uint64_t p, pinv, r2, one;

  explicit Zp(std::uint64_t prime) : p(prime) {
    pinv = 1;  // p^-1 mod 2^64 by Newton iteration
    for (int i = 0; i < 6; ++i) pinv *= 2 - p * pinv;
    pinv = 0 - pinv;
    const std::uint64_t r = static_cast<std::uint64_t>((u128(1) << 64) % p);
    r2 = static_cast<std::uint64_t>(u128(r) * r % p);
    one = r;
  }
  std::uint64_t redc(u128 t) const {
    const std::uint64_t m = static_cast<std::uint64_t>(t) * pinv;
    const std::uint64_t u = static_cast<std::uint64_t>((t + u128(m) * p) >> 64);
    return u >= p ? u - p : u;
  }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return redc(u128(a) * b); }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return a + b >= p ? a + b - p : a + b; }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + p - b; }
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const {
    std::uint64_t r = one;
    for (; e; e >>= 1, a = mul(a, a))
      if (e & 1) r = mul(r, a);
    return r;
  }
  std::uint64_t inv(std::uint64_t a) const { return pow(a, p - 2); }
  std::uint64_t to(std::uint64_t a) const { return mul(a % p, r2); }
  std::uint64_t of(const Int& z) const { return to(mpz_fdiv_ui(z.get_mpz_t(), p)); }
  std::uint64_t value(std::uint64_t a) const { return redc(a); }
};

using Dense = std::vector<std::uint64_t>;  // low to high

void trim_dense(Dense& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// Resultant over Z/p of polynomials of exact degrees deg a, deg b >= 0.
std::uint64_t resultant_mod(Dense a, Dense b, const Zp& F) {
  std::uint64_t r = F.one;
  while (true) {
    const std::size_t m = a.size() - 1, n = b.size() - 1;
    if (n == 0) return F.mul(r, F.pow(b[0], m));
    if (m == 0) return F.mul(r, F.pow(a[0], n));
    // a mod b
    const std::uint64_t ib = F.inv(b.back());
    for (std::size_t k = a.size(); k-- > n;) {
      const std::uint64_t q = F.mul(a[k], ib);
      if (q)
        for (std::size_t i = 0; i <= n; ++i) a[k - n + i] = F.sub(a[k - n + i], F.mul(q, b[i]));
    }
    a.resize(n);
    trim_dense(a);
    if (a.empty()) return 0;
    if ((m & 1) && (n & 1)) r = F.sub(0, r);
    r = F.mul(r, F.pow(b.back(), m - (a.size() - 1)));
    std::swap(a, b);
  }
}

std::uint64_t eval_dense(const Dense& c, std::uint64_t x, const Zp& F) {
  std::uint64_t r = 0;
  for (std::size_t i = c.size(); i-- > 0;) r = F.add(F.mul(r, x), c[i]);
  return r;
}

// Coefficients (low to high) of the polynomial through (xs[i], ys[i]); the
// xs are increasing small integers.
Dense interpolate(const Dense& xs, Dense ys, const Zp& F) {
  const std::size_t k = xs.size();
  // inverses of 1..max(xs) by inv(i) = -(p / i) inv(p mod i), computed in
  // the plain representation
  Dense inv(xs.empty() ? 1 : xs.back() + 1, 1);
  for (std::size_t i = 2; i < inv.size(); ++i)
    inv[i] = F.p - static_cast<std::uint64_t>(static_cast<unsigned __int128>(F.p / i) * inv[F.p % i] % F.p);
  for (auto& x : inv) x = F.to(x);
  for (std::size_t j = 1; j < k; ++j)
    for (std::size_t i = k - 1; i >= j; --i)
      ys[i] = F.mul(F.sub(ys[i], ys[i - 1]), inv[xs[i] - xs[i - j]]);
  Dense c(k, 0);
  for (std::size_t i = k; i-- > 0;) {
    // c = c * (x - xs[i]) + ys[i]
    const std::uint64_t xi = F.to(xs[i]);
    for (std::size_t t = k - 1; t > 0; --t) c[t] = F.sub(c[t - 1], F.mul(c[t], xi));
    c[0] = F.sub(ys[i], F.mul(c[0], xi));
  }
  return c;
}

Int one_norm(const MPoly& f) {
  Int s = 0;
  for (std::size_t i = 0; i < f.size(); ++i) s += abs(f.coef(i));
  return s;
}

// Small deterministic evaluation values for coprimality probes.
long probe_value(unsigned var_index, unsigned attempt) {
  static const long table[] = {3, -2, 5, 7, -4, 2, -3, 6, -5, 11, 4, -7, 9, -6, 13, 8, -9, 10};
  constexpr unsigned m = sizeof(table) / sizeof(table[0]);
  return table[(var_index * 7 + attempt * 5) % m] * (1 + static_cast<long>(attempt / m));
}

MPoly gcd_rec(const MPoly& a, const MPoly& b);

MPoly content_rec(const MPoly& f, Var v) {
  Coeffs c = coefficients(f, v);
  std::sort(c.begin(), c.end(), [](const MPoly& x, const MPoly& y) { return x.size() < y.size(); });
  MPoly g(f.nvars());
  for (const auto& x : c) {
    if (x.is_zero()) continue;
    g = g.is_zero() ? normalize(x) : gcd_rec(g, x);
    if (g.is_constant()) return one(f.nvars());
  }
  return g;
}

// Heuristic gcd: evaluate the main variable at a large integer, take the gcd
// of the images recursively and read the result back xi-adically. Returns the
// gcd including the common integer content, or nullopt if every evaluation
// point failed.
Int max_norm(const MPoly& f) {
  Int m = 0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (mpz_cmpabs(f.coef(i).get_mpz_t(), m.get_mpz_t()) > 0) m = abs(f.coef(i));
  return m;
}

MPoly eval_int(const MPoly& f, Var v, const Int& xi) {
  const unsigned n = f.nvars();
  std::vector<Int> pw(f.degree(v) + 1);
  pw[0] = 1;
  for (std::size_t k = 1; k < pw.size(); ++k) pw[k] = pw[k - 1] * xi;
  std::vector<Exp> exps;
  std::vector<Int> coefs;
  exps.reserve(f.size() * n);
  coefs.reserve(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto e = f.exps(i);
    exps.insert(exps.end(), e.begin(), e.end());
    exps[exps.size() - n + v.index - 1] = 0;
    coefs.push_back(f.coef(i) * pw[e[v.index - 1]]);
  }
  return MPoly::from_terms(n, std::move(exps), std::move(coefs));
}

// Inverse of eval_int with symmetric residues.
MPoly interpolate(MPoly h, Var v, const Int& xi) {
  const unsigned n = h.nvars();
  Int half = xi / 2;
  std::vector<Exp> exps;
  std::vector<Int> coefs;
  Exp k = 0;
  while (!h.is_zero()) {
    std::vector<Exp> hx;
    std::vector<Int> hc;
    for (std::size_t i = 0; i < h.size(); ++i) {
      Int r;
      mpz_fdiv_r(r.get_mpz_t(), h.coef(i).get_mpz_t(), xi.get_mpz_t());
      if (r > half) r -= xi;
      Int q = h.coef(i) - r;
      mpz_divexact(q.get_mpz_t(), q.get_mpz_t(), xi.get_mpz_t());
      auto e = h.exps(i);
      if (r != 0) {
        exps.insert(exps.end(), e.begin(), e.end());
        exps[exps.size() - n + v.index - 1] = k;
        coefs.push_back(std::move(r));
      }
      if (q != 0) {
        hx.insert(hx.end(), e.begin(), e.end());
        hc.push_back(std::move(q));
      }
    }
    h = MPoly::from_terms(n, std::move(hx), std::move(hc));
    if (++k > 100000) throw std::logic_error("heuristic gcd interpolation diverged");
  }
  return MPoly::from_terms(n, std::move(exps), std::move(coefs));
}

std::optional<MPoly> heu_gcd(const MPoly& a, const MPoly& b) {
  const unsigned n = a.nvars();
  Int ca = a.int_content(), cb = b.int_content();
  Int cg = igcd(ca, cb);
  if (a.is_constant() || b.is_constant()) return MPoly::constant(n, cg);
  MPoly f = a.divexact(ca), g = b.divexact(cb);
  Var v{std::max(f.level(), g.level())};
  Int fn = max_norm(f), gn = max_norm(g);
  Int B = 2 * std::min(fn, gn) + 29;
  Int sq = sqrt(B);
  Int xi = std::min(B, Int(99 * sq));
  Int alt = 2 * std::min(Int(fn / abs(f.lex_leading_coef())), Int(gn / abs(g.lex_leading_coef()))) + 4;
  if (alt > xi) xi = alt;
  for (int attempt = 0; attempt < 6; ++attempt) {
    MPoly fe = eval_int(f, v, xi), ge = eval_int(g, v, xi);
    if (!fe.is_zero() && !ge.is_zero()) {
      if (auto he = heu_gcd(fe, ge)) {
        MPoly h = interpolate(*he, v, xi);
        if (!h.is_zero()) {
          h = normalize(h);
          if (divides(h, f) && divides(h, g)) return h * cg;
        }
      }
    }
    Int r = sqrt(sqrt(xi));
    xi = 73794 * xi * r / 27011;
  }
  return std::nullopt;
}

// a, b primitive in v with positive degree in v.
MPoly gcd_primitive(MPoly a, MPoly b, Var v) {
  const unsigned n = a.nvars();
  a = primitive(a);
  b = primitive(b);
  if (a.degree(v) < b.degree(v)) std::swap(a, b);
  // Probe: substitute integers for the other variables. A common factor keeps
  // its degree in v under any substitution that preserves both leading terms.
  {
    VarList others;
    for (Var w : a.variables())
      if (w != v) others.push_back(w);
    for (Var w : b.variables())
      if (w != v && std::find(others.begin(), others.end(), w) == others.end()) others.push_back(w);
    std::sort(others.begin(), others.end());
    for (unsigned attempt = 0; attempt < 8; ++attempt) {
      std::vector<Rat> pt;
      for (Var w : others) pt.emplace_back(probe_value(w.index, attempt));
      UPoly ua = fiber(a, others, pt, v), ub = fiber(b, others, pt, v);
      if (ua.degree() != static_cast<int>(a.degree(v)) || ub.degree() != static_cast<int>(b.degree(v)))
        continue;
      UPoly ug = gcd(ua, ub);
      if (ug.degree() == 0) return one(n);
      if (ug.degree() == static_cast<int>(b.degree(v))) {
        if (divides(b, a)) return normalize(b);
      }
      break;
    }
  }
  if (auto h = heu_gcd(a, b)) return normalize(*h);
  Coeffs A = coefficients(a, v), B = coefficients(b, v);
  MPoly g = one(n), h = one(n);
  while (true) {
    const int delta = deg(A) - deg(B);
    Coeffs R = prem_coeffs(A, B);
    if (R.empty()) {
      MPoly r = from_coefficients(B, v, n);
      return normalize(divide(r, content_rec(r, v)));
    }
    if (deg(R) == 0) return one(n);
    A = std::move(B);
    B = divide_coeffs(R, g * h.pow(delta));
    g = A.back();
    if (delta == 1) h = g;
    else if (delta > 1) h = divide(g.pow(delta), h.pow(delta - 1));
  }
}

std::vector<Exp> min_exponents(const MPoly& f) {
  std::vector<Exp> m(f.nvars(), 0);
  if (f.is_zero()) return m;
  auto e0 = f.exps(0);
  m.assign(e0.begin(), e0.end());
  for (std::size_t i = 1; i < f.size(); ++i) {
    auto e = f.exps(i);
    for (unsigned k = 0; k < f.nvars(); ++k) m[k] = std::min(m[k], e[k]);
  }
  return m;
}

MPoly divide_monomial(const MPoly& f, const std::vector<Exp>& m) {
  std::vector<Exp> exps;
  std::vector<Int> coefs;
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto e = f.exps(i);
    for (unsigned k = 0; k < f.nvars(); ++k) exps.push_back(e[k] - m[k]);
    coefs.push_back(f.coef(i));
  }
  return MPoly::from_terms(f.nvars(), std::move(exps), std::move(coefs));
}

// Normalized gcd of nonzero a and b.
MPoly gcd_rec(const MPoly& a, const MPoly& b) {
  const unsigned n = a.nvars();
  if (a.is_constant() || b.is_constant()) return one(n);
  if (a == b || a == -b) return normalize(a);
  // monomial content
  auto ma = min_exponents(a), mb = min_exponents(b);
  bool has_mono = false;
  std::vector<Exp> mg(n);
  for (unsigned k = 0; k < n; ++k) {
    mg[k] = std::min(ma[k], mb[k]);
    if (ma[k] || mb[k]) has_mono = true;
  }
  if (has_mono) {
    MPoly g = gcd_rec(divide_monomial(a, ma), divide_monomial(b, mb));
    return g * MPoly::monomial(n, mg, 1);
  }
  // deflation in each variable
  for (unsigned k = 1; k <= n; ++k) {
    Var w{k};
    if (!a.involves(w) || !b.involves(w)) continue;
    unsigned e = exponent_gcd({&a, &b}, w);
    if (e > 1) return inflate(gcd_rec(deflate(a, w, e), deflate(b, w, e)), w, e);
  }
  // a variable occurring in only one input cannot occur in the gcd
  for (unsigned k = 1; k <= n; ++k) {
    Var w{k};
    bool ia = a.involves(w), ib = b.involves(w);
    if (ia && !ib) return gcd_rec(content_rec(a, w), b);
    if (ib && !ia) return gcd_rec(a, content_rec(b, w));
  }
  // shortest remainder sequence: the shared variable of least degree
  Var v{0};
  unsigned best = ~0u;
  for (unsigned k = n; k >= 1; --k) {
    Var w{k};
    unsigned d = std::max(a.degree(w), b.degree(w));
    if (d > 0 && d < best) {
      best = d;
      v = w;
    }
  }
  MPoly ca = content_rec(a, v), cb = content_rec(b, v);
  MPoly c = gcd_rec(ca, cb);
  MPoly pa = ca.is_constant() ? a : divide(a, ca);
  MPoly pb = cb.is_constant() ? b : divide(b, cb);
  return normalize(c * gcd_primitive(pa, pb, v));
}

void sqf_rec(const MPoly& f, std::vector<SqfFactor>& out);

void yun(const MPoly& p, Var v, std::vector<SqfFactor>& out) {
  MPoly dp = derivative(p, v);
  MPoly a0 = gcd(p, dp);
  MPoly b = divide(p, a0);
  MPoly c = divide(dp, a0);
  MPoly d = c - derivative(b, v);
  unsigned i = 1;
  while (b.degree(v) > 0) {
    MPoly a = d.is_zero() ? normalize(b) : gcd(b, d);
    if (!a.is_constant()) out.push_back({normalize(a), i});
    b = divide(b, a);
    c = d.is_zero() ? d : divide(d, a);
    d = c - derivative(b, v);
    ++i;
  }
}

// f nonconstant.
void sqf_rec(const MPoly& f, std::vector<SqfFactor>& out) {
  const unsigned n = f.nvars();
  auto m = min_exponents(f);
  MPoly g = f;
  if (std::any_of(m.begin(), m.end(), [](Exp e) { return e != 0; })) {
    for (unsigned k = 0; k < n; ++k)
      if (m[k]) out.push_back({MPoly::variable(n, Var{k + 1}), m[k]});
    g = divide_monomial(f, m);
    if (g.is_constant()) return;
  }
  Var v{0};
  unsigned best = ~0u;
  for (unsigned k = n; k >= 1; --k) {
    unsigned d = g.degree(Var{k});
    if (d > 0 && d < best) {
      best = d;
      v = Var{k};
    }
  }
  MPoly c = content_rec(g, v);
  MPoly p = g;
  if (!c.is_constant()) {
    p = divide(g, c);
    sqf_rec(c, out);
  }
  yun(p, v, out);
}

}  // namespace

MPoly gcd(const MPoly& a, const MPoly& b) {
  if (a.nvars() != b.nvars()) throw ContextMismatch("polynomials belong to different contexts");
  if (a.is_zero() && b.is_zero()) throw std::domain_error("gcd of two zero polynomials");
  if (a.is_zero()) return normalize(b);
  if (b.is_zero()) return normalize(a);
  return gcd_rec(a, b);
}

MPoly content_in(const MPoly& f, Var v) {
  if (f.is_zero()) return f;
  return content_rec(f, v);
}

MPoly prem(const MPoly& a, const MPoly& b, Var v) {
  if (b.is_zero()) throw std::domain_error("pseudo-remainder by zero");
  Coeffs r = prem_coeffs(coefficients(a, v), coefficients(b, v));
  return from_coefficients(r, v, a.nvars());
}

MPoly modular_resultant(const MPoly& a, const MPoly& b, Var v) {
  if (a.nvars() != b.nvars()) throw ContextMismatch("polynomials belong to different contexts");
  const unsigned nv = a.nvars();
  const unsigned m = a.degree(v), n = b.degree(v);
  if (m == 0 && n == 0) throw std::domain_error("resultant: both polynomials have degree 0 in the variable");
  if (a.is_zero() || b.is_zero()) return MPoly(nv);
  std::optional<Var> x;
  for (unsigned i = 1; i <= nv; ++i) {
    Var w{i};
    if (w == v || (!a.involves(w) && !b.involves(w))) continue;
    if (x) throw std::invalid_argument("modular_resultant: more than one variable besides v");
    x = w;
  }
  // dense integer coefficients in x of each v-coefficient
  auto split = [&](const MPoly& f) {
    std::vector<std::vector<Int>> out;
    for (const auto& c : coefficients(f, v)) {
      std::vector<Int> d;
      if (x) {
        for (const auto& t : coefficients(c, *x)) d.push_back(t.is_zero() ? Int(0) : t.constant_value());
      } else if (!c.is_zero()) {
        d.push_back(c.constant_value());
      }
      out.push_back(std::move(d));
    }
    return out;
  };
  const auto A = split(a), B = split(b);
  const unsigned dx = x ? m * b.degree(*x) + n * a.degree(*x) : 0;
  // On |x| = 1 each Sylvester entry is at most the 1-norm of its coefficient,
  // so Hadamard bounds |Res(x)| there and hence every coefficient of Res:
  // sqrt(sum ||a_j||^2)^n sqrt(sum ||b_j||^2)^m.
  auto row_sq = [&](const MPoly& f) {
    Int s = 0;
    for (const auto& c : coefficients(f, v)) {
      const Int t = one_norm(c);
      s += t * t;
    }
    return s;
  };
  Int sq = ipow(row_sq(a), n) * ipow(row_sq(b), m);
  mpz_sqrt(sq.get_mpz_t(), sq.get_mpz_t());
  const Int bound = 2 * (sq + 1) + 1;

  std::vector<Int> acc(dx + 1, Int(0));
  Int M = 1;
  Int prime = Int(1) << 62;
  while (M <= bound) {
    do {
      prime -= 1;
    } while (mpz_probab_prime_p(prime.get_mpz_t(), 30) == 0);
    const Zp F(prime.get_ui());
    auto reduce = [&](const std::vector<std::vector<Int>>& P) {
      std::vector<Dense> out;
      for (const auto& c : P) {
        Dense d;
        for (const auto& z : c) d.push_back(F.of(z));
        out.push_back(std::move(d));
      }
      return out;
    };
    const auto Ap = reduce(A), Bp = reduce(B);
    auto lead_at = [&](const std::vector<Dense>& P, std::uint64_t t) { return eval_dense(P.back(), t, F); };
    Dense xs, ys;
    bool bad_prime = false;
    for (std::uint64_t t = 0; xs.size() < dx + 1; ++t) {
      if (t > dx + 1 + 2 * (a.total_degree() + b.total_degree())) {
        bad_prime = true;  // a leading coefficient vanishes mod p
        break;
      }
      const std::uint64_t tm = F.to(t);
      if (lead_at(Ap, tm) == 0 || lead_at(Bp, tm) == 0) continue;
      Dense ua, ub;
      for (const auto& c : Ap) ua.push_back(eval_dense(c, tm, F));
      for (const auto& c : Bp) ub.push_back(eval_dense(c, tm, F));
      xs.push_back(t);
      ys.push_back(resultant_mod(std::move(ua), std::move(ub), F));
    }
    if (bad_prime) continue;
    Dense img = interpolate(xs, ys, F);
    const std::uint64_t iM = F.inv(F.of(M));
    for (unsigned i = 0; i <= dx; ++i) {
      const std::uint64_t t = F.value(F.mul(F.sub(img[i], F.of(acc[i])), iM));
      mpz_addmul_ui(acc[i].get_mpz_t(), M.get_mpz_t(), t);
    }
    M *= prime;
  }
  const Int half = M / 2;
  std::vector<MPoly> c;
  for (auto& z : acc) {
    if (z > half) z -= M;
    c.push_back(MPoly::constant(nv, z));
  }
  if (!x) return c[0];
  return from_coefficients(c, *x, nv);
}

MPoly subresultant_resultant(const MPoly& a, const MPoly& b, Var v) {
  if (a.nvars() != b.nvars()) throw ContextMismatch("polynomials belong to different contexts");
  if (a.degree(v) == 0 && b.degree(v) == 0)
    throw std::domain_error("resultant: both polynomials have degree 0 in the variable");
  if (a.is_zero() || b.is_zero()) return MPoly(a.nvars());
  return subresultant(a, b, v);
}

namespace {

// Modular for at most two variables with a sizeable degree, PRS otherwise.
MPoly res_dispatch(const MPoly& a, const MPoly& b, Var v) {
  unsigned others = 0;
  for (unsigned i = 1; i <= a.nvars(); ++i)
    if (Var{i} != v && (a.involves(Var{i}) || b.involves(Var{i}))) ++others;
  if (others <= 1 && a.degree(v) >= 1 && b.degree(v) >= 1 && a.degree(v) + b.degree(v) >= 8)
    return modular_resultant(a, b, v);
  return subresultant(a, b, v);
}

}  // namespace

MPoly resultant(const MPoly& a, const MPoly& b, Var v) {
  if (a.nvars() != b.nvars()) throw ContextMismatch("polynomials belong to different contexts");
  if (a.degree(v) == 0 && b.degree(v) == 0)
    throw std::domain_error("resultant: both polynomials have degree 0 in the variable");
  if (a.is_zero() || b.is_zero()) return MPoly(a.nvars());
  // Res_v(p(v^k), q(v^k)) = Res_w(p, q)^k
  unsigned k = exponent_gcd({&a, &b}, v);
  if (k > 1) return res_dispatch(deflate(a, v, k), deflate(b, v, k), v).pow(k);
  return res_dispatch(a, b, v);
}

MPoly discriminant(const MPoly& f, Var v) {
  const unsigned d = f.degree(v);
  if (d < 2) throw std::domain_error("discriminant: degree below 2");
  const unsigned n = f.nvars();
  MPoly res(n);
  unsigned k = exponent_gcd({&f}, v);
  if (k > 1) {
    // f = p(v^k): Res(f, f') = k^(k e) ((-1)^(k e) p(0))^(k-1) Res(p, p')^k, e = deg p
    MPoly p = deflate(f, v, k);
    const unsigned e = p.degree(v);
    MPoly p0 = coeff(p, v, 0);
    if ((k * e) % 2 == 1) p0 = -p0;
    res = MPoly::constant(n, ipow(Int(k), k * e)) * p0.pow(k - 1) *
          res_dispatch(p, derivative(p, v), v).pow(k);
  } else {
    res = res_dispatch(f, derivative(f, v), v);
  }
  MPoly disc = divide(res, lc(f, v));
  if ((d * (d - 1) / 2) % 2 == 1) disc = -disc;
  return disc;
}

std::vector<MPoly> SqfDecomp::odd_part() const {
  std::vector<MPoly> out;
  for (const auto& f : factors)
    if (f.multiplicity % 2 == 1) out.push_back(f.poly);
  return out;
}

std::vector<MPoly> SqfDecomp::even_part() const {
  std::vector<MPoly> out;
  for (const auto& f : factors)
    if (f.multiplicity % 2 == 0) out.push_back(f.poly);
  return out;
}

MPoly SqfDecomp::sqrfree(unsigned nvars) const {
  MPoly r = MPoly::constant(nvars, 1);
  for (const auto& f : factors) r *= f.poly;
  return r;
}

SqfDecomp sqf_decompose(const MPoly& h) {
  if (h.is_zero()) throw std::domain_error("squarefree decomposition of the zero polynomial");
  SqfDecomp d;
  d.content = h.int_content();
  d.unit_sign = sgn(h.lex_leading_coef()) < 0 ? -1 : 1;
  if (h.is_constant()) return d;
  MPoly p = normalize(h);
  sqf_rec(p, d.factors);
  return d;
}

MPoly sqrfree(const MPoly& h) { return sqf_decompose(h).sqrfree(h.nvars()); }

bool is_squarefree(const MPoly& h) {
  auto d = sqf_decompose(h);
  return std::all_of(d.factors.begin(), d.factors.end(),
                     [](const SqfFactor& f) { return f.multiplicity == 1; });
}

std::vector<BasisElement> coprime_basis(const std::vector<MPoly>& inputs) {
  const std::size_t m = inputs.size();
  std::vector<BasisElement> basis;
  for (std::size_t j = 0; j < m; ++j) {
    if (inputs[j].is_zero()) throw std::domain_error("coprime basis of the zero polynomial");
    if (inputs[j].is_constant()) continue;
    for (const auto& f : sqf_decompose(inputs[j]).factors) {
      BasisElement e{f.poly, std::vector<unsigned>(m, 0)};
      e.exponents[j] = f.multiplicity;
      // refine e against the current (pairwise coprime) basis
      std::vector<BasisElement> next;
      for (auto& b : basis) {
        if (e.poly.is_constant()) {
          next.push_back(std::move(b));
          continue;
        }
        MPoly g = gcd(e.poly, b.poly);
        if (g.is_constant()) {
          next.push_back(std::move(b));
          continue;
        }
        MPoly b_rest = normalize(divide(b.poly, g));
        MPoly e_rest = normalize(divide(e.poly, g));
        std::vector<unsigned> both = b.exponents;
        for (std::size_t k = 0; k < m; ++k) both[k] += e.exponents[k];
        next.push_back({g, std::move(both)});
        if (!b_rest.is_constant()) next.push_back({std::move(b_rest), b.exponents});
        e.poly = std::move(e_rest);
      }
      if (!e.poly.is_constant()) next.push_back(std::move(e));
      basis = std::move(next);
    }
  }
  return basis;
}

FactorList squarefree_factors(const MPoly& h) {
  FactorList out;
  if (h.is_constant()) return out;
  for (auto& f : sqf_decompose(h).factors) out.push_back(std::move(f.poly));
  return out;
}

FactorList merge_factors(const FactorList& a, const FactorList& b) {
  std::vector<MPoly> all = a;
  all.insert(all.end(), b.begin(), b.end());
  FactorList out;
  for (auto& e : coprime_basis(all)) out.push_back(std::move(e.poly));
  return out;
}

FactorList gcd_factors(const FactorList& a, const FactorList& b) {
  FactorList out;
  for (const auto& x : a)
    for (const auto& y : b) {
      MPoly g = gcd(x, y);
      if (!g.is_constant()) out.push_back(std::move(g));
    }
  return out;
}

QPoly evaluate(const MPoly& f, const std::map<Var, Rat>& at) {
  const unsigned n = f.nvars();
  if (at.empty() || f.is_zero()) return {f, 1};
  std::vector<unsigned> deg(n, 0);
  for (const auto& [v, r] : at) {
    if (v.index == 0 || v.index > n) throw std::out_of_range("variable index out of range");
    deg[v.index - 1] = f.degree(v);
  }
  Int den = 1;
  for (const auto& [v, r] : at) den *= ipow(r.get_den(), deg[v.index - 1]);
  std::vector<Exp> exps;
  std::vector<Int> coefs;
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto e = f.exps(i);
    Int c = f.coef(i);
    std::vector<Exp> ne(e.begin(), e.end());
    for (const auto& [v, r] : at) {
      unsigned k = v.index - 1;
      if (e[k]) c *= ipow(r.get_num(), e[k]);
      c *= ipow(r.get_den(), deg[k] - e[k]);
      ne[k] = 0;
    }
    exps.insert(exps.end(), ne.begin(), ne.end());
    coefs.push_back(std::move(c));
  }
  MPoly num = MPoly::from_terms(n, std::move(exps), std::move(coefs));
  Int g = num.is_zero() ? den : igcd(num.int_content(), den);
  if (g > 1) {
    num = num.divexact(g);
    mpz_divexact(den.get_mpz_t(), den.get_mpz_t(), g.get_mpz_t());
  }
  return {std::move(num), std::move(den)};
}

Rat evaluate_value(const MPoly& f, const std::map<Var, Rat>& at) {
  QPoly q = evaluate(f, at);
  if (!q.num.is_constant()) throw std::invalid_argument("evaluation left free variables");
  return make_rat(q.num.constant_value(), q.den);
}

Rat evaluate_value(const MPoly& f, const VarList& vars, const std::vector<Rat>& point) {
  std::map<Var, Rat> at;
  for (std::size_t i = 0; i < point.size(); ++i) at[vars.at(i)] = point[i];
  return evaluate_value(f, at);
}

}  // namespace owcad
