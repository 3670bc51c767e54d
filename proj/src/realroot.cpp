#include "owcad/realroot.hpp"

#include <algorithm>
#include <stdexcept>

namespace owcad {

namespace {

void taylor_shift1(std::vector<Int>& a) {
  const std::size_t d = a.size() - 1;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = d - 1;; --j) {
      a[j] += a[j + 1];
      if (j == i) break;
    }
}

// Sign variations of (x+1)^d P(1/(x+1)): bounds the roots of P in (0, 1).
unsigned descartes01(const std::vector<Int>& p) {
  std::vector<Int> q(p.rbegin(), p.rend());
  if (q.size() <= 1) return 0;
  taylor_shift1(q);
  unsigned v = 0;
  int last = 0;
  for (const auto& x : q) {
    int s = sgn(x);
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

void strip_twos(std::vector<Int>& p) {
  mp_bitcnt_t m = ~mp_bitcnt_t(0);
  for (const auto& x : p)
    if (x != 0) m = std::min(m, mpz_scan1(x.get_mpz_t(), 0));
  if (m == 0 || m == ~mp_bitcnt_t(0)) return;
  for (auto& x : p) mpz_tdiv_q_2exp(x.get_mpz_t(), x.get_mpz_t(), m);
}

struct Found {
  Rat lo, hi;
};

// Positive roots of p (p(0) != 0), sorted.
void positive_roots(const UPoly& p, std::vector<Found>& out) {
  const int d = p.degree();
  if (d <= 0) return;
  // Fujiwara: roots are below 2 max_i |c_{d-i} / c_d|^(1/i), taken in powers of two
  const long lbits = static_cast<long>(mpz_sizeinbase(p.lead().get_mpz_t(), 2));
  long e = 0;
  for (int i = 1; i <= d; ++i) {
    const Int& c = p.c[d - i];
    if (c == 0) continue;
    const long diff = static_cast<long>(mpz_sizeinbase(c.get_mpz_t(), 2)) - lbits + 1;
    e = std::max(e, diff > 0 ? (diff + i - 1) / i : 0);
  }
  const unsigned k = static_cast<unsigned>(e + 1);
  std::vector<Int> P = p.c;
  for (int i = 1; i <= d; ++i) P[i] <<= k * i;
  Rat B = Rat(Int(1) << k);

  struct Task {
    std::vector<Int> poly;
    Rat a, w;
  };
  std::vector<Task> stack;
  stack.push_back({std::move(P), Rat(0), B});
  while (!stack.empty()) {
    Task t = std::move(stack.back());
    stack.pop_back();
    if (t.poly.empty()) {
      out.push_back({t.a, t.a});
      continue;
    }
    unsigned v = descartes01(t.poly);
    if (v == 0) continue;
    if (v == 1) {
      out.push_back({t.a, t.a + t.w});
      continue;
    }
    std::vector<Int> L = t.poly;
    for (int i = 0; i < d; ++i) L[i] <<= (d - i);
    std::vector<Int> R = L;
    taylor_shift1(R);
    strip_twos(L);
    strip_twos(R);
    Rat half = t.w / 2;
    Rat mid = t.a + half;
    // pushed in reverse so the left half is processed first
    stack.push_back({std::move(R), mid, half});
    if (stack.back().poly[0] == 0) {
      // the midpoint is itself a root; emit it between the two halves
      stack.push_back({{}, mid, Rat(0)});
    }
    stack.push_back({std::move(L), t.a, half});
  }
}

UPoly univariate(const MPoly& f) {
  if (f.is_constant()) return UPoly::constant(f.constant_value());
  Var v{f.level()};
  return to_upoly(f, v);
}

}  // namespace

RealRoot::RealRoot(UPoly sqf, Rat lo, Rat hi) : p_(std::move(sqf)), lo_(std::move(lo)), hi_(std::move(hi)) {}

int RealRoot::sign_lo() const {
  int s = sign_at(p_, lo_);
  return s != 0 ? s : sign_at(derivative(p_), lo_);
}

void RealRoot::refine() {
  if (exact()) return;
  Rat m = (lo_ + hi_) / 2;
  int s = sign_at(p_, m);
  if (s == 0) {
    lo_ = hi_ = m;
  } else if (s == sign_lo()) {
    lo_ = m;
  } else {
    hi_ = m;
  }
}

void RealRoot::refine_to(const Rat& width) {
  if (exact()) return;
  const int slo = sign_lo();
  while (!exact() && hi_ - lo_ > width) {
    Rat m = (lo_ + hi_) / 2;
    int s = sign_at(p_, m);
    if (s == 0) lo_ = hi_ = m;
    else if (s == slo) lo_ = m;
    else hi_ = m;
  }
}

int RealRoot::compare(const Rat& q) {
  if (exact()) return sgn(lo_ - q);
  if (q <= lo_) return 1;
  if (q >= hi_) return -1;
  int s = sign_at(p_, q);
  if (s == 0) {
    lo_ = hi_ = q;
    return 0;
  }
  return s == sign_lo() ? 1 : -1;
}

Int RealRoot::floor() {
  if (exact()) return floor_rat(lo_);
  refine_to(Rat(1));
  Int k = floor_rat(lo_);
  return compare(Rat(k + 1)) >= 0 ? Int(k + 1) : k;
}

Int RealRoot::ceil() {
  if (exact()) return ceil_rat(lo_);
  refine_to(Rat(1));
  Int k = ceil_rat(hi_);
  return compare(Rat(k - 1)) <= 0 ? Int(k - 1) : k;
}

std::vector<RealRoot> real_roots(const UPoly& f) {
  if (f.is_zero()) throw std::domain_error("real roots of the zero polynomial");
  std::vector<RealRoot> out;
  if (f.degree() <= 0) return out;
  UPoly p = squarefree_part(f);
  UPoly q = p;
  bool zero_root = q.c[0] == 0;
  if (zero_root) q.c.erase(q.c.begin());
  std::vector<Found> neg, pos;
  positive_roots(reflect(q), neg);
  positive_roots(q, pos);
  for (auto it = neg.rbegin(); it != neg.rend(); ++it) out.emplace_back(p, -it->hi, -it->lo);
  if (zero_root) out.emplace_back(p, Rat(0), Rat(0));
  for (const auto& r : pos) out.emplace_back(p, r.lo, r.hi);
  return out;
}

IsolationList isolate(const UPoly& f) {
  IsolationList l;
  for (const auto& r : real_roots(f)) l.roots.push_back({r.lo(), r.hi()});
  return l;
}

IsolationList isolate(const MPoly& f) { return isolate(univariate(f)); }

unsigned count_real_roots(const UPoly& f) { return static_cast<unsigned>(real_roots(f).size()); }
unsigned count_real_roots(const MPoly& f) { return count_real_roots(univariate(f)); }

bool simpler(const Rat& a, const Rat& b) {
  int c = cmp(a.get_den(), b.get_den());
  if (c != 0) return c < 0;
  c = mpz_cmpabs(a.get_num_mpz_t(), b.get_num_mpz_t());
  if (c != 0) return c < 0;
  return sgn(a) > sgn(b);
}

namespace {

// Simplest rational in (a, b) with 0 <= a < b; b may be infinite.
Rat stern_brocot(const Rat& a, const std::optional<Rat>& b) {
  Int n = floor_rat(a) + 1;
  if (!b || Rat(n) < *b) return Rat(n);
  Int fl = n - 1;
  Rat a1 = a - fl, b1 = *b - fl;
  std::optional<Rat> upper;
  if (a1 != 0) upper = 1 / a1;
  Rat inner = stern_brocot(1 / b1, upper);
  Rat r = fl + 1 / inner;
  r.canonicalize();
  return r;
}

}  // namespace

Rat simplest_between(const std::optional<Rat>& a, const std::optional<Rat>& b) {
  if (a && b && *a >= *b) throw std::invalid_argument("empty interval");
  if ((!a || *a < 0) && (!b || *b > 0)) return Rat(0);
  if (a && *a >= 0) return stern_brocot(*a, b);
  // b <= 0
  return -stern_brocot(-*b, a ? std::optional<Rat>(-*a) : std::nullopt);
}

namespace {

bool vanishes(const UPoly& g, const Rat& q) { return !g.is_zero() && g.degree() > 0 && sign_at(g, q) == 0; }

RealRoot exact_root(const Rat& q) { return RealRoot(UPoly(), q, q); }

}  // namespace

namespace {

thread_local ChoiceRule g_rule = ChoiceRule::Simplest;

// Midpoint of the refined isolating intervals; unbounded gaps step 3 units out.
Rat choose_midpoint(Gap& gap, const UPoly& g) {
  Rat c;
  if (!gap.lo && !gap.hi) {
    c = Rat(1, 3);
  } else if (!gap.hi) {
    c = Rat(gap.lo->ceil() + 3);
  } else if (!gap.lo) {
    c = Rat(gap.hi->floor() - 3);
  } else {
    RealRoot& r1 = *gap.lo;
    RealRoot& r2 = *gap.hi;
    while (r1.hi() >= r2.lo()) {
      r1.refine();
      r2.refine();
    }
    c = (r1.hi() + r2.lo()) / 2;
    if (!vanishes(g, c)) return c;
    // g has finitely many roots: walk towards r2 until clear
    Rat step = (r2.lo() - c) / 2;
    while (vanishes(g, c)) {
      c += step;
      step /= 2;
    }
    return c;
  }
  Rat step = gap.hi ? Rat(-1) : Rat(1);
  while (vanishes(g, c)) c += step;
  return c;
}

}  // namespace

ChoiceRule choice_rule() { return g_rule; }
ScopedChoiceRule::ScopedChoiceRule(ChoiceRule r) : saved_(g_rule) { g_rule = r; }
ScopedChoiceRule::~ScopedChoiceRule() { g_rule = saved_; }

Rat choose_in_gap(Gap& gap, const UPoly& g) {
  if (g_rule == ChoiceRule::Midpoint) return choose_midpoint(gap, g);
  if (!gap.lo && !gap.hi) {
    if (!vanishes(g, Rat(0))) return Rat(0);
    Gap left{std::nullopt, exact_root(Rat(0))}, right{exact_root(Rat(0)), std::nullopt};
    Rat a = choose_in_gap(left, g), b = choose_in_gap(right, g);
    return simpler(a, b) ? a : b;
  }
  if (!gap.hi) {
    Rat c(gap.lo->ceil() + 1);
    while (vanishes(g, c)) c += 1;
    return c;
  }
  if (!gap.lo) {
    Rat c(gap.hi->floor() - 1);
    while (vanishes(g, c)) c -= 1;
    return c;
  }
  RealRoot& r1 = *gap.lo;
  RealRoot& r2 = *gap.hi;
  Rat q;
  while (true) {
    q = simplest_between(r1.lo(), r2.hi());
    if (r1.compare(q) < 0 && r2.compare(q) > 0) break;
    r1.refine();
    r2.refine();
  }
  if (!vanishes(g, q)) return q;
  Gap left{r1, exact_root(q)}, right{exact_root(q), r2};
  Rat a = choose_in_gap(left, g), b = choose_in_gap(right, g);
  return simpler(a, b) ? a : b;
}

SampleChoice sp_one_detailed(const UPoly& f, const UPoly& g) {
  if (f.is_zero() || g.is_zero()) throw std::domain_error("sample choice with a zero polynomial");
  std::vector<RealRoot> roots = real_roots(f);
  UPoly gs = g.degree() > 0 ? squarefree_part(g) : g;
  SampleChoice out;
  for (std::size_t i = 0; i <= roots.size(); ++i) {
    Gap gap;
    if (i > 0) gap.lo = roots[i - 1];
    if (i < roots.size()) gap.hi = roots[i];
    out.points.push_back(choose_in_gap(gap, gs));
    out.gaps.push_back(std::move(gap));
  }
  return out;
}

std::vector<Rat> sp_one(const UPoly& f, const UPoly& g) { return sp_one_detailed(f, g).points; }

std::vector<Rat> sp_one(const MPoly& f, const MPoly& g) {
  if (f.is_zero() || g.is_zero()) throw std::domain_error("sample choice with a zero polynomial");
  unsigned lf = f.level(), lg = g.level();
  if (lf && lg && lf != lg) throw std::invalid_argument("sample choice needs univariate polynomials in one variable");
  return sp_one(univariate(f), univariate(g));
}

}  // namespace owcad
