#pragma once

#include <gmpxx.h>

#include <string>

namespace owcad {

using Int = mpz_class;
using Rat = mpq_class;

inline Rat make_rat(const Int& num, const Int& den) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

// "p/q" in lowest terms, or "p" when the denominator is one.
inline std::string to_string(const Rat& r) { return r.get_str(); }
inline std::string to_string(const Int& z) { return z.get_str(); }

inline Int floor_rat(const Rat& r) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline Int ceil_rat(const Rat& r) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline Int ipow(const Int& base, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline Rat rpow(const Rat& base, unsigned long e) {
  return make_rat(ipow(base.get_num(), e), ipow(base.get_den(), e));
}

inline Int igcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Int ilcm(const Int& a, const Int& b) {
  Int g;
  mpz_lcm(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

}  // namespace owcad
