#include "owcad/bench.hpp"

#include <algorithm>
#include <stdexcept>

#include "owcad/projection.hpp"
#include "owcad/realroot.hpp"

namespace owcad {

namespace {

void monomials(unsigned nvars, unsigned degree, std::vector<Exp>& cur, std::vector<std::vector<Exp>>& out) {
  if (cur.size() == nvars) {
    out.push_back(cur);
    return;
  }
  unsigned used = 0;
  for (Exp e : cur) used += e;
  for (unsigned e = 0; used + e <= degree; ++e) {
    cur.push_back(e);
    monomials(nvars, degree, cur, out);
    cur.pop_back();
  }
}

}  // namespace

MPoly random_dense_poly(std::mt19937_64& rng, unsigned nvars, unsigned degree, unsigned terms, long coef_bound) {
  std::vector<std::vector<Exp>> all;
  std::vector<Exp> cur;
  monomials(nvars, degree, cur, all);
  terms = std::min<std::size_t>(terms, all.size());
  // partial Fisher-Yates so the draw does not depend on the library's shuffle
  for (unsigned i = 0; i < terms; ++i) {
    std::size_t j = std::uniform_int_distribution<std::size_t>(i, all.size() - 1)(rng);
    std::swap(all[i], all[j]);
  }
  std::uniform_int_distribution<long> coef(-coef_bound, coef_bound - 1);
  std::vector<Exp> exps;
  std::vector<Int> coefs;
  for (unsigned i = 0; i < terms; ++i) {
    long c = coef(rng);
    if (c >= 0) ++c;  // skip zero
    exps.insert(exps.end(), all[i].begin(), all[i].end());
    coefs.emplace_back(c);
  }
  return MPoly::from_terms(nvars, std::move(exps), std::move(coefs));
}

std::vector<RootCountRow> bench_roots(unsigned trials, unsigned degree, std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("trials must be at least 1");
  std::mt19937_64 rng(seed);
  const Var y{2}, z{3};
  std::vector<RootCountRow> rows;
  for (unsigned t = 0; t < trials; ++t) {
    MPoly f;
    do {
      f = random_dense_poly(rng, 3, degree);
    } while (!f.involves(y) || !f.involves(z));
    RootCountRow r;
    r.trial = t + 1;
    // Hp(f,[z,y],y) = Bp(Bp(f,z),y) and Hp(f,[z,y],z) = Bp(Bp(f,y),z)
    HpCache cache(f);
    const VarMask yz = mask_of({y, z});
    r.bp_zy = count_real_roots(product(cache.branch(yz, y), 3));
    r.bp_yz = count_real_roots(product(cache.branch(yz, z), 3));
    r.hp = count_real_roots(product(cache.hp(yz), 3));
    r.dominance = r.hp <= std::min(r.bp_zy, r.bp_yz);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace owcad
