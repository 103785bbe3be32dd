#pragma once

// Deterministic random generators shared by the property-style tests.

#include <cstdint>
#include <vector>

#include "nsx/formula.hpp"
#include "nsx/normal_form.hpp"

namespace nsxtest {

struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed) : state(seed ? seed : 0x9e3779b97f4a7c15ull) {}
  uint64_t next() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  }
  uint64_t below(uint64_t n) { return n ? next() % n : 0; }
  bool flip() { return next() & 1; }
};

inline nsx::FinType random_base_type(Rng& rng) {
  switch (rng.below(3)) {
    case 0:
      return nsx::FinType::base();
    case 1:
      return nsx::FinType::arrow(nsx::FinType::base(), nsx::FinType::base());
    default:
      return nsx::FinType::seq(nsx::FinType::base());
  }
}

// A random internal formula over number-sorted variables from the pool, with
// opaque atoms, connectives, and bounded/unbounded number quantifiers.
inline nsx::Formula random_internal(Rng& rng, std::vector<std::string> pool, int depth) {
  using nsx::Formula;
  using nsx::Term;
  const nsx::FinType N = nsx::FinType::base();
  auto term = [&]() {
    if (!pool.empty() && rng.flip()) return Term::var(pool[rng.below(pool.size())], N);
    return Term::num(rng.below(3));
  };
  if (depth <= 0 || rng.below(4) == 0) {
    switch (rng.below(3)) {
      case 0:
        return Formula::atom_pred("P" + std::to_string(rng.below(3)), {term(), term()});
      case 1:
        return Formula::atom_eq0(term(), term());
      default:
        return Formula::atom_le0(term(), term());
    }
  }
  switch (rng.below(6)) {
    case 0:
      return Formula::negate(random_internal(rng, pool, depth - 1));
    case 1:
      return Formula::conj(random_internal(rng, pool, depth - 1),
                           random_internal(rng, pool, depth - 1));
    case 2:
      return Formula::disj(random_internal(rng, pool, depth - 1),
                           random_internal(rng, pool, depth - 1));
    case 3:
      return Formula::implies(random_internal(rng, pool, depth - 1),
                              random_internal(rng, pool, depth - 1));
    case 4: {
      std::string v = "q" + std::to_string(rng.below(4));
      pool.push_back(v);
      return Formula::forall(v, N, random_internal(rng, pool, depth - 1));
    }
    default: {
      std::string v = "r" + std::to_string(rng.below(4));
      pool.push_back(v);
      return Formula::exists(v, N, random_internal(rng, pool, depth - 1));
    }
  }
}

// A random formula that may use the external constructs; used for the
// print/parse round trip.
inline nsx::Formula random_formula(Rng& rng, std::vector<std::string> pool, int depth) {
  using nsx::Formula;
  if (depth <= 0 || rng.below(5) == 0) return random_internal(rng, pool, 1);
  switch (rng.below(8)) {
    case 0: {
      std::string v = "s" + std::to_string(rng.below(4));
      pool.push_back(v);
      return Formula::forall_st(v, nsx::FinType::base(), random_formula(rng, pool, depth - 1));
    }
    case 1: {
      std::string v = "t" + std::to_string(rng.below(4));
      pool.push_back(v);
      return Formula::exists_st(v, nsx::FinType::base(), random_formula(rng, pool, depth - 1));
    }
    case 2:
      return Formula::st(nsx::Term::var(pool.empty() ? "z" : pool[rng.below(pool.size())],
                                        nsx::FinType::base()));
    case 3:
      return Formula::negate(random_formula(rng, pool, depth - 1));
    case 4:
      return Formula::conj(random_formula(rng, pool, depth - 1),
                           random_formula(rng, pool, depth - 1));
    case 5:
      return Formula::implies(random_formula(rng, pool, depth - 1),
                              random_formula(rng, pool, depth - 1));
    default:
      return random_internal(rng, pool, depth - 1);
  }
}

// A random normal form: standard blocks over N and N->N, an internal matrix
// over the block variables.
inline nsx::NormalForm random_normal_form(Rng& rng) {
  nsx::NormalForm nf;
  std::vector<std::string> pool;
  int nu = static_cast<int>(rng.below(3));
  int ne = static_cast<int>(rng.below(3));
  for (int i = 0; i < nu; ++i) {
    std::string v = "u" + std::to_string(i);
    nf.uVars.push_back({v, rng.flip() ? nsx::FinType::base()
                                      : nsx::FinType::arrow(nsx::FinType::base(),
                                                            nsx::FinType::base())});
    if (nf.uVars.back().type.is_base()) pool.push_back(v);
  }
  for (int i = 0; i < ne; ++i) {
    std::string v = "e" + std::to_string(i);
    nf.eVars.push_back({v, nsx::FinType::base()});
    pool.push_back(v);
  }
  nf.matrix = random_internal(rng, pool, 3);
  return nf;
}

}  // namespace nsxtest
