#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nsx/pipeline.hpp"
#include "nsx/realfn.hpp"

namespace nsx {

// ---------------------------------------------------------------------------
// Rational-precision contract evaluation

// A value of the oracle-side semantics for contract matrices.
struct RatValue {
  enum class Kind { Nat, Rat, Fn, Part, Seq };
  Kind kind = Kind::Nat;
  uint64_t nat = 0;
  Rational rat;
  std::function<RatValue(const RatValue&)> fn;
  Partition part;
  std::vector<RatValue> items;

  static RatValue of(uint64_t n);
  static RatValue of(Rational q);
  static RatValue of(Partition p);
  static RatValue of_fn(std::function<RatValue(const RatValue&)> f);
  static RatValue of_realfn(const RealFn& f);
  static RatValue of_natfn(std::function<uint64_t(uint64_t)> f);
  static RatValue seq(std::vector<RatValue> xs);

  Rational as_rat() const;    // Nat widens to Rat
  uint64_t as_nat() const;
  std::string to_string() const;
};

using RatEnv = std::map<std::string, RatValue>;

// Enumeration bounds for internal quantifiers during contract checking.
struct EvalBounds {
  int denomBound = 64;    // real quantifiers range over the grid j/denomBound in [0,1]
  int natBound = 64;      // internal number quantifiers range over 0..natBound
  uint64_t fuel = 2'000'000;
  std::vector<Partition> partitions;  // domain for partition-sorted quantifiers
};

// Exact-rational truth of an internal contract formula over the bounded
// domains; throws Unrepresentable on constructs outside the contract
// language.
bool eval_contract(const Formula& f, const RatEnv& env, const EvalBounds& bounds);

// ---------------------------------------------------------------------------
// Witness verification

struct DomainPoint {
  std::string label;
  RatEnv bindings;              // oracle-side values for contract inputs
  std::vector<Term> termArgs;   // arguments fed to the witness term, in order
};

struct VerificationFailure {
  std::string input;
  std::string detail;
};

struct VerificationReport {
  bool ok = true;
  int checked = 0;
  std::vector<VerificationFailure> failures;
};

VerificationReport verify_witness(const ExtractionResult& r, const std::vector<DomainPoint>& domain,
                                  const EvalBounds& bounds);

// ---------------------------------------------------------------------------
// Bounded search operators

// Least n <= B with f(n) = 0; empty when none.
std::optional<uint64_t> mu_bounded(const std::vector<uint64_t>& f, uint64_t B);

// The increasing 0/1-jump sequence attached to a zero test: 0 until the first
// zero of f, then 1 - 2^-n.  Decides |x_n - x_m| <= 1/k exactly.
bool leuk_close(const std::vector<uint64_t>& f, uint64_t n, uint64_t m, uint64_t k);

// A convergence rate for the jump sequence, verified over the window.
// Throws WindowTooSmall when the window cannot contain the rate.
uint64_t mct_rate(const std::function<std::optional<uint64_t>(const std::vector<uint64_t>&)>& mu,
                  const std::vector<uint64_t>& f, uint64_t k, uint64_t window);

// Recovers the least zero from a convergence-rate functional; throws NoZero
// when f has none below the rate bound.
uint64_t mu_from_rate(const std::function<uint64_t(uint64_t)>& rate,
                      const std::vector<uint64_t>& f);

// ---------------------------------------------------------------------------
// Fan functionals on truncated Cantor space

// Functionals on binary sequences are tables over the 2^depth leaves, leaf
// index read most-significant-bit-first.
uint64_t fan_modulus_muc(const std::vector<uint64_t>& leafTable, int depth);  // throws NotUniform

struct FanWitness {
  uint64_t bound = 0;
  std::vector<std::vector<uint8_t>> candidates;
};

FanWitness special_fan_from_muc(const std::vector<uint64_t>& g, int depth);

// Exhaustive check of the cover property over every prefix-closed binary tree
// of the given depth; fills `counterexample` when false.
bool check_scf(const FanWitness& theta, const std::vector<uint64_t>& g, int depth,
               std::string* counterexample = nullptr, int depthCap = 3);

// ---------------------------------------------------------------------------
// Riemann integration oracles

// The enumerated partition family: uniform grids with every tag pattern up to
// `fullPatternCells` cells, and left/right/alternating tags beyond.
std::vector<Partition> grid_partition_family(int denomBound, int fullPatternCells = 8);

// True iff every family pair of mesh < 1/N has |S_pi - S_rho| < 1/k.
bool riemann_modulus_validates(const RealFn& f, uint64_t N, uint64_t k, int denomBound);

// Least N <= denomBound validating, by exhaustive pair scan.
std::optional<uint64_t> riemann_modulus_oracle(const RealFn& f, uint64_t k, int denomBound);

// First grid point j/D with |f| < 1/k; throws NoApproxRoot when none.
Rational approx_ivt_oracle(const RealFn& f, uint64_t k, int denomBound);

}  // namespace nsx
