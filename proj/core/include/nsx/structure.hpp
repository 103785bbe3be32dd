#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "nsx/formula.hpp"

namespace nsx {

// A value of the finite testing semantics: a natural, a finite sequence, or a
// function table on the base domain.
struct StructValue {
  enum class Kind { Nat, Seq, Fun };
  Kind kind = Kind::Nat;
  uint64_t nat = 0;
  std::vector<StructValue> items;  // Seq elements / Fun outputs indexed by argument

  static StructValue of(uint64_t n) { return {Kind::Nat, n, {}}; }
  static StructValue seq(std::vector<StructValue> xs) { return {Kind::Seq, 0, std::move(xs)}; }
  static StructValue fun(std::vector<StructValue> outs) { return {Kind::Fun, 0, std::move(outs)}; }

  bool operator==(const StructValue& o) const;
  std::string to_string() const;
};

// Finite-scale testing semantics: a base domain {0..M-1}, a standardness
// threshold K <= M (the degenerate K = M makes every element standard),
// bounded sequence lengths, and atom interpretations.  Not a model of the
// nonstandard systems; used only where the checked equivalence is literally
// true at this scale.
class FiniteStructure {
 public:
  FiniteStructure(int baseSize, int stThreshold, int seqLenCap = 2, unsigned seed = 1);

  int base_size() const { return M_; }
  int st_threshold() const { return K_; }
  bool degenerate() const { return K_ == M_; }

  // Interprets an atom name; uninterpreted atoms get a deterministic
  // pseudo-random table drawn from the seed.
  void interpret(const std::string& atom, std::function<bool(const std::vector<StructValue>&)> fn);

  std::vector<StructValue> enumerate(const FinType& type) const;  // throws Unrepresentable
  bool is_standard(const StructValue& v) const;
  bool atom_holds(const std::string& name, const std::vector<StructValue>& args) const;

 private:
  int M_;
  int K_;
  int seqCap_;
  unsigned seed_;
  std::map<std::string, std::function<bool(const std::vector<StructValue>&)>> atoms_;
};

using StructEnv = std::map<std::string, StructValue>;

// Evaluates a term over the structure (variables from env; no lambdas or
// recursors in this semantics).
StructValue eval_term_struct(const Term& t, const FiniteStructure& s, const StructEnv& env);

// Classical truth in the finite structure; standard quantifiers range over
// the standard elements.
bool eval_formula(const Formula& f, const FiniteStructure& s, const StructEnv& env = {});

}  // namespace nsx
