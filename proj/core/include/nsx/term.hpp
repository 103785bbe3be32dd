#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nsx/types.hpp"

namespace nsx {

// Terms of the typed lambda calculus with primitive recursion at all finite
// types and native finite sequences.  Immutable shared trees; all operations
// below are pure.
class Term {
 public:
  enum class Kind {
    Var,
    Zero,
    Succ,
    NumLit,
    Lam,
    App,
    Rec,
    SeqLit,
    SeqLen,
    SeqIdx,
    SeqAppend,
  };

  Term();  // Zero

  static Term var(std::string name, FinType type);
  static Term zero();
  static Term succ(Term t);
  static Term num(uint64_t n);
  static Term lam(std::string bound, FinType boundType, Term body);
  static Term app(Term fn, Term arg);
  // Left-nested application fn a1 a2 ... an.
  static Term apps(Term fn, const std::vector<Term>& args);
  static Term rec(FinType type, Term base, Term step, Term index);
  static Term seq_lit(std::vector<Term> elements, FinType elemType);
  static Term seq_len(Term s);
  static Term seq_idx(Term s, Term i);
  static Term seq_append(Term a, Term b);

  Kind kind() const;

  // Accessors; each asserts the matching kind.
  const std::string& var_name() const;
  const FinType& var_type() const;
  uint64_t num_value() const;          // NumLit
  const std::string& lam_name() const;
  const FinType& lam_type() const;
  const Term& lam_body() const;
  const Term& fn() const;              // App
  const Term& arg() const;             // App / Succ / SeqLen
  const FinType& rec_type() const;
  const Term& rec_base() const;
  const Term& rec_step() const;
  const Term& rec_index() const;
  const std::vector<Term>& seq_elements() const;
  const FinType& seq_elem_type() const;
  const Term& lhs() const;             // SeqIdx / SeqAppend
  const Term& rhs() const;             // SeqIdx / SeqAppend

  bool operator==(const Term& o) const { return alpha_eq(*this, o); }

  // Structural equality up to renaming of bound variables and up to the
  // identification of numerals with Succ/Zero chains.
  static bool alpha_eq(const Term& a, const Term& b);

  std::set<std::string> free_vars() const;
  bool is_closed() const { return free_vars().empty(); }

  // A fully reduced value: numeral, sequence of values, or lambda.
  bool is_value() const;
  // Whole term is a Succ^n(Zero) / NumLit chain.
  std::optional<uint64_t> as_numeral() const;

  std::string to_string() const;
  Sexpr to_sexpr() const;
  static Term from_sexpr(const Sexpr& s);
  static Term parse(const std::string& text);

 public:
  struct Node;

 private:
  std::shared_ptr<const Node> node_;
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
};

// Ordered variable-typing environment.
class TypeEnv {
 public:
  TypeEnv() = default;
  // Throws TypeError on duplicate names.
  void bind(const std::string& name, FinType type);
  std::optional<FinType> lookup(const std::string& name) const;
  TypeEnv extended(const std::string& name, FinType type) const;
  const std::vector<std::pair<std::string, FinType>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<std::string, FinType>> entries_;
};

// Returns the unique type of t under env, or throws TypeError/UnboundVariable.
FinType typecheck(const Term& t, const TypeEnv& env = {});

// Capture-avoiding substitution of s for the variable named x.name (at x's
// type) throughout t.  Throws TypeError when s does not have x's type.
Term substitute(const Term& t, const Term& x, const Term& s);

// Call-by-value evaluation of a closed well-typed term, with an explicit step
// budget.  Throws FuelExhausted when the budget runs out, IllTyped on stuck
// terms.
Term eval(const Term& t, uint64_t fuel = 1'000'000);

// Picks a name not in `avoid`, derived from `base` by appending ~1, ~2, ...
std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);

// Closed witness combinators used when assembling extracted terms.
namespace combinators {

// plus : N -> N -> N
Term mk_add();
// monus : N -> N -> N, truncated subtraction a - b.
Term mk_monus();
// max2 : N -> N -> N
Term mk_max2();
// mul : N -> N -> N
Term mk_mul();
// ifz : N -> N -> N -> N; ifz c a b = a when c = 0, else b.
Term mk_ifz();
// Maximum entry of a finite number sequence, 0 on the empty sequence.
// Type: (* N) -> N.
Term mk_max_seq();
// Derived fold over a sequence at element type N, accumulator type N:
// fold s z g = g(s_{n-1}, ... g(s_0, z)); type (* N) -> N -> (N -> N -> N) -> N.
Term mk_fold_nat();
// Cantor pairing (a, b) -> (a+b)(a+b+1)/2 + b, as pair : N -> N -> N.
Term mk_pair();
// Least index i <= bound with s(i) = 0, or bound + 1 when none; type (* N) -> N.
// The sequence supplies the function values on 0..bound.
Term mk_first_zero();
// grid n = <pair(0, n), pair(1, n), ..., pair(n, n)> : N -> (* N); the entries
// code the rationals j/n.
Term mk_grid();
// range n = <0, 1, ..., n-1> : N -> (* N).
Term mk_range();

}  // namespace combinators

}  // namespace nsx
