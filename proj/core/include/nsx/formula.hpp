#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nsx/term.hpp"

namespace nsx {

struct TypedVar {
  std::string name;
  FinType type;
  bool operator==(const TypedVar& o) const { return name == o.name && type == o.type; }
};

// Formulas over terms: internal atoms, connectives, typed quantifiers, the
// standardness predicate, relativized quantifiers, and the infinitesimal
// quantifier sugar.  DefRef nodes are unexpanded references into the
// definition registry; they count as external until expanded.
class Formula {
 public:
  enum class Kind {
    AtomEq0,
    AtomLe0,
    AtomPred,
    St,
    Not,
    And,
    Or,
    Implies,
    Forall,
    Exists,
    ForallSt,
    ExistsSt,
    ForallInf,
    DefRef,
  };

  Formula();  // AtomEq0(0, 0)

  static Formula atom_eq0(Term a, Term b);
  static Formula atom_le0(Term a, Term b);
  static Formula atom_pred(std::string name, std::vector<Term> args);
  static Formula st(Term t);
  static Formula negate(Formula f);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula implies(Formula a, Formula b);
  static Formula forall(std::string var, FinType type, Formula body);
  static Formula exists(std::string var, FinType type, Formula body);
  static Formula forall_st(std::string var, FinType type, Formula body);
  static Formula exists_st(std::string var, FinType type, Formula body);
  static Formula forall_inf(std::string var, Formula body);
  static Formula def_ref(std::string name, std::vector<Term> args);

  // Nested quantifier blocks over several variables.
  static Formula forall_st_block(const std::vector<TypedVar>& vars, Formula body);
  static Formula exists_st_block(const std::vector<TypedVar>& vars, Formula body);
  static Formula forall_block(const std::vector<TypedVar>& vars, Formula body);

  Kind kind() const;

  const Term& term_lhs() const;                  // AtomEq0 / AtomLe0
  const Term& term_rhs() const;                  // AtomEq0 / AtomLe0
  const std::string& pred_name() const;          // AtomPred / DefRef
  const std::vector<Term>& pred_args() const;    // AtomPred / DefRef
  const Term& st_term() const;                   // St
  const Formula& child() const;                  // Not
  const Formula& lhs() const;                    // And / Or / Implies
  const Formula& rhs() const;                    // And / Or / Implies
  const std::string& qvar() const;               // quantifiers
  const FinType& qtype() const;                  // quantifiers (ForallInf: the real sort)
  const Formula& body() const;                   // quantifiers

  bool is_quantifier() const;
  bool is_atom() const;

  bool operator==(const Formula& o) const { return alpha_eq(*this, o); }
  static bool alpha_eq(const Formula& a, const Formula& b);

  // Free term variables of the formula.
  std::set<std::string> free_vars() const;

  std::string to_string() const;
  Sexpr to_sexpr() const;

  // The sort used for quantified real variables: the type-1 representation.
  static FinType real_sort();

 public:
  struct Node;

 private:
  std::shared_ptr<const Node> node_;
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
};

// True iff no St, no relativized quantifier, no infinitesimal quantifier and
// no unexpanded definition reference occurs.
bool is_internal(const Formula& f);

// F^st: appends st to every quantifier except bounded number quantifiers and
// bounded member quantifiers.  Requires is_internal(f).
Formula relativize_st(const Formula& f);

// Parses the formula DSL.  Unannotated free term variables default to N
// unless `params` provides their types.  (approx-eps t) and (approx a b)
// expand to their standard-universal definitions during parsing.
Formula parse_formula(const std::string& text, const TypeEnv& params = {});
Formula formula_from_sexpr(const Sexpr& s, const TypeEnv& params = {});

// Capture-avoiding substitution of a term for a free term variable.
Formula subst_term(const Formula& f, const std::string& var, const Term& replacement);

// Bounded-quantifier recognizers ("immediately guarded" shapes).
// (forall x (implies (<=0 x t) ...)) and (exists x (and (<=0 x t) ...)).
bool is_bounded_number_forall(const Formula& f);
bool is_bounded_number_exists(const Formula& f);

// Member-bounded quantifiers encode (forall y in w) phi as
// (forall y (implies (atom in y w) phi)), and dually with and/exists.
Formula forall_in(const std::string& var, FinType elemType, const Term& seq, Formula body);
Formula exists_in(const std::string& var, FinType elemType, const Term& seq, Formula body);
struct MemberQuant {
  bool universal = false;
  std::string var;
  FinType elemType;
  Term range;
  Formula body;
};
std::optional<MemberQuant> match_member_quant(const Formula& f);

// a ~ b at precision 1/n for all standard n (the infinitesimal closeness
// relation between two term-denoted reals).
Formula approx(const Term& a, const Term& b, const std::string& freshIndex = "n");
// |t| < 1/n for all standard n.
Formula approx_zero(const Term& t, const std::string& freshIndex = "n");

}  // namespace nsx
