#include "nsx/formula.hpp"

#include <cassert>

#include "nsx/error.hpp"

namespace nsx {

struct Formula::Node {
  Kind kind;
  std::string name;          // AtomPred/DefRef name, quantifier variable
  FinType type;              // quantifier variable type
  std::vector<Term> terms;   // atom arguments / st target
  std::vector<Formula> kids;
};

namespace {
std::shared_ptr<const Formula::Node> make_node(Formula::Node n) {
  return std::make_shared<const Formula::Node>(std::move(n));
}
}  // namespace

Formula::Formula()
    : node_(make_node(Node{Kind::AtomEq0, "", FinType::base(), {Term::zero(), Term::zero()}, {}})) {}

Formula Formula::atom_eq0(Term a, Term b) {
  return Formula(make_node(Node{Kind::AtomEq0, "", FinType::base(), {std::move(a), std::move(b)}, {}}));
}
Formula Formula::atom_le0(Term a, Term b) {
  return Formula(make_node(Node{Kind::AtomLe0, "", FinType::base(), {std::move(a), std::move(b)}, {}}));
}
Formula Formula::atom_pred(std::string name, std::vector<Term> args) {
  return Formula(make_node(Node{Kind::AtomPred, std::move(name), FinType::base(), std::move(args), {}}));
}
Formula Formula::st(Term t) {
  return Formula(make_node(Node{Kind::St, "", FinType::base(), {std::move(t)}, {}}));
}
Formula Formula::negate(Formula f) {
  return Formula(make_node(Node{Kind::Not, "", FinType::base(), {}, {std::move(f)}}));
}
Formula Formula::conj(Formula a, Formula b) {
  return Formula(make_node(Node{Kind::And, "", FinType::base(), {}, {std::move(a), std::move(b)}}));
}
Formula Formula::disj(Formula a, Formula b) {
  return Formula(make_node(Node{Kind::Or, "", FinType::base(), {}, {std::move(a), std::move(b)}}));
}
Formula Formula::implies(Formula a, Formula b) {
  return Formula(make_node(Node{Kind::Implies, "", FinType::base(), {}, {std::move(a), std::move(b)}}));
}
Formula Formula::forall(std::string var, FinType type, Formula body) {
  return Formula(make_node(Node{Kind::Forall, std::move(var), std::move(type), {}, {std::move(body)}}));
}
Formula Formula::exists(std::string var, FinType type, Formula body) {
  return Formula(make_node(Node{Kind::Exists, std::move(var), std::move(type), {}, {std::move(body)}}));
}
Formula Formula::forall_st(std::string var, FinType type, Formula body) {
  return Formula(make_node(Node{Kind::ForallSt, std::move(var), std::move(type), {}, {std::move(body)}}));
}
Formula Formula::exists_st(std::string var, FinType type, Formula body) {
  return Formula(make_node(Node{Kind::ExistsSt, std::move(var), std::move(type), {}, {std::move(body)}}));
}
Formula Formula::forall_inf(std::string var, Formula body) {
  return Formula(make_node(Node{Kind::ForallInf, std::move(var), real_sort(), {}, {std::move(body)}}));
}
Formula Formula::def_ref(std::string name, std::vector<Term> args) {
  return Formula(make_node(Node{Kind::DefRef, std::move(name), FinType::base(), std::move(args), {}}));
}

Formula Formula::forall_st_block(const std::vector<TypedVar>& vars, Formula body) {
  Formula f = std::move(body);
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) f = forall_st(it->name, it->type, f);
  return f;
}
Formula Formula::exists_st_block(const std::vector<TypedVar>& vars, Formula body) {
  Formula f = std::move(body);
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) f = exists_st(it->name, it->type, f);
  return f;
}
Formula Formula::forall_block(const std::vector<TypedVar>& vars, Formula body) {
  Formula f = std::move(body);
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) f = forall(it->name, it->type, f);
  return f;
}

Formula::Kind Formula::kind() const { return node_->kind; }

const Term& Formula::term_lhs() const { return node_->terms[0]; }
const Term& Formula::term_rhs() const { return node_->terms[1]; }
const std::string& Formula::pred_name() const { return node_->name; }
const std::vector<Term>& Formula::pred_args() const { return node_->terms; }
const Term& Formula::st_term() const { return node_->terms[0]; }
const Formula& Formula::child() const { return node_->kids[0]; }
const Formula& Formula::lhs() const { return node_->kids[0]; }
const Formula& Formula::rhs() const { return node_->kids[1]; }
const std::string& Formula::qvar() const { return node_->name; }
const FinType& Formula::qtype() const { return node_->type; }
const Formula& Formula::body() const { return node_->kids[0]; }

bool Formula::is_quantifier() const {
  switch (kind()) {
    case Kind::Forall:
    case Kind::Exists:
    case Kind::ForallSt:
    case Kind::ExistsSt:
    case Kind::ForallInf:
      return true;
    default:
      return false;
  }
}

bool Formula::is_atom() const {
  switch (kind()) {
    case Kind::AtomEq0:
    case Kind::AtomLe0:
    case Kind::AtomPred:
      return true;
    default:
      return false;
  }
}

FinType Formula::real_sort() { return FinType::arrow(FinType::base(), FinType::base()); }

// ---------------------------------------------------------------------------

bool is_internal(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::St:
    case Formula::Kind::ForallSt:
    case Formula::Kind::ExistsSt:
    case Formula::Kind::ForallInf:
    case Formula::Kind::DefRef:
      return false;
    case Formula::Kind::AtomEq0:
    case Formula::Kind::AtomLe0:
    case Formula::Kind::AtomPred:
      return true;
    case Formula::Kind::Not:
      return is_internal(f.child());
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
      return is_internal(f.lhs()) && is_internal(f.rhs());
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      return is_internal(f.body());
  }
  return false;
}

// ---------------------------------------------------------------------------
// Free variables, substitution, alpha equivalence

namespace {

void free_vars_rec(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  auto add_term = [&](const Term& t) {
    for (const auto& v : t.free_vars())
      if (!bound.count(v)) out.insert(v);
  };
  switch (f.kind()) {
    case Formula::Kind::AtomEq0:
    case Formula::Kind::AtomLe0:
      add_term(f.term_lhs());
      add_term(f.term_rhs());
      return;
    case Formula::Kind::AtomPred:
    case Formula::Kind::DefRef:
      for (const Term& t : f.pred_args()) add_term(t);
      return;
    case Formula::Kind::St:
      add_term(f.st_term());
      return;
    case Formula::Kind::Not:
      free_vars_rec(f.child(), bound, out);
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
      free_vars_rec(f.lhs(), bound, out);
      free_vars_rec(f.rhs(), bound, out);
      return;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
    case Formula::Kind::ForallSt:
    case Formula::Kind::ExistsSt:
    case Formula::Kind::ForallInf: {
      bool fresh = bound.insert(f.qvar()).second;
      free_vars_rec(f.body(), bound, out);
      if (fresh) bound.erase(f.qvar());
      return;
    }
  }
}

}  // namespace

std::set<std::string> Formula::free_vars() const {
  std::set<std::string> bound, out;
  free_vars_rec(*this, bound, out);
  return out;
}

Formula subst_term(const Formula& f, const std::string& var, const Term& replacement) {
  auto sub = [&](const Term& t) {
    // Variable type annotations inside formulas follow the binder, so the
    // substitution variable is annotated on the fly.
    return substitute(t, Term::var(var, FinType::base()), replacement);
  };
  auto sub_typed = [&](const Term& t, const FinType&) { return sub(t); };
  (void)sub_typed;
  switch (f.kind()) {
    case Formula::Kind::AtomEq0:
      return Formula::atom_eq0(sub(f.term_lhs()), sub(f.term_rhs()));
    case Formula::Kind::AtomLe0:
      return Formula::atom_le0(sub(f.term_lhs()), sub(f.term_rhs()));
    case Formula::Kind::AtomPred: {
      std::vector<Term> args;
      for (const Term& t : f.pred_args()) args.push_back(sub(t));
      return Formula::atom_pred(f.pred_name(), std::move(args));
    }
    case Formula::Kind::DefRef: {
      std::vector<Term> args;
      for (const Term& t : f.pred_args()) args.push_back(sub(t));
      return Formula::def_ref(f.pred_name(), std::move(args));
    }
    case Formula::Kind::St:
      return Formula::st(sub(f.st_term()));
    case Formula::Kind::Not:
      return Formula::negate(subst_term(f.child(), var, replacement));
    case Formula::Kind::And:
      return Formula::conj(subst_term(f.lhs(), var, replacement),
                           subst_term(f.rhs(), var, replacement));
    case Formula::Kind::Or:
      return Formula::disj(subst_term(f.lhs(), var, replacement),
                           subst_term(f.rhs(), var, replacement));
    case Formula::Kind::Implies:
      return Formula::implies(subst_term(f.lhs(), var, replacement),
                              subst_term(f.rhs(), var, replacement));
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
    case Formula::Kind::ForallSt:
    case Formula::Kind::ExistsSt:
    case Formula::Kind::ForallInf: {
      if (f.qvar() == var) return f;  // shadowed
      std::string qv = f.qvar();
      Formula body = f.body();
      if (replacement.free_vars().count(qv)) {
        std::set<std::string> avoid = replacement.free_vars();
        auto bf = body.free_vars();
        avoid.insert(bf.begin(), bf.end());
        avoid.insert(var);
        std::string nn = fresh_name(qv, avoid);
        body = subst_term(body, qv, Term::var(nn, f.qtype()));
        qv = nn;
      }
      body = subst_term(body, var, replacement);
      switch (f.kind()) {
        case Formula::Kind::Forall:
          return Formula::forall(qv, f.qtype(), body);
        case Formula::Kind::Exists:
          return Formula::exists(qv, f.qtype(), body);
        case Formula::Kind::ForallSt:
          return Formula::forall_st(qv, f.qtype(), body);
        case Formula::Kind::ExistsSt:
          return Formula::exists_st(qv, f.qtype(), body);
        default:
          return Formula::forall_inf(qv, body);
      }
    }
  }
  throw Error("unreachable formula kind");
}

namespace {

bool alpha_term(const Term& a, const Term& b,
                std::vector<std::pair<std::string, std::string>>& scope) {
  // Formula-level bindings rename term variables; reuse Term::alpha_eq after
  // applying the pending renames to free variables of a.
  Term ra = a;
  for (const auto& [from, to] : scope) {
    if (from != to) ra = substitute(ra, Term::var(from, FinType::base()), Term::var(to, FinType::base()));
  }
  return Term::alpha_eq(ra, b);
}

bool alpha_rec(const Formula& a, const Formula& b,
               std::vector<std::pair<std::string, std::string>>& scope) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Formula::Kind::AtomEq0:
    case Formula::Kind::AtomLe0:
      return alpha_term(a.term_lhs(), b.term_lhs(), scope) &&
             alpha_term(a.term_rhs(), b.term_rhs(), scope);
    case Formula::Kind::AtomPred:
    case Formula::Kind::DefRef: {
      if (a.pred_name() != b.pred_name()) return false;
      if (a.pred_args().size() != b.pred_args().size()) return false;
      for (size_t i = 0; i < a.pred_args().size(); ++i)
        if (!alpha_term(a.pred_args()[i], b.pred_args()[i], scope)) return false;
      return true;
    }
    case Formula::Kind::St:
      return alpha_term(a.st_term(), b.st_term(), scope);
    case Formula::Kind::Not:
      return alpha_rec(a.child(), b.child(), scope);
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
      return alpha_rec(a.lhs(), b.lhs(), scope) && alpha_rec(a.rhs(), b.rhs(), scope);
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
    case Formula::Kind::ForallSt:
    case Formula::Kind::ExistsSt:
    case Formula::Kind::ForallInf: {
      if (a.kind() != Formula::Kind::ForallInf && a.qtype() != b.qtype()) return false;
      scope.emplace_back(a.qvar(), b.qvar());
      bool r = alpha_rec(a.body(), b.body(), scope);
      scope.pop_back();
      return r;
    }
  }
  return false;
}

}  // namespace

bool Formula::alpha_eq(const Formula& a, const Formula& b) {
  std::vector<std::pair<std::string, std::string>> scope;
  return alpha_rec(a, b, scope);
}

// ---------------------------------------------------------------------------
// Relativization

namespace {

Formula relativize_rec(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::AtomEq0:
    case Formula::Kind::AtomLe0:
    case Formula::Kind::AtomPred:
      return f;
    case Formula::Kind::Not:
      return Formula::negate(relativize_rec(f.child()));
    case Formula::Kind::And:
      return Formula::conj(relativize_rec(f.lhs()), relativize_rec(f.rhs()));
    case Formula::Kind::Or:
      return Formula::disj(relativize_rec(f.lhs()), relativize_rec(f.rhs()));
    case Formula::Kind::Implies:
      return Formula::implies(relativize_rec(f.lhs()), relativize_rec(f.rhs()));
    case Formula::Kind::Forall: {
      if (is_bounded_number_forall(f) || (match_member_quant(f) && match_member_quant(f)->universal)) {
        // Bounded quantifiers stay as they are; only their body is processed.
        const Formula& imp = f.body();
        return Formula::forall(f.qvar(), f.qtype(),
                               Formula::implies(imp.lhs(), relativize_rec(imp.rhs())));
      }
      return Formula::forall_st(f.qvar(), f.qtype(), relativize_rec(f.body()));
    }
    case Formula::Kind::Exists: {
      if (is_bounded_number_exists(f) || (match_member_quant(f) && !match_member_quant(f)->universal)) {
        const Formula& conj = f.body();
        return Formula::exists(f.qvar(), f.qtype(),
                               Formula::conj(conj.lhs(), relativize_rec(conj.rhs())));
      }
      return Formula::exists_st(f.qvar(), f.qtype(), relativize_rec(f.body()));
    }
    default:
      throw NotInternal("relativize_st: " + f.to_string());
  }
}

}  // namespace

Formula relativize_st(const Formula& f) {
  if (!is_internal(f)) throw NotInternal(f.to_string());
  return relativize_rec(f);
}

// ---------------------------------------------------------------------------
// Bounded and member quantifiers

bool is_bounded_number_forall(const Formula& f) {
  if (f.kind() != Formula::Kind::Forall || !f.qtype().is_base()) return false;
  if (f.body().kind() != Formula::Kind::Implies) return false;
  const Formula& guard = f.body().lhs();
  if (guard.kind() != Formula::Kind::AtomLe0) return false;
  const Term& v = guard.term_lhs();
  return v.kind() == Term::Kind::Var && v.var_name() == f.qvar() &&
         !guard.term_rhs().free_vars().count(f.qvar());
}

bool is_bounded_number_exists(const Formula& f) {
  if (f.kind() != Formula::Kind::Exists || !f.qtype().is_base()) return false;
  if (f.body().kind() != Formula::Kind::And) return false;
  const Formula& guard = f.body().lhs();
  if (guard.kind() != Formula::Kind::AtomLe0) return false;
  const Term& v = guard.term_lhs();
  return v.kind() == Term::Kind::Var && v.var_name() == f.qvar() &&
         !guard.term_rhs().free_vars().count(f.qvar());
}

Formula forall_in(const std::string& var, FinType elemType, const Term& seq, Formula body) {
  Formula guard = Formula::atom_pred("in", {Term::var(var, elemType), seq});
  return Formula::forall(var, std::move(elemType), Formula::implies(std::move(guard), std::move(body)));
}

Formula exists_in(const std::string& var, FinType elemType, const Term& seq, Formula body) {
  Formula guard = Formula::atom_pred("in", {Term::var(var, elemType), seq});
  return Formula::exists(var, std::move(elemType), Formula::conj(std::move(guard), std::move(body)));
}

std::optional<MemberQuant> match_member_quant(const Formula& f) {
  bool uni;
  if (f.kind() == Formula::Kind::Forall && f.body().kind() == Formula::Kind::Implies)
    uni = true;
  else if (f.kind() == Formula::Kind::Exists && f.body().kind() == Formula::Kind::And)
    uni = false;
  else
    return std::nullopt;
  const Formula& guard = f.body().lhs();
  if (guard.kind() != Formula::Kind::AtomPred || guard.pred_name() != "in" ||
      guard.pred_args().size() != 2)
    return std::nullopt;
  const Term& v = guard.pred_args()[0];
  if (v.kind() != Term::Kind::Var || v.var_name() != f.qvar()) return std::nullopt;
  if (guard.pred_args()[1].free_vars().count(f.qvar())) return std::nullopt;
  return MemberQuant{uni, f.qvar(), f.qtype(), guard.pred_args()[1], f.body().rhs()};
}

Formula approx(const Term& a, const Term& b, const std::string& freshIndex) {
  std::set<std::string> avoid = a.free_vars();
  auto bf = b.free_vars();
  avoid.insert(bf.begin(), bf.end());
  std::string n = fresh_name(freshIndex, avoid);
  return Formula::forall_st(n, FinType::base(),
                            Formula::atom_pred("dlt", {a, b, Term::var(n, FinType::base())}));
}

Formula approx_zero(const Term& t, const std::string& freshIndex) {
  std::string n = fresh_name(freshIndex, t.free_vars());
  return Formula::forall_st(n, FinType::base(),
                            Formula::atom_pred("alt", {t, Term::var(n, FinType::base())}));
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// Adjacent quantifiers of one kind print as a single binder list.
void collect_block(const Formula& f, Formula::Kind k, std::vector<TypedVar>& vars, Formula& rest) {
  rest = f;
  while (rest.kind() == k) {
    vars.push_back({rest.qvar(), rest.qtype()});
    rest = rest.body();
  }
}

Sexpr binder_sexpr(const std::vector<TypedVar>& vars) {
  std::vector<Sexpr> out;
  for (const auto& v : vars) out.push_back(sx_list({sx_atom(v.name), v.type.to_sexpr()}));
  return sx_list(std::move(out));
}

}  // namespace

Sexpr Formula::to_sexpr() const {
  switch (kind()) {
    case Kind::AtomEq0:
      return sx_list({sx_atom("=0"), term_lhs().to_sexpr(), term_rhs().to_sexpr()});
    case Kind::AtomLe0:
      return sx_list({sx_atom("<=0"), term_lhs().to_sexpr(), term_rhs().to_sexpr()});
    case Kind::AtomPred: {
      std::vector<Sexpr> items{sx_atom("atom"), sx_atom(pred_name())};
      for (const Term& t : pred_args()) items.push_back(t.to_sexpr());
      return sx_list(std::move(items));
    }
    case Kind::DefRef: {
      std::vector<Sexpr> items{sx_atom("def"), sx_atom(pred_name())};
      for (const Term& t : pred_args()) items.push_back(t.to_sexpr());
      return sx_list(std::move(items));
    }
    case Kind::St:
      return sx_list({sx_atom("st"), st_term().to_sexpr()});
    case Kind::Not:
      return sx_list({sx_atom("not"), child().to_sexpr()});
    case Kind::And:
      return sx_list({sx_atom("and"), lhs().to_sexpr(), rhs().to_sexpr()});
    case Kind::Or:
      return sx_list({sx_atom("or"), lhs().to_sexpr(), rhs().to_sexpr()});
    case Kind::Implies:
      return sx_list({sx_atom("implies"), lhs().to_sexpr(), rhs().to_sexpr()});
    case Kind::Forall:
    case Kind::Exists:
    case Kind::ForallSt:
    case Kind::ExistsSt: {
      static const std::map<Kind, std::string> heads = {{Kind::Forall, "forall"},
                                                        {Kind::Exists, "exists"},
                                                        {Kind::ForallSt, "forall-st"},
                                                        {Kind::ExistsSt, "exists-st"}};
      std::vector<TypedVar> vars;
      Formula rest;
      collect_block(*this, kind(), vars, rest);
      return sx_list({sx_atom(heads.at(kind())), binder_sexpr(vars), rest.to_sexpr()});
    }
    case Kind::ForallInf:
      return sx_list({sx_atom("forall-eps"), sx_list({sx_atom(qvar())}), body().to_sexpr()});
  }
  throw Error("unreachable formula kind in printer");
}

std::string Formula::to_string() const { return to_sexpr().to_string(); }

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct FParser {
  // Variable typing scope: binders seen so far plus declared parameters.
  std::vector<std::pair<std::string, FinType>> scope;

  explicit FParser(const TypeEnv& params) {
    for (const auto& e : params.entries()) scope.push_back(e);
  }

  std::optional<FinType> lookup(const std::string& n) const {
    for (auto it = scope.rbegin(); it != scope.rend(); ++it)
      if (it->first == n) return it->second;
    return std::nullopt;
  }

  // Re-annotates variable occurrences with their binder types.
  Term fix_term(const Term& t) {
    switch (t.kind()) {
      case Term::Kind::Var: {
        auto ty = lookup(t.var_name());
        return Term::var(t.var_name(), ty ? *ty : t.var_type());
      }
      case Term::Kind::Zero:
      case Term::Kind::NumLit:
        return t;
      case Term::Kind::Succ:
        return Term::succ(fix_term(t.arg()));
      case Term::Kind::Lam: {
        scope.emplace_back(t.lam_name(), t.lam_type());
        Term body = fix_term(t.lam_body());
        scope.pop_back();
        return Term::lam(t.lam_name(), t.lam_type(), body);
      }
      case Term::Kind::App:
        return Term::app(fix_term(t.fn()), fix_term(t.arg()));
      case Term::Kind::Rec:
        return Term::rec(t.rec_type(), fix_term(t.rec_base()), fix_term(t.rec_step()),
                         fix_term(t.rec_index()));
      case Term::Kind::SeqLit: {
        std::vector<Term> es;
        for (const Term& e : t.seq_elements()) es.push_back(fix_term(e));
        return Term::seq_lit(std::move(es), t.seq_elem_type());
      }
      case Term::Kind::SeqLen:
        return Term::seq_len(fix_term(t.arg()));
      case Term::Kind::SeqIdx:
        return Term::seq_idx(fix_term(t.lhs()), fix_term(t.rhs()));
      case Term::Kind::SeqAppend:
        return Term::seq_append(fix_term(t.lhs()), fix_term(t.rhs()));
    }
    throw Error("unreachable term kind");
  }

  Term term(const Sexpr& s) { return fix_term(Term::from_sexpr(s)); }

  std::vector<TypedVar> binders(const Sexpr& s) {
    if (!s.is_list() || s.items.empty())
      throw ParseError(s.line, s.column, "expected a nonempty binder list");
    std::vector<TypedVar> out;
    for (const Sexpr& b : s.items) {
      if (b.is_atom()) {
        out.push_back({b.atom, FinType::base()});
      } else if (b.is_list() && b.size() == 2 && b.at(0).is_atom()) {
        out.push_back({b.at(0).atom, FinType::from_sexpr(b.at(1))});
      } else {
        throw ParseError(b.line, b.column, "binder must be name or (name TYPE)");
      }
    }
    return out;
  }

  Formula quantified(Formula::Kind k, const std::vector<TypedVar>& vars, const Sexpr& bodyS) {
    for (const auto& v : vars) scope.emplace_back(v.name, v.type);
    Formula body = formula(bodyS);
    for (size_t i = 0; i < vars.size(); ++i) scope.pop_back();
    Formula f = body;
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
      switch (k) {
        case Formula::Kind::Forall:
          f = Formula::forall(it->name, it->type, f);
          break;
        case Formula::Kind::Exists:
          f = Formula::exists(it->name, it->type, f);
          break;
        case Formula::Kind::ForallSt:
          f = Formula::forall_st(it->name, it->type, f);
          break;
        case Formula::Kind::ExistsSt:
          f = Formula::exists_st(it->name, it->type, f);
          break;
        default:
          throw Error("bad quantifier kind");
      }
    }
    return f;
  }

  Formula formula(const Sexpr& s) {
    if (s.is_atom())
      throw ParseError(s.line, s.column, "expected a formula, got atom " + s.atom);
    if (s.items.empty()) throw ParseError(s.line, s.column, "empty formula");
    const Sexpr& head = s.at(0);
    if (!head.is_atom()) throw ParseError(s.line, s.column, "formula head must be a symbol");
    const std::string& h = head.atom;

    if (h == "=0" && s.size() == 3) return Formula::atom_eq0(term(s.at(1)), term(s.at(2)));
    if (h == "<=0" && s.size() == 3) return Formula::atom_le0(term(s.at(1)), term(s.at(2)));
    if (h == "atom" && s.size() >= 2) {
      if (!s.at(1).is_atom()) throw ParseError(s.line, s.column, "atom name must be a symbol");
      std::vector<Term> args;
      for (size_t i = 2; i < s.size(); ++i) args.push_back(term(s.at(i)));
      return Formula::atom_pred(s.at(1).atom, std::move(args));
    }
    if (h == "def" && s.size() >= 2) {
      if (!s.at(1).is_atom()) throw ParseError(s.line, s.column, "definition name must be a symbol");
      std::vector<Term> args;
      for (size_t i = 2; i < s.size(); ++i) args.push_back(term(s.at(i)));
      return Formula::def_ref(s.at(1).atom, std::move(args));
    }
    if (h == "st" && s.size() == 2) return Formula::st(term(s.at(1)));
    if (h == "not" && s.size() == 2) return Formula::negate(formula(s.at(1)));
    if (h == "and" && s.size() >= 3) {
      Formula f = formula(s.at(1));
      for (size_t i = 2; i < s.size(); ++i) f = Formula::conj(f, formula(s.at(i)));
      return f;
    }
    if (h == "or" && s.size() >= 3) {
      Formula f = formula(s.at(1));
      for (size_t i = 2; i < s.size(); ++i) f = Formula::disj(f, formula(s.at(i)));
      return f;
    }
    if (h == "implies" && s.size() == 3)
      return Formula::implies(formula(s.at(1)), formula(s.at(2)));
    if (h == "forall" && s.size() == 3) return quantified(Formula::Kind::Forall, binders(s.at(1)), s.at(2));
    if (h == "exists" && s.size() == 3) return quantified(Formula::Kind::Exists, binders(s.at(1)), s.at(2));
    if (h == "forall-st" && s.size() == 3)
      return quantified(Formula::Kind::ForallSt, binders(s.at(1)), s.at(2));
    if (h == "exists-st" && s.size() == 3)
      return quantified(Formula::Kind::ExistsSt, binders(s.at(1)), s.at(2));
    if (h == "forall-eps" && s.size() == 3) {
      const Sexpr& b = s.at(1);
      if (!b.is_list() || b.size() != 1 || !b.at(0).is_atom())
        throw ParseError(b.line, b.column, "forall-eps binder must be (name)");
      scope.emplace_back(b.at(0).atom, Formula::real_sort());
      Formula body = formula(s.at(2));
      scope.pop_back();
      return Formula::forall_inf(b.at(0).atom, body);
    }
    // Sugar: (approx-eps t) is the hypothesis "t is infinitesimal", and
    // (approx a b) is infinitesimal closeness; both expand at parse time.
    if (h == "approx-eps" && s.size() == 2) return approx_zero(term(s.at(1)));
    if (h == "approx" && s.size() == 3) return approx(term(s.at(1)), term(s.at(2)));

    throw ParseError(s.line, s.column, "unknown formula form: " + h);
  }
};

}  // namespace

Formula formula_from_sexpr(const Sexpr& s, const TypeEnv& params) {
  FParser p(params);
  return p.formula(s);
}

Formula parse_formula(const std::string& text, const TypeEnv& params) {
  return formula_from_sexpr(parse_sexpr(text), params);
}

}  // namespace nsx
