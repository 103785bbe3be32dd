#include "nsx/term.hpp"

#include <cassert>

#include "nsx/error.hpp"

namespace nsx {

struct Term::Node {
  Kind kind;
  std::string name;         // Var, Lam
  FinType type;             // Var, Lam (bound type), Rec (result), SeqLit (elem)
  uint64_t num = 0;         // NumLit
  std::vector<Term> kids;   // children, layout depends on kind
};

namespace {
std::shared_ptr<const Term::Node> make_node(Term::Node n) {
  return std::make_shared<const Term::Node>(std::move(n));
}
}  // namespace

Term::Term() : node_(make_node(Node{Kind::Zero, "", FinType::base(), 0, {}})) {}

Term Term::var(std::string name, FinType type) {
  return Term(make_node(Node{Kind::Var, std::move(name), std::move(type), 0, {}}));
}
Term Term::zero() { return Term(); }
Term Term::succ(Term t) {
  return Term(make_node(Node{Kind::Succ, "", FinType::base(), 0, {std::move(t)}}));
}
Term Term::num(uint64_t n) {
  return Term(make_node(Node{Kind::NumLit, "", FinType::base(), n, {}}));
}
Term Term::lam(std::string bound, FinType boundType, Term body) {
  return Term(make_node(Node{Kind::Lam, std::move(bound), std::move(boundType), 0, {std::move(body)}}));
}
Term Term::app(Term fn, Term arg) {
  return Term(make_node(Node{Kind::App, "", FinType::base(), 0, {std::move(fn), std::move(arg)}}));
}
Term Term::apps(Term fn, const std::vector<Term>& args) {
  Term t = std::move(fn);
  for (const Term& a : args) t = app(t, a);
  return t;
}
Term Term::rec(FinType type, Term base, Term step, Term index) {
  return Term(make_node(
      Node{Kind::Rec, "", std::move(type), 0, {std::move(base), std::move(step), std::move(index)}}));
}
Term Term::seq_lit(std::vector<Term> elements, FinType elemType) {
  return Term(make_node(Node{Kind::SeqLit, "", std::move(elemType), 0, std::move(elements)}));
}
Term Term::seq_len(Term s) {
  return Term(make_node(Node{Kind::SeqLen, "", FinType::base(), 0, {std::move(s)}}));
}
Term Term::seq_idx(Term s, Term i) {
  return Term(make_node(Node{Kind::SeqIdx, "", FinType::base(), 0, {std::move(s), std::move(i)}}));
}
Term Term::seq_append(Term a, Term b) {
  return Term(make_node(Node{Kind::SeqAppend, "", FinType::base(), 0, {std::move(a), std::move(b)}}));
}

Term::Kind Term::kind() const { return node_->kind; }

const std::string& Term::var_name() const { assert(kind() == Kind::Var); return node_->name; }
const FinType& Term::var_type() const { assert(kind() == Kind::Var); return node_->type; }
uint64_t Term::num_value() const { assert(kind() == Kind::NumLit); return node_->num; }
const std::string& Term::lam_name() const { assert(kind() == Kind::Lam); return node_->name; }
const FinType& Term::lam_type() const { assert(kind() == Kind::Lam); return node_->type; }
const Term& Term::lam_body() const { assert(kind() == Kind::Lam); return node_->kids[0]; }
const Term& Term::fn() const { assert(kind() == Kind::App); return node_->kids[0]; }
const Term& Term::arg() const {
  assert(kind() == Kind::App || kind() == Kind::Succ || kind() == Kind::SeqLen);
  return node_->kids[kind() == Kind::App ? 1 : 0];
}
const FinType& Term::rec_type() const { assert(kind() == Kind::Rec); return node_->type; }
const Term& Term::rec_base() const { assert(kind() == Kind::Rec); return node_->kids[0]; }
const Term& Term::rec_step() const { assert(kind() == Kind::Rec); return node_->kids[1]; }
const Term& Term::rec_index() const { assert(kind() == Kind::Rec); return node_->kids[2]; }
const std::vector<Term>& Term::seq_elements() const { assert(kind() == Kind::SeqLit); return node_->kids; }
const FinType& Term::seq_elem_type() const { assert(kind() == Kind::SeqLit); return node_->type; }
const Term& Term::lhs() const {
  assert(kind() == Kind::SeqIdx || kind() == Kind::SeqAppend);
  return node_->kids[0];
}
const Term& Term::rhs() const {
  assert(kind() == Kind::SeqIdx || kind() == Kind::SeqAppend);
  return node_->kids[1];
}

std::optional<uint64_t> Term::as_numeral() const {
  uint64_t acc = 0;
  const Term* t = this;
  while (true) {
    switch (t->kind()) {
      case Kind::Zero:
        return acc;
      case Kind::NumLit:
        return acc + t->node_->num;
      case Kind::Succ:
        ++acc;
        t = &t->node_->kids[0];
        break;
      default:
        return std::nullopt;
    }
  }
}

bool Term::is_value() const {
  if (as_numeral()) return true;
  if (kind() == Kind::Lam) return true;
  if (kind() == Kind::SeqLit) {
    for (const Term& e : seq_elements())
      if (!e.is_value()) return false;
    return true;
  }
  return false;
}

namespace {

void free_vars_into(const Term& t, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (t.kind()) {
    case Term::Kind::Var:
      if (!bound.count(t.var_name())) out.insert(t.var_name());
      return;
    case Term::Kind::Zero:
    case Term::Kind::NumLit:
      return;
    case Term::Kind::Succ:
    case Term::Kind::SeqLen:
      free_vars_into(t.arg(), bound, out);
      return;
    case Term::Kind::Lam: {
      bool fresh = bound.insert(t.lam_name()).second;
      free_vars_into(t.lam_body(), bound, out);
      if (fresh) bound.erase(t.lam_name());
      return;
    }
    case Term::Kind::App:
      free_vars_into(t.fn(), bound, out);
      free_vars_into(t.arg(), bound, out);
      return;
    case Term::Kind::Rec:
      free_vars_into(t.rec_base(), bound, out);
      free_vars_into(t.rec_step(), bound, out);
      free_vars_into(t.rec_index(), bound, out);
      return;
    case Term::Kind::SeqLit:
      for (const Term& e : t.seq_elements()) free_vars_into(e, bound, out);
      return;
    case Term::Kind::SeqIdx:
    case Term::Kind::SeqAppend:
      free_vars_into(t.lhs(), bound, out);
      free_vars_into(t.rhs(), bound, out);
      return;
  }
}

bool alpha_eq_rec(const Term& a, const Term& b,
                  std::vector<std::pair<std::string, std::string>>& scope) {
  // Numerals compare by value regardless of representation.
  auto na = a.as_numeral();
  auto nb = b.as_numeral();
  if (na || nb) return na && nb && *na == *nb;

  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Term::Kind::Var: {
      for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
        if (it->first == a.var_name() || it->second == b.var_name())
          return it->first == a.var_name() && it->second == b.var_name();
      }
      return a.var_name() == b.var_name();
    }
    case Term::Kind::Succ:
    case Term::Kind::SeqLen:
      return alpha_eq_rec(a.arg(), b.arg(), scope);
    case Term::Kind::Lam: {
      if (a.lam_type() != b.lam_type()) return false;
      scope.emplace_back(a.lam_name(), b.lam_name());
      bool r = alpha_eq_rec(a.lam_body(), b.lam_body(), scope);
      scope.pop_back();
      return r;
    }
    case Term::Kind::App:
      return alpha_eq_rec(a.fn(), b.fn(), scope) && alpha_eq_rec(a.arg(), b.arg(), scope);
    case Term::Kind::Rec:
      return a.rec_type() == b.rec_type() && alpha_eq_rec(a.rec_base(), b.rec_base(), scope) &&
             alpha_eq_rec(a.rec_step(), b.rec_step(), scope) &&
             alpha_eq_rec(a.rec_index(), b.rec_index(), scope);
    case Term::Kind::SeqLit: {
      if (a.seq_elem_type() != b.seq_elem_type()) return false;
      if (a.seq_elements().size() != b.seq_elements().size()) return false;
      for (size_t i = 0; i < a.seq_elements().size(); ++i)
        if (!alpha_eq_rec(a.seq_elements()[i], b.seq_elements()[i], scope)) return false;
      return true;
    }
    case Term::Kind::SeqIdx:
    case Term::Kind::SeqAppend:
      return alpha_eq_rec(a.lhs(), b.lhs(), scope) && alpha_eq_rec(a.rhs(), b.rhs(), scope);
    default:
      return false;  // Zero/NumLit handled above
  }
}

}  // namespace

std::set<std::string> Term::free_vars() const {
  std::set<std::string> bound, out;
  free_vars_into(*this, bound, out);
  return out;
}

bool Term::alpha_eq(const Term& a, const Term& b) {
  std::vector<std::pair<std::string, std::string>> scope;
  return alpha_eq_rec(a, b, scope);
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  if (!avoid.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string cand = base + "~" + std::to_string(i);
    if (!avoid.count(cand)) return cand;
  }
}

// ---------------------------------------------------------------------------
// Type environment and typechecking

void TypeEnv::bind(const std::string& name, FinType type) {
  for (auto& e : entries_)
    if (e.first == name) throw TypeError("duplicate binding for " + name);
  entries_.emplace_back(name, std::move(type));
}

std::optional<FinType> TypeEnv::lookup(const std::string& name) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
    if (it->first == name) return it->second;
  return std::nullopt;
}

TypeEnv TypeEnv::extended(const std::string& name, FinType type) const {
  TypeEnv e = *this;
  // Shadowing is resolved by lookup order, so later duplicates are fine here.
  e.entries_.emplace_back(name, std::move(type));
  return e;
}

namespace {

FinType typecheck_rec(const Term& t, const TypeEnv& env, const std::string& path) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      auto ty = env.lookup(t.var_name());
      if (!ty) throw UnboundVariable(t.var_name());
      if (*ty != t.var_type())
        throw TypeError(path + ": variable " + t.var_name() + " annotated " +
                        t.var_type().to_string() + " but bound at " + ty->to_string());
      return *ty;
    }
    case Term::Kind::Zero:
    case Term::Kind::NumLit:
      return FinType::base();
    case Term::Kind::Succ: {
      FinType a = typecheck_rec(t.arg(), env, path + ".succ");
      if (!a.is_base()) throw TypeError(path + ": succ expects N, found " + a.to_string());
      return FinType::base();
    }
    case Term::Kind::Lam: {
      FinType body = typecheck_rec(t.lam_body(), env.extended(t.lam_name(), t.lam_type()),
                                   path + ".lam");
      return FinType::arrow(t.lam_type(), body);
    }
    case Term::Kind::App: {
      FinType f = typecheck_rec(t.fn(), env, path + ".fn");
      FinType a = typecheck_rec(t.arg(), env, path + ".arg");
      if (!f.is_arrow())
        throw TypeError(path + ": applied non-function of type " + f.to_string());
      if (f.dom() != a)
        throw TypeError(path + ": expected argument of type " + f.dom().to_string() +
                        ", found " + a.to_string());
      return f.cod();
    }
    case Term::Kind::Rec: {
      FinType f = typecheck_rec(t.rec_base(), env, path + ".base");
      FinType g = typecheck_rec(t.rec_step(), env, path + ".step");
      FinType n = typecheck_rec(t.rec_index(), env, path + ".index");
      const FinType& rho = t.rec_type();
      if (f != rho)
        throw TypeError(path + ": recursion base has type " + f.to_string() + ", expected " +
                        rho.to_string());
      FinType want = FinType::arrow(FinType::base(), FinType::arrow(rho, rho));
      if (g != want)
        throw TypeError(path + ": recursion step has type " + g.to_string() + ", expected " +
                        want.to_string());
      if (!n.is_base())
        throw TypeError(path + ": recursion index has type " + n.to_string() + ", expected N");
      return rho;
    }
    case Term::Kind::SeqLit: {
      for (size_t i = 0; i < t.seq_elements().size(); ++i) {
        FinType e = typecheck_rec(t.seq_elements()[i], env, path + "[" + std::to_string(i) + "]");
        if (e != t.seq_elem_type())
          throw TypeError(path + ": sequence element " + std::to_string(i) + " has type " +
                          e.to_string() + ", expected " + t.seq_elem_type().to_string());
      }
      return FinType::seq(t.seq_elem_type());
    }
    case Term::Kind::SeqLen: {
      FinType s = typecheck_rec(t.arg(), env, path + ".len");
      if (!s.is_seq()) throw TypeError(path + ": len expects a sequence, found " + s.to_string());
      return FinType::base();
    }
    case Term::Kind::SeqIdx: {
      FinType s = typecheck_rec(t.lhs(), env, path + ".seq");
      FinType i = typecheck_rec(t.rhs(), env, path + ".idx");
      if (!s.is_seq()) throw TypeError(path + ": idx expects a sequence, found " + s.to_string());
      if (!i.is_base()) throw TypeError(path + ": index has type " + i.to_string() + ", expected N");
      return s.elem();
    }
    case Term::Kind::SeqAppend: {
      FinType a = typecheck_rec(t.lhs(), env, path + ".cat-lhs");
      FinType b = typecheck_rec(t.rhs(), env, path + ".cat-rhs");
      if (!a.is_seq() || a != b)
        throw TypeError(path + ": cat expects two sequences of one type, found " + a.to_string() +
                        " and " + b.to_string());
      return a;
    }
  }
  throw Error("unreachable term kind");
}

}  // namespace

FinType typecheck(const Term& t, const TypeEnv& env) { return typecheck_rec(t, env, "term"); }

// ---------------------------------------------------------------------------
// Substitution

namespace {

Term subst_rec(const Term& t, const std::string& name, const Term& s,
               const std::set<std::string>& s_free) {
  switch (t.kind()) {
    case Term::Kind::Var:
      return t.var_name() == name ? s : t;
    case Term::Kind::Zero:
    case Term::Kind::NumLit:
      return t;
    case Term::Kind::Succ:
      return Term::succ(subst_rec(t.arg(), name, s, s_free));
    case Term::Kind::Lam: {
      if (t.lam_name() == name) return t;  // shadowed
      if (s_free.count(t.lam_name())) {
        // Rename the bound variable away from the free variables of s.
        std::set<std::string> avoid = s_free;
        auto body_free = t.lam_body().free_vars();
        avoid.insert(body_free.begin(), body_free.end());
        avoid.insert(name);
        std::string nn = fresh_name(t.lam_name(), avoid);
        Term renamed = subst_rec(t.lam_body(), t.lam_name(), Term::var(nn, t.lam_type()), {});
        return Term::lam(nn, t.lam_type(), subst_rec(renamed, name, s, s_free));
      }
      return Term::lam(t.lam_name(), t.lam_type(), subst_rec(t.lam_body(), name, s, s_free));
    }
    case Term::Kind::App:
      return Term::app(subst_rec(t.fn(), name, s, s_free), subst_rec(t.arg(), name, s, s_free));
    case Term::Kind::Rec:
      return Term::rec(t.rec_type(), subst_rec(t.rec_base(), name, s, s_free),
                       subst_rec(t.rec_step(), name, s, s_free),
                       subst_rec(t.rec_index(), name, s, s_free));
    case Term::Kind::SeqLit: {
      std::vector<Term> es;
      es.reserve(t.seq_elements().size());
      for (const Term& e : t.seq_elements()) es.push_back(subst_rec(e, name, s, s_free));
      return Term::seq_lit(std::move(es), t.seq_elem_type());
    }
    case Term::Kind::SeqLen:
      return Term::seq_len(subst_rec(t.arg(), name, s, s_free));
    case Term::Kind::SeqIdx:
      return Term::seq_idx(subst_rec(t.lhs(), name, s, s_free), subst_rec(t.rhs(), name, s, s_free));
    case Term::Kind::SeqAppend:
      return Term::seq_append(subst_rec(t.lhs(), name, s, s_free),
                              subst_rec(t.rhs(), name, s, s_free));
  }
  throw Error("unreachable term kind");
}

}  // namespace

Term substitute(const Term& t, const Term& x, const Term& s) {
  if (x.kind() != Term::Kind::Var) throw TypeError("substitute target must be a variable");
  TypeEnv env;
  // Free variables of s keep their annotated types.
  for (const auto& v : s.free_vars()) {
    // Leave them unbound; typecheck of s happens only when s is closed.
    (void)v;
  }
  if (s.is_closed()) {
    FinType st = typecheck(s);
    if (st != x.var_type())
      throw TypeError("substituted term has type " + st.to_string() + ", expected " +
                      x.var_type().to_string());
  }
  return subst_rec(t, x.var_name(), s, s.free_vars());
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

struct Fuel {
  uint64_t left;
  void burn() {
    if (left == 0) throw FuelExhausted();
    --left;
  }
};

Term eval_rec(const Term& t, Fuel& fuel) {
  fuel.burn();
  switch (t.kind()) {
    case Term::Kind::Var:
      throw IllTyped("free variable " + t.var_name() + " during evaluation");
    case Term::Kind::Zero:
      return Term::num(0);
    case Term::Kind::NumLit:
    case Term::Kind::Lam:
      return t;
    case Term::Kind::Succ: {
      Term v = eval_rec(t.arg(), fuel);
      auto n = v.as_numeral();
      if (!n) throw IllTyped("succ of a non-numeral");
      return Term::num(*n + 1);
    }
    case Term::Kind::App: {
      Term f = eval_rec(t.fn(), fuel);
      Term a = eval_rec(t.arg(), fuel);
      if (f.kind() != Term::Kind::Lam) throw IllTyped("application of a non-function value");
      Term body = subst_rec(f.lam_body(), f.lam_name(), a, a.free_vars());
      return eval_rec(body, fuel);
    }
    case Term::Kind::Rec: {
      Term n = eval_rec(t.rec_index(), fuel);
      auto k = n.as_numeral();
      if (!k) throw IllTyped("recursion index is not a numeral");
      Term acc = eval_rec(t.rec_base(), fuel);
      Term step = eval_rec(t.rec_step(), fuel);
      bool direct = step.kind() == Term::Kind::Lam &&
                    step.lam_body().kind() == Term::Kind::Lam;
      // When the step ignores its accumulator the chain collapses to the
      // final iteration.
      if (direct && *k > 0) {
        const Term& inner = step.lam_body();
        if (!inner.lam_body().free_vars().count(inner.lam_name())) {
          fuel.burn();
          Term body = subst_rec(inner.lam_body(), step.lam_name(), Term::num(*k - 1), {});
          return eval_rec(body, fuel);
        }
      }
      for (uint64_t i = 0; i < *k; ++i) {
        if (direct) {
          fuel.burn();
          const Term& inner = step.lam_body();
          std::set<std::string> accFree;
          if (!acc.is_value() || acc.kind() == Term::Kind::Lam) accFree = acc.free_vars();
          Term body = subst_rec(inner.lam_body(), inner.lam_name(), acc, accFree);
          body = subst_rec(body, step.lam_name(), Term::num(i), {});
          acc = eval_rec(body, fuel);
        } else {
          Term applied = Term::app(Term::app(step, Term::num(i)), acc);
          acc = eval_rec(applied, fuel);
        }
      }
      return acc;
    }
    case Term::Kind::SeqLit: {
      std::vector<Term> es;
      es.reserve(t.seq_elements().size());
      for (const Term& e : t.seq_elements()) es.push_back(eval_rec(e, fuel));
      return Term::seq_lit(std::move(es), t.seq_elem_type());
    }
    case Term::Kind::SeqLen: {
      Term s = eval_rec(t.arg(), fuel);
      if (s.kind() != Term::Kind::SeqLit) throw IllTyped("len of a non-sequence value");
      return Term::num(s.seq_elements().size());
    }
    case Term::Kind::SeqIdx: {
      Term s = eval_rec(t.lhs(), fuel);
      Term i = eval_rec(t.rhs(), fuel);
      if (s.kind() != Term::Kind::SeqLit) throw IllTyped("idx of a non-sequence value");
      auto n = i.as_numeral();
      if (!n) throw IllTyped("sequence index is not a numeral");
      if (*n >= s.seq_elements().size())
        throw IllTyped("sequence index " + std::to_string(*n) + " out of range " +
                       std::to_string(s.seq_elements().size()));
      return s.seq_elements()[*n];
    }
    case Term::Kind::SeqAppend: {
      Term a = eval_rec(t.lhs(), fuel);
      Term b = eval_rec(t.rhs(), fuel);
      if (a.kind() != Term::Kind::SeqLit || b.kind() != Term::Kind::SeqLit)
        throw IllTyped("cat of non-sequence values");
      std::vector<Term> es = a.seq_elements();
      es.insert(es.end(), b.seq_elements().begin(), b.seq_elements().end());
      return Term::seq_lit(std::move(es), a.seq_elem_type());
    }
  }
  throw Error("unreachable term kind");
}

}  // namespace

Term eval(const Term& t, uint64_t fuel) {
  Fuel f{fuel};
  return eval_rec(t, f);
}

// ---------------------------------------------------------------------------
// Printing and parsing

Sexpr Term::to_sexpr() const {
  if (auto n = as_numeral()) return sx_atom(std::to_string(*n));
  switch (kind()) {
    case Kind::Var:
      return sx_atom(var_name());
    case Kind::Succ:
      return sx_list({sx_atom("succ"), arg().to_sexpr()});
    case Kind::Lam:
      return sx_list({sx_atom("lam"),
                      sx_list({sx_atom(lam_name()), lam_type().to_sexpr()}),
                      lam_body().to_sexpr()});
    case Kind::App:
      return sx_list({sx_atom("app"), fn().to_sexpr(), arg().to_sexpr()});
    case Kind::Rec:
      return sx_list({sx_atom("rec"), rec_type().to_sexpr(), rec_base().to_sexpr(),
                      rec_step().to_sexpr(), rec_index().to_sexpr()});
    case Kind::SeqLit: {
      std::vector<Sexpr> items{sx_atom("seq"), seq_elem_type().to_sexpr()};
      for (const Term& e : seq_elements()) items.push_back(e.to_sexpr());
      return sx_list(std::move(items));
    }
    case Kind::SeqLen:
      return sx_list({sx_atom("len"), arg().to_sexpr()});
    case Kind::SeqIdx:
      return sx_list({sx_atom("idx"), lhs().to_sexpr(), rhs().to_sexpr()});
    case Kind::SeqAppend:
      return sx_list({sx_atom("cat"), lhs().to_sexpr(), rhs().to_sexpr()});
    default:
      throw Error("unreachable term kind in printer");
  }
}

std::string Term::to_string() const { return to_sexpr().to_string(); }

namespace {
bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}
}  // namespace

Term Term::from_sexpr(const Sexpr& s) {
  if (s.is_atom()) {
    if (all_digits(s.atom)) {
      uint64_t n = std::stoull(s.atom);
      return n == 0 ? Term::zero() : Term::num(n);
    }
    // A bare identifier denotes a variable; the type is resolved against the
    // enclosing binder or declared parameters by the caller.  Unannotated
    // variables default to N.
    return Term::var(s.atom, FinType::base());
  }
  if (s.headed("succ") && s.size() == 2) return succ(from_sexpr(s.at(1)));
  if (s.headed("lam") && s.size() == 3) {
    const Sexpr& b = s.at(1);
    if (!b.is_list() || b.size() != 2 || !b.at(0).is_atom())
      throw ParseError(b.line, b.column, "lam binder must be (name TYPE)");
    FinType ty = FinType::from_sexpr(b.at(1));
    Term body = from_sexpr(s.at(2));
    return lam(b.at(0).atom, ty, body);
  }
  if (s.headed("app") && s.size() >= 3) {
    Term t = from_sexpr(s.at(1));
    for (size_t i = 2; i < s.size(); ++i) t = app(t, from_sexpr(s.at(i)));
    return t;
  }
  if (s.headed("rec") && s.size() == 5)
    return rec(FinType::from_sexpr(s.at(1)), from_sexpr(s.at(2)), from_sexpr(s.at(3)),
               from_sexpr(s.at(4)));
  if (s.headed("seq") && s.size() >= 2) {
    FinType et = FinType::from_sexpr(s.at(1));
    std::vector<Term> es;
    for (size_t i = 2; i < s.size(); ++i) es.push_back(from_sexpr(s.at(i)));
    return seq_lit(std::move(es), et);
  }
  if (s.headed("len") && s.size() == 2) return seq_len(from_sexpr(s.at(1)));
  if (s.headed("idx") && s.size() == 3) return seq_idx(from_sexpr(s.at(1)), from_sexpr(s.at(2)));
  if (s.headed("cat") && s.size() == 3) return seq_append(from_sexpr(s.at(1)), from_sexpr(s.at(2)));
  throw ParseError(s.line, s.column, "expected a term, got " + s.to_string());
}

namespace {

// Variable occurrences pick up the types of their binders; free variables
// keep the parser default.
Term annotate_vars(const Term& t, std::vector<std::pair<std::string, FinType>>& scope) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      for (auto it = scope.rbegin(); it != scope.rend(); ++it)
        if (it->first == t.var_name()) return Term::var(t.var_name(), it->second);
      return t;
    }
    case Term::Kind::Zero:
    case Term::Kind::NumLit:
      return t;
    case Term::Kind::Succ:
      return Term::succ(annotate_vars(t.arg(), scope));
    case Term::Kind::Lam: {
      scope.emplace_back(t.lam_name(), t.lam_type());
      Term body = annotate_vars(t.lam_body(), scope);
      scope.pop_back();
      return Term::lam(t.lam_name(), t.lam_type(), body);
    }
    case Term::Kind::App:
      return Term::app(annotate_vars(t.fn(), scope), annotate_vars(t.arg(), scope));
    case Term::Kind::Rec:
      return Term::rec(t.rec_type(), annotate_vars(t.rec_base(), scope),
                       annotate_vars(t.rec_step(), scope), annotate_vars(t.rec_index(), scope));
    case Term::Kind::SeqLit: {
      std::vector<Term> es;
      for (const Term& e : t.seq_elements()) es.push_back(annotate_vars(e, scope));
      return Term::seq_lit(std::move(es), t.seq_elem_type());
    }
    case Term::Kind::SeqLen:
      return Term::seq_len(annotate_vars(t.arg(), scope));
    case Term::Kind::SeqIdx:
      return Term::seq_idx(annotate_vars(t.lhs(), scope), annotate_vars(t.rhs(), scope));
    case Term::Kind::SeqAppend:
      return Term::seq_append(annotate_vars(t.lhs(), scope), annotate_vars(t.rhs(), scope));
  }
  throw Error("unreachable term kind");
}

}  // namespace

Term Term::parse(const std::string& text) {
  std::vector<std::pair<std::string, FinType>> scope;
  return annotate_vars(from_sexpr(parse_sexpr(text)), scope);
}

// ---------------------------------------------------------------------------
// Combinators

namespace combinators {

namespace {
const FinType N = FinType::base();
const FinType NN = FinType::arrow(FinType::base(), FinType::base());

Term v(const std::string& n, FinType t = FinType::base()) { return Term::var(n, std::move(t)); }
}  // namespace

Term mk_add() {
  // add a b = Rec(a, \n acc. succ acc, b)
  Term step = Term::lam("n", N, Term::lam("acc", N, Term::succ(v("acc"))));
  return Term::lam("a", N, Term::lam("b", N, Term::rec(N, v("a"), step, v("b"))));
}

Term mk_monus() {
  // pred m = Rec(0, \n acc. n, m); monus a b = Rec(a, \n acc. pred acc, b)
  Term pred = Term::lam("m", N, Term::rec(N, Term::zero(), Term::lam("n", N, Term::lam("acc", N, v("n"))), v("m")));
  Term step = Term::lam("n", N, Term::lam("acc", N, Term::app(pred, v("acc"))));
  return Term::lam("a", N, Term::lam("b", N, Term::rec(N, v("a"), step, v("b"))));
}

Term mk_max2() {
  // max a b = a + (b - a)
  Term add = mk_add();
  Term monus = mk_monus();
  return Term::lam(
      "a", N,
      Term::lam("b", N, Term::apps(add, {v("a"), Term::apps(monus, {v("b"), v("a")})})));
}

Term mk_mul() {
  Term add = mk_add();
  Term step = Term::lam("n", N, Term::lam("acc", N, Term::apps(add, {v("acc"), v("a")})));
  return Term::lam("a", N, Term::lam("b", N, Term::rec(N, Term::zero(), step, v("b"))));
}

Term mk_ifz() {
  // ifz c a b = Rec(a, \n acc. b, c)
  return Term::lam(
      "c", N,
      Term::lam("a", N,
                Term::lam("b", N, Term::rec(N, v("a"), Term::lam("n", N, Term::lam("acc", N, v("b"))),
                                            v("c")))));
}

Term mk_max_seq() {
  // maxseq s = Rec(0, \i acc. max2 (idx s i) acc, len s)
  Term max2 = mk_max2();
  Term step = Term::lam(
      "i", N, Term::lam("acc", N, Term::apps(max2, {Term::seq_idx(v("s", FinType::seq(N)), v("i")), v("acc")})));
  return Term::lam("s", FinType::seq(N), Term::rec(N, Term::zero(), step, Term::seq_len(v("s", FinType::seq(N)))));
}

Term mk_fold_nat() {
  // fold s z g = Rec(z, \i acc. g (idx s i) acc, len s)
  FinType SN = FinType::seq(N);
  FinType G = FinType::arrow(N, FinType::arrow(N, N));
  Term step = Term::lam(
      "i", N,
      Term::lam("acc", N,
                Term::apps(v("g", G), {Term::seq_idx(v("s", SN), v("i")), v("acc")})));
  return Term::lam(
      "s", SN,
      Term::lam("z", N, Term::lam("g", G, Term::rec(N, v("z"), step, Term::seq_len(v("s", SN))))));
}

Term mk_pair() {
  // tri n = Rec(0, \m acc. acc + (m+1), n); pair a b = tri(a + b) + b
  Term add = mk_add();
  Term tri_step = Term::lam("m", N, Term::lam("acc", N, Term::apps(add, {v("acc"), Term::succ(v("m"))})));
  Term tri = Term::lam("n", N, Term::rec(N, Term::zero(), tri_step, v("n")));
  return Term::lam(
      "a", N,
      Term::lam("b", N,
                Term::apps(add, {Term::app(tri, Term::apps(add, {v("a"), v("b")})), v("b")})));
}

Term mk_first_zero() {
  // firstzero s = Rec(len s, \j acc. ifz (idx s (len s - 1 - j)) (len s - 1 - j) acc, len s)
  // Scanning from the top index down keeps the least zero in the accumulator;
  // when no entry is zero the result is len s (one past the last index).
  FinType SN = FinType::seq(N);
  Term monus = mk_monus();
  Term ifz = mk_ifz();
  Term len = Term::seq_len(v("s", SN));
  Term idx_expr = Term::apps(monus, {Term::apps(monus, {len, Term::num(1)}), v("j")});
  Term step = Term::lam(
      "j", N,
      Term::lam("acc", N,
                Term::apps(ifz, {Term::seq_idx(v("s", SN), idx_expr), idx_expr, v("acc")})));
  return Term::lam("s", SN, Term::rec(N, Term::seq_len(v("s", SN)), step, Term::seq_len(v("s", SN))));
}

Term mk_range() {
  FinType SN = FinType::seq(N);
  Term step = Term::lam(
      "j", N,
      Term::lam("acc", SN, Term::seq_append(v("acc", SN), Term::seq_lit({v("j")}, N))));
  return Term::lam("n", N, Term::rec(SN, Term::seq_lit({}, N), step, v("n")));
}

Term mk_grid() {
  // grid n = Rec(<>, \j acc. cat acc <pair j n>, n + 1)
  FinType SN = FinType::seq(N);
  Term pair = mk_pair();
  Term step = Term::lam(
      "j", N,
      Term::lam("acc", SN,
                Term::seq_append(v("acc", SN),
                                 Term::seq_lit({Term::apps(pair, {v("j"), v("n")})}, N))));
  return Term::lam("n", N,
                   Term::rec(SN, Term::seq_lit({}, N), step, Term::succ(v("n"))));
}

}  // namespace combinators

}  // namespace nsx
