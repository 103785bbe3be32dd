#include "nsx/sst.hpp"

#include <functional>

#include "nsx/definitions.hpp"
#include "nsx/error.hpp"

namespace nsx {

std::string to_string(SstClause c) {
  switch (c) {
    case SstClause::AtomicInternal: return "i";
    case SstClause::Standardness: return "ii";
    case SstClause::Negation: return "iii";
    case SstClause::Disjunction: return "iv";
    case SstClause::InternalForall: return "v";
    case SstClause::Abbreviation: return "abbrev";
  }
  return "?";
}

namespace {

const FinType N0 = FinType::base();

// Best-effort type inference for terms inside formulas; variable annotations
// come from the parser, so this resolves in practice.
std::optional<FinType> infer_type(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var:
      return t.var_type();
    case Term::Kind::Zero:
    case Term::Kind::NumLit:
    case Term::Kind::Succ:
    case Term::Kind::SeqLen:
      return N0;
    case Term::Kind::App: {
      auto f = infer_type(t.fn());
      if (f && f->is_arrow()) return f->cod();
      return std::nullopt;
    }
    case Term::Kind::Lam: {
      auto b = infer_type(t.lam_body());
      if (b) return FinType::arrow(t.lam_type(), *b);
      return std::nullopt;
    }
    case Term::Kind::SeqLit:
      return FinType::seq(t.seq_elem_type());
    case Term::Kind::SeqIdx: {
      auto s = infer_type(t.lhs());
      if (s && s->is_seq()) return s->elem();
      return std::nullopt;
    }
    case Term::Kind::SeqAppend:
      return infer_type(t.lhs());
    case Term::Kind::Rec:
      return t.rec_type();
  }
  return std::nullopt;
}

Formula equality(const Term& a, const Term& b, const FinType& ty) {
  if (ty.is_base()) return Formula::atom_eq0(a, b);
  return Formula::atom_pred("eq", {a, b});
}

std::optional<std::pair<Term, Term>> match_equality(const Formula& f) {
  if (f.kind() == Formula::Kind::AtomEq0) return std::make_pair(f.term_lhs(), f.term_rhs());
  if (f.kind() == Formula::Kind::AtomPred && f.pred_name() == "eq" && f.pred_args().size() == 2)
    return std::make_pair(f.pred_args()[0], f.pred_args()[1]);
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Canonical matrix normalization: negation pushing (implications are opaque),
// the two schematic witness reductions, and singleton candidate lists.

Formula tidy_neg(const Formula& f);
void flatten(const Formula& f, Formula::Kind k, std::vector<Formula>& out);
Formula rebuild(const std::vector<Formula>& leaves, Formula::Kind k);

// Conjunctions and disjunctions re-associate to the left so that the
// fixed-point comparison sees one shape per leaf order.
Formula reassoc(const Formula& f, Formula::Kind k) {
  std::vector<Formula> leaves;
  flatten(f, k, leaves);
  return rebuild(leaves, k);
}

Formula tidy_children(const Formula& f) {
  // Candidate-list picks keep their guard structure.
  if (auto mq = match_member_quant(f)) {
    Formula body = tidy_children(mq->body);
    return mq->universal ? forall_in(mq->var, mq->elemType, mq->range, body)
                         : exists_in(mq->var, mq->elemType, mq->range, body);
  }
  switch (f.kind()) {
    case Formula::Kind::Not:
      return tidy_neg(f);
    case Formula::Kind::And:
      return reassoc(Formula::conj(tidy_children(f.lhs()), tidy_children(f.rhs())),
                     Formula::Kind::And);
    case Formula::Kind::Or:
      return reassoc(Formula::disj(tidy_children(f.lhs()), tidy_children(f.rhs())),
                     Formula::Kind::Or);
    case Formula::Kind::Implies:
      return Formula::implies(tidy_children(f.lhs()), tidy_children(f.rhs()));
    case Formula::Kind::Forall:
      return Formula::forall(f.qvar(), f.qtype(), tidy_children(f.body()));
    case Formula::Kind::Exists:
      return Formula::exists(f.qvar(), f.qtype(), tidy_children(f.body()));
    default:
      return f;
  }
}

Formula tidy_neg(const Formula& f) {
  const Formula& g = f.child();
  switch (g.kind()) {
    case Formula::Kind::Not:
      return tidy_children(g.child());
    case Formula::Kind::And:
      return Formula::disj(tidy_neg(Formula::negate(g.lhs())),
                           tidy_neg(Formula::negate(g.rhs())));
    case Formula::Kind::Or:
      return Formula::conj(tidy_neg(Formula::negate(g.lhs())),
                           tidy_neg(Formula::negate(g.rhs())));
    case Formula::Kind::Forall:
      return Formula::exists(g.qvar(), g.qtype(), tidy_neg(Formula::negate(g.body())));
    case Formula::Kind::Exists:
      return Formula::forall(g.qvar(), g.qtype(), tidy_neg(Formula::negate(g.body())));
    default:
      // Implications and atoms stay under the negation.
      return Formula::negate(tidy_children(g));
  }
}

// Flattens an or-tree / and-tree into leaves.
void flatten(const Formula& f, Formula::Kind k, std::vector<Formula>& out) {
  if (f.kind() == k) {
    flatten(f.lhs(), k, out);
    flatten(f.rhs(), k, out);
  } else {
    out.push_back(f);
  }
}

Formula rebuild(const std::vector<Formula>& leaves, Formula::Kind k) {
  Formula f = leaves.front();
  for (size_t i = 1; i < leaves.size(); ++i)
    f = k == Formula::Kind::Or ? Formula::disj(f, leaves[i]) : Formula::conj(f, leaves[i]);
  return f;
}

// (forall z)(member-picks)(... \/ z != t \/ ...)  ~>  picks(... )[z := t]
// This is the universal-instantiation step of the invariance computation; the
// equality-guarded universal is the special case with no picks.
std::optional<Formula> reduce_guarded_forall(const Formula& f) {
  if (f.kind() != Formula::Kind::Forall) return std::nullopt;
  if (match_member_quant(f)) return std::nullopt;  // candidate-list picks stay intact
  const std::string& z = f.qvar();

  // Peel member-existential picks whose ranges do not involve z.
  std::vector<MemberQuant> picks;
  Formula core = f.body();
  while (auto mq = match_member_quant(core)) {
    if (mq->universal) break;
    if (mq->range.free_vars().count(z)) return std::nullopt;
    if (mq->var == z) return std::nullopt;
    picks.push_back(*mq);
    core = mq->body;
  }

  std::vector<Formula> leaves;
  flatten(core, Formula::Kind::Or, leaves);
  if (leaves.size() < 2) return std::nullopt;
  for (size_t i = 0; i < leaves.size(); ++i) {
    if (leaves[i].kind() != Formula::Kind::Not) continue;
    auto eq = match_equality(leaves[i].child());
    if (!eq) continue;
    Term t;
    if (eq->first.kind() == Term::Kind::Var && eq->first.var_name() == z &&
        !eq->second.free_vars().count(z))
      t = eq->second;
    else if (eq->second.kind() == Term::Kind::Var && eq->second.var_name() == z &&
             !eq->first.free_vars().count(z))
      t = eq->first;
    else
      continue;
    std::vector<Formula> rest;
    for (size_t j = 0; j < leaves.size(); ++j)
      if (j != i) rest.push_back(leaves[j]);
    Formula body = rebuild(rest, Formula::Kind::Or);
    for (auto it = picks.rbegin(); it != picks.rend(); ++it)
      body = exists_in(it->var, it->elemType, it->range, body);
    return subst_term(body, z, t);
  }
  return std::nullopt;
}

// (exists z)(... /\ z = t /\ ...)  ~>  (...)[z := t]
std::optional<Formula> reduce_guarded_exists(const Formula& f) {
  if (f.kind() != Formula::Kind::Exists) return std::nullopt;
  if (match_member_quant(f)) return std::nullopt;  // candidate-list picks stay intact
  const std::string& z = f.qvar();
  std::vector<Formula> leaves;
  flatten(f.body(), Formula::Kind::And, leaves);
  if (leaves.size() < 2) return std::nullopt;
  for (size_t i = 0; i < leaves.size(); ++i) {
    auto eq = match_equality(leaves[i]);
    if (!eq) continue;
    Term t;
    if (eq->first.kind() == Term::Kind::Var && eq->first.var_name() == z &&
        !eq->second.free_vars().count(z))
      t = eq->second;
    else if (eq->second.kind() == Term::Kind::Var && eq->second.var_name() == z &&
             !eq->first.free_vars().count(z))
      t = eq->first;
    else
      continue;
    std::vector<Formula> rest;
    for (size_t j = 0; j < leaves.size(); ++j)
      if (j != i) rest.push_back(leaves[j]);
    return subst_term(rebuild(rest, Formula::Kind::And), z, t);
  }
  return std::nullopt;
}

std::optional<Formula> reduce_anywhere(const Formula& f) {
  if (auto r = reduce_guarded_forall(f)) return r;
  if (auto r = reduce_guarded_exists(f)) return r;
  switch (f.kind()) {
    case Formula::Kind::Not:
      if (auto r = reduce_anywhere(f.child())) return Formula::negate(*r);
      return std::nullopt;
    case Formula::Kind::And:
      if (auto r = reduce_anywhere(f.lhs())) return Formula::conj(*r, f.rhs());
      if (auto r = reduce_anywhere(f.rhs())) return Formula::conj(f.lhs(), *r);
      return std::nullopt;
    case Formula::Kind::Or:
      if (auto r = reduce_anywhere(f.lhs())) return Formula::disj(*r, f.rhs());
      if (auto r = reduce_anywhere(f.rhs())) return Formula::disj(f.lhs(), *r);
      return std::nullopt;
    case Formula::Kind::Implies:
      if (auto r = reduce_anywhere(f.lhs())) return Formula::implies(*r, f.rhs());
      if (auto r = reduce_anywhere(f.rhs())) return Formula::implies(f.lhs(), *r);
      return std::nullopt;
    case Formula::Kind::Forall:
      if (auto r = reduce_anywhere(f.body())) return Formula::forall(f.qvar(), f.qtype(), *r);
      return std::nullopt;
    case Formula::Kind::Exists:
      if (auto r = reduce_anywhere(f.body())) return Formula::exists(f.qvar(), f.qtype(), *r);
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

int count_var(const Formula& f, const std::string& v) {
  return f.free_vars().count(v) ? 1 : 0;  // occurrence as free variable
}

// Replaces a candidate list used through exactly one member pick at the
// prenex of the matrix by a direct witness.
bool collapse_singletons(NormalForm& nf) {
  // Walk the prenex chain of member quantifiers.
  struct Link {
    MemberQuant mq;
  };
  std::vector<Link> chain;
  Formula core = nf.matrix;
  while (auto mq = match_member_quant(core)) {
    chain.push_back({*mq});
    core = mq->body;
  }
  for (size_t i = 0; i < chain.size(); ++i) {
    const MemberQuant& mq = chain[i].mq;
    if (mq.range.kind() != Term::Kind::Var) continue;
    const std::string& w = mq.range.var_name();
    // The list variable must occur nowhere else.
    int uses = 0;
    for (size_t j = 0; j < chain.size(); ++j) {
      if (j == i) continue;
      if (chain[j].mq.range.free_vars().count(w)) ++uses;
    }
    uses += count_var(core, w);
    if (uses != 0) continue;

    std::vector<TypedVar>* block = nullptr;
    size_t pos = 0;
    bool found = false;
    if (!mq.universal) {
      for (size_t j = 0; j < nf.eVars.size(); ++j)
        if (nf.eVars[j].name == w && nf.eVars[j].type == FinType::seq(mq.elemType)) {
          block = &nf.eVars;
          pos = j;
          found = true;
        }
    } else {
      for (size_t j = 0; j < nf.uVars.size(); ++j)
        if (nf.uVars[j].name == w && nf.uVars[j].type == FinType::seq(mq.elemType)) {
          block = &nf.uVars;
          pos = j;
          found = true;
        }
    }
    if (!found) continue;

    // Rebuild: the block variable becomes the picked element.
    (*block)[pos] = {mq.var, mq.elemType};
    Formula rebuilt = core;
    for (size_t j = chain.size(); j-- > 0;) {
      if (j == i) continue;
      const MemberQuant& l = chain[j].mq;
      rebuilt = l.universal ? forall_in(l.var, l.elemType, l.range, rebuilt)
                            : exists_in(l.var, l.elemType, l.range, rebuilt);
    }
    nf.matrix = rebuilt;
    return true;
  }
  return false;
}

void canonicalize(NormalForm& nf) {
  for (int round = 0; round < 64; ++round) {
    Formula before = nf.matrix;
    nf.matrix = tidy_children(nf.matrix);
    while (auto r = reduce_anywhere(nf.matrix)) nf.matrix = tidy_children(*r);
    bool collapsed = collapse_singletons(nf);
    if (!collapsed && Formula::alpha_eq(before, nf.matrix)) return;
  }
}

// ---------------------------------------------------------------------------
// The clause-by-clause interpretation

struct Translator {
  std::vector<ClauseStep> trace;
  std::set<std::string> used;

  std::string fresh(const std::string& base) {
    std::string n = fresh_name(base, used);
    used.insert(n);
    return n;
  }

  void record(SstClause c, const Formula& node, const NormalForm& result) {
    trace.push_back({c, node, result.to_formula()});
  }

  void record_internal_nodes(const Formula& f) {
    trace.push_back({SstClause::AtomicInternal, f, f});
    switch (f.kind()) {
      case Formula::Kind::Not:
        record_internal_nodes(f.child());
        return;
      case Formula::Kind::And:
      case Formula::Kind::Or:
      case Formula::Kind::Implies:
        record_internal_nodes(f.lhs());
        record_internal_nodes(f.rhs());
        return;
      case Formula::Kind::Forall:
      case Formula::Kind::Exists:
        record_internal_nodes(f.body());
        return;
      default:
        return;
    }
  }

  NormalForm negate_nf(const NormalForm& a) {
    NormalForm out;
    std::vector<FinType> xTypes;
    for (const auto& x : a.uVars) xTypes.push_back(x.type);
    Formula matrix = Formula::negate(a.matrix);
    std::vector<TypedVar> funs;
    for (auto it = a.eVars.rbegin(); it != a.eVars.rend(); ++it) {
      FinType ft = FinType::arrows(xTypes, FinType::seq(it->type));
      std::string name = fresh("Y");
      funs.push_back({name, ft});
      Term range = Term::var(name, ft);
      for (const auto& x : a.uVars) range = Term::app(range, Term::var(x.name, x.type));
      matrix = forall_in(it->name, it->type, range, matrix);
    }
    std::reverse(funs.begin(), funs.end());
    out.uVars = funs;
    out.eVars = a.uVars;
    out.matrix = matrix;
    canonicalize(out);
    return out;
  }

  NormalForm merge_or(NormalForm a, NormalForm b) {
    // Rename b's block variables away from a's.
    std::set<std::string> taken;
    for (const auto& v : a.uVars) taken.insert(v.name);
    for (const auto& v : a.eVars) taken.insert(v.name);
    auto fv = a.matrix.free_vars();
    taken.insert(fv.begin(), fv.end());
    for (auto* block : {&b.uVars, &b.eVars}) {
      for (auto& tv : *block) {
        if (taken.count(tv.name)) {
          std::string nn = fresh(tv.name);
          b.matrix = subst_term(b.matrix, tv.name, Term::var(nn, tv.type));
          tv.name = nn;
        }
        taken.insert(tv.name);
      }
    }
    NormalForm out;
    out.uVars = a.uVars;
    out.uVars.insert(out.uVars.end(), b.uVars.begin(), b.uVars.end());
    out.eVars = a.eVars;
    out.eVars.insert(out.eVars.end(), b.eVars.begin(), b.eVars.end());
    out.matrix = Formula::disj(a.matrix, b.matrix);
    canonicalize(out);
    return out;
  }

  NormalForm forall_clause(const std::string& z, const FinType& zt, const NormalForm& a) {
    NormalForm out;
    out.uVars = a.uVars;
    if (a.eVars.empty()) {
      out.matrix = Formula::forall(z, zt, a.matrix);
      canonicalize(out);
      return out;
    }
    Formula matrix = a.matrix;
    std::vector<TypedVar> lists;
    for (auto it = a.eVars.rbegin(); it != a.eVars.rend(); ++it) {
      std::string name = fresh(it->name + "s");
      lists.push_back({name, FinType::seq(it->type)});
      matrix = exists_in(it->name, it->type, Term::var(name, FinType::seq(it->type)), matrix);
    }
    std::reverse(lists.begin(), lists.end());
    out.eVars = lists;
    out.matrix = Formula::forall(z, zt, matrix);
    canonicalize(out);
    return out;
  }

  NormalForm translate(const Formula& f) {
    if (is_internal(f)) {
      record_internal_nodes(f);
      return NormalForm{{}, {}, f};
    }
    switch (f.kind()) {
      case Formula::Kind::St: {
        const Term& z = f.st_term();
        FinType zt = infer_type(z).value_or(N0);
        std::string w = fresh("x");
        NormalForm out{{}, {{w, zt}}, equality(Term::var(w, zt), z, zt)};
        record(SstClause::Standardness, f, out);
        return out;
      }
      case Formula::Kind::Not: {
        NormalForm a = translate(f.child());
        NormalForm out = negate_nf(a);
        record(SstClause::Negation, f, out);
        return out;
      }
      case Formula::Kind::Or: {
        NormalForm a = translate(f.lhs());
        NormalForm b = translate(f.rhs());
        NormalForm out = merge_or(std::move(a), std::move(b));
        record(SstClause::Disjunction, f, out);
        return out;
      }
      case Formula::Kind::Forall: {
        NormalForm a = translate(f.body());
        NormalForm out = forall_clause(f.qvar(), f.qtype(), a);
        record(SstClause::InternalForall, f, out);
        return out;
      }
      // Classical abbreviations.
      case Formula::Kind::Implies: {
        trace.push_back({SstClause::Abbreviation, f, f});
        return translate(Formula::disj(Formula::negate(f.lhs()), f.rhs()));
      }
      case Formula::Kind::And: {
        trace.push_back({SstClause::Abbreviation, f, f});
        return translate(Formula::negate(
            Formula::disj(Formula::negate(f.lhs()), Formula::negate(f.rhs()))));
      }
      case Formula::Kind::Exists: {
        trace.push_back({SstClause::Abbreviation, f, f});
        return translate(Formula::negate(
            Formula::forall(f.qvar(), f.qtype(), Formula::negate(f.body()))));
      }
      case Formula::Kind::ForallSt: {
        trace.push_back({SstClause::Abbreviation, f, f});
        return translate(Formula::forall(
            f.qvar(), f.qtype(),
            Formula::disj(Formula::negate(Formula::st(Term::var(f.qvar(), f.qtype()))),
                          f.body())));
      }
      case Formula::Kind::ExistsSt: {
        trace.push_back({SstClause::Abbreviation, f, f});
        return translate(Formula::negate(Formula::forall(
            f.qvar(), f.qtype(),
            Formula::disj(Formula::negate(Formula::st(Term::var(f.qvar(), f.qtype()))),
                          Formula::negate(f.body())))));
      }
      case Formula::Kind::DefRef: {
        trace.push_back({SstClause::Abbreviation, f, f});
        return translate(expand_definition(f.pred_name(), f.pred_args()));
      }
      case Formula::Kind::ForallInf:
        throw UnsupportedConstruct("infinitesimal quantifier; resolve the sugar first");
      default:
        throw UnsupportedConstruct(f.to_string());
    }
  }
};

std::set<std::string> collect_all_vars(const Formula& f) {
  std::set<std::string> out = f.free_vars();
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    if (g.is_quantifier()) {
      out.insert(g.qvar());
      walk(g.body());
      return;
    }
    switch (g.kind()) {
      case Formula::Kind::Not:
        walk(g.child());
        return;
      case Formula::Kind::And:
      case Formula::Kind::Or:
      case Formula::Kind::Implies:
        walk(g.lhs());
        walk(g.rhs());
        return;
      default:
        return;
    }
  };
  walk(f);
  return out;
}

}  // namespace

SstResult sst_translate(const Formula& f) {
  Translator tr;
  tr.used = collect_all_vars(f);
  NormalForm nf = tr.translate(f);
  nf.validate();
  return {std::move(nf), std::move(tr.trace)};
}

NormalForm canonical_normal_form(const NormalForm& nf) {
  NormalForm out = nf;
  canonicalize(out);
  return out;
}

bool check_fixed_point(const NormalForm& nf) {
  try {
    SstResult r = sst_translate(nf.to_formula());
    NormalForm lhs = canonical_normal_form(r.translated);
    NormalForm rhs = canonical_normal_form(nf);
    return Formula::alpha_eq(lhs.to_formula(), rhs.to_formula());
  } catch (const Error&) {
    return false;
  }
}

}  // namespace nsx
