#include "nsx/transforms.hpp"

#include <functional>

#include "nsx/definitions.hpp"
#include "nsx/error.hpp"

namespace nsx {

namespace {

const FinType N0 = FinType::base();

std::set<std::string> all_vars(const Formula& f) {
  // Free and bound variable names, for collision-free freshening.
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

Formula requantify(Formula::Kind k, const std::string& v, const FinType& t, Formula body) {
  switch (k) {
    case Formula::Kind::Forall:
      return Formula::forall(v, t, std::move(body));
    case Formula::Kind::Exists:
      return Formula::exists(v, t, std::move(body));
    case Formula::Kind::ForallSt:
      return Formula::forall_st(v, t, std::move(body));
    case Formula::Kind::ExistsSt:
      return Formula::exists_st(v, t, std::move(body));
    default:
      throw Error("requantify: not a quantifier kind");
  }
}

// Renames the bound variable of a quantified formula away from `avoid`,
// returning the new name and body.
std::pair<std::string, Formula> unshadow(const Formula& q, std::set<std::string> avoid) {
  std::string name = q.qvar();
  Formula body = q.body();
  if (avoid.count(name)) {
    auto more = all_vars(body);
    avoid.insert(more.begin(), more.end());
    std::string nn = fresh_name(name, avoid);
    body = subst_term(body, name, Term::var(nn, q.qtype()));
    name = nn;
  }
  return {name, body};
}

// ---------------------------------------------------------------------------
// Quantifier shuffling: one leftmost-outermost move.

std::optional<Formula> shuffle_at(const Formula& f, std::string* moveName, ShuffleKind kind) {
  bool wantU = kind != ShuffleKind::Existential;
  bool wantE = kind != ShuffleKind::Universal;
  auto note = [&](const char* n) {
    if (moveName) *moveName = n;
  };

  // A nonstandard number is one exceeding every standard number; unfolding
  // this gives the shuffler something to move.
  if (wantU && f.kind() == Formula::Kind::Not && f.child().kind() == Formula::Kind::St) {
    const Term& t = f.child().st_term();
    bool numeric = t.as_numeral().has_value() ||
                   (t.kind() == Term::Kind::Var && t.var_type().is_base());
    if (numeric) {
      note("unbounded-unfold");
      std::string m = fresh_name("m", t.free_vars());
      return Formula::forall_st(m, N0, Formula::atom_le0(Term::var(m, N0), t));
    }
  }

  if (f.kind() == Formula::Kind::Implies) {
    const Formula& a = f.lhs();
    const Formula& b = f.rhs();
    // Universal-kind first: a flipped existential antecedent and a pulled
    // universal consequent both surface a standard universal.
    if (wantU && a.kind() == Formula::Kind::ExistsSt) {
      auto [v, body] = unshadow(a, b.free_vars());
      note("flip-exists-st-antecedent");
      return Formula::forall_st(v, a.qtype(), Formula::implies(body, b));
    }
    if (wantU && b.kind() == Formula::Kind::ForallSt) {
      auto [v, body] = unshadow(b, a.free_vars());
      note("pull-forall-st-consequent");
      return Formula::forall_st(v, b.qtype(), Formula::implies(a, body));
    }
    if (wantE && b.kind() == Formula::Kind::ExistsSt) {
      auto [v, body] = unshadow(b, a.free_vars());
      note("pull-exists-st-consequent");
      return Formula::exists_st(v, b.qtype(), Formula::implies(a, body));
    }
    if (wantE && a.kind() == Formula::Kind::ForallSt) {
      auto [v, body] = unshadow(a, b.free_vars());
      note("flip-forall-st-antecedent");
      return Formula::exists_st(v, a.qtype(), Formula::implies(body, b));
    }
  }

  if (f.kind() == Formula::Kind::And || f.kind() == Formula::Kind::Or) {
    bool isAnd = f.kind() == Formula::Kind::And;
    const Formula& a = f.lhs();
    const Formula& b = f.rhs();
    auto rebuild = [&](Formula x, Formula y) {
      return isAnd ? Formula::conj(std::move(x), std::move(y))
                   : Formula::disj(std::move(x), std::move(y));
    };
    for (int side = 0; side < 2; ++side) {
      const Formula& q = side == 0 ? a : b;
      const Formula& other = side == 0 ? b : a;
      bool isU = q.kind() == Formula::Kind::ForallSt;
      bool isE = q.kind() == Formula::Kind::ExistsSt;
      if ((isU && wantU) || (isE && wantE)) {
        auto [v, body] = unshadow(q, other.free_vars());
        note("pull-standard-quantifier-connective");
        Formula inner = side == 0 ? rebuild(body, other) : rebuild(other, body);
        return requantify(q.kind(), v, q.qtype(), inner);
      }
    }
  }

  // Standard universals commute with internal universals; dually for
  // existentials.
  if (wantU && f.kind() == Formula::Kind::Forall &&
      f.body().kind() == Formula::Kind::ForallSt) {
    const Formula& inner = f.body();
    auto [v, body] = unshadow(inner, {f.qvar()});
    note("commute-forall-st-out");
    return Formula::forall_st(v, inner.qtype(), Formula::forall(f.qvar(), f.qtype(), body));
  }
  if (wantE && f.kind() == Formula::Kind::Exists &&
      f.body().kind() == Formula::Kind::ExistsSt) {
    const Formula& inner = f.body();
    auto [v, body] = unshadow(inner, {f.qvar()});
    note("commute-exists-st-out");
    return Formula::exists_st(v, inner.qtype(), Formula::exists(f.qvar(), f.qtype(), body));
  }

  return std::nullopt;
}

// Generic preorder rewriter: applies `step` at the leftmost-outermost node
// where it succeeds.
std::optional<Formula> rewrite_first(
    const Formula& f, const std::function<std::optional<Formula>(const Formula&)>& step) {
  if (auto r = step(f)) return r;
  switch (f.kind()) {
    case Formula::Kind::Not:
      if (auto r = rewrite_first(f.child(), step)) return Formula::negate(*r);
      return std::nullopt;
    case Formula::Kind::And:
      if (auto r = rewrite_first(f.lhs(), step)) return Formula::conj(*r, f.rhs());
      if (auto r = rewrite_first(f.rhs(), step)) return Formula::conj(f.lhs(), *r);
      return std::nullopt;
    case Formula::Kind::Or:
      if (auto r = rewrite_first(f.lhs(), step)) return Formula::disj(*r, f.rhs());
      if (auto r = rewrite_first(f.rhs(), step)) return Formula::disj(f.lhs(), *r);
      return std::nullopt;
    case Formula::Kind::Implies:
      if (auto r = rewrite_first(f.lhs(), step)) return Formula::implies(*r, f.rhs());
      if (auto r = rewrite_first(f.rhs(), step)) return Formula::implies(f.lhs(), *r);
      return std::nullopt;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
    case Formula::Kind::ForallSt:
    case Formula::Kind::ExistsSt:
      if (auto r = rewrite_first(f.body(), step)) {
        switch (f.kind()) {
          case Formula::Kind::Forall:
            return Formula::forall(f.qvar(), f.qtype(), *r);
          case Formula::Kind::Exists:
            return Formula::exists(f.qvar(), f.qtype(), *r);
          case Formula::Kind::ForallSt:
            return Formula::forall_st(f.qvar(), f.qtype(), *r);
          default:
            return Formula::exists_st(f.qvar(), f.qtype(), *r);
        }
      }
      return std::nullopt;
    case Formula::Kind::ForallInf:
      if (auto r = rewrite_first(f.body(), step)) return Formula::forall_inf(f.qvar(), *r);
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

}  // namespace

std::optional<Formula> shuffle_step(const Formula& f, std::string* moveName, ShuffleKind kind) {
  return rewrite_first(f, [&](const Formula& g) { return shuffle_at(g, moveName, kind); });
}

// ---------------------------------------------------------------------------
// Implication between normal forms

NormalForm nf_implies(const NormalForm& a0, const NormalForm& b0, bool strong) {
  a0.validate();
  b0.validate();
  NormalForm a = a0;
  NormalForm b = b0;

  // Freshen every block variable so the four blocks are pairwise disjoint.
  std::set<std::string> used = all_vars(a.matrix);
  for (const auto& s : all_vars(b.matrix)) used.insert(s);
  auto freshen = [&](NormalForm& nf) {
    for (auto* block : {&nf.uVars, &nf.eVars}) {
      for (auto& tv : *block) {
        std::string nn = fresh_name(tv.name, used);
        if (nn != tv.name) {
          nf.matrix = subst_term(nf.matrix, tv.name, Term::var(nn, tv.type));
          tv.name = nn;
        }
        used.insert(nn);
      }
    }
  };
  // Keep the consequent's names; rename the antecedent's on clashes.
  for (const auto& tv : b.uVars) used.insert(tv.name);
  for (const auto& tv : b.eVars) used.insert(tv.name);
  freshen(a);

  // One functional per antecedent witness, over the antecedent's universal
  // block.
  std::vector<FinType> uTypes;
  for (const auto& tv : a.uVars) uTypes.push_back(tv.type);
  std::vector<TypedVar> funct;
  Formula phi = a.matrix;
  for (const auto& y : a.eVars) {
    FinType gt = FinType::arrows(uTypes, y.type);
    std::string gname = fresh_name("g", used);
    used.insert(gname);
    funct.push_back({gname, gt});
    Term applied = Term::var(gname, gt);
    for (const auto& x : a.uVars) applied = Term::app(applied, Term::var(x.name, x.type));
    phi = subst_term(phi, y.name, applied);
  }

  NormalForm out;
  out.uVars = funct;
  out.uVars.insert(out.uVars.end(), b.uVars.begin(), b.uVars.end());
  if (strong) {
    out.eVars = b.eVars;
    out.eVars.insert(out.eVars.end(), a.uVars.begin(), a.uVars.end());
    out.matrix = Formula::implies(phi, b.matrix);
  } else {
    out.eVars = b.eVars;
    out.matrix = Formula::implies(Formula::forall_block(a.uVars, phi), b.matrix);
  }
  out.validate();
  return out;
}

// ---------------------------------------------------------------------------
// Idealization

namespace {

// Matches: (forall-st prefix)* (forall ys)+ (exists-st xs)+ internal-matrix
// at the root of f; rebuilds with the existential block pulled out as
// sequence-valued witnesses.
std::optional<Formula> idealize_at(const Formula& f) {
  std::vector<TypedVar> prefix;
  Formula rest = f;
  while (rest.kind() == Formula::Kind::ForallSt) {
    prefix.push_back({rest.qvar(), rest.qtype()});
    rest = rest.body();
  }
  std::vector<TypedVar> ys;
  while (rest.kind() == Formula::Kind::Forall) {
    ys.push_back({rest.qvar(), rest.qtype()});
    rest = rest.body();
  }
  if (ys.empty()) return std::nullopt;
  std::vector<TypedVar> xs;
  while (rest.kind() == Formula::Kind::ExistsSt) {
    xs.push_back({rest.qvar(), rest.qtype()});
    rest = rest.body();
  }
  if (xs.empty() || !is_internal(rest)) return std::nullopt;

  std::set<std::string> used = all_vars(f);
  Formula matrix = rest;
  std::vector<TypedVar> seqVars;
  // Innermost existential first keeps the member picks in source order.
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) {
    std::string sv = fresh_name(it->name + "s", used);
    used.insert(sv);
    seqVars.push_back({sv, FinType::seq(it->type)});
    matrix = exists_in(it->name, it->type, Term::var(sv, FinType::seq(it->type)), matrix);
  }
  std::reverse(seqVars.begin(), seqVars.end());

  Formula out = Formula::forall_block(ys, matrix);
  out = Formula::exists_st_block(seqVars, out);
  out = Formula::forall_st_block(prefix, out);
  return out;
}

}  // namespace

IdealizeResult idealize(const Formula& f) {
  // Root-level contract: allow the no-op case explicitly.
  std::vector<TypedVar> prefix;
  Formula rest = f;
  while (rest.kind() == Formula::Kind::ForallSt) {
    prefix.push_back({rest.qvar(), rest.qtype()});
    rest = rest.body();
  }
  if (rest.kind() == Formula::Kind::ExistsSt || is_internal(rest)) return {f, false};
  if (auto r = idealize_at(f)) return {*r, true};
  throw ShapeError("idealize: no internal-universal / standard-existential alternation in " +
                   f.to_string());
}

// ---------------------------------------------------------------------------
// Monotone collapse

namespace {

// Counts free occurrences of a variable in a formula.
int count_occurrences(const Formula& f, const std::string& var) {
  if (f.is_quantifier()) {
    if (f.qvar() == var) return 0;
    return count_occurrences(f.body(), var);
  }
  switch (f.kind()) {
    case Formula::Kind::Not:
      return count_occurrences(f.child(), var);
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
      return count_occurrences(f.lhs(), var) + count_occurrences(f.rhs(), var);
    default: {
      int n = 0;
      std::function<void(const Term&)> walk = [&](const Term& t) {
        if (t.kind() == Term::Kind::Var) {
          if (t.var_name() == var) ++n;
          return;
        }
        switch (t.kind()) {
          case Term::Kind::Succ:
          case Term::Kind::SeqLen:
            walk(t.arg());
            break;
          case Term::Kind::Lam:
            if (t.lam_name() != var) walk(t.lam_body());
            break;
          case Term::Kind::App:
            walk(t.fn());
            walk(t.arg());
            break;
          case Term::Kind::Rec:
            walk(t.rec_base());
            walk(t.rec_step());
            walk(t.rec_index());
            break;
          case Term::Kind::SeqLit:
            for (const Term& e : t.seq_elements()) walk(e);
            break;
          case Term::Kind::SeqIdx:
          case Term::Kind::SeqAppend:
            walk(t.lhs());
            walk(t.rhs());
            break;
          default:
            break;
        }
      };
      if (f.is_atom()) {
        if (f.kind() == Formula::Kind::AtomPred) {
          for (const Term& t : f.pred_args()) walk(t);
        } else {
          walk(f.term_lhs());
          walk(f.term_rhs());
        }
      } else if (f.kind() == Formula::Kind::St) {
        walk(f.st_term());
      } else if (f.kind() == Formula::Kind::DefRef) {
        for (const Term& t : f.pred_args()) walk(t);
      }
      return n;
    }
  }
}

// Replaces the unique member quantifier ranging over `seqVar` (applied to any
// arguments) by a direct use of `maxVar` applied to the same arguments.
std::optional<Formula> collapse_pick(const Formula& f, const std::string& seqVar,
                                     const TypedVar& maxVar) {
  if (auto mq = match_member_quant(f)) {
    // The range must be seqVar itself or seqVar applied to arguments.
    Term head = mq->range;
    std::vector<Term> args;
    while (head.kind() == Term::Kind::App) {
      args.insert(args.begin(), head.arg());
      head = head.fn();
    }
    if (head.kind() == Term::Kind::Var && head.var_name() == seqVar && !mq->universal) {
      Term repl = Term::var(maxVar.name, maxVar.type);
      for (const Term& a : args) repl = Term::app(repl, a);
      return subst_term(mq->body, mq->var, repl);
    }
  }
  if (f.is_quantifier()) {
    if (auto r = collapse_pick(f.body(), seqVar, maxVar)) {
      switch (f.kind()) {
        case Formula::Kind::Forall:
          return Formula::forall(f.qvar(), f.qtype(), *r);
        case Formula::Kind::Exists:
          return Formula::exists(f.qvar(), f.qtype(), *r);
        case Formula::Kind::ForallSt:
          return Formula::forall_st(f.qvar(), f.qtype(), *r);
        case Formula::Kind::ExistsSt:
          return Formula::exists_st(f.qvar(), f.qtype(), *r);
        default:
          return Formula::forall_inf(f.qvar(), *r);
      }
    }
    return std::nullopt;
  }
  switch (f.kind()) {
    case Formula::Kind::Not:
      if (auto r = collapse_pick(f.child(), seqVar, maxVar)) return Formula::negate(*r);
      return std::nullopt;
    case Formula::Kind::And:
      if (auto r = collapse_pick(f.lhs(), seqVar, maxVar)) return Formula::conj(*r, f.rhs());
      if (auto r = collapse_pick(f.rhs(), seqVar, maxVar)) return Formula::conj(f.lhs(), *r);
      return std::nullopt;
    case Formula::Kind::Or:
      if (auto r = collapse_pick(f.lhs(), seqVar, maxVar)) return Formula::disj(*r, f.rhs());
      if (auto r = collapse_pick(f.rhs(), seqVar, maxVar)) return Formula::disj(f.lhs(), *r);
      return std::nullopt;
    case Formula::Kind::Implies:
      if (auto r = collapse_pick(f.lhs(), seqVar, maxVar)) return Formula::implies(*r, f.rhs());
      if (auto r = collapse_pick(f.rhs(), seqVar, maxVar)) return Formula::implies(f.lhs(), *r);
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

// Sequence type collapsed to its element; functional-to-sequence collapsed to
// functional-to-element.
std::optional<FinType> collapsed_type(const FinType& t) {
  if (t.is_seq()) return t.elem();
  if (t.is_arrow()) {
    if (auto c = collapsed_type(t.cod())) return FinType::arrow(t.dom(), *c);
    return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

CollapseResult monotone_collapse(const Formula& f, const std::string& witnessVar,
                                 bool declaredMonotone) {
  if (!declaredMonotone) throw MonotonicityUndeclared(witnessVar);

  std::function<std::optional<Formula>(const Formula&)> step =
      [&](const Formula& g) -> std::optional<Formula> {
    if (g.kind() != Formula::Kind::ExistsSt || g.qvar() != witnessVar) return std::nullopt;
    auto ct = collapsed_type(g.qtype());
    if (!ct) return std::nullopt;
    std::set<std::string> used = all_vars(g.body());
    used.insert(witnessVar);
    TypedVar maxVar{fresh_name(witnessVar + "0", used), *ct};
    auto collapsed = collapse_pick(g.body(), witnessVar, maxVar);
    if (!collapsed) return std::nullopt;
    if (count_occurrences(*collapsed, witnessVar) != 0) return std::nullopt;
    return Formula::exists_st(maxVar.name, maxVar.type, *collapsed);
  };

  auto result = rewrite_first(f, step);
  if (!result)
    throw ShapeError("monotone_collapse: no collapsible witness " + witnessVar + " in " +
                     f.to_string());
  return {*result, combinators::mk_max_seq()};
}

// ---------------------------------------------------------------------------
// Infinitesimal prefix

NormalForm prefix_infinitesimal(const Formula& f, bool monotone, TransformTrace* trace) {
  std::vector<TypedVar> prefix;
  Formula rest = f;
  while (rest.kind() == Formula::Kind::ForallSt) {
    prefix.push_back({rest.qvar(), rest.qtype()});
    rest = rest.body();
  }
  if (rest.kind() != Formula::Kind::ForallInf)
    throw ShapeError("prefix_infinitesimal expects a quantifier over all infinitesimals");
  std::string eps = rest.qvar();
  Formula inner = rest.body();
  auto nf = recognize(inner);
  if (!nf) throw ShapeError("prefix_infinitesimal: body is not a normal form");

  auto with_prefix = [&](NormalForm n) {
    n.uVars.insert(n.uVars.begin(), prefix.begin(), prefix.end());
    return n;
  };

  if (!inner.free_vars().count(eps)) {
    // Vacuous prefix: any threshold works.
    if (trace)
      trace->add("prefix-infinitesimal", f, with_prefix(*nf).to_formula(), std::nullopt,
                 "vacuous prefix, threshold 1 recorded");
    return with_prefix(*nf);
  }
  for (const auto& tv : nf->uVars)
    if (nf->matrix.free_vars().count(eps) == 0 && tv.name == eps)
      throw ShapeError("infinitesimal variable may only occur in the matrix");

  std::set<std::string> used = all_vars(f);
  std::string k = fresh_name("k", used);
  used.insert(k);

  // (forall eps)(exists-st ys, k)[ |eps| < 1/k -> matrix ]
  Formula guarded = Formula::implies(
      Formula::atom_pred("alt", {Term::var(eps, Formula::real_sort()), Term::var(k, N0)}),
      nf->matrix);
  std::vector<TypedVar> exBlock = nf->eVars;
  exBlock.push_back({k, N0});
  Formula shuffled = Formula::forall_st_block(
      nf->uVars, Formula::forall(eps, Formula::real_sort(),
                                 Formula::exists_st_block(exBlock, guarded)));
  if (trace) trace->add("unfold-infinitesimal", f, shuffled);

  IdealizeResult ide = idealize(shuffled);
  if (trace) trace->add("idealize", shuffled, ide.formula);

  // The threshold candidates are always monotone: a larger cutoff only
  // weakens the guard.
  Formula cur = ide.formula;
  CollapseResult c = monotone_collapse(cur, k + "s", true);
  if (trace)
    trace->add("monotone-collapse", cur, c.formula, c.transformer, "threshold variable " + k);
  cur = c.formula;

  if (monotone) {
    for (const auto& y : nf->eVars) {
      if (!y.type.is_base()) continue;
      CollapseResult cy = monotone_collapse(cur, y.name + "s", true);
      if (trace)
        trace->add("monotone-collapse", cur, cy.formula, cy.transformer,
                   "witness variable " + y.name);
      cur = cy.formula;
    }
  }

  auto out = recognize(cur);
  if (!out) throw ShapeError("prefix_infinitesimal: result did not normalize: " + cur.to_string());
  return *out;
}

// ---------------------------------------------------------------------------
// Herbrandized choice

Formula apply_hac(const Formula& f, TransformTrace* trace) {
  auto nf = recognize(f);
  if (!nf) throw ShapeError("apply_hac expects a normal form");
  if (nf->uVars.empty()) {
    if (trace) trace->add("hac", f, f, std::nullopt, "empty universal block, identity");
    return f;
  }
  std::set<std::string> used = all_vars(f);
  std::vector<FinType> uTypes;
  for (const auto& tv : nf->uVars) uTypes.push_back(tv.type);

  Formula matrix = nf->matrix;
  std::vector<TypedVar> chooser;
  for (auto it = nf->eVars.rbegin(); it != nf->eVars.rend(); ++it) {
    FinType gt = FinType::arrows(uTypes, FinType::seq(it->type));
    std::string g = fresh_name("G", used);
    used.insert(g);
    chooser.push_back({g, gt});
    Term applied = Term::var(g, gt);
    for (const auto& x : nf->uVars) applied = Term::app(applied, Term::var(x.name, x.type));
    matrix = exists_in(it->name, it->type, applied, matrix);
  }
  std::reverse(chooser.begin(), chooser.end());

  Formula out = Formula::forall_st_block(nf->uVars, matrix);
  out = Formula::exists_st_block(chooser, out);
  if (trace)
    trace->add("hac", f, out, std::nullopt, "candidate-list functional, not a single witness");
  return out;
}

// ---------------------------------------------------------------------------
// Driver

std::optional<Formula> expand_step(const Formula& f, std::string* name) {
  return rewrite_first(f, [&](const Formula& g) -> std::optional<Formula> {
    if (g.kind() != Formula::Kind::DefRef) return std::nullopt;
    if (name) *name = g.pred_name();
    return expand_definition(g.pred_name(), g.pred_args());
  });
}

namespace {

// Deepest positive-position implication with an external antecedent: both
// sides are normalized in place, and when the antecedent carries both blocks
// the functional clause applies.  The weakened form is an implication, not an
// equivalence, so it only fires at positive positions.
std::optional<Formula> implies_step_opts(const Formula& f, const NormalizeOptions& opts) {
  std::function<std::optional<Formula>(const Formula&, bool)> deep =
      [&](const Formula& g, bool positive) -> std::optional<Formula> {
    // Search children first: most deeply nested implication wins.
    switch (g.kind()) {
      case Formula::Kind::Not:
        if (auto r = deep(g.child(), !positive)) return Formula::negate(*r);
        break;
      case Formula::Kind::And:
        if (auto r = deep(g.lhs(), positive)) return Formula::conj(*r, g.rhs());
        if (auto r = deep(g.rhs(), positive)) return Formula::conj(g.lhs(), *r);
        break;
      case Formula::Kind::Or:
        if (auto r = deep(g.lhs(), positive)) return Formula::disj(*r, g.rhs());
        if (auto r = deep(g.rhs(), positive)) return Formula::disj(g.lhs(), *r);
        break;
      case Formula::Kind::Implies:
        if (auto r = deep(g.lhs(), !positive)) return Formula::implies(*r, g.rhs());
        if (auto r = deep(g.rhs(), positive)) return Formula::implies(g.lhs(), *r);
        break;
      case Formula::Kind::Forall:
      case Formula::Kind::Exists:
      case Formula::Kind::ForallSt:
      case Formula::Kind::ExistsSt:
      case Formula::Kind::ForallInf:
        if (auto r = deep(g.body(), positive)) {
          switch (g.kind()) {
            case Formula::Kind::Forall:
              return Formula::forall(g.qvar(), g.qtype(), *r);
            case Formula::Kind::Exists:
              return Formula::exists(g.qvar(), g.qtype(), *r);
            case Formula::Kind::ForallSt:
              return Formula::forall_st(g.qvar(), g.qtype(), *r);
            case Formula::Kind::ExistsSt:
              return Formula::exists_st(g.qvar(), g.qtype(), *r);
            default:
              return Formula::forall_inf(g.qvar(), *r);
          }
        }
        break;
      default:
        break;
    }
    if (g.kind() != Formula::Kind::Implies) return std::nullopt;
    if (!positive && !opts.strongImplications) return std::nullopt;
    if (is_internal(g.lhs())) return std::nullopt;
    NormalForm a, b;
    try {
      a = to_normal_form(g.lhs(), opts).normalForm;
      b = to_normal_form(g.rhs(), opts).normalForm;
    } catch (const Error&) {
      return std::nullopt;  // sides outside the fragment; other rules first
    }
    if (!a.uVars.empty() && !a.eVars.empty())
      return nf_implies(a, b, opts.strongImplications).to_formula();
    Formula rebuilt = Formula::implies(a.to_formula(), b.to_formula());
    if (!Formula::alpha_eq(rebuilt, g)) return rebuilt;
    return std::nullopt;
  };
  return deep(f, true);
}

}  // namespace

std::optional<Formula> implies_step(const Formula& f, bool strong) {
  NormalizeOptions opts;
  opts.strongImplications = strong;
  return implies_step_opts(f, opts);
}

std::optional<Formula> idealize_step(const Formula& f) {
  return rewrite_first(f, [](const Formula& g) { return idealize_at(g); });
}

namespace {

// Collapses a sequence witness whose picked variable was declared monotone.
// After idealization the sequence variable is named <pick>s.
std::optional<std::pair<Formula, Term>> collapse_declared(const Formula& f,
                                                          const std::set<std::string>& declared) {
  for (const auto& name : declared) {
    try {
      CollapseResult c = monotone_collapse(f, name + "s", true);
      return std::make_pair(c.formula, c.transformer);
    } catch (const ShapeError&) {
      continue;
    }
  }
  return std::nullopt;
}

// Normal form under a standard universal prefix with a ForallInf next.
std::optional<Formula> infinitesimal_prefix_step(const Formula& f, const NormalizeOptions& opts,
                                                 TransformTrace* trace) {
  Formula rest = f;
  std::vector<TypedVar> prefix;
  while (rest.kind() == Formula::Kind::ForallSt) {
    prefix.push_back({rest.qvar(), rest.qtype()});
    rest = rest.body();
  }
  if (rest.kind() != Formula::Kind::ForallInf) return std::nullopt;
  Formula inner = rest.body();
  NormalizeResult body = to_normal_form(inner, opts);
  for (auto& s : body.trace.steps)
    if (trace) trace->steps.push_back(s);
  Formula rebuilt = Formula::forall_st_block(
      prefix, Formula::forall_inf(rest.qvar(), body.normalForm.to_formula()));
  bool mono = true;
  for (const auto& y : body.normalForm.eVars)
    if (y.type.is_base() && !opts.monotoneVars.count(y.name)) mono = false;
  NormalForm nf = prefix_infinitesimal(rebuilt, mono, trace);
  return nf.to_formula();
}

}  // namespace

NormalizeResult to_normal_form(const Formula& f, const NormalizeOptions& opts) {
  NormalizeResult res;
  Formula cur = f;
  for (int step = 0; step < opts.maxSteps; ++step) {
    // Declared collapses run even on recognizable formulas: the collapsed
    // form is the one the pipelines consume.
    if (auto r = collapse_declared(cur, opts.monotoneVars)) {
      res.trace.add("monotone-collapse", cur, r->first, r->second);
      cur = r->first;
      continue;
    }

    NotNormal why;
    if (auto nf = recognize(cur, &why)) {
      if (res.trace.steps.empty() && Formula::alpha_eq(cur, f))
        res.trace.add("already-normal", f, cur, std::nullopt, "no transformation required");
      res.normalForm = *nf;
      return res;
    }

    std::string defName;
    if (auto r = expand_step(cur, &defName)) {
      res.trace.add("expand-definition", cur, *r, std::nullopt,
                    defName + " [" + lookup_definition(defName).citation + "]");
      cur = *r;
      continue;
    }

    if (auto r = infinitesimal_prefix_step(cur, opts, &res.trace)) {
      cur = *r;
      continue;
    }

    std::string move;
    if (auto r = shuffle_step(cur, &move, ShuffleKind::Universal)) {
      res.trace.add("shuffle[u]:" + move, cur, *r);
      cur = *r;
      continue;
    }

    if (auto r = implies_step_opts(cur, opts)) {
      std::vector<std::string> margs(opts.monotoneVars.begin(), opts.monotoneVars.end());
      res.trace.add(opts.strongImplications ? "nf-implies-strong" : "nf-implies-weak", cur, *r,
                    std::nullopt, "", margs);
      cur = *r;
      continue;
    }

    if (auto r = shuffle_step(cur, &move, ShuffleKind::Existential)) {
      res.trace.add("shuffle[e]:" + move, cur, *r);
      cur = *r;
      continue;
    }

    if (auto r = idealize_step(cur)) {
      res.trace.add("idealize", cur, *r);
      cur = *r;
      continue;
    }

    throw NotPure("no applicable rule at: " + cur.to_string());
  }
  throw NotPure("step budget exhausted while normalizing");
}

bool replay_step(const TraceStep& step) {
  try {
    std::optional<Formula> got;
    const std::string& r = step.rule;
    if (r == "expand-definition") {
      got = expand_step(step.before, nullptr);
    } else if (r.rfind("shuffle", 0) == 0) {
      ShuffleKind kind = ShuffleKind::All;
      if (r.rfind("shuffle[u]:", 0) == 0) kind = ShuffleKind::Universal;
      if (r.rfind("shuffle[e]:", 0) == 0) kind = ShuffleKind::Existential;
      got = shuffle_step(step.before, nullptr, kind);
    } else if (r == "idealize") {
      got = idealize_step(step.before);
    } else if (r == "nf-implies-weak" || r == "nf-implies-strong") {
      NormalizeOptions opts;
      opts.strongImplications = r == "nf-implies-strong";
      for (const auto& a : step.args) opts.monotoneVars.insert(a);
      got = implies_step_opts(step.before, opts);
    } else if (r == "monotone-collapse") {
      // The collapsed variable is recoverable from the shapes: try every
      // sequence-typed standard witness until one reproduces the step.
      std::function<void(const Formula&, std::vector<std::string>&)> seqs =
          [&](const Formula& g, std::vector<std::string>& out) {
            if (g.is_quantifier()) {
              if (g.kind() == Formula::Kind::ExistsSt) out.push_back(g.qvar());
              seqs(g.body(), out);
              return;
            }
            switch (g.kind()) {
              case Formula::Kind::Not:
                seqs(g.child(), out);
                return;
              case Formula::Kind::And:
              case Formula::Kind::Or:
              case Formula::Kind::Implies:
                seqs(g.lhs(), out);
                seqs(g.rhs(), out);
                return;
              default:
                return;
            }
          };
      std::vector<std::string> names;
      seqs(step.before, names);
      for (const auto& n : names) {
        try {
          CollapseResult c = monotone_collapse(step.before, n, true);
          if (Formula::alpha_eq(c.formula, step.after)) return true;
        } catch (const Error&) {
        }
      }
      return false;
    } else if (r == "hac") {
      got = apply_hac(step.before, nullptr);
    } else if (r == "unfold-infinitesimal" || r == "prefix-infinitesimal" ||
               r == "already-normal") {
      return true;  // composite markers; covered by their sub-steps
    } else {
      return false;
    }
    return got && Formula::alpha_eq(*got, step.after);
  } catch (const Error&) {
    return false;
  }
}

}  // namespace nsx
