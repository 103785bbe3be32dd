#include "nsx/pipeline.hpp"

#include <cmath>

#include "nsx/definitions.hpp"
#include "nsx/error.hpp"

namespace nsx {

// ---------------------------------------------------------------------------
// Rational coding

uint64_t encode_rational_pair(uint64_t num, uint64_t den) {
  uint64_t s = num + den;
  return s * (s + 1) / 2 + den;
}

Rational decode_rational(uint64_t code) {
  // Invert the pairing (a+b)(a+b+1)/2 + b.
  uint64_t w = static_cast<uint64_t>((std::sqrt(8.0 * static_cast<double>(code) + 1.0) - 1.0) / 2.0);
  while ((w + 1) * (w + 2) / 2 <= code) ++w;
  while (w * (w + 1) / 2 > code) --w;
  uint64_t b = code - w * (w + 1) / 2;
  uint64_t a = w - b;
  if (b == 0) throw Error("coded rational with zero denominator");
  return Rational(static_cast<int64_t>(a), static_cast<int64_t>(b));
}

// ---------------------------------------------------------------------------
// ExtractionResult

void ExtractionResult::validate() const {
  if (!is_internal(matrix)) throw ShapeError("contract matrix is not internal");
  if (!witness.is_closed()) throw NotClosed("witness has free variables");
  // Composition typing: the witness takes exactly the term-supplied inputs to
  // a candidate sequence (candidates are number-coded under every decode
  // convention).
  std::vector<FinType> args;
  for (const auto& ci : inputs)
    if (ci.termArg) args.push_back(ci.type);
  FinType expected = FinType::arrows(args, FinType::seq(FinType::base()));
  FinType actual = typecheck(witness);
  if (actual != expected)
    throw TypeError("witness has type " + actual.to_string() + ", contract induces " +
                    expected.to_string());
}

// ---------------------------------------------------------------------------
// Script parsing

namespace {

Term resolve_combinators(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      const std::string& n = t.var_name();
      if (n == "#add") return combinators::mk_add();
      if (n == "#monus") return combinators::mk_monus();
      if (n == "#max2") return combinators::mk_max2();
      if (n == "#mul") return combinators::mk_mul();
      if (n == "#ifz") return combinators::mk_ifz();
      if (n == "#maxseq") return combinators::mk_max_seq();
      if (n == "#fold") return combinators::mk_fold_nat();
      if (n == "#pair") return combinators::mk_pair();
      if (n == "#firstzero") return combinators::mk_first_zero();
      if (n == "#grid") return combinators::mk_grid();
      if (n == "#range") return combinators::mk_range();
      return t;
    }
    case Term::Kind::Succ:
      return Term::succ(resolve_combinators(t.arg()));
    case Term::Kind::Lam:
      return Term::lam(t.lam_name(), t.lam_type(), resolve_combinators(t.lam_body()));
    case Term::Kind::App:
      return Term::app(resolve_combinators(t.fn()), resolve_combinators(t.arg()));
    case Term::Kind::Rec:
      return Term::rec(t.rec_type(), resolve_combinators(t.rec_base()),
                       resolve_combinators(t.rec_step()), resolve_combinators(t.rec_index()));
    case Term::Kind::SeqLit: {
      std::vector<Term> es;
      for (const Term& e : t.seq_elements()) es.push_back(resolve_combinators(e));
      return Term::seq_lit(std::move(es), t.seq_elem_type());
    }
    case Term::Kind::SeqLen:
      return Term::seq_len(resolve_combinators(t.arg()));
    case Term::Kind::SeqIdx:
      return Term::seq_idx(resolve_combinators(t.lhs()), resolve_combinators(t.rhs()));
    case Term::Kind::SeqAppend:
      return Term::seq_append(resolve_combinators(t.lhs()), resolve_combinators(t.rhs()));
    default:
      return t;
  }
}

}  // namespace

PipelineScript parse_pipeline(const std::string& text) {
  Sexpr s = parse_sexpr(text);
  if (!s.headed("pipeline") || s.size() < 2 || !s.at(1).is_atom())
    throw ParseError(s.line, s.column, "expected (pipeline NAME ...)");
  PipelineScript sc;
  sc.name = s.at(1).atom;

  TypeEnv params;
  for (size_t i = 2; i < s.size(); ++i) {
    const Sexpr& sec = s.at(i);
    if (sec.headed("params")) {
      for (const Sexpr& b : std::vector<Sexpr>(sec.items.begin() + 1, sec.items.end())) {
        if (!b.is_list() || b.size() != 2 || !b.at(0).is_atom())
          throw ParseError(b.line, b.column, "param must be (name TYPE)");
        sc.params.push_back({b.at(0).atom, FinType::from_sexpr(b.at(1))});
        params.bind(b.at(0).atom, FinType::from_sexpr(b.at(1)));
      }
    } else if (sec.headed("input") && sec.size() == 2) {
      sc.input = formula_from_sexpr(sec.at(1), params);
    } else if (sec.headed("steps")) {
      for (size_t j = 1; j < sec.size(); ++j) {
        const Sexpr& st = sec.at(j);
        if (!st.is_list() || st.items.empty() || !st.at(0).is_atom())
          throw ParseError(st.line, st.column, "step must be (rule args...)");
        PipelineStep step;
        step.rule = st.at(0).atom;
        for (size_t a = 1; a < st.size(); ++a) step.args.push_back(st.at(a).atom);
        sc.steps.push_back(std::move(step));
      }
    } else if (sec.headed("monotone")) {
      for (size_t j = 1; j < sec.size(); ++j) sc.monotone.insert(sec.at(j).atom);
    } else if (sec.headed("strong") && sec.size() == 1) {
      sc.strongImplications = true;
    } else if (sec.headed("witness") && sec.size() == 2) {
      sc.witness = resolve_combinators(Term::parse(sec.at(1).to_string()));
    } else if (sec.headed("contract")) {
      for (size_t j = 1; j < sec.size(); ++j) {
        const Sexpr& c = sec.at(j);
        if (c.headed("inputs")) {
          for (size_t a = 1; a < c.size(); ++a) {
            const Sexpr& b = c.at(a);
            if (!b.is_list() || b.size() < 2 || !b.at(0).is_atom())
              throw ParseError(b.line, b.column, "contract input must be (name TYPE [term])");
            ContractInput ci;
            ci.name = b.at(0).atom;
            ci.type = FinType::from_sexpr(b.at(1));
            ci.termArg = b.size() > 2 && b.at(2).is_atom("term");
            sc.contractInputs.push_back(std::move(ci));
          }
        } else if (c.headed("candidate") && c.size() >= 3) {
          sc.candidate = {c.at(1).atom, FinType::from_sexpr(c.at(2))};
          sc.decode = (c.size() > 3 && c.at(3).is_atom("coded-rational"))
                          ? CandidateDecode::CodedRational
                          : CandidateDecode::Nat;
        } else if (c.headed("matrix") && c.size() == 2) {
          TypeEnv env = params;
          for (const auto& ci : sc.contractInputs)
            if (!env.lookup(ci.name)) env.bind(ci.name, ci.type);
          if (!env.lookup(sc.candidate.name)) env.bind(sc.candidate.name, sc.candidate.type);
          sc.target = formula_from_sexpr(c.at(1), env);
        }
      }
    } else {
      throw ParseError(sec.line, sec.column, "unknown pipeline section");
    }
  }
  return sc;
}

std::string PipelineScript::to_text() const {
  std::vector<Sexpr> top{sx_atom("pipeline"), sx_atom(name)};
  if (!params.empty()) {
    std::vector<Sexpr> ps{sx_atom("params")};
    for (const auto& p : params) ps.push_back(sx_list({sx_atom(p.name), p.type.to_sexpr()}));
    top.push_back(sx_list(std::move(ps)));
  }
  top.push_back(sx_list({sx_atom("input"), input.to_sexpr()}));
  if (!steps.empty()) {
    std::vector<Sexpr> ss{sx_atom("steps")};
    for (const auto& st : steps) {
      std::vector<Sexpr> one{sx_atom(st.rule)};
      for (const auto& a : st.args) one.push_back(sx_atom(a));
      ss.push_back(sx_list(std::move(one)));
    }
    top.push_back(sx_list(std::move(ss)));
  }
  if (!monotone.empty()) {
    std::vector<Sexpr> ms{sx_atom("monotone")};
    for (const auto& m : monotone) ms.push_back(sx_atom(m));
    top.push_back(sx_list(std::move(ms)));
  }
  if (strongImplications) top.push_back(sx_list({sx_atom("strong")}));
  top.push_back(sx_list({sx_atom("witness"), witness.to_sexpr()}));
  std::vector<Sexpr> con{sx_atom("contract")};
  std::vector<Sexpr> ins{sx_atom("inputs")};
  for (const auto& ci : contractInputs) {
    std::vector<Sexpr> one{sx_atom(ci.name), ci.type.to_sexpr()};
    if (ci.termArg) one.push_back(sx_atom("term"));
    ins.push_back(sx_list(std::move(one)));
  }
  con.push_back(sx_list(std::move(ins)));
  con.push_back(sx_list({sx_atom("candidate"), sx_atom(candidate.name), candidate.type.to_sexpr(),
                         sx_atom(decode == CandidateDecode::CodedRational ? "coded-rational"
                                                                          : "nat")}));
  con.push_back(sx_list({sx_atom("matrix"), target.to_sexpr()}));
  top.push_back(sx_list(std::move(con)));
  return sx_list(std::move(top)).to_string();
}

// ---------------------------------------------------------------------------
// Script execution

ExtractionResult run_pipeline(const PipelineScript& script) {
  Formula cur = script.input;
  TransformTrace trace;
  bool collapsed = false;

  for (const auto& step : script.steps) {
    try {
      if (step.rule == "normalize") {
        NormalizeOptions opts;
        opts.strongImplications = script.strongImplications;
        opts.monotoneVars = script.monotone;
        for (const auto& a : step.args) opts.monotoneVars.insert(a);
        NormalizeResult r = to_normal_form(cur, opts);
        for (auto& s : r.trace.steps) {
          if (s.rule == "monotone-collapse") collapsed = true;
          trace.steps.push_back(std::move(s));
        }
        cur = r.normalForm.to_formula();
      } else if (step.rule == "expand") {
        auto r = expand_step(cur, nullptr);
        if (!r) throw ReplayFailure(step.rule);
        trace.add("expand-definition", cur, *r);
        cur = *r;
      } else if (step.rule == "shuffle") {
        std::string move;
        while (auto r = shuffle_step(cur, &move)) {
          trace.add("shuffle:" + move, cur, *r);
          cur = *r;
        }
      } else if (step.rule == "idealize") {
        auto r = idealize_step(cur);
        if (!r) throw ReplayFailure(step.rule);
        trace.add("idealize", cur, *r);
        cur = *r;
      } else if (step.rule == "collapse") {
        if (step.args.empty()) throw ReplayFailure("collapse needs a witness variable");
        const std::string& var = step.args[0];
        bool declared = script.monotone.count(var) > 0;
        CollapseResult r = monotone_collapse(cur, var, declared);
        trace.add("monotone-collapse", cur, r.formula, r.transformer);
        cur = r.formula;
        collapsed = true;
      } else if (step.rule == "implies") {
        bool strong = !step.args.empty() && step.args[0] == "strong";
        auto r = implies_step(cur, strong);
        if (!r) throw ReplayFailure(step.rule);
        trace.add(strong ? "nf-implies-strong" : "nf-implies-weak", cur, *r);
        cur = *r;
      } else if (step.rule == "hac") {
        Formula r = apply_hac(cur, &trace);
        cur = r;
      } else if (step.rule == "prefix-eps") {
        bool mono = !step.args.empty() && step.args[0] == "monotone";
        NormalForm nf = prefix_infinitesimal(cur, mono, &trace);
        cur = nf.to_formula();
      } else {
        throw ReplayFailure("unknown rule " + step.rule);
      }
    } catch (const ReplayFailure&) {
      throw;
    } catch (const Error& e) {
      throw ReplayFailure(step.rule + ": " + e.what());
    }
  }

  NotNormal why;
  auto nf = recognize(cur, &why);
  if (!nf) throw ReplayFailure("final formula is not normal: " + why.reason);

  ExtractionResult result;
  result.inputs = script.contractInputs;
  result.candidate = script.candidate;
  result.decode = script.decode;
  result.matrix = script.target;
  result.trace = std::move(trace);

  // Candidate-list composition: when a collapse fired, the declared term is
  // the pre-collapse realizer and the runner wraps the max-of-candidates
  // transformer around it.
  if (collapsed) {
    std::vector<ContractInput> termIns;
    for (const auto& ci : script.contractInputs)
      if (ci.termArg) termIns.push_back(ci);
    Term applied = script.witness;
    for (const auto& ci : termIns) applied = Term::app(applied, Term::var(ci.name, ci.type));
    Term wrapped = Term::seq_lit({Term::app(combinators::mk_max_seq(), applied)}, FinType::base());
    for (auto it = termIns.rbegin(); it != termIns.rend(); ++it)
      wrapped = Term::lam(it->name, it->type, wrapped);
    // Only collapse to the max when the candidates are plain numerals.
    result.witness =
        script.decode == CandidateDecode::Nat ? wrapped : script.witness;
  } else {
    result.witness = script.witness;
  }

  result.trace.add("extract", cur, cur, result.witness,
                   "witness assembled for the final normal form");
  result.validate();
  return result;
}

// ---------------------------------------------------------------------------
// Comparison selection

std::vector<Rational> decode_candidates(const Term& seqValue, CandidateDecode decode) {
  if (seqValue.kind() != Term::Kind::SeqLit) throw IllTyped("candidate term is not a sequence");
  const auto& elems = seqValue.seq_elements();
  std::vector<Rational> out;
  switch (decode) {
    case CandidateDecode::Nat:
      for (const Term& e : elems) {
        auto n = e.as_numeral();
        if (!n) throw IllTyped("candidate is not a numeral");
        out.push_back(Rational(static_cast<int64_t>(*n)));
      }
      return out;
    case CandidateDecode::CodedRational:
      for (const Term& e : elems) {
        auto n = e.as_numeral();
        if (!n) throw IllTyped("candidate is not a coded rational");
        out.push_back(decode_rational(*n));
      }
      return out;
    case CandidateDecode::ScaledGrid: {
      if (elems.empty()) return out;
      auto den = elems[0].as_numeral();
      if (!den || *den == 0) throw IllTyped("scaled grid needs a positive denominator");
      for (size_t i = 1; i < elems.size(); ++i) {
        auto n = elems[i].as_numeral();
        if (!n) throw IllTyped("candidate is not a numeral");
        out.push_back(Rational(static_cast<int64_t>(*n), static_cast<int64_t>(*den)));
      }
      return out;
    }
  }
  throw Error("unreachable decode kind");
}

Term select_by_comparison(const Term& candidates, const ComparisonSpec& spec, uint64_t precision,
                          CandidateDecode decode) {
  if (precision == 0) precision = 1;
  Term value = eval(candidates, spec.fuel);
  std::vector<Rational> qs = decode_candidates(value, decode);
  if (qs.empty()) throw NoCandidate("empty candidate list");
  Rational tol = Rational::inv(static_cast<int64_t>(precision));
  for (const Rational& q : qs) {
    // Exact rational arithmetic decides the threshold comparison outright;
    // candidates are generated at doubled precision so one of them passes.
    if (spec.f(q).abs() < tol) {
      if (decode == CandidateDecode::CodedRational)
        return Term::num(encode_rational_pair(static_cast<uint64_t>(q.num()),
                                              static_cast<uint64_t>(q.den())));
      return Term::seq_lit({Term::num(static_cast<uint64_t>(q.den())),
                            Term::num(static_cast<uint64_t>(q.num()))},
                           FinType::base());
    }
  }
  throw NoCandidate("no candidate within 1/" + std::to_string(precision));
}

// ---------------------------------------------------------------------------
// Reverse embedding

NormalForm reverse_embed(const Term& witness, const std::vector<TypedVar>& inputs,
                         const TypedVar& candidate, const Formula& matrix,
                         TransformTrace* trace) {
  if (!witness.is_closed())
    throw NotClosed("reverse embedding needs a closed witness");
  typecheck(witness);
  if (!is_internal(matrix)) throw ShapeError("reverse embedding needs an internal matrix");
  NormalForm nf;
  nf.uVars = inputs;
  nf.eVars = {candidate};
  nf.matrix = matrix;
  nf.validate();
  if (trace)
    trace->add("reverse-embed", matrix, nf.to_formula(), witness,
               "closed terms are standard and standard application preserves standardness");
  return nf;
}

}  // namespace nsx
