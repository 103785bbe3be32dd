#include <doctest.h>

#include "gen.hpp"
#include "nsx/definitions.hpp"
#include "nsx/error.hpp"
#include "nsx/structure.hpp"
#include "nsx/transforms.hpp"

using namespace nsx;

namespace {
const FinType N = FinType::base();
const FinType RR = FinType::arrow(Formula::real_sort(), Formula::real_sort());

TypeEnv real_fn_env() {
  TypeEnv e;
  e.bind("f", RR);
  return e;
}
}  // namespace

TEST_CASE("recognize splits blocks") {
  auto nf = recognize(parse_formula("(forall-st ((k N)) (exists-st ((M N)) (atom P k M)))"));
  REQUIRE(nf);
  CHECK(nf->uVars.size() == 1);
  CHECK(nf->eVars.size() == 1);
  CHECK(is_internal(nf->matrix));

  auto internalOnly = recognize(parse_formula("(=0 x y)"));
  REQUIRE(internalOnly);
  CHECK(internalOnly->uVars.empty());
  CHECK(internalOnly->eVars.empty());

  NotNormal why;
  auto bad = recognize(parse_formula("(exists-st ((y N)) (forall-st ((x N)) (atom P x y)))"),
                       &why);
  CHECK_FALSE(bad);
  CHECK(why.reason == "existential before universal");

  // The uniform-continuity normal form recognizes as stated.
  auto the = definition_normal_form("ns-uniform-continuity", {Term::var("f", RR)});
  CHECK(recognize(the.to_formula()));
}

TEST_CASE("nf_implies weak self-implication shape") {
  NormalForm a;
  a.uVars = {{"x", N}};
  a.eVars = {{"y", N}};
  a.matrix = parse_formula("(atom P x y)");
  NormalForm r = nf_implies(a, a, false);
  // (forall-st zeta, x)(exists-st y)[(forall x') P(x', zeta x') -> P(x, y)]
  CHECK(r.uVars.size() == 2);
  CHECK(r.eVars.size() == 1);
  CHECK(r.matrix.kind() == Formula::Kind::Implies);
  CHECK(r.matrix.lhs().kind() == Formula::Kind::Forall);
  CHECK_NOTHROW(r.validate());

  NormalForm s = nf_implies(a, a, true);
  CHECK(s.uVars.size() == 2);
  CHECK(s.eVars.size() == 2);  // the witness plus the instantiated universal
  CHECK(s.matrix.lhs().kind() != Formula::Kind::Forall);
}

TEST_CASE("nf_implies strong output implies weak output pointwise") {
  nsxtest::Rng rng(31);
  int checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    NormalForm a = nsxtest::random_normal_form(rng);
    NormalForm b = nsxtest::random_normal_form(rng);
    if (a.uVars.empty() || a.eVars.empty()) continue;
    bool higher = false;
    for (const auto& v : a.uVars)
      if (!v.type.is_base()) higher = true;
    if (higher) continue;  // keep the functional types enumerable
    NormalForm strong = nf_implies(a, b, true);
    NormalForm weak = nf_implies(a, b, false);
    FiniteStructure s(2, 2, 2, static_cast<unsigned>(trial + 17));
    try {
      bool sv = eval_formula(strong.to_formula(), s);
      bool wv = eval_formula(weak.to_formula(), s);
      ++checked;
      if (sv) REQUIRE(wv);
    } catch (const Unrepresentable&) {
      continue;
    }
  }
  CHECK(checked >= 40);
}

TEST_CASE("idealize") {
  TypeEnv env;
  env.bind("f", FinType::arrow(N, N));
  Formula in = parse_formula(
      "(forall-st ((g (-> N N)))"
      " (forall ((y N)) (exists-st ((M N)) (atom P g y M))))", env);
  IdealizeResult r = idealize(in);
  CHECK(r.changed);
  auto nf = recognize(r.formula);
  REQUIRE(nf);
  CHECK(nf->uVars.size() == 1);
  REQUIRE(nf->eVars.size() == 1);
  CHECK(nf->eVars[0].type == FinType::seq(N));

  // No internal universal in front: unchanged.
  Formula noop = parse_formula("(forall-st ((x N)) (exists-st ((y N)) (atom P x y)))");
  IdealizeResult r2 = idealize(noop);
  CHECK_FALSE(r2.changed);
  CHECK(Formula::alpha_eq(r2.formula, noop));

  CHECK_THROWS_AS(idealize(parse_formula("(implies (st x) (st y))")), ShapeError);
}

TEST_CASE("idealize preserves truth on degenerate structures") {
  nsxtest::Rng rng(77);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    Formula matrix = nsxtest::random_internal(rng, {"x", "y"}, 2);
    Formula in = Formula::forall("y", N, Formula::exists_st("x", N, matrix));
    IdealizeResult out = idealize(in);
    REQUIRE(out.changed);
    FiniteStructure s(3, 3, 3, static_cast<unsigned>(trial + 1));
    try {
      bool a = eval_formula(in, s);
      bool b = eval_formula(out.formula, s);
      ++checked;
      REQUIRE(a == b);
    } catch (const Unrepresentable&) {
      continue;
    }
  }
  CHECK(checked == 1000);
}

TEST_CASE("monotone collapse of a sequence witness") {
  // (exists-st (w (* N))) (forall z) (exists n in w) (z <= n)  collapses to a
  // single threshold.
  Formula in = Formula::exists_st(
      "w", FinType::seq(N),
      Formula::forall("z", N,
                      exists_in("n", N, Term::var("w", FinType::seq(N)),
                                Formula::atom_le0(Term::var("z", N), Term::var("n", N)))));
  CHECK_THROWS_AS(monotone_collapse(in, "w", false), MonotonicityUndeclared);
  CollapseResult r = monotone_collapse(in, "w", true);
  CHECK(r.formula.kind() == Formula::Kind::ExistsSt);
  CHECK(r.formula.qtype() == N);
  CHECK(Term::alpha_eq(r.transformer, combinators::mk_max_seq()));
}

TEST_CASE("monotone collapse of a candidate-list functional") {
  // (exists-st (nu (-> (-> N N) (* N)))) (forall-st f) (exists m in nu(f)) D
  // collapses to a single-valued search operator.
  const FinType NN = FinType::arrow(N, N);
  const FinType NUT = FinType::arrow(NN, FinType::seq(N));
  Term nu = Term::var("nu", NUT);
  Term f = Term::var("f", NN);
  Formula body = exists_in(
      "m", N, Term::app(nu, f),
      Formula::implies(
          Formula::exists("n", N, Formula::atom_eq0(Term::app(f, Term::var("n", N)), Term::zero())),
          Formula::exists("i", N,
                          Formula::conj(Formula::atom_le0(Term::var("i", N), Term::var("m", N)),
                                        Formula::atom_eq0(Term::app(f, Term::var("i", N)),
                                                          Term::zero())))));
  Formula in = Formula::exists_st("nu", NUT, Formula::forall_st("f", NN, body));
  CollapseResult r = monotone_collapse(in, "nu", true);
  CHECK(r.formula.kind() == Formula::Kind::ExistsSt);
  CHECK(r.formula.qtype() == FinType::arrow(NN, N));
  // The collapsed functional is applied in place of the member pick.
  CHECK(r.formula.to_string().find("in") == std::string::npos);
}

TEST_CASE("collapse preserves truth when sampling confirms monotonicity") {
  nsxtest::Rng rng(13);
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    // Matrices of the shape (z <= n) or (z <= n) or (P(z) and (z <= n)) are
    // upward monotone in n.
    Formula mono = Formula::atom_le0(Term::var("z", N), Term::var("n", N));
    if (rng.flip())
      mono = Formula::conj(Formula::atom_pred("P", {Term::var("z", N)}), mono);
    Formula in = Formula::exists_st(
        "w", FinType::seq(N),
        Formula::forall("z", N, exists_in("n", N, Term::var("w", FinType::seq(N)), mono)));
    CollapseResult out = monotone_collapse(in, "w", true);
    FiniteStructure s(3, 3, 3, static_cast<unsigned>(trial + 5));
    bool a = eval_formula(in, s);
    bool b = eval_formula(out.formula, s);
    ++checked;
    REQUIRE(a == b);
  }
  CHECK(checked == 400);
}

TEST_CASE("infinitesimal prefix") {
  TypeEnv env = real_fn_env();
  // (forall-eps (e)) (forall-st x)(exists-st y) phi(x, y, e)
  Formula in = parse_formula(
      "(forall-eps (e) (forall-st ((x N)) (exists-st ((y N)) (atom Q x y e))))", env);
  NormalForm nf = prefix_infinitesimal(in, true);
  CHECK(nf.uVars.size() == 1);
  CHECK(nf.eVars.size() == 2);  // witness and the threshold
  CHECK(is_internal(nf.matrix));

  // Vacuous prefix: the body comes back untouched.
  Formula vac = parse_formula("(forall-eps (e) (forall-st ((x N)) (exists-st ((y N)) (atom P x y))))");
  NormalForm nv = prefix_infinitesimal(vac, false);
  CHECK(Formula::alpha_eq(nv.to_formula(),
                          parse_formula("(forall-st ((x N)) (exists-st ((y N)) (atom P x y)))")));

  CHECK_THROWS_AS(prefix_infinitesimal(parse_formula("(st x)"), false), ShapeError);
}

TEST_CASE("the driver resolves infinitesimal prefixes") {
  // A quantifier over all infinitesimals in front of a normalizable body goes
  // through the threshold construction inside the driver.
  TypeEnv env;
  env.bind("f", FinType::arrow(Formula::real_sort(), Formula::real_sort()));
  Formula in = parse_formula(
      "(forall-eps (e) (forall-st ((x N)) (exists-st ((y N)) (atom Q x y e))))", env);
  NormalizeOptions opts;
  opts.monotoneVars = {"y"};
  NormalizeResult r = to_normal_form(in, opts);
  CHECK(r.normalForm.uVars.size() == 1);
  CHECK(r.normalForm.eVars.size() == 2);  // witness and threshold, both collapsed
  for (const auto& v : r.normalForm.eVars) CHECK(v.type.is_base());
  bool sawUnfold = false;
  for (const auto& s : r.trace.steps)
    if (s.rule == "unfold-infinitesimal") sawUnfold = true;
  CHECK(sawUnfold);
}

TEST_CASE("herbrandized choice") {
  Formula in = parse_formula("(forall-st ((x N)) (exists-st ((y N)) (atom P x y)))");
  Formula out = apply_hac(in);
  CHECK(out.kind() == Formula::Kind::ExistsSt);
  CHECK(out.qtype() == FinType::arrow(N, FinType::seq(N)));
  CHECK(out.body().kind() == Formula::Kind::ForallSt);

  // Empty universal block: identity.
  Formula only = parse_formula("(exists-st ((y N)) (atom P y))");
  CHECK(Formula::alpha_eq(apply_hac(only), only));
}

TEST_CASE("transfer fragment herbrandizes to the search operator") {
  // The normal form of the universal-number transfer fragment, through
  // choice and collapse, yields a single-valued search functional.
  NormalForm huwji = definition_normal_form("Pi01-TRANS", {});
  Formula chosen = apply_hac(huwji.to_formula());
  CHECK(chosen.kind() == Formula::Kind::ExistsSt);
  CollapseResult mu = monotone_collapse(chosen, chosen.qvar(), true);
  CHECK(mu.formula.kind() == Formula::Kind::ExistsSt);
  CHECK(mu.formula.qtype() == FinType::arrow(FinType::arrow(N, N), N));
}

TEST_CASE("driver reaches the documented normal forms") {
  TypeEnv env = real_fn_env();
  NormalizeOptions opts;
  opts.monotoneVars = {"N", "N2"};

  auto r = to_normal_form(parse_formula("(def ns-uniform-continuity f)", env), opts);
  CHECK(r.normalForm.uVars.size() == 1);
  CHECK(r.normalForm.eVars.size() == 1);
  CHECK(r.normalForm.eVars[0].type == N);

  auto c = to_normal_form(parse_formula("(def ns-continuity f)", env), opts);
  CHECK(c.normalForm.uVars.size() == 2);
  CHECK(c.normalForm.eVars.size() == 1);

  // Output survives printing, reparsing and re-recognition.
  for (const auto* text : {"(def ns-uniform-continuity f)", "(def ns-continuity f)",
                           "(def ns-integrability f)"}) {
    auto nf = to_normal_form(parse_formula(text, env), opts).normalForm;
    Formula printed = parse_formula(nf.to_string(), env);
    CHECK(recognize(printed));
  }

  // Internal formulas normalize to themselves with a no-op trace.
  Formula internal = parse_formula("(=0 x y)");
  auto ri = to_normal_form(internal);
  CHECK(Formula::alpha_eq(ri.normalForm.to_formula(), internal));
  REQUIRE(ri.trace.steps.size() == 1);
  CHECK(ri.trace.steps[0].rule == "already-normal");

  CHECK_THROWS_AS(to_normal_form(parse_formula("(st x)")), NotPure);
}

TEST_CASE("shuffle moves preserve truth on degenerate structures") {
  nsxtest::Rng rng(271);
  int moved = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    Formula f = nsxtest::random_formula(rng, {"a"}, 4);
    std::string move;
    auto r = shuffle_step(f, &move);
    if (!r) continue;
    // The nonstandard-number unfolding is justified by the unboundedness of
    // the naturals, which no finite structure models; every other move is a
    // plain classical equivalence.
    if (move == "unbounded-unfold") continue;
    FiniteStructure s(3, 3, 2, static_cast<unsigned>(trial + 3));
    try {
      bool before = eval_formula(f, s);
      bool after = eval_formula(*r, s);
      ++moved;
      REQUIRE(before == after);
    } catch (const Unrepresentable&) {
      continue;
    }
  }
  CHECK(moved > 100);
}

TEST_CASE("traces replay") {
  TypeEnv env = real_fn_env();
  NormalizeOptions opts;
  opts.monotoneVars = {"N", "N2"};
  for (const auto* text :
       {"(def ns-continuity f)", "(def ns-uniform-continuity f)", "(def ns-integrability f)",
        "(def Pi01-TRANS)"}) {
    auto r = to_normal_form(parse_formula(text, env), opts);
    for (const auto& s : r.trace.steps) {
      INFO(text, " step ", s.rule);
      REQUIRE(replay_step(s));
    }
  }
}
