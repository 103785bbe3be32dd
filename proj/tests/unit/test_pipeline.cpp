#include <doctest.h>

#include "gen.hpp"
#include "nsx/demos.hpp"
#include "nsx/error.hpp"
#include <json.hpp>

#include "nsx/json_io.hpp"
#include "nsx/sst.hpp"

using namespace nsx;

namespace {
const FinType N = FinType::base();
}

TEST_CASE("rational coding round trips") {
  nsxtest::Rng rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    uint64_t num = rng.below(300);
    uint64_t den = 1 + rng.below(300);
    Rational q = decode_rational(encode_rational_pair(num, den));
    CHECK(q == Rational(static_cast<int64_t>(num), static_cast<int64_t>(den)));
  }
  CHECK_THROWS_AS(decode_rational(encode_rational_pair(3, 0)), Error);
}

TEST_CASE("pipeline scripts parse and serialize") {
  for (const auto& [name, text] : demo_scripts()) {
    INFO(name);
    PipelineScript sc = parse_pipeline(text);
    // The serialized form parses back to a script that runs identically.
    PipelineScript again = parse_pipeline(sc.to_text());
    ExtractionResult a = run_pipeline(sc);
    ExtractionResult b = run_pipeline(again);
    CHECK(Term::alpha_eq(a.witness, b.witness));
    CHECK(Formula::alpha_eq(a.matrix, b.matrix));
  }
}

TEST_CASE("run_pipeline assembles a typed witness") {
  PipelineScript sc = parse_pipeline(demo_scripts()[0].second);  // continuity
  ExtractionResult r = run_pipeline(sc);
  CHECK_NOTHROW(r.validate());
  FinType t = typecheck(r.witness);
  // real -> number -> candidate sequence
  REQUIRE(t.is_arrow());
  CHECK(t.cod().cod() == FinType::seq(N));
}

TEST_CASE("replay failures are reported by step") {
  PipelineScript sc = parse_pipeline(demo_scripts()[0].second);
  sc.steps.push_back({"idealize", {}});  // nothing left to idealize
  CHECK_THROWS_AS(run_pipeline(sc), ReplayFailure);

  PipelineScript bad = sc;
  bad.steps = {{"no-such-rule", {}}};
  CHECK_THROWS_AS(run_pipeline(bad), ReplayFailure);
}

TEST_CASE("comparison selection") {
  RealFn f = RealFn::linear(Rational(2), Rational(-1)).named("2x-1");
  // Candidate list containing the exact root 1/2 in scaled-grid form.
  Term cands = Term::seq_lit({Term::num(2), Term::num(1)}, N);
  Term sel = select_by_comparison(cands, {f}, 10, CandidateDecode::ScaledGrid);
  CHECK(decode_candidates(sel, CandidateDecode::ScaledGrid).at(0) == Rational(1, 2));

  Term empty = Term::seq_lit({}, N);
  CHECK_THROWS_AS(select_by_comparison(empty, {f}, 10, CandidateDecode::ScaledGrid), NoCandidate);

  // No candidate within tolerance.
  Term off = Term::seq_lit({Term::num(1), Term::num(0)}, N);  // only 0/1
  CHECK_THROWS_AS(select_by_comparison(off, {f}, 10, CandidateDecode::ScaledGrid), NoCandidate);
}

TEST_CASE("pair-coded grids decode to the expected rationals") {
  Term grid = Term::app(combinators::mk_grid(), Term::num(4));
  Term value = eval(grid, 10'000'000);
  std::vector<Rational> qs = decode_candidates(value, CandidateDecode::CodedRational);
  REQUIRE(qs.size() == 5);
  for (int j = 0; j <= 4; ++j) CHECK(qs[j] == Rational(j, 4));

  // Selection over the coded grid picks a grid point near the root.
  RealFn f = RealFn::linear(Rational(2), Rational(-1));
  Term sel = select_by_comparison(grid, {f}, 4, CandidateDecode::CodedRational);
  Rational q = decode_rational(*sel.as_numeral());
  CHECK(f(q).abs() < Rational(1, 4));
}

TEST_CASE("reverse embedding") {
  Term identity = Term::lam("x", N, Term::var("x", N));
  Formula phi = parse_formula("(=0 x y)");
  TransformTrace trace;
  NormalForm nf = reverse_embed(identity, {{"x", N}}, {"y", N}, phi, &trace);
  CHECK(Formula::alpha_eq(nf.to_formula(),
                          parse_formula("(forall-st ((x N)) (exists-st ((y N)) (=0 x y)))")));
  REQUIRE(trace.steps.size() == 1);
  CHECK(trace.steps[0].rule == "reverse-embed");

  Term open = Term::var("loose", N);
  CHECK_THROWS_AS(reverse_embed(open, {{"x", N}}, {"y", N}, phi), NotClosed);
}

TEST_CASE("extraction results survive the JSON round trip") {
  PipelineScript sc = parse_pipeline(demo_scripts()[2].second);  // ivt
  ExtractionResult r = run_pipeline(sc);
  std::string json = extraction_to_json(r);
  ExtractionResult back = extraction_from_json(json);
  CHECK(Term::alpha_eq(back.witness, r.witness));
  CHECK(Formula::alpha_eq(back.matrix, r.matrix));
  CHECK(back.inputs.size() == r.inputs.size());
  CHECK(back.decode == r.decode);
  CHECK(back.trace.steps.size() == r.trace.steps.size());
}

TEST_CASE("a search-operator assumption converts into a root-finding contract") {
  // The relative form: assuming a single-valued search functional, the
  // approximate-root statement normalizes with the functional in the
  // universal block.
  TypeEnv env;
  env.bind("f", FinType::arrow(Formula::real_sort(), Formula::real_sort()));
  Formula rel = parse_formula(
      "(implies (exists-st ((mu (-> (-> N N) N))) (forall-st ((h (-> N N)))"
      "  (implies (exists ((n N)) (=0 (app h n) 0)) (=0 (app h (app mu h)) 0))))"
      " (forall-st ((k N)) (exists-st ((q R)) (and (atom in01 q) (atom alt (app f q) k)))))",
      env);
  NormalizeResult r = to_normal_form(rel);
  CHECK(r.normalForm.uVars.size() == 2);   // the functional and the precision
  CHECK(r.normalForm.eVars.size() == 2);   // the root and the instantiated test function
  for (const auto& s : r.trace.steps) REQUIRE(replay_step(s));
}

TEST_CASE("the JSON encoders emit well-formed documents") {
  CHECK_NOTHROW(nlohmann::json::parse(registry_to_json()));
  auto reg = nlohmann::json::parse(registry_to_json());
  CHECK(reg.at("definitions").size() == 10);

  SstResult sr = sst_translate(parse_formula("(st z)"));
  auto sj = nlohmann::json::parse(sst_to_json(sr));
  CHECK(sj.contains("translated"));
  CHECK(sj.at("clauses").size() >= 1);

  VerificationReport rep;
  rep.checked = 3;
  rep.failures.push_back({"k=2", "candidate 1 fails the matrix"});
  rep.ok = false;
  auto vj = nlohmann::json::parse(verification_to_json(rep));
  CHECK(vj.at("status") == "fail");
  CHECK(vj.at("failures").size() == 1);
}

TEST_CASE("every demo passes at its default bounds") {
  DemoConfig cfg;
  // Tighter sweeps keep the unit suite fast; the acceptance suite runs the
  // documented bounds.
  cfg.kMaxContinuity = 8;
  cfg.kMaxUniform = 8;
  cfg.kMaxIvt = 8;
  cfg.denom = 64;
  cfg.uniformDenom = 32;
  cfg.mctZeroMax = 10;
  for (const auto& name : demo_names()) {
    INFO(name);
    DemoReport rep = run_demo(name, cfg);
    for (const auto& line : rep.lines) INFO(line);
    REQUIRE(rep.ok);
  }
}
