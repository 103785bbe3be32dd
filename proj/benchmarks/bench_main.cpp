#include <benchmark/benchmark.h>

#include "nsx/definitions.hpp"
#include "nsx/demos.hpp"
#include "nsx/oracles.hpp"
#include "nsx/sst.hpp"

using namespace nsx;

namespace {

const FinType N0 = FinType::base();

static void BM_EvalRecursor(benchmark::State& state) {
  // add(500, 500) through the recursor.
  Term add = combinators::mk_add();
  Term t = Term::apps(add, {Term::num(500), Term::num(500)});
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval(t, 1'000'000));
  }
}
BENCHMARK(BM_EvalRecursor);

static void BM_MaxSeq(benchmark::State& state) {
  std::vector<Term> es;
  for (int i = 0; i < 64; ++i) es.push_back(Term::num((i * 37) % 97));
  Term t = Term::app(combinators::mk_max_seq(), Term::seq_lit(es, N0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval(t, 1'000'000));
  }
}
BENCHMARK(BM_MaxSeq);

static void BM_NormalizeUniformContinuity(benchmark::State& state) {
  TypeEnv env;
  env.bind("f", FinType::arrow(Formula::real_sort(), Formula::real_sort()));
  Formula f = parse_formula("(def ns-uniform-continuity f)", env);
  NormalizeOptions opts;
  opts.monotoneVars = {"N"};
  for (auto _ : state) {
    benchmark::DoNotOptimize(to_normal_form(f, opts));
  }
}
BENCHMARK(BM_NormalizeUniformContinuity);

static void BM_FixedPoint(benchmark::State& state) {
  NormalForm nf = definition_normal_form(
      "ns-uniform-continuity",
      {Term::var("f", FinType::arrow(Formula::real_sort(), Formula::real_sort()))});
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_fixed_point(nf));
  }
}
BENCHMARK(BM_FixedPoint);

static void BM_FanCover(benchmark::State& state) {
  std::vector<uint64_t> g(8);
  for (uint64_t leaf = 0; leaf < 8; ++leaf) g[leaf] = ((leaf >> 2) & 1u) + 1;
  FanWitness theta = special_fan_from_muc(g, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_scf(theta, g, 3));
  }
}
BENCHMARK(BM_FanCover);

static void BM_RiemannOracle(benchmark::State& state) {
  RealFn f = RealFn::identity();
  for (auto _ : state) {
    benchmark::DoNotOptimize(riemann_modulus_validates(f, 8, 4, 12));
  }
}
BENCHMARK(BM_RiemannOracle);

}  // namespace

BENCHMARK_MAIN();
