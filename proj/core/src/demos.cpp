#include "nsx/demos.hpp"

#include <algorithm>

#include "nsx/definitions.hpp"
#include "nsx/error.hpp"
#include "nsx/sst.hpp"
#include "nsx/structure.hpp"

namespace nsx {

namespace {

const FinType N0 = FinType::base();
const FinType R = Formula::real_sort();
const FinType NN = FinType::arrow(FinType::base(), FinType::base());
const FinType RR = FinType::arrow(Formula::real_sort(), Formula::real_sort());

Term vN(const std::string& n) { return Term::var(n, N0); }

Term modulus_identity() { return Term::lam("k", N0, vN("k")); }
Term modulus_double() {
  return Term::lam("k", N0, Term::apps(combinators::mk_add(), {vN("k"), vN("k")}));
}

Term dummy_real() { return Term::lam("z", N0, Term::zero()); }

struct ContinuityCase {
  std::string label;
  RealFn f;
  Term modulus;
};

std::vector<ContinuityCase> continuity_suite() {
  return {
      {"x", RealFn::identity().named("x"), modulus_identity()},
      {"2x", RealFn::linear(Rational(2), Rational(0)).named("2x"), modulus_double()},
      {"x/2", RealFn::linear(Rational(1, 2), Rational(0)).named("x/2"), modulus_identity()},
  };
}

struct IvtCase {
  std::string label;
  RealFn f;
  Term modulus;
};

std::vector<IvtCase> ivt_suite() {
  return {
      {"2x-1", RealFn::linear(Rational(2), Rational(-1)).named("2x-1"), modulus_double()},
      {"x-1/2", RealFn::linear(Rational(1), Rational(-1, 2)).named("x-1/2"), modulus_identity()},
      {"x^2-1/2", RealFn::quadratic(Rational(1), Rational(0), Rational(-1, 2)).named("x^2-1/2"),
       modulus_double()},
  };
}

Formula dlt(const Term& a, const Term& b, const Term& n) {
  return Formula::atom_pred("dlt", {a, b, n});
}

// ---------------------------------------------------------------------------
// Script builders

PipelineScript continuity_script(const std::string& label, const Term& modulus) {
  PipelineScript sc;
  sc.name = "continuity-" + label;
  sc.params = {{"f", RR}};
  TypeEnv env;
  env.bind("f", RR);
  sc.input = parse_formula("(def ns-continuity f)", env);
  sc.steps = {{"normalize", {}}};
  sc.monotone = {"N"};
  sc.witness = Term::lam("x", R, Term::lam("k", N0,
                                           Term::seq_lit({Term::app(modulus, vN("k"))}, N0)));
  sc.contractInputs = {{"x", R, true}, {"k", N0, true}, {"f", RR, false}};
  sc.candidate = {"N", N0};
  sc.decode = CandidateDecode::Nat;
  Term f = Term::var("f", RR), x = Term::var("x", R), y = Term::var("y", R);
  sc.target = Formula::forall(
      "y", R,
      Formula::implies(dlt(x, y, vN("N")),
                       dlt(Term::app(f, x), Term::app(f, y), vN("k"))));
  return sc;
}

PipelineScript uniform_continuity_script(const std::string& label, const Term& modulus) {
  PipelineScript sc;
  sc.name = "uniform-continuity-" + label;
  sc.params = {{"f", RR}};
  TypeEnv env;
  env.bind("f", RR);
  sc.input = parse_formula("(def ns-uniform-continuity f)", env);
  sc.steps = {{"normalize", {}}};
  sc.monotone = {"N"};
  sc.witness = Term::lam("k", N0, Term::seq_lit({Term::app(modulus, vN("k"))}, N0));
  sc.contractInputs = {{"k", N0, true}, {"f", RR, false}};
  sc.candidate = {"N", N0};
  sc.decode = CandidateDecode::Nat;
  Term f = Term::var("f", RR), x = Term::var("x", R), y = Term::var("y", R);
  sc.target = Formula::forall(
      "x", R,
      Formula::forall(
          "y", R,
          Formula::implies(
              Formula::conj(Formula::atom_pred("in01", {x}), Formula::atom_pred("in01", {y})),
              Formula::implies(dlt(x, y, vN("N")),
                               dlt(Term::app(f, x), Term::app(f, y), vN("k"))))));
  return sc;
}

PipelineScript ivt_script(const std::string& label) {
  PipelineScript sc;
  sc.name = "ivt-" + label;
  sc.params = {{"f", RR}};
  TypeEnv env;
  env.bind("f", RR);
  sc.input = parse_formula(
      "(implies (def ns-uniform-continuity f)"
      " (forall-st ((k N)) (exists-st ((q R)) (and (atom in01 q) (atom alt (app f q) k)))))",
      env);
  sc.steps = {{"normalize", {}}};
  sc.monotone = {"N"};
  // Candidates: the grid j/(g(2k)+1) in the scaled-grid sequence convention
  // (denominator first, then the numerators).  The doubled precision
  // guarantees a grid point with |f| below 1/(2k).
  Term g = Term::var("g", NN);
  Term den = Term::succ(Term::app(g, Term::apps(combinators::mk_add(), {vN("k"), vN("k")})));
  sc.witness = Term::lam(
      "g", NN,
      Term::lam("k", N0,
                Term::seq_append(Term::seq_lit({den}, N0),
                                 Term::app(combinators::mk_range(), Term::succ(den)))));
  sc.contractInputs = {{"g", NN, true}, {"k", N0, true}, {"f", RR, false}};
  sc.candidate = {"q", R};
  sc.decode = CandidateDecode::ScaledGrid;
  Term f = Term::var("f", RR), q = Term::var("q", R);
  sc.target = Formula::conj(Formula::atom_pred("in01", {q}),
                            Formula::atom_pred("alt", {Term::app(f, q), vN("k")}));
  return sc;
}

PipelineScript riemann_script() {
  PipelineScript sc;
  sc.name = "riemann-x";
  sc.params = {{"f", RR}};
  TypeEnv env;
  env.bind("f", RR);
  sc.input = parse_formula("(def ns-integrability f)", env);
  sc.steps = {{"normalize", {}}};
  sc.monotone = {"N", "N2"};
  Term g = Term::var("g", NN);
  sc.witness = Term::lam(
      "g", NN,
      Term::lam("k", N0,
                Term::seq_lit({Term::app(g, Term::apps(combinators::mk_add(), {vN("k"), vN("k")}))},
                              N0)));
  sc.contractInputs = {{"g", NN, true}, {"k", N0, true}, {"f", RR, false}};
  sc.candidate = {"M", N0};
  sc.decode = CandidateDecode::Nat;
  const FinType PART = FinType::seq(R);
  Term f = Term::var("f", RR), p = Term::var("p", PART), q = Term::var("q", PART);
  sc.target = Formula::forall(
      "p", PART,
      Formula::forall(
          "q", PART,
          Formula::implies(
              Formula::conj(Formula::atom_pred("inpart", {p}), Formula::atom_pred("inpart", {q})),
              Formula::implies(
                  Formula::conj(Formula::atom_pred("meshlt", {p, vN("M")}),
                                Formula::atom_pred("meshlt", {q, vN("M")})),
                  Formula::atom_pred("sumdlt", {f, p, q, vN("k")})))));
  return sc;
}

// Modulus-hypothesis sweep: the supplied modulus really witnesses uniform
// continuity of f on the checked grid.
bool modulus_hypothesis_holds(const RealFn& f, const Term& modulus, int lMax, int denom,
                              uint64_t fuel) {
  for (int l = 1; l <= lMax; ++l) {
    Term applied = Term::app(modulus, Term::num(l));
    auto n = eval(applied, fuel).as_numeral();
    if (!n || *n == 0) return false;
    Rational delta = Rational::inv(static_cast<int64_t>(*n));
    Rational tol = Rational::inv(l);
    for (int i = 0; i <= denom; ++i) {
      Rational x(i, denom);
      // Only the window |x-y| < delta matters.
      for (int j = i; j <= denom; ++j) {
        Rational y(j, denom);
        if (!(y - x < delta)) break;
        if (!((f(x) - f(y)).abs() < tol)) return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Individual demos

DemoReport demo_continuity(const DemoConfig& cfg) {
  DemoReport rep;
  rep.name = "continuity";
  for (const auto& c : continuity_suite()) {
    PipelineScript sc = continuity_script(c.label, c.modulus);
    ExtractionResult r = run_pipeline(sc);
    rep.extractions.push_back(r);
    rep.lines.push_back("  witness[" + c.label + "]: " + r.witness.to_string());

    std::vector<DomainPoint> domain;
    for (int xi = 0; xi <= cfg.xDenom; ++xi) {
      for (int k = 1; k <= cfg.kMaxContinuity; ++k) {
        DomainPoint pt;
        pt.label = "f=" + c.label + " x=" + Rational(xi, cfg.xDenom).to_string() +
                   " k=" + std::to_string(k);
        pt.bindings["x"] = RatValue::of(Rational(xi, cfg.xDenom));
        pt.bindings["k"] = RatValue::of(static_cast<uint64_t>(k));
        pt.bindings["f"] = RatValue::of_realfn(c.f);
        pt.termArgs = {dummy_real(), Term::num(static_cast<uint64_t>(k))};
        domain.push_back(std::move(pt));
      }
    }
    EvalBounds bounds;
    bounds.denomBound = cfg.denom;
    bounds.fuel = cfg.fuel;
    VerificationReport v = verify_witness(r, domain, bounds);
    rep.check(v.ok, "f=" + c.label + ": modulus contract on " + std::to_string(v.checked) +
                        " inputs, grid 1/" + std::to_string(cfg.denom) +
                        (v.ok ? "" : " first failure: " + v.failures.front().input + " " +
                                         v.failures.front().detail));
  }
  return rep;
}

DemoReport demo_uniform_continuity(const DemoConfig& cfg) {
  DemoReport rep;
  rep.name = "uniform-continuity";
  for (const auto& c : continuity_suite()) {
    PipelineScript sc = uniform_continuity_script(c.label, c.modulus);
    ExtractionResult r = run_pipeline(sc);
    rep.extractions.push_back(r);
    rep.lines.push_back("  witness[" + c.label + "]: " + r.witness.to_string());

    std::vector<DomainPoint> domain;
    for (int k = 1; k <= cfg.kMaxUniform; ++k) {
      DomainPoint pt;
      pt.label = "f=" + c.label + " k=" + std::to_string(k);
      pt.bindings["k"] = RatValue::of(static_cast<uint64_t>(k));
      pt.bindings["f"] = RatValue::of_realfn(c.f);
      pt.termArgs = {Term::num(static_cast<uint64_t>(k))};
      domain.push_back(std::move(pt));
    }
    EvalBounds bounds;
    bounds.denomBound = cfg.uniformDenom;
    bounds.fuel = cfg.fuel;
    VerificationReport v = verify_witness(r, domain, bounds);
    rep.check(v.ok, "f=" + c.label + ": uniform modulus contract on " +
                        std::to_string(v.checked) + " inputs, grid 1/" +
                        std::to_string(cfg.uniformDenom));
  }
  return rep;
}

DemoReport demo_ivt(const DemoConfig& cfg) {
  DemoReport rep;
  rep.name = "ivt";
  for (const auto& c : ivt_suite()) {
    PipelineScript sc = ivt_script(c.label);
    ExtractionResult r = run_pipeline(sc);
    rep.extractions.push_back(r);
    rep.lines.push_back("  witness[" + c.label + "]: " + r.witness.to_string());

    rep.check((c.f(Rational(0)) * c.f(Rational(1))).sign() < 0,
              "f=" + c.label + ": sign change on [0,1]");
    rep.check(modulus_hypothesis_holds(c.f, c.modulus, 16, 64, cfg.fuel),
              "f=" + c.label + ": modulus hypothesis on grid 1/64, l <= 16");

    bool allK = true;
    bool agree = true;
    std::string detail;
    for (int k = 1; k <= cfg.kMaxIvt; ++k) {
      Term applied = Term::apps(r.witness, {c.modulus, Term::num(static_cast<uint64_t>(k))});
      Term selected = select_by_comparison(applied, {c.f, cfg.fuel}, static_cast<uint64_t>(k),
                                           CandidateDecode::ScaledGrid);
      Rational q = decode_candidates(selected, CandidateDecode::ScaledGrid).at(0);
      Rational tol = Rational::inv(k);
      if (!(c.f(q).abs() < tol)) {
        allK = false;
        detail = " |f(q)| >= 1/k at k=" + std::to_string(k);
        break;
      }
      Rational oq = approx_ivt_oracle(c.f, static_cast<uint64_t>(k), cfg.ivtOracleDenom);
      if (!(c.f(oq).abs() < tol)) {
        agree = false;
        break;
      }
    }
    rep.check(allK, "f=" + c.label + ": |f(t(f,g,k))| < 1/k for k <= " +
                        std::to_string(cfg.kMaxIvt) + detail);
    rep.check(agree, "f=" + c.label + ": grid-search oracle agrees at every k");

    std::vector<DomainPoint> domain;
    for (int k = 1; k <= cfg.kMaxIvt; ++k) {
      DomainPoint pt;
      pt.label = "f=" + c.label + " k=" + std::to_string(k);
      pt.bindings["k"] = RatValue::of(static_cast<uint64_t>(k));
      pt.bindings["f"] = RatValue::of_realfn(c.f);
      pt.termArgs = {c.modulus, Term::num(static_cast<uint64_t>(k))};
      domain.push_back(std::move(pt));
    }
    EvalBounds bounds;
    bounds.fuel = cfg.fuel;
    VerificationReport v = verify_witness(r, domain, bounds);
    rep.check(v.ok, "f=" + c.label + ": candidate-list contract on " + std::to_string(v.checked) +
                        " inputs");
  }
  return rep;
}

DemoReport demo_riemann(const DemoConfig& cfg) {
  DemoReport rep;
  rep.name = "riemann";
  RealFn f = RealFn::identity().named("x");
  Term g = modulus_identity();

  PipelineScript sc = riemann_script();
  ExtractionResult r = run_pipeline(sc);
  rep.extractions.push_back(r);
  rep.lines.push_back("  witness[x]: " + r.witness.to_string());

  bool allK = true;
  bool oracleOK = true;
  for (int k = 1; k <= cfg.kMaxRiemann; ++k) {
    Term applied = Term::apps(r.witness, {g, Term::num(static_cast<uint64_t>(k))});
    Term value = eval(applied, cfg.fuel);
    uint64_t modulus = *value.seq_elements().at(0).as_numeral();
    if (!riemann_modulus_validates(f, modulus, static_cast<uint64_t>(k), cfg.riemannDenom)) {
      allK = false;
      break;
    }
    auto least = riemann_modulus_oracle(f, static_cast<uint64_t>(k), cfg.riemannDenom);
    if (!least || modulus < *least) {
      oracleOK = false;
      break;
    }
  }
  rep.check(allK, "f=x g=k: extracted modulus validates all partition pairs, denominators <= " +
                      std::to_string(cfg.riemannDenom));
  rep.check(oracleOK, "f=x g=k: extracted modulus is at least the exhaustive-scan optimum");

  // The hand sum from the definition: f(x)=x, uniform 4 cells, left tags.
  Partition p4 = Partition::uniform(4, Partition::TagRule::Left);
  rep.check(riemann_sum(f, p4) == Rational(3, 8), "S_pi(x) = 3/8 on the left-tagged 4-grid");

  std::vector<DomainPoint> domain;
  for (int k = 1; k <= cfg.kMaxRiemann; ++k) {
    DomainPoint pt;
    pt.label = "k=" + std::to_string(k);
    pt.bindings["k"] = RatValue::of(static_cast<uint64_t>(k));
    pt.bindings["f"] = RatValue::of_realfn(f);
    pt.termArgs = {g, Term::num(static_cast<uint64_t>(k))};
    domain.push_back(std::move(pt));
  }
  EvalBounds bounds;
  bounds.fuel = cfg.fuel;
  bounds.partitions = grid_partition_family(cfg.riemannDenom, 4);
  VerificationReport v = verify_witness(r, domain, bounds);
  rep.check(v.ok, "contract sweep over the reduced partition family (" +
                      std::to_string(bounds.partitions.size()) + " partitions)");
  return rep;
}

DemoReport demo_mct_mu(const DemoConfig& cfg) {
  DemoReport rep;
  rep.name = "mct-mu";
  auto mu = [&](const std::vector<uint64_t>& f) { return mu_bounded(f, cfg.mctWindow); };

  bool rateOK = true, recoverOK = true;
  for (uint64_t p = 0; p <= cfg.mctZeroMax && rateOK && recoverOK; ++p) {
    std::vector<uint64_t> f(cfg.mctWindow + 1, 1);
    f[p] = 0;
    for (int k = 1; k <= cfg.kMaxMct; ++k) {
      uint64_t N = mct_rate(mu, f, static_cast<uint64_t>(k), cfg.mctWindow);
      // The sequence is monotone, so the spread over [N, window] is realized
      // against the left endpoint.
      for (uint64_t m = N; m <= cfg.mctWindow; ++m) {
        if (!leuk_close(f, N, m, static_cast<uint64_t>(k))) {
          rateOK = false;
          break;
        }
      }
      if (!rateOK) break;
    }
    uint64_t rec = mu_from_rate(
        [&](uint64_t k) { return mct_rate(mu, f, k, cfg.mctWindow); }, f);
    if (rec != p) recoverOK = false;
  }
  rep.check(rateOK, "rate validates the Cauchy window over " + std::to_string(cfg.mctWindow) +
                        " terms for every first zero p <= " + std::to_string(cfg.mctZeroMax));
  rep.check(recoverOK, "mu_from_rate recovers the least zero exactly");

  std::vector<uint64_t> nozero(cfg.mctWindow + 1, 1);
  bool noneOK = mct_rate(mu, nozero, 4, cfg.mctWindow) == 0;
  bool noneRec = false;
  try {
    mu_from_rate([&](uint64_t k) { return mct_rate(mu, nozero, k, cfg.mctWindow); }, nozero);
  } catch (const NoZero&) {
    noneRec = true;
  }
  rep.check(noneOK, "zero-free input: rate 0 (constant sequence)");
  rep.check(noneRec, "zero-free input: recovery reports no zero");

  // Kernel-level agreement: the bounded search combinator computes the same
  // least zero as the oracle.
  bool kernelOK = true;
  for (uint64_t p = 0; p <= 12 && kernelOK; ++p) {
    std::vector<Term> entries;
    for (uint64_t i = 0; i < 16; ++i) entries.push_back(Term::num(i == p ? 0 : 1));
    Term table = Term::seq_lit(std::move(entries), N0);
    Term found = eval(Term::app(combinators::mk_first_zero(), table), cfg.fuel);
    std::vector<uint64_t> f(16, 1);
    f[p] = 0;
    kernelOK = found.as_numeral() == mu_bounded(f, 15);
  }
  rep.check(kernelOK, "bounded-search combinator agrees with the scan oracle");

  // Pipeline illustration: the convergence statement under a search-operator
  // assumption normalizes with a replayable trace.
  try {
    TypeEnv env;
    env.bind("x", FinType::arrow(N0, R));
    Formula mct = parse_formula(
        "(implies (exists-st ((mu (-> (-> N N) N))) (forall-st ((h (-> N N)))"
        "  (implies (exists ((n N)) (=0 (app h n) 0)) (=0 (app h (app mu h)) 0))))"
        " (def ns-convergence x))",
        env);
    NormalizeOptions opts;
    opts.monotoneVars = {"m", "m~1"};
    NormalizeResult nr = to_normal_form(mct, opts);
    bool replays = true;
    for (const auto& s : nr.trace.steps)
      if (!replay_step(s)) replays = false;
    rep.check(replays, "search-to-convergence normalization trace replays (" +
                           std::to_string(nr.trace.steps.size()) + " steps)");
  } catch (const Error& e) {
    rep.fail(std::string("normalization: ") + e.what());
  }
  return rep;
}

std::vector<std::pair<std::string, std::vector<uint64_t>>> fan_suite(int depth) {
  auto table = [&](const std::string& label, std::function<uint64_t(const std::vector<uint8_t>&)> g) {
    std::vector<uint64_t> t;
    for (uint64_t leaf = 0; leaf < (uint64_t(1) << depth); ++leaf) {
      std::vector<uint8_t> bits(depth);
      for (int i = 0; i < depth; ++i) bits[i] = (leaf >> (depth - 1 - i)) & 1u;
      t.push_back(g(bits));
    }
    return std::make_pair(label, t);
  };
  std::vector<std::pair<std::string, std::vector<uint64_t>>> suite;
  for (uint64_t c = 0; c <= 3; ++c)
    suite.push_back(table("const " + std::to_string(c), [c](const std::vector<uint8_t>&) { return c; }));
  for (int i = 0; i < depth; ++i)
    for (uint64_t c = 0; c <= 1; ++c)
      suite.push_back(table("bit" + std::to_string(i) + "+" + std::to_string(c),
                            [i, c](const std::vector<uint8_t>& b) { return b[i] + c; }));
  suite.push_back(table("sum of bits", [](const std::vector<uint8_t>& b) {
    return static_cast<uint64_t>(b[0] + b[1] + b[2]);
  }));
  suite.push_back(table("2*bit0+bit2", [](const std::vector<uint8_t>& b) {
    return static_cast<uint64_t>(2 * b[0] + b[2]);
  }));
  suite.push_back(table("3-bit0", [](const std::vector<uint8_t>& b) {
    return static_cast<uint64_t>(3 - b[0]);
  }));
  suite.push_back(table("if bit1 then 2 else bit2", [](const std::vector<uint8_t>& b) {
    return static_cast<uint64_t>(b[1] ? 2 : b[2]);
  }));
  return suite;
}

DemoReport demo_stp_fan(const DemoConfig& cfg) {
  DemoReport rep;
  rep.name = "stp-fan";
  int d = cfg.depth;

  bool allOK = true;
  std::string failLabel;
  for (const auto& [label, g] : fan_suite(d)) {
    FanWitness theta = special_fan_from_muc(g, d);
    std::string cx;
    if (!check_scf(theta, g, d, &cx)) {
      allOK = false;
      failLabel = label + " (" + cx + ")";
      break;
    }
  }
  rep.check(allOK, "cover property holds for the whole table suite, all prefix-closed depth-" +
                       std::to_string(d) + " trees" + (allOK ? "" : ": " + failLabel));

  // Modulus spot values.
  {
    std::vector<uint64_t> y0(8), y2(8), yc(8, 5);
    for (uint64_t leaf = 0; leaf < 8; ++leaf) {
      y0[leaf] = (leaf >> 2) & 1u;  // depends on bit 0
      y2[leaf] = leaf & 1u;         // depends on bit 2
    }
    rep.check(fan_modulus_muc(y0, 3) == 1, "modulus of bit-0 functional is 1");
    rep.check(fan_modulus_muc(yc, 3) == 0, "modulus of a constant functional is 0");
    rep.check(fan_modulus_muc(y2, 3) == 3, "modulus of bit-2 functional is 3");
  }

  // Spec'd constructions.
  {
    std::vector<uint64_t> g2(8, 2);
    FanWitness t2 = special_fan_from_muc(g2, d);
    rep.check(t2.bound == 2 && t2.candidates.size() == 4,
              "constant-2 table: bound 2 with 4 padded candidates");
    std::vector<uint64_t> g0(8, 0);
    FanWitness t0 = special_fan_from_muc(g0, d);
    rep.check(t0.bound == 0 && t0.candidates.size() == 1,
              "constant-0 table: bound 0 with the empty-padded candidate");

    FanWitness empty;
    empty.bound = 2;
    std::string cx;
    bool rejectedEmpty = !check_scf(empty, g2, d, &cx);
    rep.check(rejectedEmpty, "empty candidate list rejected against the full tree");

    std::vector<uint64_t> gb(8);
    for (uint64_t leaf = 0; leaf < 8; ++leaf) gb[leaf] = ((leaf >> 2) & 1u) + 1;
    FanWitness tb = special_fan_from_muc(gb, d);
    FanWitness lowered = tb;
    lowered.bound = tb.bound - 1;
    lowered.candidates.clear();
    for (uint64_t c = 0; c < (uint64_t(1) << lowered.bound); ++c) {
      std::vector<uint8_t> bits(lowered.bound);
      for (uint64_t i = 0; i < lowered.bound; ++i) bits[i] = (c >> (lowered.bound - 1 - i)) & 1u;
      lowered.candidates.push_back(bits);
    }
    std::string cx2;
    bool rejected = !check_scf(lowered, gb, d, &cx2);
    rep.check(rejected, "lowered bound exhibits a countering tree: " + cx2);
  }
  return rep;
}

DemoReport demo_reverse_riemann(const DemoConfig& cfg) {
  DemoReport rep;
  rep.name = "reverse-riemann";

  struct Golden {
    std::string label;
    PipelineScript script;
  };
  std::vector<Golden> goldens;
  goldens.push_back({"continuity", continuity_script("x", modulus_identity())});
  goldens.push_back({"uniform-continuity", uniform_continuity_script("x", modulus_identity())});
  goldens.push_back({"ivt", ivt_script("x-1/2")});
  goldens.push_back({"riemann", riemann_script()});

  for (const auto& g : goldens) {
    try {
      ExtractionResult r = run_pipeline(g.script);
      std::vector<TypedVar> inputs;
      for (const auto& ci : r.inputs)
        if (ci.termArg) inputs.push_back({ci.name, ci.type});
      TransformTrace trace;
      NormalForm emb = reverse_embed(r.witness, inputs, r.candidate, r.matrix, &trace);

      // Re-normalization must succeed and return the same normal form.
      NormalizeResult renorm = to_normal_form(emb.to_formula());
      bool stable = Formula::alpha_eq(renorm.normalForm.to_formula(), emb.to_formula());

      // Pointwise implication from the script's own normal form on finite
      // structures, with atoms drawn at random.
      NormalizeOptions opts;
      opts.monotoneVars = g.script.monotone;
      NormalForm orig = to_normal_form(g.script.input, opts).normalForm;
      int bad = 0;
      for (int seed = 1; seed <= cfg.reverseStructures; ++seed) {
        FiniteStructure s(2, 2, 2, cfg.seed * 97 + seed);
        StructEnv env;
        for (const auto& p : g.script.params) env[p.name] = StructValue::of(0);
        bool o = eval_formula(orig.to_formula(), s, env);
        bool e = eval_formula(emb.to_formula(), s, env);
        if (o && !e) ++bad;
      }
      rep.check(stable && bad == 0,
                g.label + ": embedded form re-normalizes and is implied on " +
                    std::to_string(cfg.reverseStructures) + " random structures");
    } catch (const Error& e) {
      rep.fail(g.label + ": " + e.what());
    }
  }

  // The double-modulus reading: a bounded hypothesis of continuity thresholds
  // yields the integration matrix; embedding it gives the weaker statement,
  // still implied by the original.
  try {
    PipelineScript sc = riemann_script();
    ExtractionResult r = run_pipeline(sc);
    Term gv = Term::var("g", NN);
    Term fv = Term::var("f", RR);
    Term xv = Term::var("x", R), yv = Term::var("y", R), lv = vN("l");
    Formula boundedA = Formula::forall(
        "l", N0,
        Formula::implies(
            Formula::atom_le0(lv, vN("k")),
            Formula::forall(
                "x", R,
                Formula::forall(
                    "y", R,
                    Formula::implies(
                        Formula::conj(Formula::atom_pred("in01", {xv}),
                                      Formula::atom_pred("in01", {yv})),
                        Formula::implies(dlt(xv, yv, Term::app(gv, lv)),
                                         dlt(Term::app(fv, xv), Term::app(fv, yv), lv)))))));
    Formula fest = Formula::implies(boundedA, r.matrix);
    TransformTrace trace;
    NormalForm emb = reverse_embed(r.witness, {{"g", NN}, {"k", N0}}, r.candidate, fest, &trace);
    NormalizeOptions opts;
    opts.monotoneVars = sc.monotone;
    NormalForm orig = to_normal_form(sc.input, opts).normalForm;
    int bad = 0;
    for (int seed = 1; seed <= cfg.reverseStructures; ++seed) {
      FiniteStructure s(2, 2, 2, cfg.seed * 131 + seed);
      StructEnv env;
      env["f"] = StructValue::of(0);
      bool o = eval_formula(orig.to_formula(), s, env);
      bool e = eval_formula(emb.to_formula(), s, env);
      if (o && !e) ++bad;
    }
    rep.check(bad == 0, "double-modulus embedding is implied by the integrability form");
  } catch (const Error& e) {
    rep.fail(std::string("double-modulus embedding: ") + e.what());
  }
  return rep;
}

}  // namespace

const std::vector<std::string>& demo_names() {
  static const std::vector<std::string> names = {
      "continuity", "uniform-continuity", "ivt",      "riemann",
      "mct-mu",     "stp-fan",            "reverse-riemann"};
  return names;
}

DemoReport run_demo(const std::string& name, const DemoConfig& cfg) {
  if (name == "continuity") return demo_continuity(cfg);
  if (name == "uniform-continuity") return demo_uniform_continuity(cfg);
  if (name == "ivt") return demo_ivt(cfg);
  if (name == "riemann") return demo_riemann(cfg);
  if (name == "mct-mu") return demo_mct_mu(cfg);
  if (name == "stp-fan") return demo_stp_fan(cfg);
  if (name == "reverse-riemann") return demo_reverse_riemann(cfg);
  throw Error("unknown demo: " + name);
}

std::vector<std::pair<std::string, std::string>> demo_scripts() {
  std::vector<std::pair<std::string, std::string>> out;
  out.emplace_back("continuity-2x.nsp", continuity_script("2x", modulus_double()).to_text());
  out.emplace_back("uniform-continuity-x.nsp",
                   uniform_continuity_script("x", modulus_identity()).to_text());
  out.emplace_back("ivt-2x-1.nsp", ivt_script("2x-1").to_text());
  out.emplace_back("riemann-x.nsp", riemann_script().to_text());
  return out;
}

}  // namespace nsx
