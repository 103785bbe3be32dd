#include <doctest.h>

#include "gen.hpp"
#include "nsx/definitions.hpp"
#include "nsx/error.hpp"
#include "nsx/structure.hpp"

using namespace nsx;

namespace {
const FinType N = FinType::base();
}

TEST_CASE("parser handles the documented forms") {
  Formula st = parse_formula("(st x)");
  CHECK(st.kind() == Formula::Kind::St);

  Formula f = parse_formula("(forall-st ((k N)) (exists-st ((M N)) (atom P k M)))");
  CHECK(f.kind() == Formula::Kind::ForallSt);
  CHECK(f.body().kind() == Formula::Kind::ExistsSt);
  CHECK(f.body().body().kind() == Formula::Kind::AtomPred);

  // The infinitesimal-closeness sugar expands at parse time.
  Formula ap = parse_formula("(approx-eps eps)");
  CHECK(ap.kind() == Formula::Kind::ForallSt);
  CHECK(ap.body().kind() == Formula::Kind::AtomPred);
  CHECK(ap.body().pred_name() == "alt");

  CHECK_THROWS_AS(parse_formula("(forall ((x N)) )"), ParseError);
  CHECK_THROWS_AS(parse_formula("(unknown-head x)"), ParseError);
}

TEST_CASE("internality") {
  CHECK(is_internal(parse_formula("(=0 x y)")));
  CHECK_FALSE(is_internal(parse_formula("(st x)")));
  CHECK_FALSE(is_internal(parse_formula("(forall-st ((x N)) (=0 x x))")));
  CHECK(is_internal(parse_formula("(forall ((x N)) (exists ((m N)) (=0 (app f x) m)))",
                                  [] {
                                    TypeEnv e;
                                    e.bind("f", FinType::arrow(FinType::base(), FinType::base()));
                                    return e;
                                  }())));
}

TEST_CASE("relativization") {
  Formula qf = parse_formula("(=0 x y)");
  CHECK(relativize_st(qf) == qf);

  Formula f = parse_formula("(forall ((x N)) (atom P x))");
  Formula r = relativize_st(f);
  CHECK(r.kind() == Formula::Kind::ForallSt);

  TypeEnv env;
  env.bind("f", FinType::arrow(N, N));
  Formula fn = parse_formula("(forall ((n N)) (exists ((m N)) (=0 (app f n) m)))", env);
  Formula rn = relativize_st(fn);
  CHECK(rn.kind() == Formula::Kind::ForallSt);
  CHECK(rn.body().kind() == Formula::Kind::ExistsSt);

  // Bounded number quantifiers stay internal.
  Formula bounded =
      parse_formula("(forall ((i N)) (implies (<=0 i n) (atom P i)))");
  Formula rb = relativize_st(bounded);
  CHECK(rb.kind() == Formula::Kind::Forall);

  CHECK_THROWS_AS(relativize_st(parse_formula("(st x)")), NotInternal);

  // Member-bounded quantifiers stay internal too.
  TypeEnv env2;
  env2.bind("w", FinType::seq(N));
  Formula member = parse_formula(
      "(exists ((y N)) (and (atom in y w) (forall ((z N)) (atom P y z))))", env2);
  Formula rm = relativize_st(member);
  CHECK(rm.kind() == Formula::Kind::Exists);
  CHECK(rm.body().rhs().kind() == Formula::Kind::ForallSt);
}

TEST_CASE("print parse round trip on random formulas") {
  nsxtest::Rng rng(2024);
  for (int i = 0; i < 10000; ++i) {
    Formula f = nsxtest::random_formula(rng, {"a", "b"}, 8);
    Formula back = parse_formula(f.to_string());
    REQUIRE(Formula::alpha_eq(back, f));
  }
}

TEST_CASE("registry entries expand and pair with valid normal forms") {
  for (const auto& d : definition_registry()) {
    std::vector<Term> args;
    for (const auto& p : d.params) args.push_back(Term::var(p.name, p.type));
    Formula e = expand_definition(d.name, args);
    if (d.nonstandard) {
      CHECK_FALSE(is_internal(e));
    } else {
      CHECK(is_internal(e));
    }
    NormalForm nf = definition_normal_form(d.name, args);
    CHECK_NOTHROW(nf.validate());
  }
  CHECK_THROWS_AS(expand_definition("no-such-definition", {}), UnknownDefinition);
}

TEST_CASE("expansion instantiation is hygienic") {
  // An argument whose free variable collides with a template binder must not
  // get captured.
  Term tricky = Term::var("x", FinType::arrow(Formula::real_sort(), Formula::real_sort()));
  Formula e = expand_definition("ns-continuity", {tricky});
  // The expansion binds a variable named x; the argument's x must stay free.
  CHECK(e.free_vars().count("x"));
}

TEST_CASE("relativization preserves truth on degenerate structures") {
  nsxtest::Rng rng(5);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    Formula f = nsxtest::random_internal(rng, {}, 3);
    FiniteStructure s(3, 3, 2, static_cast<unsigned>(trial + 1));
    bool a, b;
    try {
      a = eval_formula(f, s);
      b = eval_formula(relativize_st(f), s);
    } catch (const Unrepresentable&) {
      continue;
    }
    ++checked;
    REQUIRE(a == b);
  }
  CHECK(checked > 200);
}

TEST_CASE("standardness threshold") {
  FiniteStructure s(8, 5);
  StructEnv env;
  CHECK(eval_formula(parse_formula("(st 3)"), s, env));
  CHECK_FALSE(eval_formula(parse_formula("(st 6)"), s, env));
  // Every standard element is below the threshold.
  CHECK(eval_formula(parse_formula("(forall-st ((x N)) (<=0 x 4))"), s, env));
  CHECK_FALSE(eval_formula(parse_formula("(forall ((x N)) (<=0 x 4))"), s, env));
}
