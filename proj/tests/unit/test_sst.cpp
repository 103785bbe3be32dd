#include <doctest.h>

#include "gen.hpp"
#include "nsx/definitions.hpp"
#include "nsx/error.hpp"
#include "nsx/sst.hpp"

using namespace nsx;

TEST_CASE("interpretation of the standardness atom") {
  SstResult r = sst_translate(parse_formula("(st z)"));
  CHECK(r.translated.to_string() == "(exists-st ((x N)) (=0 x z))");
  REQUIRE(!r.clauseTrace.empty());
  CHECK(r.clauseTrace.back().clause == SstClause::Standardness);
}

TEST_CASE("interpretation of negated standardness") {
  SstResult r = sst_translate(parse_formula("(not (st y))"));
  CHECK(r.translated.to_string() == "(forall-st ((x N)) (not (=0 x y)))");
}

TEST_CASE("normal forms are fixed points") {
  Formula nf = parse_formula("(forall-st ((x N)) (exists-st ((y N)) (atom P x y)))");
  SstResult r = sst_translate(nf);
  CHECK(Formula::alpha_eq(r.translated.to_formula(), nf));
  CHECK(check_fixed_point(*recognize(nf)));

  // Internal matrices are fixed points with empty blocks.
  CHECK(check_fixed_point(NormalForm{{}, {}, parse_formula("(=0 z z)")}));

  // A lone standardness atom is not: its interpretation introduces the
  // witness of equality.
  CHECK_FALSE(check_fixed_point(NormalForm{{}, {}, parse_formula("(st z)")}));

  CHECK(check_fixed_point(*recognize(
      parse_formula("(forall-st ((x N)) (exists-st ((y N)) (=0 x y)))"))));
}

TEST_CASE("fixed point holds for the registered definition normal forms") {
  for (const auto& d : definition_registry()) {
    std::vector<Term> args;
    for (const auto& p : d.params) args.push_back(Term::var(p.name, p.type));
    NormalForm nf = definition_normal_form(d.name, args);
    INFO(d.name);
    CHECK(check_fixed_point(nf));
  }
}

TEST_CASE("fixed point holds for random normal forms") {
  nsxtest::Rng rng(314);
  int count = 0;
  while (count < 25) {
    NormalForm nf = nsxtest::random_normal_form(rng);
    INFO(nf.to_string());
    REQUIRE(check_fixed_point(nf));
    ++count;
  }
}

TEST_CASE("idempotence on mixed external formulas") {
  nsxtest::Rng rng(2718);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Formula f = nsxtest::random_formula(rng, {"a"}, 4);
    SstResult once;
    try {
      once = sst_translate(f);
    } catch (const UnsupportedConstruct&) {
      continue;
    }
    SstResult twice = sst_translate(once.translated.to_formula());
    ++checked;
    REQUIRE(Formula::alpha_eq(twice.translated.to_formula(), once.translated.to_formula()));
    REQUIRE(is_internal(once.translated.matrix));
  }
  CHECK(checked > 150);
}

TEST_CASE("clause trace covers the input") {
  Formula f = parse_formula("(forall-st ((x N)) (exists-st ((y N)) (=0 x y)))");
  SstResult r = sst_translate(f);
  // Every construct that occurs must show up in the trace, including the
  // abbreviation markers for the relativized quantifiers.
  int abbrev = 0, neg = 0, forall = 0, atomic = 0;
  for (const auto& s : r.clauseTrace) {
    switch (s.clause) {
      case SstClause::Abbreviation: ++abbrev; break;
      case SstClause::Negation: ++neg; break;
      case SstClause::InternalForall: ++forall; break;
      case SstClause::AtomicInternal: ++atomic; break;
      default: break;
    }
  }
  CHECK(abbrev >= 2);   // both relativized quantifiers
  CHECK(neg >= 2);      // the negations their abbreviations introduce
  CHECK(forall >= 2);   // the underlying internal universals
  CHECK(atomic >= 1);   // the matrix
}

TEST_CASE("infinitesimal sugar is rejected") {
  TypeEnv env;
  CHECK_THROWS_AS(sst_translate(parse_formula("(forall-eps (e) (st e))", env)),
                  UnsupportedConstruct);
}
