#pragma once

#include <string>
#include <vector>

#include "nsx/normal_form.hpp"

namespace nsx {

// The standardness interpretation mapping external formulas to normal forms.
// Conjunction, implication and the plain existential are handled through
// their classical abbreviations and flagged as such in the trace.
enum class SstClause {
  AtomicInternal,   // internal formulas are their own interpretation
  Standardness,     // st(z) becomes a standard witness of equality
  Negation,         // Herbrandized functional clause
  Disjunction,      // block merge
  InternalForall,   // candidate-list clause for an internal universal
  Abbreviation,     // classical rewriting of /\, ->, exists, relativized quantifiers
};

std::string to_string(SstClause c);

struct ClauseStep {
  SstClause clause;
  Formula subformula;  // the node being interpreted
  Formula result;      // its interpretation at that point
};

struct SstResult {
  NormalForm translated;
  std::vector<ClauseStep> clauseTrace;
};

// Interprets a formula of the external language; throws UnsupportedConstruct
// on infinitesimal-quantifier sugar (resolve it first).
SstResult sst_translate(const Formula& f);

// The canonical shape used for fixed-point comparison: negation pushing over
// internal connectives, the two schematic witness reductions, and the
// elimination of provably singleton candidate lists.
NormalForm canonical_normal_form(const NormalForm& nf);

// True iff the interpretation of the normal form is alpha-equivalent to the
// normal form itself, after canonicalization of both sides.
bool check_fixed_point(const NormalForm& nf);

}  // namespace nsx
