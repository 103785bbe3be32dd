#pragma once

#include <optional>
#include <set>
#include <string>

#include "nsx/normal_form.hpp"

namespace nsx {

// Implication between two normal forms, as one normal form.  In strong mode
// the antecedent's universal variables move into the existential block of the
// result; weak mode keeps them internally quantified in the antecedent, which
// matches the usual definitions-with-a-modulus.  The fresh functionals take
// the antecedent's universal block to its witnesses.
NormalForm nf_implies(const NormalForm& a, const NormalForm& b, bool strong);

// Pulls a standard existential block through a block of internal universal
// quantifiers, turning the witness into a finite sequence of candidates.
// Leaves the formula unchanged (with a no-op marker) when no internal
// universal block precedes the existential one.
struct IdealizeResult {
  Formula formula;
  bool changed = false;
};
IdealizeResult idealize(const Formula& f);

// Replaces a sequence-valued standard witness by the maximum of its entries.
// `witnessVar` names the sequence variable (or the sequence-valued functional);
// `declaredMonotone` is the pipeline author's declaration, checked separately
// by sampling.  Returns the rewritten formula and the witness transformer.
struct CollapseResult {
  Formula formula;
  Term transformer;
};
CollapseResult monotone_collapse(const Formula& f, const std::string& witnessVar,
                                 bool declaredMonotone);

// Normal form for a quantifier over all infinitesimals in front of a normal
// form (the formula must be ForallInf wrapping a normal form, possibly under
// a standard universal prefix).
NormalForm prefix_infinitesimal(const Formula& f, bool monotone, TransformTrace* trace = nullptr);

// Herbrandized choice: from (forall-st x)(exists-st y) phi to a standard
// functional returning a finite list of candidate witnesses.
Formula apply_hac(const Formula& f, TransformTrace* trace = nullptr);

// Which prenex moves to consider: the ones that surface a standard universal
// quantifier, the ones that surface a standard existential, or both.  The
// driver runs the universal kind to exhaustion before the existential kind,
// which keeps the universal block in front.
enum class ShuffleKind { All, Universal, Existential };

// One deterministic quantifier-shuffling step (leftmost-outermost applicable
// move), or nothing if no move applies.
std::optional<Formula> shuffle_step(const Formula& f, std::string* moveName = nullptr,
                                    ShuffleKind kind = ShuffleKind::All);

// Expands the leftmost unexpanded definition reference, if any.
std::optional<Formula> expand_step(const Formula& f, std::string* name = nullptr);
// Applies idealization at the leftmost-outermost matching position.
std::optional<Formula> idealize_step(const Formula& f);
// Rewrites the most deeply nested implication between normal forms.
std::optional<Formula> implies_step(const Formula& f, bool strong);

// Re-executes a recorded step on its `before` formula and compares the result
// against its `after`.
bool replay_step(const TraceStep& step);

struct NormalizeOptions {
  bool strongImplications = false;
  // Matrix variables declared upward-monotone by the pipeline author; the
  // driver collapses candidate sequences over exactly these.
  std::set<std::string> monotoneVars;
  int maxSteps = 4000;
};

struct NormalizeResult {
  NormalForm normalForm;
  TransformTrace trace;
};

// The normalization driver: expansion, quantifier shuffling, implications
// between normal forms, idealization, infinitesimal prefixes and declared
// collapses, applied deterministically until the formula is recognized.
NormalizeResult to_normal_form(const Formula& f, const NormalizeOptions& opts = {});

}  // namespace nsx
