#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nsx/formula.hpp"

namespace nsx {

// A formula split as standard-universal block / standard-existential block /
// internal matrix.
struct NormalForm {
  std::vector<TypedVar> uVars;
  std::vector<TypedVar> eVars;
  Formula matrix;

  Formula to_formula() const;
  std::string to_string() const { return to_formula().to_string(); }

  // Alpha-equivalence of the quantified readings.
  bool operator==(const NormalForm& o) const {
    return Formula::alpha_eq(to_formula(), o.to_formula());
  }

  // Checks block disjointness and matrix internality; throws ShapeError.
  void validate() const;
};

struct NotNormal {
  std::string reason;
};

// Splits a leading forall-st block, then an exists-st block, then requires an
// internal matrix.  Total: returns NotNormal with a reason instead of
// throwing.
std::optional<NormalForm> recognize(const Formula& f, NotNormal* why = nullptr);

// One step of a normalization run: rule applied, formulas before and after,
// and the witness transformer attached to the step when it has computational
// content (e.g. the max-of-sequence collapse).
struct TraceStep {
  std::string rule;
  Formula before;
  Formula after;
  std::optional<Term> witnessTransformer;
  std::string note;
  std::vector<std::string> args;  // rule parameters needed for replay
};

struct TransformTrace {
  std::vector<TraceStep> steps;

  void add(std::string rule, Formula before, Formula after,
           std::optional<Term> transformer = std::nullopt, std::string note = "",
           std::vector<std::string> args = {}) {
    steps.push_back({std::move(rule), std::move(before), std::move(after), std::move(transformer),
                     std::move(note), std::move(args)});
  }
};

}  // namespace nsx
