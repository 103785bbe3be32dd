#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nsx/realfn.hpp"
#include "nsx/transforms.hpp"

namespace nsx {

// How a contract input is supplied during verification: as an argument to the
// witness term, or only to the oracle-side evaluation of the matrix.
struct ContractInput {
  std::string name;
  FinType type;
  bool termArg = false;
};

// How candidate values produced by the witness are read by the oracle layer.
enum class CandidateDecode {
  Nat,            // plain numerals
  CodedRational,  // Cantor-paired numerator/denominator
  ScaledGrid,     // first element is the denominator, the rest are numerators
};

// A closed witness term plus the internal verification contract
// (forall inputs)(exists y in t(inputs)) matrix.
struct ExtractionResult {
  Term witness;
  std::vector<ContractInput> inputs;
  TypedVar candidate;
  CandidateDecode decode = CandidateDecode::Nat;
  Formula matrix;  // internal
  TransformTrace trace;

  void validate() const;  // matrix internal, witness closed and well-typed
};

// An ordered transformation script: the trusted description of a
// normalization argument.  Steps are replayed against the input formula.
struct PipelineStep {
  std::string rule;                // expand | shuffle | idealize | collapse |
                                   // implies | hac | prefix-eps | normalize
  std::vector<std::string> args;
};

struct PipelineScript {
  std::string name;
  std::vector<TypedVar> params;
  Formula input;
  std::vector<PipelineStep> steps;
  std::set<std::string> monotone;  // declared upward-monotone pick variables
  bool strongImplications = false;

  Term witness;
  std::vector<ContractInput> contractInputs;
  TypedVar candidate;
  CandidateDecode decode = CandidateDecode::Nat;
  Formula target;  // internal contract matrix

  std::string to_text() const;
};

PipelineScript parse_pipeline(const std::string& text);

// Replays the script's steps, assembles the witness and contract, and checks
// typing.  Throws ReplayFailure when a declared step does not apply.
ExtractionResult run_pipeline(const PipelineScript& script);

// Law-of-comparison selection: the first candidate q with |f(q)| < 1/k,
// decided exactly on rationals against the doubled threshold.  `candidates`
// must evaluate to a sequence of coded rationals.
struct ComparisonSpec {
  RealFn f;
  uint64_t fuel = 1'000'000;
};
Term select_by_comparison(const Term& candidates, const ComparisonSpec& spec, uint64_t precision,
                          CandidateDecode decode = CandidateDecode::CodedRational);

// Reads a candidate sequence value under the given convention.
std::vector<Rational> decode_candidates(const Term& seqValue, CandidateDecode decode);

// From a closed term and an internal matrix with designated input and witness
// slots, the normal form stating that standard inputs give standard outputs.
NormalForm reverse_embed(const Term& witness, const std::vector<TypedVar>& inputs,
                         const TypedVar& candidate, const Formula& matrix,
                         TransformTrace* trace = nullptr);

// Decodes a Cantor-paired rational produced by grid witnesses.
Rational decode_rational(uint64_t code);
uint64_t encode_rational_pair(uint64_t num, uint64_t den);

}  // namespace nsx
