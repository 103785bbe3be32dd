#pragma once

#include <string>
#include <vector>

#include "nsx/normal_form.hpp"

namespace nsx {

// A registered nonstandard (or functional) definition: its expansion template,
// the paired normal-form template, and the literature it comes from.  Hole
// variables in the templates are the declared parameters; instantiation is
// capture-avoiding.
struct DefinitionEntry {
  std::string name;
  std::vector<TypedVar> params;
  bool nonstandard = true;       // false for the functional counterparts (mu, fan functionals)
  bool figureDefinition = false; // the mathematical notions of the definition table
  std::string citation;
  Formula expansion;
  NormalForm normalForm;
};

// The built-in registry.  Version string identifies the table revision.
const std::string& registry_version();
const std::vector<DefinitionEntry>& definition_registry();
const DefinitionEntry& lookup_definition(const std::string& name);  // throws UnknownDefinition

// Instantiates the expansion template of `name` at the given arguments.
Formula expand_definition(const std::string& name, const std::vector<Term>& args);
// Instantiates the paired normal-form template.
NormalForm definition_normal_form(const std::string& name, const std::vector<Term>& args);

}  // namespace nsx
