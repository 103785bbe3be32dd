#pragma once

#include <string>

#include "nsx/demos.hpp"
#include "nsx/sst.hpp"

namespace nsx {

// JSON encodings of the tool's outputs.  Formulas and terms are embedded as
// their canonical textual syntax.
std::string trace_to_json(const TransformTrace& trace, bool pretty = true);
std::string extraction_to_json(const ExtractionResult& r, bool pretty = true);
ExtractionResult extraction_from_json(const std::string& text);
std::string verification_to_json(const VerificationReport& r, bool pretty = true);
std::string sst_to_json(const SstResult& r, bool pretty = true);
std::string registry_to_json(bool pretty = true);
std::string demo_to_json(const DemoReport& r, bool pretty = true);

}  // namespace nsx
