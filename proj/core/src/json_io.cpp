#include "nsx/json_io.hpp"

#include <json.hpp>

#include "nsx/definitions.hpp"
#include "nsx/error.hpp"

namespace nsx {

using nlohmann::json;

namespace {

std::string dump(const json& j, bool pretty) { return pretty ? j.dump(2) : j.dump(); }

json step_to_json(const TraceStep& s) {
  json j;
  j["rule"] = s.rule;
  j["before"] = s.before.to_string();
  j["after"] = s.after.to_string();
  if (!s.note.empty()) j["note"] = s.note;
  if (s.witnessTransformer) j["transformer"] = s.witnessTransformer->to_string();
  if (!s.args.empty()) j["args"] = s.args;
  return j;
}

}  // namespace

std::string trace_to_json(const TransformTrace& trace, bool pretty) {
  json j = json::array();
  for (const auto& s : trace.steps) j.push_back(step_to_json(s));
  return dump(j, pretty);
}

std::string extraction_to_json(const ExtractionResult& r, bool pretty) {
  json j;
  j["witness"] = r.witness.to_string();
  json inputs = json::array();
  for (const auto& ci : r.inputs) {
    inputs.push_back({{"name", ci.name},
                      {"type", ci.type.to_string()},
                      {"role", ci.termArg ? "term" : "oracle"}});
  }
  j["contract"]["inputs"] = inputs;
  j["contract"]["candidate"] = {{"name", r.candidate.name},
                                {"type", r.candidate.type.to_string()}};
  switch (r.decode) {
    case CandidateDecode::Nat:
      j["contract"]["decode"] = "nat";
      break;
    case CandidateDecode::CodedRational:
      j["contract"]["decode"] = "coded-rational";
      break;
    case CandidateDecode::ScaledGrid:
      j["contract"]["decode"] = "scaled-grid";
      break;
  }
  j["contract"]["matrix"] = r.matrix.to_string();
  json trace = json::array();
  for (const auto& s : r.trace.steps) trace.push_back(step_to_json(s));
  j["trace"] = trace;
  return dump(j, pretty);
}

ExtractionResult extraction_from_json(const std::string& text) {
  json j = json::parse(text);
  ExtractionResult r;
  r.witness = Term::parse(j.at("witness").get<std::string>());
  const json& c = j.at("contract");
  TypeEnv env;
  for (const auto& in : c.at("inputs")) {
    ContractInput ci;
    ci.name = in.at("name").get<std::string>();
    ci.type = FinType::parse(in.at("type").get<std::string>());
    ci.termArg = in.at("role").get<std::string>() == "term";
    env.bind(ci.name, ci.type);
    r.inputs.push_back(std::move(ci));
  }
  r.candidate = {c.at("candidate").at("name").get<std::string>(),
                 FinType::parse(c.at("candidate").at("type").get<std::string>())};
  env.bind(r.candidate.name, r.candidate.type);
  std::string dec = c.at("decode").get<std::string>();
  r.decode = dec == "nat"              ? CandidateDecode::Nat
             : dec == "coded-rational" ? CandidateDecode::CodedRational
                                       : CandidateDecode::ScaledGrid;
  r.matrix = parse_formula(c.at("matrix").get<std::string>(), env);
  if (j.contains("trace")) {
    for (const auto& s : j.at("trace")) {
      TraceStep step;
      step.rule = s.at("rule").get<std::string>();
      step.before = parse_formula(s.at("before").get<std::string>(), env);
      step.after = parse_formula(s.at("after").get<std::string>(), env);
      if (s.contains("note")) step.note = s.at("note").get<std::string>();
      if (s.contains("transformer"))
        step.witnessTransformer = Term::parse(s.at("transformer").get<std::string>());
      if (s.contains("args"))
        for (const auto& a : s.at("args")) step.args.push_back(a.get<std::string>());
      r.trace.steps.push_back(std::move(step));
    }
  }
  return r;
}

std::string verification_to_json(const VerificationReport& r, bool pretty) {
  json j;
  j["status"] = r.ok ? "pass" : "fail";
  j["checked"] = r.checked;
  json fails = json::array();
  for (const auto& f : r.failures) fails.push_back({{"input", f.input}, {"detail", f.detail}});
  j["failures"] = fails;
  return dump(j, pretty);
}

std::string sst_to_json(const SstResult& r, bool pretty) {
  json j;
  j["translated"] = r.translated.to_string();
  json steps = json::array();
  for (const auto& s : r.clauseTrace) {
    steps.push_back({{"clause", to_string(s.clause)},
                     {"subformula", s.subformula.to_string()},
                     {"result", s.result.to_string()}});
  }
  j["clauses"] = steps;
  return dump(j, pretty);
}

std::string registry_to_json(bool pretty) {
  json j;
  j["version"] = registry_version();
  json defs = json::array();
  for (const auto& d : definition_registry()) {
    json e;
    e["name"] = d.name;
    json params = json::array();
    for (const auto& p : d.params)
      params.push_back({{"name", p.name}, {"type", p.type.to_string()}});
    e["params"] = params;
    e["nonstandard"] = d.nonstandard;
    e["citation"] = d.citation;
    e["expansion"] = d.expansion.to_string();
    e["normal_form"] = d.normalForm.to_string();
    defs.push_back(std::move(e));
  }
  j["definitions"] = defs;
  return dump(j, pretty);
}

std::string demo_to_json(const DemoReport& r, bool pretty) {
  json j;
  j["name"] = r.name;
  j["status"] = r.ok ? "pass" : "fail";
  j["lines"] = r.lines;
  if (!r.extractions.empty()) {
    json ex = json::array();
    for (const auto& e : r.extractions) ex.push_back(json::parse(extraction_to_json(e, false)));
    j["extractions"] = ex;
  }
  return dump(j, pretty);
}

}  // namespace nsx
