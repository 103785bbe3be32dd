#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nsx/definitions.hpp"
#include "nsx/demos.hpp"
#include "nsx/json_io.hpp"
#include "nsx/sst.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerification = 1;
constexpr int kExitUsage = 2;

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw nsx::Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// A .nsx file is an optional (params (name TYPE)...) form followed by the
// formula.
nsx::Formula read_formula(const std::string& text, nsx::TypeEnv* envOut = nullptr) {
  auto forms = nsx::parse_sexprs(text);
  nsx::TypeEnv env;
  size_t at = 0;
  if (!forms.empty() && forms[0].headed("params")) {
    for (size_t i = 1; i < forms[0].size(); ++i) {
      const nsx::Sexpr& b = forms[0].at(i);
      env.bind(b.at(0).atom, nsx::FinType::from_sexpr(b.at(1)));
    }
    at = 1;
  }
  if (at >= forms.size()) throw nsx::Error("no formula in input");
  if (envOut) *envOut = env;
  return nsx::formula_from_sexpr(forms[at], env);
}

struct NatFn {
  uint64_t scale = 1;
  uint64_t shift = 0;
  uint64_t operator()(uint64_t k) const { return scale * k + shift; }
  nsx::Term term() const {
    using nsx::Term;
    const nsx::FinType N = nsx::FinType::base();
    Term k = Term::var("k", N);
    Term body = k;
    if (scale != 1)
      body = Term::apps(nsx::combinators::mk_mul(), {Term::num(scale), k});
    if (shift != 0)
      body = Term::apps(nsx::combinators::mk_add(), {body, Term::num(shift)});
    return Term::lam("k", N, body);
  }
};

// "k", "2k", "k+1", "3k+2", "5" (constant).
NatFn parse_natfn(const std::string& spec) {
  NatFn f;
  auto kpos = spec.find('k');
  if (kpos == std::string::npos) {
    f.scale = 0;
    f.shift = std::stoull(spec);
    return f;
  }
  std::string a = spec.substr(0, kpos);
  std::string b = spec.substr(kpos + 1);
  if (!a.empty() && a.back() == '*') a.pop_back();
  f.scale = a.empty() ? 1 : std::stoull(a);
  if (!b.empty()) {
    if (b[0] == '+') b.erase(0, 1);
    f.shift = b.empty() ? 0 : std::stoull(b);
  }
  return f;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nsx: normal forms and witness extraction for nonstandard arithmetic"};
  app.require_subcommand(1);
  app.fallthrough();

  uint64_t fuel = 4'000'000;
  int denom = 256;
  int depth = 3;
  unsigned seed = 1;
  bool jsonOut = false;
  bool traceOut = false;
  app.add_option("--fuel", fuel, "evaluation step budget");
  app.add_option("--denom", denom, "denominator bound for verification grids");
  app.add_option("--depth", depth, "tree depth cap for fan checks");
  app.add_option("--seed", seed, "seed for randomized sweeps");
  app.add_flag("--json", jsonOut, "JSON output");
  app.add_flag("--trace", traceOut, "emit transformation traces");

  std::string file;
  std::vector<std::string> monotone;
  bool strong = false;
  auto* parseCmd = app.add_subcommand("parse", "parse a formula and print its canonical form");
  parseCmd->add_option("file", file, "formula file or -")->required();

  auto* normCmd = app.add_subcommand("normalize", "normalize a formula");
  normCmd->add_option("file", file, "formula file or -")->required();
  normCmd->add_option("--monotone", monotone, "witness variables declared upward-monotone");
  normCmd->add_flag("--strong", strong, "keep the unweakened implication form");

  auto* transCmd = app.add_subcommand("translate", "standardness interpretation of a formula");
  transCmd->add_option("file", file, "formula file or -")->required();

  auto* extractCmd = app.add_subcommand("extract", "run a pipeline script");
  extractCmd->add_option("file", file, "pipeline file or -")->required();

  std::vector<std::string> domainSpecs, realfnSpecs, natfnSpecs;
  auto* verifyCmd = app.add_subcommand("verify", "verify an extraction result");
  verifyCmd->add_option("file", file, "extraction result JSON or -")->required();
  verifyCmd->add_option("--domain", domainSpecs, "input range, e.g. k=1..64")->required();
  verifyCmd->add_option("--realfn", realfnSpecs, "real function binding, e.g. f=2x-1");
  verifyCmd->add_option("--natfn", natfnSpecs, "number-function binding, e.g. g=2k");

  std::string demoName;
  auto* demoCmd = app.add_subcommand("demo", "run a bundled end-to-end example");
  demoCmd->add_option("name", demoName, "demo name or 'all'")->required();

  auto* registryCmd = app.add_subcommand("registry", "dump the definition registry");
  (void)registryCmd;

  auto* scriptsCmd = app.add_subcommand("scripts", "print the bundled pipeline scripts");
  (void)scriptsCmd;

  CLI11_PARSE(app, argc, argv);

  try {
    if (parseCmd->parsed()) {
      nsx::Formula f = read_formula(read_input(file));
      if (jsonOut)
        std::cout << "{\"formula\": \"" << f.to_string() << "\"}" << "\n";
      else
        std::cout << f.to_string() << "\n";
      return kExitOk;
    }

    if (normCmd->parsed()) {
      nsx::Formula f = read_formula(read_input(file));
      nsx::NormalizeOptions opts;
      opts.strongImplications = strong;
      for (const auto& m : monotone) opts.monotoneVars.insert(m);
      nsx::NormalizeResult r = nsx::to_normal_form(f, opts);
      if (jsonOut)
        std::cout << "{\"normal_form\": \"" << r.normalForm.to_string() << "\"}" << "\n";
      else
        std::cout << r.normalForm.to_string() << "\n";
      if (traceOut) std::cout << nsx::trace_to_json(r.trace) << "\n";
      return kExitOk;
    }

    if (transCmd->parsed()) {
      nsx::Formula f = read_formula(read_input(file));
      nsx::SstResult r = nsx::sst_translate(f);
      std::cout << r.translated.to_string() << "\n";
      if (traceOut || jsonOut) std::cout << nsx::sst_to_json(r) << "\n";
      return kExitOk;
    }

    if (extractCmd->parsed()) {
      nsx::PipelineScript sc = nsx::parse_pipeline(read_input(file));
      nsx::ExtractionResult r = nsx::run_pipeline(sc);
      std::cout << nsx::extraction_to_json(r) << "\n";
      return kExitOk;
    }

    if (verifyCmd->parsed()) {
      nsx::ExtractionResult r = nsx::extraction_from_json(read_input(file));
      std::map<std::string, nsx::RealFn> realfns;
      for (const auto& s : realfnSpecs) {
        auto eq = s.find('=');
        realfns.emplace(s.substr(0, eq), nsx::parse_realfn(s.substr(eq + 1)));
      }
      std::map<std::string, NatFn> natfns;
      for (const auto& s : natfnSpecs) {
        auto eq = s.find('=');
        natfns.emplace(s.substr(0, eq), parse_natfn(s.substr(eq + 1)));
      }
      // One swept variable; everything else fixed by its binding.
      std::string sweepVar;
      uint64_t lo = 1, hi = 1;
      {
        const std::string& s = domainSpecs.front();
        auto eq = s.find('=');
        auto dots = s.find("..");
        sweepVar = s.substr(0, eq);
        lo = std::stoull(s.substr(eq + 1, dots - eq - 1));
        hi = std::stoull(s.substr(dots + 2));
      }
      std::vector<nsx::DomainPoint> domain;
      for (uint64_t k = lo; k <= hi; ++k) {
        nsx::DomainPoint pt;
        pt.label = sweepVar + "=" + std::to_string(k);
        for (const auto& ci : r.inputs) {
          if (ci.name == sweepVar) {
            pt.bindings[ci.name] = nsx::RatValue::of(k);
            if (ci.termArg) pt.termArgs.push_back(nsx::Term::num(k));
          } else if (auto it = realfns.find(ci.name); it != realfns.end()) {
            pt.bindings[ci.name] = nsx::RatValue::of_realfn(it->second);
          } else if (auto nt = natfns.find(ci.name); nt != natfns.end()) {
            const NatFn fn = nt->second;
            pt.bindings[ci.name] =
                nsx::RatValue::of_natfn([fn](uint64_t n) { return fn(n); });
            if (ci.termArg) pt.termArgs.push_back(fn.term());
          } else {
            throw nsx::Error("no binding for contract input " + ci.name);
          }
        }
        domain.push_back(std::move(pt));
      }
      nsx::EvalBounds bounds;
      bounds.denomBound = denom;
      bounds.fuel = fuel;
      bounds.partitions = nsx::grid_partition_family(denom > 16 ? 16 : denom, 4);
      nsx::VerificationReport rep = nsx::verify_witness(r, domain, bounds);
      std::cout << nsx::verification_to_json(rep) << "\n";
      return rep.ok ? kExitOk : kExitVerification;
    }

    if (demoCmd->parsed()) {
      nsx::DemoConfig cfg;
      cfg.fuel = fuel;
      cfg.denom = denom;
      cfg.depth = depth;
      cfg.seed = seed;
      bool ok = true;
      std::vector<std::string> names;
      if (demoName == "all")
        names = nsx::demo_names();
      else
        names.push_back(demoName);
      for (const auto& n : names) {
        auto t0 = std::chrono::steady_clock::now();
        nsx::DemoReport rep = nsx::run_demo(n, cfg);
        auto msec = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
        if (jsonOut) {
          std::cout << nsx::demo_to_json(rep) << "\n";
        } else {
          std::cout << (rep.ok ? "[PASS] " : "[FAIL] ") << rep.name << " (" << msec << " ms)\n";
          for (const auto& l : rep.lines) std::cout << l << "\n";
        }
        ok = ok && rep.ok;
      }
      return ok ? kExitOk : kExitVerification;
    }

    if (registryCmd->parsed()) {
      if (jsonOut) {
        std::cout << nsx::registry_to_json() << "\n";
      } else {
        std::cout << "registry version " << nsx::registry_version() << "\n";
        for (const auto& d : nsx::definition_registry()) {
          std::cout << "  " << d.name << (d.nonstandard ? "" : " (functional)") << " -- "
                    << d.citation << "\n";
        }
      }
      return kExitOk;
    }

    if (scriptsCmd->parsed()) {
      for (const auto& [name, text] : nsx::demo_scripts()) {
        std::cout << "; " << name << "\n" << text << "\n\n";
      }
      return kExitOk;
    }
  } catch (const nsx::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nsx::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
