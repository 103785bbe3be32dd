#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nsx/oracles.hpp"

namespace nsx {

// Bounds for the bundled demonstration runs.  Defaults match the documented
// suites; everything stays well under a minute in total.
struct DemoConfig {
  uint64_t fuel = 4'000'000;
  int denom = 256;          // verification grid for continuity contracts
  int xDenom = 16;          // sweep grid for the pointwise-continuity input
  int kMaxContinuity = 64;
  int kMaxUniform = 32;
  int uniformDenom = 128;
  int kMaxIvt = 32;
  int ivtOracleDenom = 1024;
  int kMaxRiemann = 8;
  int riemannDenom = 16;
  uint64_t mctWindow = 1000;
  uint64_t mctZeroMax = 50;
  int kMaxMct = 8;
  int depth = 3;            // fan tree depth
  unsigned seed = 1;
  int reverseStructures = 6;
};

struct DemoReport {
  std::string name;
  bool ok = true;
  std::vector<std::string> lines;
  std::vector<ExtractionResult> extractions;

  void pass(const std::string& line) { lines.push_back("  ok: " + line); }
  void fail(const std::string& line) {
    ok = false;
    lines.push_back("  FAIL: " + line);
  }
  void check(bool cond, const std::string& line) { cond ? pass(line) : fail(line); }
};

const std::vector<std::string>& demo_names();
DemoReport run_demo(const std::string& name, const DemoConfig& cfg = {});

// The bundled pipeline scripts in their file form.
std::vector<std::pair<std::string, std::string>> demo_scripts();

}  // namespace nsx
