#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "biocircuit/io/csv.hpp"

namespace biocircuit::experiments {

/// Declarative experiment description: a known id plus shallow key = value
/// parameter overrides. Unknown ids or override keys are rejected.
struct Scenario {
  std::string id;
  std::map<std::string, std::string> overrides;
};

struct Verdict {
  std::string id;
  bool pass = false;
  std::string message;
};

struct ExperimentReport {
  std::string scenario_id;
  std::vector<std::pair<std::string, std::string>> resolved;  // name -> value
  std::vector<std::pair<std::string, io::CsvTable>> tables;   // name -> payload
  std::vector<std::pair<std::string, std::string>> figures;   // name -> svg bytes
  std::vector<Verdict> verdicts;
  double duration_seconds = 0.0;  // excluded from written payloads

  bool all_passed() const;
};

struct ScenarioInfo {
  std::string id;
  std::string description;
  std::string figure;  // cross-reference anchor
};

/// Stable-ordered catalog of the eight scenario ids.
const std::vector<ScenarioInfo>& list_scenarios();

/// Execute a scenario. Model and integration failures inside the pipeline
/// surface as failed verdicts with context; unknown ids or override keys
/// throw std::invalid_argument.
ExperimentReport run_scenario(const Scenario& scenario);

/// Write <table>.csv, <figure>.svg, resolved.cfg and report.txt
/// ("PASS|FAIL <check-id> <message>" lines) into dir. Payload bytes are
/// identical across runs for a fixed seed.
void write_report(const ExperimentReport& report, const std::filesystem::path& dir);

}  // namespace biocircuit::experiments
