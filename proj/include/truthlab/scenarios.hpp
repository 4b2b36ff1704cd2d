#pragma once

#include <string>
#include <vector>

#include "truthlab/schemas.hpp"

namespace truthlab {

struct RunConfig {
  int depth = 2;
  int max_names = 8;
  int max_pool = 2000;
  int max_stages = 64;
  int threads = 1;  // hint only; execution is deterministic and sequential

  CheckLimits limits() const {
    CheckLimits l;
    l.max_pool = max_pool;
    return l;
  }
};

struct StepResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ScenarioReport {
  std::string scenario;
  std::vector<StepResult> steps;
  bool pass = true;

  void step(const std::string& name, bool ok, const std::string& detail = "");
  std::string to_json() const;
  std::string to_text() const;
};

struct ScenarioInfo {
  std::string id;
  std::string description;
};

std::vector<ScenarioInfo> list_scenarios();
ScenarioReport run_scenario(const std::string& id, const RunConfig& cfg = {});

// Sources of the bundled systems (scenarios embed these; the files under
// systems/ carry the same text for CLI use).
const std::vector<std::pair<std::string, std::string>>& bundled_systems();
std::string bundled_system_source(const std::string& id);

}  // namespace truthlab
