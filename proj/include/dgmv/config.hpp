#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dgmv/instruments.hpp"
#include "dgmv/oracle.hpp"

namespace dgmv {

enum class ProblemMode { P5, P6, Hedge, Validate };

const char* problem_mode_name(ProblemMode mode);

/// A fully parsed and validated scenario. `resolved` is the config echoed
/// with every default filled in; re-feeding it reproduces the run.
struct ScenarioConfig {
  FactorModel model;
  std::vector<InstrumentDef> instruments;
  ProblemMode mode = ProblemMode::P6;
  std::optional<double> target;
  std::vector<double> targets;
  std::optional<int> hedge_target_index;
  std::optional<Eigen::VectorXd> positions;
  McConfig mc;
  nlohmann::json resolved;
};

/// Parses and validates a scenario document. Unknown keys anywhere are
/// rejected with the offending path. `base_dir` anchors relative CSV paths.
ScenarioConfig parse_scenario(const nlohmann::json& doc,
                              const std::filesystem::path& base_dir = ".");

ScenarioConfig load_scenario(const std::filesystem::path& config_path);

}  // namespace dgmv
