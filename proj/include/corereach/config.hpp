#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "corereach/engine.hpp"
#include "corereach/game.hpp"
#include "corereach/network.hpp"
#include "corereach/stacked_state.hpp"

#include "json.hpp"

namespace corereach {

/// Raw step-size description. Structural checks happen at parse time; range
/// admissibility is a validation gate (make_schedule throws on bad ranges).
struct StepSpec {
  std::string kind;  // "fixed" | "harmonic" | "power"
  double alpha = 0.0;
  double c = 0.0;
  double p = 0.0;

  StepSchedule make_schedule() const;
};

struct InitialSpec {
  enum class Type { self_allocation, explicit_blocks };
  Type type = Type::self_allocation;
  Eigen::MatrixXd blocks;  // used for explicit_blocks
};

struct ExperimentConfig {
  TUGame game;
  GraphSchedule graphs;
  double beta = 0.0;
  StepSpec steps;
  InitialSpec initial;
  int max_iters = 1000;
  double stop_tol = 1e-6;
  std::uint64_t seed = 0;
  std::string output_dir;

  StackedState make_initial_state() const;
  EngineConfig make_engine_config() const;
};

/// "1,3" <-> coalition; keys are sorted, comma-separated, 1-based indices.
Coalition coalition_from_key(const std::string& key, int n_agents);
std::string coalition_to_key(Coalition s);

/// Parses the single-document JSON config; throws config_error with the JSON
/// path of the offending field.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig parse_config_file(const std::string& path);
nlohmann::json serialize_config(const ExperimentConfig& cfg);

struct Gate {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<Gate> gates;
  bool all_pass = false;
  int smallest_q = 0;     // 0 when not certified
  double gamma = 0.0;     // smallest nonzero weight across the family
};

/// Checkable assumption gates: weight-matrix validity (with the certified
/// gamma), Q-connectivity (smallest Q <= 10), step-size admissibility,
/// finite family, operator parameters, and core nonemptiness.
ValidationReport validate_experiment(const ExperimentConfig& cfg);

}  // namespace corereach
