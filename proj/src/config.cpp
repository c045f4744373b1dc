#include "corereach/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <sstream>

#include "corereach/errors.hpp"

namespace corereach {

using nlohmann::json;

namespace {

const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) throw config_error(path + "." + key, "missing field");
  return j.at(key);
}

double require_number(const json& j, const std::string& key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_number()) throw config_error(path + "." + key, "expected a number");
  return v.get<double>();
}

long require_integer(const json& j, const std::string& key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_number_integer()) throw config_error(path + "." + key, "expected an integer");
  return v.get<long>();
}

std::string require_string(const json& j, const std::string& key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_string()) throw config_error(path + "." + key, "expected a string");
  return v.get<std::string>();
}

TUGame parse_game(const json& j) {
  const long n = require_integer(j, "n_agents", "game");
  if (n < 1 || n > TUGame::kMaxAgents)
    throw config_error("game.n_agents", "must lie in 1.." + std::to_string(TUGame::kMaxAgents));
  const json& values = require(j, "values", "game");
  if (!values.is_object()) throw config_error("game.values", "expected an object");
  std::map<Coalition, double> map;
  for (const auto& [key, val] : values.items()) {
    const std::string path = "game.values['" + key + "']";
    if (!val.is_number()) throw config_error(path, "expected a number");
    Coalition s;
    try {
      s = coalition_from_key(key, static_cast<int>(n));
    } catch (const std::invalid_argument& e) {
      throw config_error(path, e.what());
    }
    if (map.count(s)) throw config_error(path, "duplicate coalition");
    map[s] = val.get<double>();
  }
  if (!map.count(Coalition::grand(static_cast<int>(n))))
    throw config_error("game.values", "grand coalition value is required");
  return TUGame(static_cast<int>(n), std::move(map));
}

GraphSchedule parse_graphs(const json& j, int n) {
  const json& matrices = require(j, "matrices", "graphs");
  if (!matrices.is_array() || matrices.empty())
    throw config_error("graphs.matrices", "expected a nonempty array");
  std::vector<WeightMatrix> family;
  for (size_t m = 0; m < matrices.size(); ++m) {
    const std::string path = "graphs.matrices[" + std::to_string(m) + "]";
    const json& rows = matrices[m];
    if (!rows.is_array() || rows.size() != static_cast<size_t>(n) * n)
      throw config_error(path, "expected a row-major array of " + std::to_string(n * n) +
                                   " numbers");
    WeightMatrix A;
    A.entries.resize(n, n);
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < n; ++c) {
        const json& v = rows[static_cast<size_t>(i) * n + c];
        if (!v.is_number()) throw config_error(path, "expected numbers");
        A.entries(i, c) = v.get<double>();
      }
    family.push_back(std::move(A));
  }

  const json& sched = require(j, "schedule", "graphs");
  const std::string type = require_string(sched, "type", "graphs.schedule");
  auto parse_indices = [&](const json& arr, const std::string& path) {
    if (!arr.is_array() || arr.empty()) throw config_error(path, "expected a nonempty array");
    std::vector<int> out;
    for (const auto& v : arr) {
      if (!v.is_number_integer()) throw config_error(path, "expected integer indices");
      const long idx = v.get<long>();
      if (idx < 0 || idx >= static_cast<long>(family.size()))
        throw config_error(path, "matrix index out of range");
      out.push_back(static_cast<int>(idx));
    }
    return out;
  };

  if (type == "periodic") {
    auto order = parse_indices(require(sched, "order", "graphs.schedule"),
                               "graphs.schedule.order");
    return GraphSchedule(std::move(family), std::move(order));
  }
  if (type == "script_then_periodic") {
    auto script = parse_indices(require(sched, "script", "graphs.schedule"),
                                "graphs.schedule.script");
    auto order = parse_indices(require(sched, "order", "graphs.schedule"),
                               "graphs.schedule.order");
    return GraphSchedule(std::move(family), std::move(order), std::move(script));
  }
  throw config_error("graphs.schedule.type",
                     "unknown schedule type (use 'periodic' or 'script_then_periodic')");
}

StepSpec parse_steps(const json& j) {
  StepSpec spec;
  spec.kind = require_string(j, "kind", "steps");
  if (spec.kind == "fixed") {
    spec.alpha = require_number(j, "alpha", "steps");
  } else if (spec.kind == "power") {
    spec.c = require_number(j, "c", "steps");
    spec.p = require_number(j, "p", "steps");
  } else if (spec.kind != "harmonic") {
    throw config_error("steps.kind", "unknown kind (use 'fixed', 'harmonic' or 'power')");
  }
  return spec;
}

InitialSpec parse_initial(const json& j, int n) {
  InitialSpec spec;
  const std::string type = require_string(j, "type", "initial");
  if (type == "self-allocation") {
    spec.type = InitialSpec::Type::self_allocation;
    return spec;
  }
  if (type != "explicit")
    throw config_error("initial.type", "unknown type (use 'self-allocation' or 'explicit')");
  spec.type = InitialSpec::Type::explicit_blocks;
  const json& blocks = require(j, "blocks", "initial");
  if (!blocks.is_array() || blocks.size() != static_cast<size_t>(n))
    throw config_error("initial.blocks", "expected " + std::to_string(n) + " blocks");
  spec.blocks.resize(n, n);
  for (int i = 0; i < n; ++i) {
    const json& b = blocks[i];
    const std::string path = "initial.blocks[" + std::to_string(i) + "]";
    if (!b.is_array() || b.size() != static_cast<size_t>(n))
      throw config_error(path, "expected " + std::to_string(n) + " numbers");
    for (int r = 0; r < n; ++r) {
      if (!b[r].is_number()) throw config_error(path, "expected numbers");
      spec.blocks(r, i) = b[r].get<double>();
    }
  }
  return spec;
}

}  // namespace

Coalition coalition_from_key(const std::string& key, int n_agents) {
  std::vector<int> members;
  std::stringstream ss(key);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](unsigned char c) {
          return std::isdigit(c);
        }))
      throw std::invalid_argument("coalition key must be comma-separated agent indices");
    const int idx = std::stoi(tok);
    if (idx < 1 || idx > n_agents)
      throw std::invalid_argument("agent index " + tok + " outside 1.." +
                                  std::to_string(n_agents));
    if (!members.empty() && idx <= members.back())
      throw std::invalid_argument("agent indices must be sorted and distinct");
    members.push_back(idx);
  }
  if (members.empty()) throw std::invalid_argument("coalition key is empty");
  return Coalition::of(members);
}

std::string coalition_to_key(Coalition s) {
  std::string out;
  for (int m : s.members()) {
    if (!out.empty()) out += ',';
    out += std::to_string(m);
  }
  return out;
}

StepSchedule StepSpec::make_schedule() const {
  if (kind == "fixed") return StepSchedule::fixed(alpha);
  if (kind == "harmonic") return StepSchedule::harmonic();
  if (kind == "power") return StepSchedule::power(c, p);
  throw std::invalid_argument("unknown step kind: " + kind);
}

StackedState ExperimentConfig::make_initial_state() const {
  if (initial.type == InitialSpec::Type::self_allocation)
    return StackedState::self_allocation(game.n_agents(), game.grand_value());
  StackedState w;
  w.blocks = initial.blocks;
  return w;
}

EngineConfig ExperimentConfig::make_engine_config() const {
  EngineConfig ec;
  ec.beta = beta;
  ec.steps = steps.make_schedule();
  ec.max_iters = max_iters;
  ec.stop_tol = stop_tol;
  return ec;
}

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw config_error("$", "top-level config must be an object");
  TUGame game = parse_game(require(doc, "game", "$"));
  const int n = game.n_agents();
  GraphSchedule graphs = parse_graphs(require(doc, "graphs", "$"), n);

  ExperimentConfig cfg{std::move(game),
                       std::move(graphs),
                       require_number(doc, "beta", "$"),
                       parse_steps(require(doc, "steps", "$")),
                       parse_initial(require(doc, "initial", "$"), n),
                       static_cast<int>(require_integer(doc, "max_iters", "$")),
                       require_number(doc, "stop_tol", "$"),
                       0,
                       ""};
  const long seed = require_integer(doc, "seed", "$");
  if (seed < 0) throw config_error("seed", "must be nonnegative");
  cfg.seed = static_cast<std::uint64_t>(seed);
  if (doc.contains("output_dir")) cfg.output_dir = require_string(doc, "output_dir", "$");
  if (cfg.max_iters < 1) throw config_error("max_iters", "must be >= 1");
  if (cfg.stop_tol < 0) throw config_error("stop_tol", "must be nonnegative");
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error(path, "cannot open config file");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw config_error(path, std::string("invalid JSON: ") + e.what());
  }
  return parse_config(doc);
}

json serialize_config(const ExperimentConfig& cfg) {
  json values = json::object();
  for (const auto& [s, v] : cfg.game.values()) {
    if (s.mask == 0) continue;
    values[coalition_to_key(s)] = v;
  }

  json matrices = json::array();
  for (const auto& A : cfg.graphs.family()) {
    json flat = json::array();
    for (int i = 0; i < A.dim(); ++i)
      for (int c = 0; c < A.dim(); ++c) flat.push_back(A.entries(i, c));
    matrices.push_back(std::move(flat));
  }
  json schedule;
  if (cfg.graphs.prefix_length() == 0) {
    schedule = {{"type", "periodic"}, {"order", cfg.graphs.periodic_order()}};
  } else {
    schedule = {{"type", "script_then_periodic"},
                {"script", cfg.graphs.script_prefix()},
                {"order", cfg.graphs.periodic_order()}};
  }

  json steps;
  if (cfg.steps.kind == "fixed") steps = {{"kind", "fixed"}, {"alpha", cfg.steps.alpha}};
  else if (cfg.steps.kind == "harmonic") steps = {{"kind", "harmonic"}};
  else steps = {{"kind", "power"}, {"c", cfg.steps.c}, {"p", cfg.steps.p}};

  json initial;
  if (cfg.initial.type == InitialSpec::Type::self_allocation) {
    initial = {{"type", "self-allocation"}};
  } else {
    json blocks = json::array();
    for (int i = 0; i < cfg.initial.blocks.cols(); ++i) {
      json b = json::array();
      for (int r = 0; r < cfg.initial.blocks.rows(); ++r) b.push_back(cfg.initial.blocks(r, i));
      blocks.push_back(std::move(b));
    }
    initial = {{"type", "explicit"}, {"blocks", std::move(blocks)}};
  }

  return json{{"game", {{"n_agents", cfg.game.n_agents()}, {"values", std::move(values)}}},
              {"graphs", {{"matrices", std::move(matrices)}, {"schedule", std::move(schedule)}}},
              {"beta", cfg.beta},
              {"steps", std::move(steps)},
              {"initial", std::move(initial)},
              {"max_iters", cfg.max_iters},
              {"stop_tol", cfg.stop_tol},
              {"seed", cfg.seed},
              {"output_dir", cfg.output_dir}};
}

ValidationReport validate_experiment(const ExperimentConfig& cfg) {
  ValidationReport report;
  auto add = [&](std::string name, bool pass, std::string detail) {
    report.gates.push_back({std::move(name), pass, std::move(detail)});
  };

  // Smallest nonzero weight across the family doubles as the certified gamma.
  double gamma = std::numeric_limits<double>::infinity();
  for (const auto& A : cfg.graphs.family())
    for (int i = 0; i < A.dim(); ++i)
      for (int j = 0; j < A.dim(); ++j)
        if (A.entries(i, j) > 0.0) gamma = std::min(gamma, A.entries(i, j));
  if (!std::isfinite(gamma)) gamma = 0.0;
  report.gamma = gamma;

  bool matrices_ok = gamma > 0.0;
  std::string matrix_detail;
  for (size_t m = 0; m < cfg.graphs.family().size(); ++m) {
    const auto rep = validate_matrix(cfg.graphs.family()[m], std::max(gamma, 1e-300));
    if (!rep.ok) {
      matrices_ok = false;
      for (const auto& issue : rep.issues)
        matrix_detail += "matrix " + std::to_string(m) + ": " + issue + "; ";
    }
  }
  if (matrices_ok) {
    std::ostringstream os;
    os << "doubly stochastic with positive diagonals, gamma = " << gamma;
    matrix_detail = os.str();
  }
  add("weight_matrices", matrices_ok, matrix_detail);

  report.smallest_q = smallest_certified_q(cfg.graphs, 10);
  add("q_connectivity", report.smallest_q >= 1,
      report.smallest_q >= 1 ? "smallest certified Q = " + std::to_string(report.smallest_q)
                             : "no Q <= 10 certifies strong connectivity");

  bool steps_ok = true;
  std::string steps_detail = "admissible";
  try {
    cfg.steps.make_schedule();
  } catch (const std::invalid_argument& e) {
    steps_ok = false;
    steps_detail = e.what();
  }
  add("step_schedule", steps_ok, steps_detail);

  add("finite_family", true,
      std::to_string(cfg.graphs.family().size()) + " matrices in the family");

  const bool beta_ok = cfg.beta >= 0.0 && cfg.beta < 1.0;
  add("operator_beta", beta_ok, beta_ok ? "beta in [0,1)" : "beta outside [0,1)");

  const bool nonempty = core_nonempty(cfg.game);
  add("core_nonempty", nonempty, nonempty ? "feasible" : "no payoff satisfies all constraints");

  report.all_pass = std::all_of(report.gates.begin(), report.gates.end(),
                                [](const Gate& g) { return g.pass; });
  return report;
}

}  // namespace corereach
