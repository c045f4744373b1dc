#include "doctest.h"

#include <cstdlib>

#include "corereach/config.hpp"
#include "corereach/errors.hpp"

#include "fixtures.hpp"
#include "json.hpp"

using namespace corereach;
using nlohmann::json;

namespace {

json minimal_config() {
  return json::parse(R"({
    "game": {"n_agents": 2, "values": {"1": 0.0, "2": 0.0, "1,2": 1.0}},
    "graphs": {
      "matrices": [[0.5, 0.5, 0.5, 0.5]],
      "schedule": {"type": "periodic", "order": [0]}
    },
    "beta": 0.5,
    "steps": {"kind": "fixed", "alpha": 0.5},
    "initial": {"type": "self-allocation"},
    "max_iters": 100,
    "stop_tol": 1e-6,
    "seed": 1
  })");
}

std::string sec6_path() {
  const char* env = std::getenv("COREREACH_SEC6");
  return env ? env : "configs/sec6.json";
}

}  // namespace

TEST_CASE("bundled config parses and round-trips") {
  const ExperimentConfig cfg = parse_config_file(sec6_path());
  CHECK(cfg.game.n_agents() == 4);
  CHECK(cfg.game.grand_value() == 10.0);
  CHECK(cfg.beta == 0.8);
  CHECK(cfg.steps.kind == "fixed");
  CHECK(cfg.steps.alpha == 0.5);
  CHECK(cfg.max_iters == 1000);
  CHECK(cfg.seed == 7);

  const json once = serialize_config(cfg);
  const ExperimentConfig reparsed = parse_config(once);
  CHECK(serialize_config(reparsed) == once);
}

TEST_CASE("self-allocation initial state") {
  const ExperimentConfig cfg = parse_config_file(sec6_path());
  const StackedState w0 = cfg.make_initial_state();
  for (int i = 0; i < 4; ++i) {
    CHECK(w0.blocks(i, i) == 10.0);
    CHECK(w0.blocks.col(i).sum() == 10.0);
  }
}

TEST_CASE("explicit initial blocks") {
  json doc = minimal_config();
  doc["initial"] = {{"type", "explicit"}, {"blocks", {{0.5, 0.5}, {1.0, 0.0}}}};
  const ExperimentConfig cfg = parse_config(doc);
  const StackedState w0 = cfg.make_initial_state();
  CHECK(w0.blocks(0, 0) == 0.5);
  CHECK(w0.blocks(1, 0) == 0.5);
  CHECK(w0.blocks(0, 1) == 1.0);
  CHECK(w0.blocks(1, 1) == 0.0);
}

TEST_CASE("parse errors carry JSON paths") {
  auto expect_path = [](json doc, const std::string& fragment) {
    try {
      parse_config(doc);
      FAIL_CHECK("expected config_error for " << fragment);
    } catch (const config_error& e) {
      CHECK(e.path.find(fragment) != std::string::npos);
    }
  };

  json no_grand = minimal_config();
  no_grand["game"]["values"].erase("1,2");
  expect_path(no_grand, "game.values");

  json unsorted = minimal_config();
  unsorted["game"]["values"]["2,1"] = 1.0;
  expect_path(unsorted, "game.values['2,1']");

  json bad_index = minimal_config();
  bad_index["game"]["values"]["3"] = 1.0;
  expect_path(bad_index, "game.values['3']");

  json bad_matrix = minimal_config();
  bad_matrix["graphs"]["matrices"][0] = {0.5, 0.5};
  expect_path(bad_matrix, "graphs.matrices[0]");

  json bad_schedule = minimal_config();
  bad_schedule["graphs"]["schedule"]["type"] = "random";
  expect_path(bad_schedule, "graphs.schedule.type");

  json bad_order = minimal_config();
  bad_order["graphs"]["schedule"]["order"] = {7};
  expect_path(bad_order, "graphs.schedule.order");

  json no_seed = minimal_config();
  no_seed.erase("seed");
  expect_path(no_seed, "seed");

  json bad_iters = minimal_config();
  bad_iters["max_iters"] = 0;
  expect_path(bad_iters, "max_iters");
}

TEST_CASE("missing config file") {
  CHECK_THROWS_AS(parse_config_file("/nonexistent/path.json"), config_error);
}

TEST_CASE("validation gates") {
  SUBCASE("bundled config passes everything") {
    const ValidationReport report = validate_experiment(parse_config_file(sec6_path()));
    CHECK(report.all_pass);
    CHECK(report.smallest_q == 2);
    CHECK(report.gamma == 0.5);
  }

  SUBCASE("inadmissible fixed step fails only its gate") {
    json doc = minimal_config();
    doc["steps"]["alpha"] = 1.5;
    const ExperimentConfig cfg = parse_config(doc);  // structurally fine
    const ValidationReport report = validate_experiment(cfg);
    CHECK_FALSE(report.all_pass);
    for (const auto& gate : report.gates)
      if (gate.name == "step_schedule") CHECK_FALSE(gate.pass);
  }

  SUBCASE("empty stable set fails the feasibility gate") {
    json doc = minimal_config();
    doc["game"]["values"] = {{"1", 1.0}, {"2", 1.0}, {"1,2", 1.0}};
    const ValidationReport report = validate_experiment(parse_config(doc));
    CHECK_FALSE(report.all_pass);
    for (const auto& gate : report.gates)
      if (gate.name == "core_nonempty") CHECK_FALSE(gate.pass);
  }

  SUBCASE("beta outside the unit interval fails its gate") {
    json doc = minimal_config();
    doc["beta"] = 1.0;
    const ValidationReport report = validate_experiment(parse_config(doc));
    CHECK_FALSE(report.all_pass);
  }

  SUBCASE("disconnected family fails Q-connectivity") {
    json doc = minimal_config();
    doc["game"] = {{"n_agents", 4},
                   {"values", {{"1,2,3,4", 10.0}}}};
    doc["graphs"]["matrices"] = {std::vector<double>{0.5, 0.5, 0, 0,
                                                     0.5, 0.5, 0, 0,
                                                     0, 0, 0.5, 0.5,
                                                     0, 0, 0.5, 0.5}};
    doc["graphs"]["schedule"] = {{"type", "periodic"}, {"order", {0}}};
    const ValidationReport report = validate_experiment(parse_config(doc));
    CHECK_FALSE(report.all_pass);
    for (const auto& gate : report.gates)
      if (gate.name == "q_connectivity") CHECK_FALSE(gate.pass);
  }
}
