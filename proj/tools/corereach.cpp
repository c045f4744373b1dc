// corereach: validate, run and sweep distributed payoff-allocation
// experiments, plus a self-contained numerical cross-check suite.

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <future>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "corereach/config.hpp"
#include "corereach/demo.hpp"
#include "corereach/diagnostics.hpp"
#include "corereach/engine.hpp"
#include "corereach/errors.hpp"
#include "corereach/game.hpp"
#include "corereach/network.hpp"
#include "corereach/polytope.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSuiteFailure = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNonconvergence = 3;
constexpr int kExitParse = 4;

namespace fs = std::filesystem;
using namespace corereach;

std::string resolve_output_dir(const std::string& flag_dir, const std::string& config_dir) {
  if (!flag_dir.empty()) return flag_dir;
  if (const char* env = std::getenv("COREREACH_OUT"); env && *env) return env;
  if (!config_dir.empty()) return config_dir;
  return ".";
}

std::string default_label(const std::string& config_path) {
  return fs::path(config_path).stem().string();
}

void print_report(const ValidationReport& report) {
  for (const auto& gate : report.gates)
    std::printf("[%s] %s: %s\n", gate.pass ? "PASS" : "FAIL", gate.name.c_str(),
                gate.detail.c_str());
}

int cmd_validate(const std::string& config_path) {
  ExperimentConfig cfg = parse_config_file(config_path);
  const ValidationReport report = validate_experiment(cfg);
  print_report(report);
  return report.all_pass ? kExitOk : kExitValidation;
}

void write_summary(const RunResult& result, const std::string& path) {
  nlohmann::json allocation = nlohmann::json::array();
  for (int i = 0; i < result.final_consensus.size(); ++i)
    allocation.push_back(result.final_consensus(i));
  const nlohmann::json summary{{"final_k", result.final_k},
                               {"final_dist", result.rows.back().dist},
                               {"final_allocation", std::move(allocation)},
                               {"converged", result.converged}};
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  const std::string text = summary.dump(2);
  std::fwrite(text.data(), 1, text.size(), f);
  std::fputc('\n', f);
  std::fclose(f);
}

int cmd_run(const std::string& config_path, const std::string& out_flag, bool force,
            std::string label) {
  ExperimentConfig cfg = parse_config_file(config_path);
  const ValidationReport report = validate_experiment(cfg);
  if (!report.all_pass) {
    print_report(report);
    if (!force) {
      std::fprintf(stderr, "validation failed; use --force to run anyway\n");
      return kExitValidation;
    }
    std::fprintf(stderr, "warning: continuing despite failed gates (--force)\n");
  }

  if (label.empty()) label = default_label(config_path);
  const fs::path dir = resolve_output_dir(out_flag, cfg.output_dir);
  fs::create_directories(dir);

  RunResult result;
  try {
    result = run(core_polyhedron(cfg.game), cfg.graphs, cfg.make_engine_config(),
                 cfg.make_initial_state());
  } catch (const empty_set_error& e) {
    std::fprintf(stderr, "run aborted: %s\n", e.what());
    return kExitValidation;
  }

  const std::string csv_path = (dir / (label + ".csv")).string();
  const std::string summary_path = (dir / (label + "_summary.json")).string();
  export_csv(result.rows, csv_path);
  write_summary(result, summary_path);

  std::printf("%s after %d iterations, final dist %.6g\n",
              result.converged ? "converged" : "did not converge", result.final_k,
              result.rows.back().dist);
  std::printf("wrote %s and %s\n", csv_path.c_str(), summary_path.c_str());
  return result.converged ? kExitOk : kExitNonconvergence;
}

struct SweepValue {
  std::string token;
  bool harmonic = false;
  double value = 0.0;
};

int iterations_to_threshold(const RunResult& result, double threshold) {
  for (const auto& row : result.rows)
    if (row.normalized_dist <= threshold) return row.k;
  return -1;
}

int cmd_sweep(const std::string& config_path, const std::string& param,
              const std::string& values_csv, double threshold, const std::string& out_flag,
              std::string label) {
  ExperimentConfig cfg = parse_config_file(config_path);
  const ValidationReport report = validate_experiment(cfg);
  if (!report.all_pass) {
    print_report(report);
    return kExitValidation;
  }

  // Reject every inadmissible value before any run starts.
  std::vector<SweepValue> values;
  std::stringstream ss(values_csv);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    SweepValue v;
    v.token = token;
    if (param == "alpha" && token == "harmonic") {
      v.harmonic = true;
    } else {
      try {
        v.value = std::stod(token);
      } catch (const std::exception&) {
        std::fprintf(stderr, "not a number: %s\n", token.c_str());
        return kExitValidation;
      }
      if (param == "beta" && !(v.value >= 0.0 && v.value < 1.0)) {
        std::fprintf(stderr, "inadmissible beta %s (must lie in [0,1))\n", token.c_str());
        return kExitValidation;
      }
      if (param == "alpha" && !(v.value > 0.0 && v.value <= 1.0)) {
        std::fprintf(stderr, "inadmissible alpha %s (must lie in (0,1])\n", token.c_str());
        return kExitValidation;
      }
    }
    values.push_back(v);
  }
  if (values.empty()) {
    std::fprintf(stderr, "no sweep values given\n");
    return kExitValidation;
  }

  if (label.empty()) label = default_label(config_path);
  const fs::path dir = resolve_output_dir(out_flag, cfg.output_dir);
  fs::create_directories(dir);

  const Polyhedron core = core_polyhedron(cfg.game);
  std::vector<std::future<RunResult>> futures;
  for (const SweepValue& v : values) {
    futures.push_back(std::async(std::launch::async, [&cfg, &core, &param, v]() {
      EngineConfig ec = cfg.make_engine_config();
      if (param == "beta") ec.beta = v.value;
      else ec.steps = v.harmonic ? StepSchedule::harmonic() : StepSchedule::fixed(v.value);
      return run(core, cfg.graphs, ec, cfg.make_initial_state());
    }));
  }

  std::FILE* summary = nullptr;
  const std::string summary_path = (dir / (label + "_sweep_summary.csv")).string();
  summary = std::fopen(summary_path.c_str(), "wb");
  if (!summary) {
    std::fprintf(stderr, "cannot open for writing: %s\n", summary_path.c_str());
    return kExitSuiteFailure;
  }
  std::fputs("param,value,iterations_to_threshold,threshold,final_normalized_dist,converged\n",
             summary);

  std::printf("%-8s %-12s %-24s %s\n", "param", "value", "iterations_to_threshold",
              "final_normalized_dist");
  for (size_t i = 0; i < values.size(); ++i) {
    const RunResult result = futures[i].get();
    const std::string run_label = label + "_" + param + "_" + values[i].token;
    export_csv(result.rows, (dir / (run_label + ".csv")).string());
    const int reached = iterations_to_threshold(result, threshold);
    std::fprintf(summary, "%s,%s,%d,%.17g,%.17g,%s\n", param.c_str(), values[i].token.c_str(),
                 reached, threshold, result.rows.back().normalized_dist,
                 result.converged ? "true" : "false");
    std::printf("%-8s %-12s %-24d %.6g\n", param.c_str(), values[i].token.c_str(), reached,
                result.rows.back().normalized_dist);
  }
  std::fclose(summary);
  std::printf("wrote %s\n", summary_path.c_str());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// oracle: seeded numerical cross-checks on the bundled demo setup.

Eigen::VectorXd random_box_point(std::mt19937_64& rng, int n, double half_width) {
  std::uniform_real_distribution<double> uniform(-half_width, half_width);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = uniform(rng);
  return x;
}

int cmd_oracle(std::uint64_t seed, int trials) {
  if (trials < 1) {
    std::fprintf(stderr, "trials must be >= 1\n");
    return kExitValidation;
  }
  const TUGame game = demo::demo_game();
  const Polyhedron core = core_polyhedron(game);
  const GraphSchedule sched = demo::demo_schedule();
  const Projector projector(core);
  bool all_ok = true;

  // Projection solver vs the subset-enumeration oracle.
  {
    std::mt19937_64 rng(seed);
    double max_dev = 0.0;
    std::uint64_t worst_trial = 0;
    for (int t = 0; t < trials; ++t) {
      const Eigen::VectorXd x = random_box_point(rng, 4, 20.0);
      const Eigen::VectorXd a = projector.solve(x).point;
      const Eigen::VectorXd b = project_oracle(core, x);
      const double dev = (a - b).lpNorm<Eigen::Infinity>();
      if (dev > max_dev) {
        max_dev = dev;
        worst_trial = t;
      }
    }
    const bool ok = max_dev <= 1e-8;
    all_ok = all_ok && ok;
    std::printf("[%s] projection-oracle agreement: max deviation %.3e (trial %" PRIu64 ")\n",
                ok ? "PASS" : "FAIL", max_dev, worst_trial);
  }

  {
    // proj and T suites: strict distance decrease toward fixed points.
    const double betas[] = {0.0, 0.2, 0.5, 0.8};
    std::mt19937_64 rng(seed + 1);
    double min_gap = std::numeric_limits<double>::infinity();
    int violations = 0;
    for (int t = 0; t < trials; ++t) {
      const Eigen::VectorXd x = random_box_point(rng, 4, 20.0);
      if ((x - projector.solve(x).point).norm() < 1e-6) continue;
      const Eigen::VectorXd member = projector.solve(random_box_point(rng, 4, 20.0)).point;
      for (double beta : betas) {
        const Eigen::VectorXd proj = projector.solve(x).point;
        const Eigen::VectorXd tx = x + (1.0 + beta) * (proj - x);
        const double gap = (x - member).norm() - (tx - member).norm();
        min_gap = std::min(min_gap, gap);
        if (gap <= -1e-12) {
          if (violations == 0)
            std::printf("  first violation: trial %d, beta %g, gap %.3e, x = [%g %g %g %g]\n",
                        t, beta, gap, x(0), x(1), x(2), x(3));
          ++violations;
        }
      }
    }
    const bool ok = violations == 0;
    all_ok = all_ok && ok;
    std::printf("[%s] relaxed-projection paracontraction: %d violations, min gap %.3e\n",
                ok ? "PASS" : "FAIL", violations, min_gap);
  }

  {
    // Lifted averaging and full-step suites.
    std::mt19937_64 rng(seed + 2);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double min_gap_avg = std::numeric_limits<double>::infinity();
    double min_gap_step = std::numeric_limits<double>::infinity();
    int violations = 0;
    const double alphas[] = {0.25, 0.5, 0.75};
    const double betas[] = {0.2, 0.8};
    for (int t = 0; t < trials; ++t) {
      StackedState w;
      w.blocks.resize(4, 4);
      for (int i = 0; i < 4; ++i) w.blocks.col(i) = random_box_point(rng, 4, 20.0);
      const Eigen::VectorXd member = projector.solve(random_box_point(rng, 4, 20.0)).point;
      const StackedState consensus = StackedState::consensus(member);

      const int mi = static_cast<int>(unit(rng) * 2.0);
      const StackedState averaged = lifted_apply(sched.family()[mi], w);
      const double gap_avg = (w.blocks - consensus.blocks).norm() -
                             (averaged.blocks - consensus.blocks).norm();
      min_gap_avg = std::min(min_gap_avg, gap_avg);
      if (gap_avg <= -1e-12) {
        if (violations == 0)
          std::printf("  first violation: averaging trial %d, matrix %d, gap %.3e\n", t, mi,
                      gap_avg);
        ++violations;
      }

      EngineConfig ec;
      ec.beta = betas[static_cast<int>(unit(rng) * 2.0)];
      ec.steps = StepSchedule::fixed(alphas[static_cast<int>(unit(rng) * 3.0)]);
      w.iteration_index = static_cast<int>(unit(rng) * 2.0);
      const StackedState stepped = engine_step(core, sched, ec, w);
      const double gap_step = (w.blocks - consensus.blocks).norm() -
                              (stepped.blocks - consensus.blocks).norm();
      min_gap_step = std::min(min_gap_step, gap_step);
      if (gap_step <= -1e-12) {
        if (violations == 0)
          std::printf("  first violation: full-step trial %d, alpha %g, beta %g, gap %.3e\n",
                      t, ec.steps.alpha(), ec.beta, gap_step);
        ++violations;
      }
    }
    const bool ok = violations == 0;
    all_ok = all_ok && ok;
    std::printf("[%s] averaging/full-step paracontraction: %d violations, "
                "min gaps %.3e / %.3e\n",
                ok ? "PASS" : "FAIL", violations, min_gap_avg, min_gap_step);
  }

  {
    // Admissible-innovation Monte Carlo.
    std::mt19937_64 rng(seed + 3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double max_inner = -std::numeric_limits<double>::infinity();
    int violations = 0;
    for (int t = 0; t < trials; ++t) {
      const Eigen::VectorXd w = random_box_point(rng, 4, 20.0);
      const double beta = 0.999 * unit(rng);
      const double perp = 2.0 * unit(rng);
      const double minus = 2.0 * unit(rng);
      const auto sample = innovation_general(core, beta, w, rng(), perp, minus);
      const Eigen::VectorXd proj = projector.solve(w).point;
      const double inner = (w - proj).dot(sample.result - proj);
      max_inner = std::max(max_inner, inner);
      if (inner > 1e-10) {
        ++violations;
        if (violations == 1)
          std::printf("  first violation: trial %d, inner %.3e, w = [%g %g %g %g]\n", t, inner,
                      w(0), w(1), w(2), w(3));
      }
    }

    const InnovationRule rule = [&core](const Eigen::VectorXd& ybar, int,
                                        std::mt19937_64& r) {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      const double beta = 0.999 * u(r);
      const double perp = 2.0 * u(r);
      const double minus = 2.0 * u(r);
      return innovation_general(core, beta, ybar, r(), perp, minus).result;
    };
    Eigen::VectorXd start(4);
    start << 10.0, 0.0, 0.0, 0.0;
    const BlackwellTrace trace = blackwell_run(core, rule, 2000, seed + 4, start, 1e4);
    const double initial = trace.dist_history.front();
    const double final = trace.dist_history.back();
    const bool trace_ok = final < 0.05 * initial;

    const bool ok = violations == 0 && trace_ok;
    all_ok = all_ok && ok;
    std::printf("[%s] approachability Monte Carlo: %d violations, max inner %.3e, "
                "average-trace dist %.3e -> %.3e\n",
                ok ? "PASS" : "FAIL", violations, max_inner, initial, final);
  }

  std::printf("%s\n", all_ok ? "all suites passed" : "SUITE FAILURES PRESENT");
  return all_ok ? kExitOk : kExitSuiteFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed payoff allocation over switching communication graphs"};
  app.require_subcommand(1);

  std::string config_path, out_dir, label, param, values_csv;
  bool force = false;
  double threshold = 1e-4;
  std::uint64_t seed = 7;
  int trials = 100;

  auto* validate = app.add_subcommand("validate", "Check assumption gates for a config");
  validate->add_option("-c,--config", config_path, "JSON experiment config")->required();

  auto* run_cmd = app.add_subcommand("run", "Run one experiment and export CSV + summary");
  run_cmd->add_option("-c,--config", config_path, "JSON experiment config")->required();
  run_cmd->add_option("-o,--out", out_dir, "Output directory (default: $COREREACH_OUT)");
  run_cmd->add_option("--label", label, "Artifact basename (default: config stem)");
  run_cmd->add_flag("--force", force, "Run even when validation gates fail");

  auto* sweep = app.add_subcommand("sweep", "Run one experiment per parameter value");
  sweep->add_option("-c,--config", config_path, "JSON experiment config")->required();
  sweep->add_option("--param", param, "Swept parameter")->required()
      ->check(CLI::IsMember({"alpha", "beta"}));
  sweep->add_option("--values", values_csv, "Comma-separated values ('harmonic' allowed for alpha)")
      ->required();
  sweep->add_option("--threshold", threshold, "Normalized-distance threshold for the summary");
  sweep->add_option("-o,--out", out_dir, "Output directory (default: $COREREACH_OUT)");
  sweep->add_option("--label", label, "Artifact basename (default: config stem)");

  auto* oracle = app.add_subcommand("oracle", "Run seeded numerical cross-check suites");
  oracle->add_option("--seed", seed, "RNG seed");
  oracle->add_option("--trials", trials, "Trials per suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(config_path);
    if (run_cmd->parsed()) return cmd_run(config_path, out_dir, force, label);
    if (sweep->parsed()) return cmd_sweep(config_path, param, values_csv, threshold, out_dir, label);
    if (oracle->parsed()) return cmd_oracle(seed, trials);
  } catch (const config_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitParse;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitSuiteFailure;
  }
  return kExitOk;
}
