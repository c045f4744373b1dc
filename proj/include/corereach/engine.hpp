#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "corereach/diagnostics.hpp"
#include "corereach/network.hpp"
#include "corereach/polytope.hpp"
#include "corereach/stacked_state.hpp"

namespace corereach {

/// Step-size rule. Fixed steps take alpha in (0,1]; the diminishing forms are
/// restricted to families whose divergent-sum / convergent-square-sum
/// admissibility is known: 1/(k+1) and c/(k+1)^p with c in (0,1], p in (1/2,1].
class StepSchedule {
 public:
  enum class Kind { fixed, harmonic, power };

  static StepSchedule fixed(double alpha);
  static StepSchedule harmonic();
  static StepSchedule power(double c, double p);

  double at(int k) const;
  Kind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double c() const { return c_; }
  double p() const { return p_; }
  bool is_fixed() const { return kind_ == Kind::fixed; }

 private:
  StepSchedule(Kind kind, double alpha, double c, double p)
      : kind_(kind), alpha_(alpha), c_(c), p_(p) {}
  Kind kind_;
  double alpha_, c_, p_;
};

struct EngineConfig {
  double beta = 0.0;                        // relaxation weight in [0,1)
  StepSchedule steps = StepSchedule::harmonic();
  int max_iters = 1000;
  double stop_tol = 1e-6;                   // on dist(w, core intersect consensus)
  std::optional<double> innovation_bound;   // runtime norm monitor, off by default
};

/// One draw of the general admissible innovation: u is the offset from the
/// projection, v_perp lies in the hyperplane orthogonal to u, v_minus points
/// against u, and result = relaxed projection + v_perp + v_minus.
struct InnovationSample {
  Eigen::VectorXd u;
  Eigen::VectorXd v_perp;
  Eigen::VectorXd v_minus;
  Eigen::VectorXd result;
};

/// The separating-hyperplane test: (w - proj(w)) . (x_next - proj(w)) <= tol.
bool approachability_check(const Polyhedron& p, const Eigen::VectorXd& w,
                           const Eigen::VectorXd& x_next, double tol = 1e-10);

/// Blockwise relaxed projection of the stacked state (same beta per block).
StackedState innovation_operator(const Polyhedron& p, const EngineConfig& cfg,
                                 const StackedState& w);

/// Admissible innovation with seeded orthogonal and antiparallel components:
/// v_perp gets norm perp_scale*|u|, v_minus = -minus_scale*u. When w_i is
/// already a member both vanish and the result is w_i.
InnovationSample innovation_general(const Polyhedron& p, double beta,
                                    const Eigen::VectorXd& w_i, std::uint64_t rng_seed,
                                    double perp_scale, double minus_scale);

struct RunResult {
  std::vector<StackedState> states;  // w(0), ..., w(final_k)
  std::vector<TrajectoryRow> rows;
  bool converged = false;
  int final_k = 0;
  Eigen::VectorXd final_consensus;   // block mean of the final state
  bool metric_monotone = true;
  std::vector<int> monotonicity_violations;
};

/// Iteration driver: holds the projection solver and per-agent warm starts
/// for one run. Not shareable across threads; runs are strictly sequential.
class Engine {
 public:
  Engine(const Polyhedron& p, const GraphSchedule& sched, EngineConfig cfg);

  /// One full update w -> (1-a)*A*w + a*A*T(w) with assumption monitors.
  StackedState step(const StackedState& w);

  RunResult run(const StackedState& w0);

  double metric(const StackedState& w);

 private:
  Eigen::MatrixXd innovate(const StackedState& w, int k);

  const Polyhedron* p_;
  const GraphSchedule* sched_;
  EngineConfig cfg_;
  Projector projector_;
  std::vector<Projector::WarmStart> warm_;
  Projector::WarmStart warm_mean_;
};

/// Single stateless update, for tests and one-off callers.
StackedState engine_step(const Polyhedron& p, const GraphSchedule& sched,
                         const EngineConfig& cfg, const StackedState& w);

RunResult run(const Polyhedron& p, const GraphSchedule& sched, const EngineConfig& cfg,
              const StackedState& w0);

struct BlackwellTrace {
  std::vector<Eigen::VectorXd> samples;           // y_1, y_2, ...
  std::vector<Eigen::VectorXd> running_averages;  // ybar_1, ybar_2, ...
  std::vector<double> dist_history;               // dist(ybar_k, p)
};

/// Generator of the next sample given the current running average.
using InnovationRule =
    std::function<Eigen::VectorXd(const Eigen::VectorXd& ybar, int k, std::mt19937_64& rng)>;

/// Runs the averaging process ybar_{k+1} = ybar_k + (y_{k+1} - ybar_k)/(k+1),
/// checking every emitted sample against the separating-hyperplane condition
/// and the uniform norm bound; violations raise contract_error.
BlackwellTrace blackwell_run(const Polyhedron& p, const InnovationRule& rule, int k_max,
                             std::uint64_t seed, const Eigen::VectorXd& start,
                             double bound = 1e6);

}  // namespace corereach
