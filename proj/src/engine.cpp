#include "corereach/engine.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "corereach/errors.hpp"

namespace corereach {

StepSchedule StepSchedule::fixed(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("fixed step size must lie in (0,1]");
  return StepSchedule(Kind::fixed, alpha, 0.0, 0.0);
}

StepSchedule StepSchedule::harmonic() { return StepSchedule(Kind::harmonic, 0.0, 1.0, 1.0); }

StepSchedule StepSchedule::power(double c, double p) {
  if (!(c > 0.0 && c <= 1.0))
    throw std::invalid_argument("power step coefficient must lie in (0,1]");
  if (!(p > 0.5))
    throw std::invalid_argument("power step exponent must exceed 1/2 (square sum diverges)");
  if (!(p <= 1.0))
    throw std::invalid_argument("power step exponent must be at most 1 (sum converges)");
  return StepSchedule(Kind::power, 0.0, c, p);
}

double StepSchedule::at(int k) const {
  if (k < 0) throw std::invalid_argument("step index must be nonnegative");
  switch (kind_) {
    case Kind::fixed: return alpha_;
    case Kind::harmonic: return 1.0 / (k + 1);
    case Kind::power: return c_ / std::pow(k + 1, p_);
  }
  return 0.0;
}

bool approachability_check(const Polyhedron& p, const Eigen::VectorXd& w,
                           const Eigen::VectorXd& x_next, double tol) {
  const Eigen::VectorXd proj = project(p, w);
  return (w - proj).dot(x_next - proj) <= tol;
}

StackedState innovation_operator(const Polyhedron& p, const EngineConfig& cfg,
                                 const StackedState& w) {
  if (!(cfg.beta >= 0.0 && cfg.beta < 1.0))
    throw std::invalid_argument("beta must lie in [0,1)");
  Projector projector(p);
  StackedState out = w;
  for (int i = 0; i < w.n(); ++i) {
    const Eigen::VectorXd wi = w.block(i);
    const Eigen::VectorXd proj = projector.solve(wi).point;
    out.blocks.col(i) = wi + (1.0 + cfg.beta) * (proj - wi);
  }
  return out;
}

InnovationSample innovation_general(const Polyhedron& p, double beta,
                                    const Eigen::VectorXd& w_i, std::uint64_t rng_seed,
                                    double perp_scale, double minus_scale) {
  if (!(beta >= 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in [0,1)");
  if (perp_scale < 0.0 || minus_scale < 0.0)
    throw std::invalid_argument("innovation scales must be nonnegative");

  InnovationSample s;
  const Eigen::VectorXd proj = project(p, w_i);
  s.u = w_i - proj;
  const double u_norm = s.u.norm();
  s.v_perp = Eigen::VectorXd::Zero(w_i.size());
  s.v_minus = Eigen::VectorXd::Zero(w_i.size());
  if (u_norm == 0.0) {
    s.result = w_i;  // member point: the orthogonal hyperplane is undefined
    return s;
  }

  if (perp_scale > 0.0 && w_i.size() > 1) {
    std::mt19937_64 rng(rng_seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd g(w_i.size());
    for (int tries = 0; tries < 16; ++tries) {
      for (int j = 0; j < g.size(); ++j) g(j) = normal(rng);
      Eigen::VectorXd perp = g - (g.dot(s.u) / s.u.squaredNorm()) * s.u;
      if (perp.norm() > 1e-12 * g.norm()) {
        s.v_perp = perp * (perp_scale * u_norm / perp.norm());
        break;
      }
    }
  }
  s.v_minus = -minus_scale * s.u;
  s.result = w_i + (1.0 + beta) * (proj - w_i) + s.v_perp + s.v_minus;
  return s;
}

Engine::Engine(const Polyhedron& p, const GraphSchedule& sched, EngineConfig cfg)
    : p_(&p), sched_(&sched), cfg_(std::move(cfg)), projector_(p) {
  if (!(cfg_.beta >= 0.0 && cfg_.beta < 1.0))
    throw std::invalid_argument("beta must lie in [0,1)");
  if (cfg_.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (cfg_.stop_tol < 0.0) throw std::invalid_argument("stop_tol must be nonnegative");
  if (cfg_.innovation_bound && *cfg_.innovation_bound <= 0.0)
    throw std::invalid_argument("innovation bound must be positive");
  if (sched.dim() != p.dim())
    throw std::invalid_argument("graph dimension does not match payoff dimension");
  warm_.resize(p.dim());
}

Eigen::MatrixXd Engine::innovate(const StackedState& w, int k) {
  const int n = w.n();
  Eigen::MatrixXd x_next(n, n);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd wi = w.block(i);
    auto result = projector_.solve(wi, warm_[i].point.size() ? &warm_[i] : nullptr);
    warm_[i].point = result.point;
    warm_[i].active = std::move(result.active);

    const Eigen::VectorXd xi = wi + (1.0 + cfg_.beta) * (result.point - wi);

    // Assumption monitors: separating-hyperplane condition and norm bound.
    const double lhs = (wi - result.point).dot(xi - result.point);
    if (lhs > 1e-10)
      throw contract_error("innovation violates the approachability condition at block " +
                           std::to_string(i + 1) + ", k=" + std::to_string(k));
    if (cfg_.innovation_bound && xi.norm() > *cfg_.innovation_bound)
      throw monitor_error("innovation norm bound exceeded at block " + std::to_string(i + 1) +
                          ", k=" + std::to_string(k));
    x_next.col(i) = xi;
  }
  return x_next;
}

StackedState Engine::step(const StackedState& w) {
  const int k = w.iteration_index;
  if (k < 0) throw std::invalid_argument("iteration index must be nonnegative");
  const double alpha = cfg_.steps.at(k);
  const WeightMatrix& A = sched_->matrix_at(k);

  StackedState innovated = w;
  innovated.blocks = innovate(w, k);

  const StackedState averaged_w = lifted_apply(A, w);
  const StackedState averaged_x = lifted_apply(A, innovated);

  StackedState next;
  next.blocks = (1.0 - alpha) * averaged_w.blocks + alpha * averaged_x.blocks;
  next.iteration_index = k + 1;
  return next;
}

double Engine::metric(const StackedState& w) {
  return dist_core_consensus(projector_, w, &warm_mean_);
}

RunResult Engine::run(const StackedState& w0) {
  const int n = p_->dim();
  if (w0.blocks.rows() != n || w0.blocks.cols() != n)
    throw std::invalid_argument("initial state does not match payoff dimension");

  RunResult out;
  const double grand = p_->eq_offsets.size() ? p_->eq_offsets(0) : 0.0;

  StackedState w = w0;
  double current = metric(w);
  const double dist0 = current;
  auto push = [&](const StackedState& state, double d) {
    out.states.push_back(state);
    out.rows.push_back({state.iteration_index, d, dist0 > 0.0 ? d / dist0 : 0.0,
                        consensus_residual(state), block_sum_gap(state, grand)});
  };
  push(w, current);

  while (current > cfg_.stop_tol && w.iteration_index < cfg_.max_iters) {
    w = step(w);
    const double next = metric(w);
    if (next > current + 1e-10) {
      out.metric_monotone = false;
      out.monotonicity_violations.push_back(w.iteration_index);
    }
    current = next;
    push(w, current);
  }

  out.converged = current <= cfg_.stop_tol;
  out.final_k = w.iteration_index;
  out.final_consensus = w.block_mean();
  return out;
}

StackedState engine_step(const Polyhedron& p, const GraphSchedule& sched,
                         const EngineConfig& cfg, const StackedState& w) {
  Engine engine(p, sched, cfg);
  return engine.step(w);
}

RunResult run(const Polyhedron& p, const GraphSchedule& sched, const EngineConfig& cfg,
              const StackedState& w0) {
  Engine engine(p, sched, cfg);
  return engine.run(w0);
}

BlackwellTrace blackwell_run(const Polyhedron& p, const InnovationRule& rule, int k_max,
                             std::uint64_t seed, const Eigen::VectorXd& start, double bound) {
  if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
  if (start.size() != p.dim()) throw std::invalid_argument("start dimension mismatch");

  Projector projector(p);
  std::mt19937_64 rng(seed);
  BlackwellTrace trace;

  Eigen::VectorXd y = rule(start, 0, rng);
  if (y.norm() > bound) throw contract_error("sample exceeds the uniform norm bound at k=1");
  Eigen::VectorXd ybar = y;
  trace.samples.push_back(y);
  trace.running_averages.push_back(ybar);
  trace.dist_history.push_back((ybar - projector.solve(ybar).point).norm());

  for (int k = 1; k < k_max; ++k) {
    const Eigen::VectorXd proj = projector.solve(ybar).point;
    y = rule(ybar, k, rng);
    if (y.norm() > bound)
      throw contract_error("sample exceeds the uniform norm bound at k=" + std::to_string(k + 1));
    if ((ybar - proj).dot(y - proj) > 1e-10)
      throw contract_error("sample violates the approachability condition at k=" +
                           std::to_string(k + 1));
    ybar += (y - ybar) / (k + 1);
    trace.samples.push_back(y);
    trace.running_averages.push_back(ybar);
    trace.dist_history.push_back((ybar - projector.solve(ybar).point).norm());
  }
  return trace;
}

}  // namespace corereach
