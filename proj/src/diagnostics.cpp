#include "corereach/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace corereach {

double dist_core_consensus(const Projector& projector, const StackedState& w,
                           Projector::WarmStart* warm) {
  const Eigen::VectorXd mean = w.block_mean();
  double spread_sq = 0.0;
  for (int i = 0; i < w.n(); ++i) spread_sq += (w.blocks.col(i) - mean).squaredNorm();
  const auto result = projector.solve(mean, warm && warm->point.size() ? warm : nullptr);
  if (warm) {
    warm->point = result.point;
    warm->active = result.active;
  }
  const double mean_dist_sq = (mean - result.point).squaredNorm();
  return std::sqrt(spread_sq + w.n() * mean_dist_sq);
}

double dist_core_consensus(const Polyhedron& p, const StackedState& w) {
  Projector projector(p);
  return dist_core_consensus(projector, w);
}

double consensus_residual(const StackedState& w) {
  double worst = 0.0;
  for (int i = 0; i < w.n(); ++i)
    for (int j = i + 1; j < w.n(); ++j)
      worst = std::max(worst, (w.blocks.col(i) - w.blocks.col(j)).norm());
  return worst;
}

double block_sum_gap(const StackedState& w, double grand_value) {
  double worst = 0.0;
  for (int i = 0; i < w.n(); ++i)
    worst = std::max(worst, std::abs(w.blocks.col(i).sum() - grand_value));
  return worst;
}

void export_csv(const std::vector<TrajectoryRow>& rows, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  std::fputs("k,dist,normalized_dist,consensus_residual,block_sum_gap\n", f);
  for (const auto& r : rows) {
    std::fprintf(f, "%d,%.17g,%.17g,%.17g,%.17g\n", r.k, r.dist, r.normalized_dist,
                 r.consensus_residual, r.block_sum_gap);
  }
  if (std::fclose(f) != 0) throw std::runtime_error("write failed: " + path);
}

}  // namespace corereach
