#pragma once

#include <string>
#include <vector>

#include "corereach/polytope.hpp"
#include "corereach/stacked_state.hpp"

namespace corereach {

struct TrajectoryRow {
  int k = 0;
  double dist = 0.0;             // dist(w(k), core intersect consensus)
  double normalized_dist = 0.0;  // dist / dist at k=0 (1 at k=0 when started off the set)
  double consensus_residual = 0.0;
  double block_sum_gap = 0.0;    // max_i |sum(block i) - grand value|
};

/// Distance from the stacked state to {consensus on a member of p}, via the
/// closed-form reduction: the nearest consensus point is the projection of the
/// block mean, so
///   dist^2 = sum_i |w_i - mean|^2 + N * dist(mean, p)^2.
double dist_core_consensus(const Polyhedron& p, const StackedState& w);

/// Same metric but reusing a prepared Projector (and optional warm start).
double dist_core_consensus(const Projector& projector, const StackedState& w,
                           Projector::WarmStart* warm = nullptr);

/// max over agent pairs of |w_i - w_j|; zero exactly on consensus states.
double consensus_residual(const StackedState& w);

/// max over agents of |sum(block i) - grand_value|.
double block_sum_gap(const StackedState& w, double grand_value);

/// Writes `k,dist,normalized_dist,consensus_residual,block_sum_gap` then one
/// line per row at full double precision; byte-stable for a fixed trajectory.
void export_csv(const std::vector<TrajectoryRow>& rows, const std::string& path);

}  // namespace corereach
