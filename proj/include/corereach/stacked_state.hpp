#pragma once

#include <Eigen/Dense>

namespace corereach {

/// Stacked proposal state: column i of `blocks` is agent i's proposed payoff
/// vector, so the full state is an N*N vector read column by column. The
/// consensus set is exactly {all columns equal}.
struct StackedState {
  Eigen::MatrixXd blocks;  // N x N
  int iteration_index = 0;

  int n() const { return static_cast<int>(blocks.cols()); }
  Eigen::VectorXd block(int i) const { return blocks.col(i); }
  Eigen::VectorXd block_mean() const { return blocks.rowwise().mean(); }

  static StackedState consensus(const Eigen::VectorXd& x);
  /// Start where each agent assigns the full grand value to itself.
  static StackedState self_allocation(int n_agents, double grand_value);
};

inline StackedState StackedState::consensus(const Eigen::VectorXd& x) {
  StackedState w;
  w.blocks = x.replicate(1, x.size());
  return w;
}

inline StackedState StackedState::self_allocation(int n_agents, double grand_value) {
  StackedState w;
  w.blocks = Eigen::MatrixXd::Zero(n_agents, n_agents);
  for (int i = 0; i < n_agents; ++i) w.blocks(i, i) = grand_value;
  return w;
}

}  // namespace corereach
