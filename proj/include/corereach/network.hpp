#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace corereach {

struct StackedState;

/// Row-stochastic averaging weights: entry (i,j) is the weight agent i puts on
/// agent j's proposal. Stored as raw data; validate_matrix is the gate.
struct WeightMatrix {
  Eigen::MatrixXd entries;
  int dim() const { return static_cast<int>(entries.rows()); }
};

struct MatrixReport {
  bool ok = true;
  double min_nonzero_entry = 0.0;
  std::vector<std::string> issues;
};

/// Checks double stochasticity (1e-12), strictly positive diagonal, no
/// negative entries, and that every nonzero entry is at least gamma.
MatrixReport validate_matrix(const WeightMatrix& A, double gamma);

/// Finite family of weight matrices plus a deterministic rule k -> index:
/// an optional finite script prefix followed by a periodic tail.
class GraphSchedule {
 public:
  GraphSchedule(std::vector<WeightMatrix> family, std::vector<int> periodic_order,
                std::vector<int> script_prefix = {});

  const std::vector<WeightMatrix>& family() const { return family_; }
  const std::vector<int>& periodic_order() const { return order_; }
  const std::vector<int>& script_prefix() const { return script_; }
  int dim() const { return family_.front().dim(); }
  int period() const { return static_cast<int>(order_.size()); }
  int prefix_length() const { return static_cast<int>(script_.size()); }

  int index_at(int k) const;
  const WeightMatrix& matrix_at(int k) const;

 private:
  std::vector<WeightMatrix> family_;
  std::vector<int> order_;
  std::vector<int> script_;
};

/// True iff for every window start k in [0, horizon] the union of edges
/// {(j,i) : a_ij(l) > 0, l in [k, k+Q-1]} is strongly connected. For
/// eventually periodic schedules a horizon >= prefix + period + Q certifies
/// all k >= 0.
bool q_connected(const GraphSchedule& sched, int Q, int horizon);

/// Smallest Q <= max_q for which q_connected holds over a horizon that
/// certifies the whole schedule; 0 if none.
int smallest_certified_q(const GraphSchedule& sched, int max_q);

/// Applies the block-lifted operator: output block i = sum_j a_ij * block j.
/// Never materializes the Kronecker matrix.
StackedState lifted_apply(const WeightMatrix& A, const StackedState& w);

}  // namespace corereach
