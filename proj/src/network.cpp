#include "corereach/network.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "corereach/engine.hpp"

namespace corereach {

namespace {
constexpr double kStochasticTol = 1e-12;
}

MatrixReport validate_matrix(const WeightMatrix& A, double gamma) {
  if (gamma <= 0.0) throw std::invalid_argument("gamma must be positive");
  MatrixReport report;
  const auto& m = A.entries;
  const int n = A.dim();
  if (m.cols() != n || n == 0) {
    report.ok = false;
    report.issues.push_back("matrix is not square");
    return report;
  }
  double min_nonzero = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (m(i, j) < 0.0)
        report.issues.push_back("negative entry at (" + std::to_string(i + 1) + "," +
                                std::to_string(j + 1) + ")");
      if (m(i, j) > 0.0) min_nonzero = std::min(min_nonzero, m(i, j));
    }
    if (std::abs(m.row(i).sum() - 1.0) > kStochasticTol)
      report.issues.push_back("row " + std::to_string(i + 1) + " does not sum to 1");
    if (std::abs(m.col(i).sum() - 1.0) > kStochasticTol)
      report.issues.push_back("column " + std::to_string(i + 1) + " does not sum to 1");
    if (!(m(i, i) > 0.0))
      report.issues.push_back("diagonal entry " + std::to_string(i + 1) + " is not positive");
  }
  if (std::isfinite(min_nonzero)) {
    report.min_nonzero_entry = min_nonzero;
    if (min_nonzero < gamma)
      report.issues.push_back("a nonzero entry is below gamma");
  }
  report.ok = report.issues.empty();
  return report;
}

GraphSchedule::GraphSchedule(std::vector<WeightMatrix> family, std::vector<int> periodic_order,
                             std::vector<int> script_prefix)
    : family_(std::move(family)), order_(std::move(periodic_order)),
      script_(std::move(script_prefix)) {
  if (family_.empty()) throw std::invalid_argument("matrix family must be nonempty");
  if (order_.empty()) throw std::invalid_argument("periodic order must be nonempty");
  const int n = family_.front().dim();
  for (const auto& A : family_) {
    if (A.dim() != n || A.entries.cols() != n)
      throw std::invalid_argument("family matrices must share one square dimension");
  }
  auto check_index = [&](int idx) {
    if (idx < 0 || idx >= static_cast<int>(family_.size()))
      throw std::invalid_argument("schedule references a matrix outside the family");
  };
  for (int idx : order_) check_index(idx);
  for (int idx : script_) check_index(idx);
}

int GraphSchedule::index_at(int k) const {
  if (k < 0) throw std::invalid_argument("schedule index must be nonnegative");
  if (k < prefix_length()) return script_[k];
  return order_[(k - prefix_length()) % period()];
}

const WeightMatrix& GraphSchedule::matrix_at(int k) const { return family_[index_at(k)]; }

namespace {

// Strong connectivity of a directed adjacency via forward+reverse reach from 0.
bool strongly_connected(const std::vector<std::vector<bool>>& adj) {
  const int n = static_cast<int>(adj.size());
  auto reach = [&](bool reverse) {
    std::vector<bool> seen(n, false);
    std::vector<int> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < n; ++v) {
        const bool edge = reverse ? adj[v][u] : adj[u][v];
        if (edge && !seen[v]) {
          seen[v] = true;
          stack.push_back(v);
        }
      }
    }
    for (bool s : seen)
      if (!s) return false;
    return true;
  };
  return reach(false) && reach(true);
}

}  // namespace

bool q_connected(const GraphSchedule& sched, int Q, int horizon) {
  if (Q < 1) throw std::invalid_argument("Q must be >= 1");
  if (horizon < 0) throw std::invalid_argument("horizon must be nonnegative");
  const int n = sched.dim();
  for (int k = 0; k <= horizon; ++k) {
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (int l = k; l < k + Q; ++l) {
      const auto& m = sched.matrix_at(l).entries;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (m(i, j) > 0.0) adj[i][j] = true;
    }
    if (!strongly_connected(adj)) return false;
  }
  return true;
}

int smallest_certified_q(const GraphSchedule& sched, int max_q) {
  for (int q = 1; q <= max_q; ++q) {
    const int horizon = sched.prefix_length() + sched.period() + q;
    if (q_connected(sched, q, horizon)) return q;
  }
  return 0;
}

StackedState lifted_apply(const WeightMatrix& A, const StackedState& w) {
  const int n = A.dim();
  if (A.entries.cols() != n) throw std::invalid_argument("weight matrix must be square");
  if (w.blocks.rows() != n || w.blocks.cols() != n)
    throw std::invalid_argument("stacked state does not match matrix dimension");
  StackedState out;
  // Column i of blocks is agent i's proposal, so averaging is B * A^T.
  out.blocks = w.blocks * A.entries.transpose();
  out.iteration_index = w.iteration_index;
  return out;
}

}  // namespace corereach
