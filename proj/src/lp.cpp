#include "corereach/lp.hpp"

#include <cmath>
#include <vector>

#include "corereach/polytope.hpp"

namespace corereach {
namespace {

constexpr double kPivotEps = 1e-11;

}  // namespace

// Two-sided variable split y = y+ - y-, slack per inequality row, artificial
// per row that cannot start with a basic slack; minimize the artificial sum
// with Bland's rule (anti-cycling), then read y off the final basis.
std::optional<Eigen::VectorXd> find_feasible_point(const Polyhedron& p) {
  const int n = p.dim();
  const int m_eq = p.n_eq();
  const int m_in = p.n_ineq();
  const int m = m_eq + m_in;

  if (m == 0) return Eigen::VectorXd::Zero(n);

  // Row-major system rows: [A | rhs], meaning A*z = rhs over the split vars.
  // Column layout: y+ (n), y- (n), slacks (m_in), artificials (appended).
  const int n_real = 2 * n + m_in;
  std::vector<Eigen::VectorXd> rows(m);
  Eigen::VectorXd rhs(m);
  double scale = 1.0;

  for (int r = 0; r < m; ++r) {
    const bool is_eq = r < m_eq;
    const Eigen::VectorXd a =
        is_eq ? p.eq_normals.row(r).transpose() : p.ineq_normals.row(r - m_eq).transpose();
    const double b = is_eq ? p.eq_offsets(r) : p.ineq_offsets(r - m_eq);
    Eigen::VectorXd row = Eigen::VectorXd::Zero(n_real);
    row.head(n) = a;
    row.segment(n, n) = -a;
    if (!is_eq) row(2 * n + (r - m_eq)) = -1.0;  // a.y - s = b
    double b_r = b;
    if (b_r < 0.0) {
      row = -row;
      b_r = -b_r;
    }
    rows[r] = std::move(row);
    rhs(r) = b_r;
    scale = std::max(scale, std::abs(b));
  }

  // Initial basis: flipped inequality rows carry a +1 slack; everything else
  // gets an artificial column.
  std::vector<int> basis(m, -1);
  std::vector<int> artificial_rows;
  for (int r = m_eq; r < m; ++r) {
    const int slack_col = 2 * n + (r - m_eq);
    if (rows[r](slack_col) > 0.5) basis[r] = slack_col;
  }
  for (int r = 0; r < m; ++r)
    if (basis[r] < 0) artificial_rows.push_back(r);

  const int n_art = static_cast<int>(artificial_rows.size());
  const int n_cols = n_real + n_art;

  Eigen::MatrixXd T(m, n_cols + 1);
  T.setZero();
  for (int r = 0; r < m; ++r) {
    T.row(r).head(n_real) = rows[r].transpose();
    T(r, n_cols) = rhs(r);
  }
  for (int k = 0; k < n_art; ++k) {
    const int r = artificial_rows[k];
    const int col = n_real + k;
    T(r, col) = 1.0;
    basis[r] = col;
  }

  // Objective row for min(sum of artificials), expressed over nonbasic vars.
  Eigen::VectorXd obj = Eigen::VectorXd::Zero(n_cols + 1);
  for (int r : artificial_rows) obj -= T.row(r).transpose();

  const long max_pivots = 2000L + 60L * static_cast<long>(m + n_cols);
  for (long pivots = 0; pivots < max_pivots; ++pivots) {
    // Bland: first non-artificial column with negative reduced cost.
    int enter = -1;
    for (int j = 0; j < n_real; ++j) {
      if (obj(j) < -kPivotEps) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;

    int leave = -1;
    double best_ratio = 0.0;
    for (int r = 0; r < m; ++r) {
      if (T(r, enter) > kPivotEps) {
        const double ratio = T(r, n_cols) / T(r, enter);
        if (leave < 0 || ratio < best_ratio - 1e-15 ||
            (ratio <= best_ratio + 1e-15 && basis[r] < basis[leave])) {
          leave = r;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) break;  // unbounded column in phase 1: cannot happen, bail out

    T.row(leave) /= T(leave, enter);
    for (int r = 0; r < m; ++r) {
      if (r != leave && std::abs(T(r, enter)) > 0.0) T.row(r) -= T(r, enter) * T.row(leave);
    }
    obj -= obj(enter) * T.row(leave).transpose();
    basis[leave] = enter;
  }

  double artificial_sum = 0.0;
  for (int r = 0; r < m; ++r)
    if (basis[r] >= n_real) artificial_sum += T(r, n_cols);

  if (artificial_sum > 1e-8 * (1.0 + scale)) return std::nullopt;

  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  for (int r = 0; r < m; ++r) {
    if (basis[r] < n) y(basis[r]) += T(r, n_cols);
    else if (basis[r] < 2 * n) y(basis[r] - n) -= T(r, n_cols);
  }
  return y;
}

}  // namespace corereach
