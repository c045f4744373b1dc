#include "corereach/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "corereach/errors.hpp"
#include "corereach/lp.hpp"

namespace corereach {
namespace {

constexpr double kActiveTol = 1e-9;
constexpr double kMultTol = 1e-10;

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Min-norm solution of C*delta = rhs (least squares when inconsistent).
VectorXd min_norm_solve(const MatrixXd& C, const VectorXd& rhs) {
  return C.completeOrthogonalDecomposition().solve(rhs);
}

// Lawson-Hanson nonnegative least squares: min |M*phi - g| with phi >= 0.
// Returns the residual norm; phi is written in place.
double nnls(const MatrixXd& M, const VectorXd& g, VectorXd& phi) {
  const int q = static_cast<int>(M.cols());
  phi = VectorXd::Zero(q);
  std::vector<bool> passive(q, false);
  VectorXd residual = g;
  const double grad_tol = 1e-12 * (1.0 + g.norm());

  for (int outer = 0; outer < 3 * q + 10; ++outer) {
    const VectorXd w = M.transpose() * residual;
    int enter = -1;
    double best = grad_tol;
    for (int j = 0; j < q; ++j) {
      if (!passive[j] && w(j) > best) {
        best = w(j);
        enter = j;
      }
    }
    if (enter < 0) break;
    passive[enter] = true;

    for (int inner = 0; inner < 3 * q + 10; ++inner) {
      std::vector<int> pidx;
      for (int j = 0; j < q; ++j)
        if (passive[j]) pidx.push_back(j);
      MatrixXd Mp(M.rows(), pidx.size());
      for (size_t c = 0; c < pidx.size(); ++c) Mp.col(c) = M.col(pidx[c]);
      const VectorXd z = Mp.completeOrthogonalDecomposition().solve(g);

      bool all_positive = true;
      for (int c = 0; c < z.size(); ++c)
        if (z(c) <= 0.0) all_positive = false;
      if (all_positive) {
        phi.setZero();
        for (size_t c = 0; c < pidx.size(); ++c) phi(pidx[c]) = z(c);
        break;
      }
      double alpha = std::numeric_limits<double>::infinity();
      for (size_t c = 0; c < pidx.size(); ++c) {
        if (z(c) <= 0.0) {
          const double denom = phi(pidx[c]) - z(c);
          if (denom > 0.0) alpha = std::min(alpha, phi(pidx[c]) / denom);
        }
      }
      if (!std::isfinite(alpha)) alpha = 0.0;
      for (size_t c = 0; c < pidx.size(); ++c)
        phi(pidx[c]) += alpha * (z(c) - phi(pidx[c]));
      for (int j = 0; j < q; ++j) {
        if (passive[j] && phi(j) <= 1e-14) {
          passive[j] = false;
          phi(j) = 0.0;
        }
      }
    }
    residual = g - M * phi;
  }
  return (g - M * phi).norm();
}

struct WorkingSystem {
  MatrixXd C;
  VectorXd d;
};

WorkingSystem assemble(const Polyhedron& p, const std::vector<int>& active_ineq) {
  const int n = p.dim();
  const int rows = p.n_eq() + static_cast<int>(active_ineq.size());
  WorkingSystem ws;
  ws.C.resize(rows, n);
  ws.d.resize(rows);
  for (int r = 0; r < p.n_eq(); ++r) {
    ws.C.row(r) = p.eq_normals.row(r);
    ws.d(r) = p.eq_offsets(r);
  }
  for (size_t k = 0; k < active_ineq.size(); ++k) {
    ws.C.row(p.n_eq() + static_cast<int>(k)) = p.ineq_normals.row(active_ineq[k]);
    ws.d(p.n_eq() + static_cast<int>(k)) = p.ineq_offsets(active_ineq[k]);
  }
  return ws;
}

// Does a nonnegative multiplier certificate y - x = sum(mu_i * a_i) exist,
// with mu free on equality rows? Decided by NNLS with split equality columns.
bool kkt_certificate(const Polyhedron& p, const std::vector<int>& active_ineq,
                     const VectorXd& g) {
  const int n = p.dim();
  const int q = static_cast<int>(active_ineq.size()) + 2 * p.n_eq();
  if (q == 0) return g.norm() <= 1e-9;
  MatrixXd M(n, q);
  int c = 0;
  for (int r : active_ineq) M.col(c++) = p.ineq_normals.row(r).transpose();
  for (int r = 0; r < p.n_eq(); ++r) {
    M.col(c++) = p.eq_normals.row(r).transpose();
    M.col(c++) = -p.eq_normals.row(r).transpose();
  }
  VectorXd phi;
  return nnls(M, g, phi) <= 1e-9 * (1.0 + g.norm());
}

std::vector<int> active_rows_at(const Polyhedron& p, const VectorXd& y) {
  std::vector<int> act;
  for (int r = 0; r < p.n_ineq(); ++r) {
    const double slack = p.ineq_normals.row(r).dot(y) - p.ineq_offsets(r);
    if (slack <= kActiveTol * (1.0 + std::abs(p.ineq_offsets(r)))) act.push_back(r);
  }
  return act;
}

}  // namespace

Polyhedron Polyhedron::make(MatrixXd eq_n, VectorXd eq_b, MatrixXd ineq_n, VectorXd ineq_b) {
  Polyhedron p{std::move(eq_n), std::move(eq_b), std::move(ineq_n), std::move(ineq_b)};
  const int dim = p.dim();
  if (dim < 1) throw std::invalid_argument("polyhedron dimension must be >= 1");
  if (p.eq_normals.rows() != p.eq_offsets.size() ||
      p.ineq_normals.rows() != p.ineq_offsets.size())
    throw std::invalid_argument("normal/offset row counts differ");
  if (p.eq_normals.rows() > 0 && p.eq_normals.cols() != dim)
    throw std::invalid_argument("equality rows have inconsistent dimension");
  if (p.ineq_normals.rows() > 0 && p.ineq_normals.cols() != dim)
    throw std::invalid_argument("inequality rows have inconsistent dimension");
  for (int r = 0; r < p.n_eq(); ++r)
    if (p.eq_normals.row(r).norm() == 0.0)
      throw std::invalid_argument("zero equality normal row");
  for (int r = 0; r < p.n_ineq(); ++r)
    if (p.ineq_normals.row(r).norm() == 0.0)
      throw std::invalid_argument("zero inequality normal row");
  return p;
}

double Polyhedron::violation(const Eigen::VectorXd& x) const {
  if (x.size() != dim()) throw std::invalid_argument("vector dimension mismatch");
  double v = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < n_eq(); ++r)
    v = std::max(v, std::abs(eq_normals.row(r).dot(x) - eq_offsets(r)));
  for (int r = 0; r < n_ineq(); ++r)
    v = std::max(v, ineq_offsets(r) - ineq_normals.row(r).dot(x));
  if (n_rows() == 0) v = 0.0;
  return v;
}

bool Polyhedron::contains(const Eigen::VectorXd& x, double tol) const {
  return violation(x) <= tol;
}

Projector::Projector(const Polyhedron& p) : p_(&p) {
  max_iterations_ = 200 + 20 * p.n_rows();
  if (p.n_rows() == 0) {
    feasible_ = VectorXd::Zero(p.dim());
    return;
  }
  auto feasible = find_feasible_point(p);
  if (!feasible) throw empty_set_error("polyhedron is empty");
  feasible_ = std::move(*feasible);
}

Projector::Result Projector::solve(const VectorXd& x, const WarmStart* warm) const {
  const Polyhedron& p = *p_;
  const int n = p.dim();
  if (x.size() != n) throw std::invalid_argument("vector dimension mismatch");

  if (p.n_rows() == 0) return {x, {}, 0};
  if (p.violation(x) <= 0.0) return {x, active_rows_at(p, x), 0};

  VectorXd y;
  if (warm && warm->point.size() == n && p.violation(warm->point) <= 1e-8) {
    y = warm->point;
  } else {
    y = feasible_;
  }
  std::vector<int> working = active_rows_at(p, y);

  for (int iter = 1; iter <= max_iterations_; ++iter) {
    WorkingSystem ws = assemble(p, working);
    VectorXd y_eqp;
    if (ws.C.rows() == 0) {
      y_eqp = x;
    } else {
      y_eqp = x + min_norm_solve(ws.C, ws.d - ws.C * x);
    }
    const VectorXd step = y_eqp - y;
    const double step_scale = 1e-12 * (1.0 + y.norm() + x.norm());

    if (step.norm() <= step_scale) {
      // Stationary on the working set; test multipliers.
      const VectorXd g = y - x;
      VectorXd theta;
      bool min_norm_ok = true;
      if (ws.C.rows() > 0) {
        theta = min_norm_solve(ws.C.transpose(), g);
        for (size_t k = 0; k < working.size(); ++k)
          if (theta(p.n_eq() + static_cast<int>(k)) < -kMultTol) min_norm_ok = false;
      }
      if (min_norm_ok || kkt_certificate(p, working, g)) {
        std::sort(working.begin(), working.end());
        return {y, working, iter};
      }
      // Drop the most negative multiplier (first such row on ties).
      int drop_pos = -1;
      double most_negative = -kMultTol;
      for (size_t k = 0; k < working.size(); ++k) {
        const double mu = theta(p.n_eq() + static_cast<int>(k));
        if (mu < most_negative) {
          most_negative = mu;
          drop_pos = static_cast<int>(k);
        }
      }
      if (drop_pos < 0) {
        // min_norm_ok was false, so a strictly negative multiplier exists.
        std::sort(working.begin(), working.end());
        return {y, working, iter};
      }
      working.erase(working.begin() + drop_pos);
      continue;
    }

    // Walk toward the working-set optimum; stop at the first blocking row.
    double t = 1.0;
    int blocking = -1;
    for (int r = 0; r < p.n_ineq(); ++r) {
      if (std::find(working.begin(), working.end(), r) != working.end()) continue;
      const double denom = p.ineq_normals.row(r).dot(step);
      if (denom >= -1e-13 * (1.0 + step.norm())) continue;
      const double slack = p.ineq_normals.row(r).dot(y) - p.ineq_offsets(r);
      const double t_r = std::max(0.0, -slack / denom);
      if (t_r < t) {  // ascending r keeps the smallest row index on ties
        t = t_r;
        blocking = r;
      }
    }
    y += t * step;
    if (blocking >= 0 && t < 1.0) {
      working.insert(std::lower_bound(working.begin(), working.end(), blocking), blocking);
    }
  }
  throw nonconvergence_error("active-set projection exceeded iteration cap");
}

VectorXd project(const Polyhedron& p, const VectorXd& x) {
  return Projector(p).solve(x).point;
}

VectorXd overproject(const Polyhedron& p, const VectorXd& x) {
  const VectorXd y = project(p, x);
  return x + 2.0 * (y - x);
}

VectorXd apply_T(const Polyhedron& p, double beta, const VectorXd& x) {
  if (!(beta >= 0.0 && beta < 1.0))
    throw std::invalid_argument("beta must lie in [0,1)");
  const VectorXd y = project(p, x);
  return x + (1.0 + beta) * (y - x);
}

double distance(const Polyhedron& p, const VectorXd& x) {
  return (x - project(p, x)).norm();
}

VectorXd project_oracle(const Polyhedron& p, const VectorXd& x) {
  if (p.n_rows() > 20)
    throw std::invalid_argument("project_oracle supports at most 20 constraint rows");
  if (x.size() != p.dim()) throw std::invalid_argument("vector dimension mismatch");

  const int m_in = p.n_ineq();
  std::vector<std::uint32_t> masks(1u << m_in);
  std::iota(masks.begin(), masks.end(), 0u);
  std::stable_sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
    const int ca = __builtin_popcount(a), cb = __builtin_popcount(b);
    return ca != cb ? ca < cb : a < b;
  });

  const double feas_tol = 1e-9 * (1.0 + x.norm());
  bool found = false;
  double best_dist = std::numeric_limits<double>::infinity();
  VectorXd best_point;

  for (const std::uint32_t mask : masks) {
    std::vector<int> act;
    for (int r = 0; r < m_in; ++r)
      if ((mask >> r) & 1u) act.push_back(r);

    WorkingSystem ws = assemble(p, act);
    VectorXd y;
    if (ws.C.rows() == 0) {
      y = x;
    } else {
      y = x + min_norm_solve(ws.C, ws.d - ws.C * x);
      if ((ws.C * y - ws.d).norm() > feas_tol) continue;  // inconsistent candidate rows
    }
    if (p.violation(y) > feas_tol) continue;

    if (ws.C.rows() > 0) {
      const VectorXd theta = min_norm_solve(ws.C.transpose(), y - x);
      bool dual_ok = true;
      for (size_t k = 0; k < act.size(); ++k)
        if (theta(p.n_eq() + static_cast<int>(k)) < -1e-9) dual_ok = false;
      if (!dual_ok) continue;
    }

    const double dist = (y - x).norm();
    if (dist < best_dist - 1e-12 * (1.0 + dist)) {
      best_dist = dist;
      best_point = y;
      found = true;
    }
    // Masks arrive ordered by cardinality then lex, so ties keep the first hit.
  }
  if (!found) throw empty_set_error("no feasible candidate active set");
  return best_point;
}

}  // namespace corereach
