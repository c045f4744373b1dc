#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

namespace corereach {

/// Convex polyhedron {x : eq_normals*x = eq_offsets, ineq_normals*x >= ineq_offsets}.
/// Rows keep their construction order; tie-breaking and reports refer to a
/// global row index with equalities first, then inequalities.
struct Polyhedron {
  Eigen::MatrixXd eq_normals;    // n_eq x dim
  Eigen::VectorXd eq_offsets;    // n_eq
  Eigen::MatrixXd ineq_normals;  // n_ineq x dim
  Eigen::VectorXd ineq_offsets;  // n_ineq

  /// Validates shapes and rejects zero normal rows.
  static Polyhedron make(Eigen::MatrixXd eq_n, Eigen::VectorXd eq_b,
                         Eigen::MatrixXd ineq_n, Eigen::VectorXd ineq_b);

  int dim() const { return eq_normals.cols() > 0 ? static_cast<int>(eq_normals.cols())
                                                 : static_cast<int>(ineq_normals.cols()); }
  int n_eq() const { return static_cast<int>(eq_normals.rows()); }
  int n_ineq() const { return static_cast<int>(ineq_normals.rows()); }
  int n_rows() const { return n_eq() + n_ineq(); }

  /// Max constraint violation of x (0 when x is a member).
  double violation(const Eigen::VectorXd& x) const;
  bool contains(const Eigen::VectorXd& x, double tol) const;
};

/// Euclidean least-distance solver onto a Polyhedron.
///
/// Primal active-set method: starting from a feasible point, it repeatedly
/// solves the equality-constrained projection restricted to a working set of
/// rows, walks to the nearest blocking constraint, and drops rows whose
/// multipliers certify they are not binding. Degenerate working sets are
/// handled by a nonnegative-least-squares multiplier certificate, so heavily
/// redundant vertices terminate correctly.
///
/// The constructor runs phase-1 feasibility once and caches a feasible point;
/// it throws empty_set_error if the polyhedron is empty. After construction
/// the object is immutable and safe to share across threads. Warm-start data
/// is owned by the caller.
class Projector {
 public:
  struct WarmStart {
    Eigen::VectorXd point;        // feasible point, e.g. previous projection
    std::vector<int> active;      // inequality rows active at `point`
  };
  struct Result {
    Eigen::VectorXd point;
    std::vector<int> active;      // inequality rows active at the solution
    int iterations = 0;
  };

  explicit Projector(const Polyhedron& p);

  Result solve(const Eigen::VectorXd& x, const WarmStart* warm = nullptr) const;

  const Polyhedron& polyhedron() const { return *p_; }
  const Eigen::VectorXd& feasible_point() const { return feasible_; }

 private:
  const Polyhedron* p_;
  Eigen::VectorXd feasible_;
  int max_iterations_;
};

/// argmin_{y in p} |y - x|.
Eigen::VectorXd project(const Polyhedron& p, const Eigen::VectorXd& x);

/// Reflection through the projection: 2*project(p,x) - x.
Eigen::VectorXd overproject(const Polyhedron& p, const Eigen::VectorXd& x);

/// Relaxed projection (1-beta)*project + beta*overproject, beta in [0,1).
/// Fixed points are exactly the members of p.
Eigen::VectorXd apply_T(const Polyhedron& p, double beta, const Eigen::VectorXd& x);

/// |x - project(p,x)|.
double distance(const Polyhedron& p, const Eigen::VectorXd& x);

/// Independent projection oracle: enumerates subsets of constraint rows as
/// candidate active sets, solves each KKT system by least squares, filters by
/// primal feasibility and inequality-multiplier nonnegativity, and returns the
/// surviving candidate of minimum distance (ties: fewer rows, then lex order).
/// Requires n_rows() <= 20. Shares no code with Projector.
Eigen::VectorXd project_oracle(const Polyhedron& p, const Eigen::VectorXd& x);

}  // namespace corereach
