#pragma once

#include <Eigen/Dense>
#include <optional>

namespace corereach {

struct Polyhedron;

/// Phase-1 LP feasibility for {eq*x = b_eq, ineq*x >= b_ineq}: dense tableau
/// simplex with Bland's rule minimizing the artificial-variable sum. Returns
/// a feasible point, or nullopt when the system is infeasible. Exact at desk
/// scale (dim <= 16, row counts up to a few thousand).
std::optional<Eigen::VectorXd> find_feasible_point(const Polyhedron& p);

}  // namespace corereach
