#pragma once

#include <random>

#include "corereach/demo.hpp"
#include "corereach/game.hpp"
#include "corereach/polytope.hpp"

namespace fixtures {

using namespace corereach;

inline TUGame demo_game() { return demo::demo_game(); }

// Three agents, symmetric pairs worth 1, grand worth 3: the stable set is a
// full-dimensional two-face, useful where the demo game's single point is too
// degenerate to exercise geometry.
inline TUGame triangle_game() {
  std::map<Coalition, double> v;
  v[Coalition::of({1, 2})] = 1.0;
  v[Coalition::of({1, 3})] = 1.0;
  v[Coalition::of({2, 3})] = 1.0;
  v[Coalition::of({1, 2, 3})] = 3.0;
  return TUGame(3, std::move(v));
}

inline TUGame empty_core_game() {
  std::map<Coalition, double> v;
  v[Coalition::of({1})] = 1.0;
  v[Coalition::of({2})] = 1.0;
  v[Coalition::of({1, 2})] = 1.0;
  return TUGame(2, std::move(v));
}

inline Eigen::VectorXd random_box(std::mt19937_64& rng, int n, double half_width) {
  std::uniform_real_distribution<double> uniform(-half_width, half_width);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = uniform(rng);
  return x;
}

}  // namespace fixtures
