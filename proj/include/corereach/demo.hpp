#pragma once

#include "corereach/game.hpp"
#include "corereach/network.hpp"

namespace corereach::demo {

/// The bundled four-agent demo game (same setup as configs/sec6.json).
inline TUGame demo_game() {
  using C = Coalition;
  std::map<Coalition, double> v;
  v[C::of({1})] = 4.0;
  v[C::of({2})] = 3.0;
  v[C::of({3})] = 0.0;
  v[C::of({4})] = 3.0;
  v[C::of({1, 2})] = 5.0;
  v[C::of({3, 4})] = 3.0;
  v[C::of({1, 2, 3})] = 7.0;
  v[C::of({1, 2, 3, 4})] = 10.0;
  return TUGame(4, std::move(v));
}

/// Pair-averaging matrices that alternate each step: odd steps couple agents
/// (1,2) and (3,4), even steps couple (1,3) and (2,4).
inline std::vector<WeightMatrix> demo_matrices() {
  WeightMatrix a, b;
  a.entries.resize(4, 4);
  a.entries << 0.5, 0.5, 0.0, 0.0,
               0.5, 0.5, 0.0, 0.0,
               0.0, 0.0, 0.5, 0.5,
               0.0, 0.0, 0.5, 0.5;
  b.entries.resize(4, 4);
  b.entries << 0.5, 0.0, 0.5, 0.0,
               0.0, 0.5, 0.0, 0.5,
               0.5, 0.0, 0.5, 0.0,
               0.0, 0.5, 0.0, 0.5;
  return {a, b};
}

inline GraphSchedule demo_schedule() { return GraphSchedule(demo_matrices(), {0, 1}); }

/// The unique stable payoff of the demo game.
inline Eigen::VectorXd demo_core_point() {
  Eigen::VectorXd x(4);
  x << 4.0, 3.0, 0.0, 3.0;
  return x;
}

}  // namespace corereach::demo
