#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <vector>

namespace corereach {

using PayoffVector = Eigen::VectorXd;

struct Polyhedron;

/// A coalition over agents {1,...,N}, encoded canonically as an N-bit mask
/// (bit i-1 set <=> agent i is a member). Equality is mask equality.
struct Coalition {
  std::uint32_t mask = 0;

  static Coalition empty() { return {0}; }
  static Coalition of(std::initializer_list<int> agents_1based);
  static Coalition of(const std::vector<int>& agents_1based);
  static Coalition grand(int n_agents);

  bool contains(int agent_1based) const;
  int size() const;
  std::vector<int> members() const;  // sorted 1-based indices

  bool operator==(const Coalition&) const = default;
  bool operator<(const Coalition& o) const { return mask < o.mask; }
};

/// Transferable-utility coalitional game: N agents plus a characteristic
/// function given as an explicit map. Coalitions not listed are worth 0,
/// as is the empty coalition.
class TUGame {
 public:
  static constexpr int kMaxAgents = 16;

  TUGame(int n_agents, std::map<Coalition, double> values);

  int n_agents() const { return n_; }
  double grand_value() const;
  const std::map<Coalition, double>& values() const { return values_; }

  /// Characteristic-function lookup v(S). Throws std::invalid_argument if the
  /// coalition has bits at or above n_agents.
  double value(Coalition s) const;

 private:
  int n_;
  std::map<Coalition, double> values_;
};

/// |sum_i x_i - v(grand)| <= tol
bool is_efficient(const TUGame& game, const PayoffVector& x, double tol);

/// Constraint representation of the game's stable payoff set: one equality
/// row (efficiency) plus one inequality row per nonempty proper coalition,
/// in increasing mask order.
Polyhedron core_polyhedron(const TUGame& game);

/// Efficiency within tol and every coalitional-rationality inequality within
/// -tol slack. Evaluated directly from the characteristic function.
bool core_membership(const TUGame& game, const PayoffVector& x, double tol);

/// Exact feasibility of the stable payoff set, decided by phase-1 LP.
bool core_nonempty(const TUGame& game);

}  // namespace corereach
