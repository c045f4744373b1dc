#include "corereach/game.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "corereach/lp.hpp"
#include "corereach/polytope.hpp"

namespace corereach {

Coalition Coalition::of(std::initializer_list<int> agents_1based) {
  return of(std::vector<int>(agents_1based));
}

Coalition Coalition::of(const std::vector<int>& agents_1based) {
  Coalition s;
  for (int a : agents_1based) {
    if (a < 1 || a > TUGame::kMaxAgents)
      throw std::invalid_argument("agent index out of range: " + std::to_string(a));
    s.mask |= (1u << (a - 1));
  }
  return s;
}

Coalition Coalition::grand(int n_agents) {
  return {(n_agents >= 32 ? ~0u : (1u << n_agents) - 1u)};
}

bool Coalition::contains(int agent_1based) const {
  return agent_1based >= 1 && (mask >> (agent_1based - 1)) & 1u;
}

int Coalition::size() const { return __builtin_popcount(mask); }

std::vector<int> Coalition::members() const {
  std::vector<int> out;
  for (int i = 0; i < 32; ++i)
    if ((mask >> i) & 1u) out.push_back(i + 1);
  return out;
}

TUGame::TUGame(int n_agents, std::map<Coalition, double> values)
    : n_(n_agents), values_(std::move(values)) {
  if (n_ < 1) throw std::invalid_argument("n_agents must be >= 1");
  if (n_ > kMaxAgents)
    throw std::invalid_argument("n_agents exceeds supported maximum of " +
                                std::to_string(kMaxAgents));
  const Coalition grand = Coalition::grand(n_);
  if (!values_.count(grand))
    throw std::invalid_argument("grand coalition value missing from characteristic function");
  for (const auto& [s, v] : values_) {
    if (s.mask >> n_)
      throw std::invalid_argument("coalition mask has members beyond agent count");
    if (s.mask == 0 && v != 0.0)
      throw std::invalid_argument("empty coalition must have value 0");
  }
}

double TUGame::grand_value() const { return values_.at(Coalition::grand(n_)); }

double TUGame::value(Coalition s) const {
  if (s.mask >> n_)
    throw std::invalid_argument("invalid coalition: members beyond agent count");
  if (s.mask == 0) return 0.0;
  auto it = values_.find(s);
  return it == values_.end() ? 0.0 : it->second;
}

bool is_efficient(const TUGame& game, const PayoffVector& x, double tol) {
  if (x.size() != game.n_agents())
    throw std::invalid_argument("payoff vector length does not match agent count");
  return std::abs(x.sum() - game.grand_value()) <= tol;
}

Polyhedron core_polyhedron(const TUGame& game) {
  const int n = game.n_agents();
  const std::uint32_t grand_mask = Coalition::grand(n).mask;

  Eigen::MatrixXd eq(1, n);
  eq.setOnes();
  Eigen::VectorXd eq_b(1);
  eq_b(0) = game.grand_value();

  const int n_ineq = static_cast<int>(grand_mask) - 1;  // 2^n - 2 proper nonempty sets
  Eigen::MatrixXd ineq(n_ineq, n);
  Eigen::VectorXd ineq_b(n_ineq);
  int row = 0;
  for (std::uint32_t mask = 1; mask < grand_mask; ++mask, ++row) {
    for (int i = 0; i < n; ++i) ineq(row, i) = (mask >> i) & 1u ? 1.0 : 0.0;
    ineq_b(row) = game.value(Coalition{mask});
  }
  return Polyhedron::make(std::move(eq), std::move(eq_b), std::move(ineq), std::move(ineq_b));
}

bool core_membership(const TUGame& game, const PayoffVector& x, double tol) {
  if (x.size() != game.n_agents())
    throw std::invalid_argument("payoff vector length does not match agent count");
  if (!is_efficient(game, x, tol)) return false;
  const std::uint32_t grand_mask = Coalition::grand(game.n_agents()).mask;
  for (std::uint32_t mask = 1; mask < grand_mask; ++mask) {
    double sum = 0.0;
    for (int i = 0; i < game.n_agents(); ++i)
      if ((mask >> i) & 1u) sum += x(i);
    if (sum < game.value(Coalition{mask}) - tol) return false;
  }
  return true;
}

bool core_nonempty(const TUGame& game) {
  return find_feasible_point(core_polyhedron(game)).has_value();
}

}  // namespace corereach
