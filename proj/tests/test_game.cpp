#include "doctest.h"

#include "corereach/game.hpp"
#include "corereach/lp.hpp"
#include "corereach/polytope.hpp"

#include "fixtures.hpp"

using namespace corereach;

TEST_CASE("coalition encoding is canonical") {
  CHECK(Coalition::of({1, 2}).mask == 0b11u);
  CHECK(Coalition::of({2, 1}) == Coalition::of({1, 2}));
  CHECK(Coalition::of({4}).mask == 0b1000u);
  CHECK(Coalition::empty().size() == 0);
  CHECK(Coalition::grand(4).mask == 0b1111u);
  CHECK(Coalition::of({1, 3}).members() == std::vector<int>{1, 3});
}

TEST_CASE("characteristic function lookup") {
  const TUGame game = fixtures::demo_game();
  CHECK(game.value(Coalition::of({1})) == 4.0);
  CHECK(game.value(Coalition::empty()) == 0.0);
  CHECK(game.value(Coalition::of({1, 3})) == 0.0);  // unlisted defaults to 0
  CHECK(game.value(Coalition::of({1, 2, 3})) == 7.0);
  CHECK(game.grand_value() == 10.0);
  CHECK_THROWS_AS(game.value(Coalition{0b10000u}), std::invalid_argument);
}

TEST_CASE("game construction rejects malformed input") {
  CHECK_THROWS_AS(TUGame(0, {}), std::invalid_argument);
  // grand coalition value is mandatory
  CHECK_THROWS_AS(TUGame(2, {{Coalition::of({1}), 1.0}}), std::invalid_argument);
  // coalition beyond the agent count
  CHECK_THROWS_AS(TUGame(2, {{Coalition::of({3}), 1.0}, {Coalition::grand(2), 1.0}}),
                  std::invalid_argument);
  // the empty coalition is worth 0 by convention
  CHECK_THROWS_AS(TUGame(2, {{Coalition::empty(), 1.0}, {Coalition::grand(2), 1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(TUGame(17, {}), std::invalid_argument);
}

TEST_CASE("efficiency check") {
  const TUGame game = fixtures::demo_game();
  Eigen::Vector4d x(4.0, 3.0, 0.0, 3.0);
  CHECK(is_efficient(game, x, 1e-9));
  CHECK(is_efficient(game, Eigen::Vector4d(10.0, 0.0, 0.0, 0.0), 1e-9));
  CHECK_FALSE(is_efficient(game, Eigen::Vector4d(0.0, 0.0, 0.0, 0.0), 1e-9));
  CHECK_THROWS_AS(is_efficient(game, Eigen::Vector2d(5.0, 5.0), 1e-9), std::invalid_argument);
}

TEST_CASE("core polyhedron shape") {
  const TUGame game = fixtures::demo_game();
  const Polyhedron p = core_polyhedron(game);
  CHECK(p.n_eq() == 1);
  CHECK(p.n_ineq() == 14);
  CHECK(p.eq_offsets(0) == 10.0);

  // rows for {1,2} and {3,4} carry the listed coalition values
  bool found_12 = false, found_34 = false;
  for (int r = 0; r < p.n_ineq(); ++r) {
    const Eigen::Vector4d row = p.ineq_normals.row(r).transpose();
    if (row == Eigen::Vector4d(1, 1, 0, 0)) found_12 = p.ineq_offsets(r) == 5.0;
    if (row == Eigen::Vector4d(0, 0, 1, 1)) found_34 = p.ineq_offsets(r) == 3.0;
  }
  CHECK(found_12);
  CHECK(found_34);
}

TEST_CASE("core polyhedron row counts across sizes") {
  for (int n = 1; n <= 8; ++n) {
    std::map<Coalition, double> v;
    v[Coalition::grand(n)] = 1.0;
    const Polyhedron p = core_polyhedron(TUGame(n, std::move(v)));
    CHECK(p.n_eq() == 1);
    CHECK(p.n_ineq() == (1 << n) - 2);
  }
}

TEST_CASE("single-agent game reduces to one equality") {
  std::map<Coalition, double> v;
  v[Coalition::of({1})] = 7.5;
  const Polyhedron p = core_polyhedron(TUGame(1, std::move(v)));
  CHECK(p.n_eq() == 1);
  CHECK(p.n_ineq() == 0);
  Eigen::VectorXd x(1);
  x << 3.0;
  CHECK(project(p, x)(0) == doctest::Approx(7.5).epsilon(1e-12));
}

TEST_CASE("core membership") {
  const TUGame game = fixtures::demo_game();
  CHECK(core_membership(game, Eigen::Vector4d(4, 3, 0, 3), 1e-9));
  CHECK_FALSE(core_membership(game, Eigen::Vector4d(10, 0, 0, 0), 1e-9));
  CHECK_FALSE(core_membership(game, Eigen::Vector4d(4, 3, 3, 0), 1e-9));
}

TEST_CASE("core nonemptiness") {
  CHECK(core_nonempty(fixtures::demo_game()));
  CHECK(core_nonempty(fixtures::triangle_game()));
  CHECK_FALSE(core_nonempty(fixtures::empty_core_game()));

  std::map<Coalition, double> v;
  v[Coalition::of({1})] = 0.0;
  v[Coalition::of({2})] = 0.0;
  v[Coalition::grand(2)] = 1.0;
  CHECK(core_nonempty(TUGame(2, std::move(v))));
}

TEST_CASE("membership implies efficiency and full coalitional rationality") {
  std::mt19937_64 rng(2024);
  const TUGame games[] = {fixtures::demo_game(), fixtures::triangle_game()};
  for (const TUGame& game : games) {
    const Polyhedron p = core_polyhedron(game);
    const Projector projector(p);
    for (int t = 0; t < 25; ++t) {
      const Eigen::VectorXd x =
          projector.solve(fixtures::random_box(rng, game.n_agents(), 15.0)).point;
      REQUIRE(core_membership(game, x, 1e-8));
      CHECK(is_efficient(game, x, 1e-8));
      const std::uint32_t grand = Coalition::grand(game.n_agents()).mask;
      for (std::uint32_t mask = 1; mask <= grand; ++mask) {
        double sum = 0.0;
        for (int i = 0; i < game.n_agents(); ++i)
          if ((mask >> i) & 1u) sum += x(i);
        CHECK(sum >= game.value(Coalition{mask}) - 1e-8);
      }
    }
  }
}

TEST_CASE("membership agrees with projection distance") {
  std::mt19937_64 rng(99);
  const TUGame game = fixtures::triangle_game();
  const Polyhedron p = core_polyhedron(game);
  const Projector projector(p);
  for (int t = 0; t < 40; ++t) {
    Eigen::VectorXd x = fixtures::random_box(rng, 3, 4.0);
    if (t % 2 == 0) x = projector.solve(x).point;  // half members, half not
    const double d = (x - projector.solve(x).point).norm();
    CHECK(core_membership(game, x, 1e-7) == (d <= 1e-7));
  }
}

TEST_CASE("feasible point search matches membership") {
  const auto feasible = find_feasible_point(core_polyhedron(fixtures::demo_game()));
  REQUIRE(feasible.has_value());
  CHECK(core_membership(fixtures::demo_game(), *feasible, 1e-8));
  CHECK_FALSE(find_feasible_point(core_polyhedron(fixtures::empty_core_game())).has_value());
}
