#include <doctest.h>

#include <cmath>
#include <limits>

#include "acp/meanfield.hpp"

using namespace acp::meanfield;

TEST_CASE("derivative at the origin vanishes") {
  const auto d = mf_derivative({0.0, 0.0}, {1.0, 2.0, 0.5});
  CHECK(d.first == 0.0);
  CHECK(d.second == 0.0);
}

TEST_CASE("threshold is lambda1 + gamma*lambda2 > 1 + gamma, strict") {
  CHECK_FALSE(threshold_check({1.0, 1.0, 1.0}));   // 2 = 2
  CHECK_FALSE(threshold_check({2.0, 0.0, 1.0}));   // 2 = 2
  CHECK(threshold_check({3.0, 0.0, 0.5}));         // 3 > 1.5
  CHECK(threshold_check({0.0, 3.0, 1.0}));         // 3 > 2
  CHECK_FALSE(threshold_check({0.0, 0.0, 0.0}));
}

TEST_CASE("interior fixed point for (0, 3, 1) is (1/6, 1/6)") {
  const auto rep = interior_fixed_point({0.0, 3.0, 1.0}, 1e-12);
  REQUIRE(rep.point.has_value());
  CHECK(rep.point->u1 == doctest::Approx(1.0 / 6.0).epsilon(1e-9));
  CHECK(rep.point->u2 == doctest::Approx(1.0 / 6.0).epsilon(1e-9));
  CHECK(rep.stable);
}

TEST_CASE("no interior fixed point below threshold") {
  const auto rep = interior_fixed_point({0.5, 0.5, 0.5}, 1e-12);
  CHECK_FALSE(rep.point.has_value());
  CHECK(rep.stable);  // origin attracts
}

TEST_CASE("jacobian at the origin for lambda = 0, gamma = 1 is {-2, -1}") {
  const auto eig = jacobian_stability({0.0, 0.0}, {0.0, 0.0, 1.0});
  CHECK(eig[0] == doctest::Approx(-2.0));
  CHECK(eig[1] == doctest::Approx(-1.0));
}

TEST_CASE("fixed point is a true equilibrium of the vector field") {
  for (const MFParams p : {MFParams{0.0, 3.0, 1.0}, MFParams{2.0, 2.0, 0.5},
                           MFParams{1.5, 1.0, 2.0}}) {
    const auto rep = interior_fixed_point(p, 1e-12);
    if (!rep.point) continue;
    const auto d = mf_derivative(*rep.point, p);
    CHECK(std::abs(d.first) < 1e-9);
    CHECK(std::abs(d.second) < 1e-9);
  }
}

TEST_CASE("trajectory converges to the interior fixed point") {
  const MFParams p{0.0, 3.0, 1.0};
  const auto traj = integrate({0.1, 0.1}, p, 200.0, 0.01);
  const auto final_state = traj.back().second;
  CHECK(std::abs(final_state.u1 - 1.0 / 6.0) < 1e-6);
  CHECK(std::abs(final_state.u2 - 1.0 / 6.0) < 1e-6);
}

TEST_CASE("subcritical trajectory decays to the origin") {
  const auto traj = integrate({0.3, 0.3}, {0.2, 0.2, 0.1}, 100.0, 0.01);
  const auto final_state = traj.back().second;
  CHECK(std::abs(final_state.u1) < 1e-8);
  CHECK(std::abs(final_state.u2) < 1e-8);
}

TEST_CASE("integration preserves the simplex") {
  const auto traj = integrate({0.5, 0.5}, {3.0, 3.0, 2.0}, 50.0, 0.01);
  for (const auto& [t, s] : traj) {
    CHECK(s.u1 >= -1e-9);
    CHECK(s.u2 >= -1e-9);
    CHECK(s.u1 + s.u2 <= 1.0 + 1e-9);
  }
  CHECK(traj.front().first == 0.0);
  CHECK(traj.back().first == doctest::Approx(50.0));
}

TEST_CASE("start outside the simplex is rejected") {
  CHECK_THROWS_AS(integrate({0.8, 0.8}, {1.0, 1.0, 1.0}, 1.0, 0.01),
                  SimplexViolation);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS((MFParams{-1.0, 0.0, 0.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS(
      (MFParams{0.0, std::numeric_limits<double>::infinity(), 0.0}.validate()),
      std::invalid_argument);
  CHECK_NOTHROW(MFParams{0.0, 0.0, 0.0}.validate());
}
