#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "acp/lattice.hpp"
#include "acp/rng.hpp"

using namespace acp;
using lattice::Boundary;
using lattice::SimParams;
using lattice::SiteState;

namespace {

SimParams closure_params(double gamma = 0.0) {
  SimParams p;
  p.d = 1;
  p.half_width = 20;
  p.lambda1 = 0.0;
  p.lambda2 = lattice::kInfiniteRate;
  p.gamma = gamma;
  p.horizon = 1000.0;
  return p;
}

// With lambda2 infinite no healthy site may sit next to a symptomatic one.
bool closure_invariant_holds(const lattice::Simulator& sim) {
  const auto& box = sim.box();
  for (int x = box.lo[0]; x <= box.hi[0]; ++x) {
    if (sim.state_at({x, 0, 0}) != SiteState::healthy) continue;
    for (int step : {-1, +1}) {
      const int nx = x + step;
      if (nx < box.lo[0] || nx > box.hi[0]) continue;
      if (sim.state_at({nx, 0, 0}) == SiteState::symptomatic) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("instantaneous closure at initialization infects both neighbors") {
  lattice::Simulator sim(closure_params());
  sim.init_single_symptomatic_at_origin();
  CHECK(sim.pi1() == 2);
  CHECK(sim.state_at({0, 0, 0}) == SiteState::symptomatic);
  CHECK(sim.state_at({1, 0, 0}) == SiteState::asymptomatic);
  CHECK(sim.state_at({-1, 0, 0}) == SiteState::asymptomatic);
  CHECK(sim.state_at({2, 0, 0}) == SiteState::healthy);
  CHECK(sim.infected_count() == 3);
}

TEST_CASE("closure invariant is preserved along a trajectory") {
  SimParams p = closure_params(0.3);
  lattice::Simulator sim(p);
  sim.init_single_symptomatic_at_origin();
  Rng rng(51);
  for (int i = 0; i < 2000; ++i) {
    const auto res = sim.step(rng);
    CHECK(closure_invariant_holds(sim));
    if (res.status != lattice::StepStatus::event) break;
  }
}

TEST_CASE("no spontaneous infection with both lambdas zero") {
  SimParams p;
  p.d = 1;
  p.half_width = 10;
  p.gamma = 0.5;
  Rng rng(53);
  for (int rep = 0; rep < 100; ++rep) {
    const auto s = lattice::run_single_source(p, rng);
    CHECK(s.pi1 == 0);
    CHECK(s.extinct);
    CHECK(s.max_space == 0);
  }
}

TEST_CASE("single site mean extinction time is 1") {
  SimParams p;
  p.d = 1;
  p.half_width = 5;
  Rng rng(57);
  const int n = 50000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    sum += *lattice::run_single_source(p, rng).extinction_time;
  CHECK(std::abs(sum / n - 1.0) < 3.0 / std::sqrt(n));
}

TEST_CASE("onset happens with probability gamma/(gamma+1)") {
  SimParams p;
  p.d = 1;
  p.half_width = 5;
  p.gamma = 2.0;
  lattice::Simulator sim(p);
  Rng rng(59);
  const int n = 30000;
  int onsets = 0;
  for (int i = 0; i < n; ++i) {
    sim.init_explicit({{{0, 0, 0}, SiteState::asymptomatic}});
    while (sim.step(rng).status == lattice::StepStatus::event) {
    }
    onsets += static_cast<int>(sim.onsets());
  }
  const double frac = static_cast<double>(onsets) / n;
  CHECK(std::abs(frac - 2.0 / 3.0) < 3.0 * std::sqrt(2.0 / 9.0 / n));
}

TEST_CASE("mean infection count is 4 at gamma=0, lambda2 infinite") {
  // The two instant neighbors plus on average one reinfection each while
  // the source is still symptomatic.
  SimParams p = closure_params(0.0);
  Rng rng(61);
  const int n = 30000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    sum += static_cast<double>(lattice::run_single_source(p, rng).pi1);
  CHECK(std::abs(sum / n - 4.0) < 0.1);
}

TEST_CASE("summary bookkeeping is internally consistent") {
  SimParams p = closure_params(0.25);
  Rng rng(67);
  for (int i = 0; i < 2000; ++i) {
    const auto s = lattice::run_single_source(p, rng);
    CHECK(s.pi2 >= 1);
    CHECK(s.max_space >= 0);
    CHECK(s.max_space <= p.half_width);
    if (s.extinct) {
      REQUIRE(s.extinction_time.has_value());
      CHECK(s.max_time == *s.extinction_time);
      // At least one site is infected until extinction.
      CHECK(s.t_cumulative >= *s.extinction_time - 1e-12);
    }
  }
}

TEST_CASE("pi2 cap stops supercritical runs") {
  SimParams p = closure_params(0.6);  // gamma > 1/3
  p.pi2_cap = 50;
  Rng rng(71);
  int capped = 0;
  for (int i = 0; i < 200; ++i) {
    const auto s = lattice::run_single_source(p, rng);
    CHECK(s.pi2 <= 50);
    if (s.pi2_capped) ++capped;
  }
  CHECK(capped > 0);
}

TEST_CASE("periodic boundary keeps runs inside the box") {
  SimParams p = closure_params(0.2);
  p.boundary = Boundary::periodic;
  p.half_width = 6;
  Rng rng(73);
  for (int i = 0; i < 200; ++i) {
    const auto s = lattice::run_single_source(p, rng);
    CHECK(s.max_space <= p.half_width);
  }
}

TEST_CASE("symptomatic frozen exterior reinfects the faces") {
  SimParams p = closure_params(0.0);
  p.boundary = Boundary::symptomatic_frozen;
  p.half_width = 2;
  lattice::Simulator sim(p);
  sim.init_all_healthy();
  // Closure converts both faces immediately.
  CHECK(sim.state_at({-2, 0, 0}) == SiteState::asymptomatic);
  CHECK(sim.state_at({2, 0, 0}) == SiteState::asymptomatic);
  CHECK(sim.pi1() == 2);
  Rng rng(79);
  for (int i = 0; i < 500; ++i) {
    CHECK(sim.step(rng).status == lattice::StepStatus::event);
    // The faces can never stay healthy.
    CHECK(sim.state_at({-2, 0, 0}) != SiteState::healthy);
    CHECK(sim.state_at({2, 0, 0}) != SiteState::healthy);
  }
}

TEST_CASE("block experiment invariants") {
  lattice::BlockGeometry geom{3, 1};
  CHECK(geom.m_bound() == 4 * 3);  // 4dK(4K+1)^(d-1), d = 1
  SimParams p = closure_params(0.2);
  p.boundary = Boundary::symptomatic_frozen;
  Rng rng(83);
  for (int i = 0; i < 300; ++i) {
    const auto out = lattice::run_block_experiment(
        geom, p, lattice::BlockInitial::all_symptomatic, rng);
    CHECK(out.card_lambda_minus <= 4 * geom.k + 1);
    CHECK(out.card_lambda_minus >= 1);
    CHECK(out.card_lambda_plus >= 0);
    CHECK(out.card_lambda_union >= out.card_lambda_minus);
    CHECK(out.card_lambda_union <=
          out.card_lambda_minus + out.card_lambda_plus);
  }
}

TEST_CASE("block experiment: no dynamics means the block goes healthy") {
  // gamma = 0, lambda2 finite 0: the all-symptomatic bottom just recovers;
  // with K large enough in time the upper block is almost always healthy.
  lattice::BlockGeometry geom{6, 1};
  SimParams p;
  p.d = 1;
  p.lambda1 = 0.0;
  p.lambda2 = 0.0;
  p.gamma = 0.0;
  Rng rng(89);
  int healthy = 0;
  const int n = 500;
  for (int i = 0; i < n; ++i)
    if (lattice::run_block_experiment(geom, p,
                                      lattice::BlockInitial::all_symptomatic,
                                      rng)
            .healthy_block)
      ++healthy;
  // P(all 25 sites recover before time K=6) = (1 - e^-6)^25 ~ 0.94
  CHECK(static_cast<double>(healthy) / n > 0.85);
}

TEST_CASE("validation names the offending field") {
  SimParams p;
  p.gamma = -1.0;
  try {
    p.validate();
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("gamma") != std::string::npos);
  }
  SimParams q;
  q.d = 4;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  SimParams r;
  r.lambda1 = lattice::kInfiniteRate;
  CHECK_THROWS_AS(r.validate(), std::invalid_argument);
}

TEST_CASE("single source rejects the frozen symptomatic boundary") {
  SimParams p = closure_params(0.1);
  p.boundary = Boundary::symptomatic_frozen;
  Rng rng(97);
  CHECK_THROWS_AS(lattice::run_single_source(p, rng), std::invalid_argument);
}
