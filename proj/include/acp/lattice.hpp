#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "acp/rng.hpp"

namespace acp::lattice {

inline constexpr double kInfiniteRate =
    std::numeric_limits<double>::infinity();

enum class SiteState : std::uint8_t { healthy = 0, asymptomatic = 1, symptomatic = 2 };

enum class Boundary { healthy_frozen, periodic, symptomatic_frozen };

struct SimParams {
  int d = 1;
  int half_width = 50;
  double lambda1 = 0.0;
  double lambda2 = 0.0;  // kInfiniteRate selects the instantaneous-closure limit
  double gamma = 0.0;
  Boundary boundary = Boundary::healthy_frozen;
  double horizon = 1000.0;
  std::uint64_t seed = 0;
  // Optional run cap on the symptomatic count pi2; runs reaching it stop
  // early and are flagged. Lets supercritical parameters terminate.
  std::uint64_t pi2_cap = std::numeric_limits<std::uint64_t>::max();

  bool lambda2_infinite() const { return std::isinf(lambda2); }
  void validate() const;  // throws std::invalid_argument naming the field
};

// Axis-aligned site box, [lo_j, hi_j] per dimension.
struct Box {
  int d = 1;
  std::array<int, 3> lo{};
  std::array<int, 3> hi{};

  static Box centered(int d, int half_width);
  std::int64_t volume() const;
  bool contains(const std::array<int, 3>& c) const;
};

struct RunSummary {
  std::uint64_t pi1 = 0;  // 0 -> 1 flips, closure included
  std::uint64_t pi2 = 1;  // 1 + onsets (initial symptomatic counts)
  double t_cumulative = 0.0;
  std::optional<double> extinction_time;
  int max_space = 0;     // max sup-norm of any ever-infected site
  double max_time = 0.0; // last time any site is infected
  bool extinct = false;
  bool pi2_capped = false;
};

struct BlockGeometry {
  int k = 1;
  int d = 1;
  // M = 4dK(4K+1)^(d-1)
  std::int64_t m_bound() const;
};

struct BlockOutcome {
  bool healthy_block = true;           // event H_{0,0}
  std::int64_t card_lambda_minus = 0;  // infected sites of the bottom at t=0
  std::int64_t card_lambda_plus = 0;   // periphery entries, t=0 ones included
  std::int64_t card_lambda_union = 0;  // card of the union (no double count)
};

enum class EventKind { infect1, infect2, onset, recover };

struct Event {
  double time = 0.0;
  std::array<int, 3> site{};
  EventKind kind = EventKind::recover;
};

enum class StepStatus { event, absorbed, horizon };

struct StepResult {
  StepStatus status = StepStatus::absorbed;
  Event event;
};

// Event-driven (Gillespie) simulator of the asymptomatic contact process on
// a finite box. Equal in law to the graphical construction from independent
// exponential clocks; next-event sampling avoids unbounded clock storage.
//
// lambda2 = infinity is modeled as instantaneous closure: immediately after
// any event (and at time 0) every healthy site adjacent to a symptomatic
// site becomes asymptomatic, all flips applied simultaneously; each one
// counts toward pi1.
class Simulator {
 public:
  Simulator(const SimParams& params, const Box& box);
  explicit Simulator(const SimParams& params);

  void init_all_healthy();
  void init_single_symptomatic_at_origin();
  void init_all_symptomatic();
  // Sparse assignment over an all-healthy background; rejects sites
  // outside the box.
  void init_explicit(
      const std::vector<std::pair<std::array<int, 3>, SiteState>>& sites);

  StepResult step(Rng& rng);

  double time() const { return time_; }
  double t_cumulative() const { return t_cum_; }
  std::uint64_t pi1() const { return pi1_; }
  std::uint64_t onsets() const { return onsets_; }
  int max_space() const { return max_space_; }
  std::int64_t infected_count() const {
    return static_cast<std::int64_t>(infected1_.size() + infected2_.size());
  }
  SiteState state_at(const std::array<int, 3>& c) const;
  const Box& box() const { return box_; }

  // Sites newly flipped 0 -> 1 during the most recent step (rate events and
  // closure), as linear indices; cleared at the start of each step.
  const std::vector<std::int32_t>& recent_infections() const {
    return recent_infections_;
  }

  std::array<int, 3> coords_of(std::int32_t idx) const;
  const std::vector<std::int32_t>& infected1() const { return infected1_; }
  const std::vector<std::int32_t>& infected2() const { return infected2_; }

 private:
  friend struct SimulatorTestAccess;

  std::int32_t index_of(const std::array<int, 3>& c) const;
  void set_state(std::int32_t idx, SiteState next);
  void closure_sweep_full();
  void closure_around(std::int32_t idx);
  void note_initial_infection(std::int32_t idx);
  void reset_state();

  SimParams params_;
  Box box_;
  std::array<int, 3> stride_{};
  std::int64_t volume_ = 0;

  std::vector<SiteState> states_;
  std::vector<std::int16_t> cnt1_, cnt2_;  // neighbor counts incl. frozen exterior
  std::vector<std::int32_t> infected1_, infected2_;
  std::vector<std::int32_t> pos_;  // position in its infected list, -1 if none
  std::int64_t sum1_ = 0, sum2_ = 0;  // sum of cnt over healthy sites

  double time_ = 0.0;
  double t_cum_ = 0.0;
  std::uint64_t pi1_ = 0;
  std::uint64_t onsets_ = 0;
  int max_space_ = 0;
  std::vector<std::int32_t> recent_infections_;
  std::vector<std::int32_t> closure_buffer_;
};

// Single-source run to absorption, horizon, or the pi2 cap; origin starts
// symptomatic, everything else healthy.
RunSummary run_single_source(const SimParams& params, Rng& rng);

enum class BlockInitial { all_healthy, all_symptomatic };

// Simulates the process inside B = [-2K, 2K]^d over [0, 2K] with the
// boundary condition of `params` (symptomatic_frozen is the worst case) and
// measures the healthy-block event for A = [-K, K]^d x [K, 2K] together
// with the entry-point counts.
BlockOutcome run_block_experiment(const BlockGeometry& geom,
                                  const SimParams& params,
                                  BlockInitial initial, Rng& rng);

}  // namespace acp::lattice
