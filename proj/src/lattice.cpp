#include "acp/lattice.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

namespace acp::lattice {

void SimParams::validate() const {
  if (d < 1 || d > 3) throw std::invalid_argument("d must be in [1, 3]");
  if (half_width < 0) throw std::invalid_argument("half_width must be >= 0");
  if (!(lambda1 >= 0.0) || std::isinf(lambda1))
    throw std::invalid_argument("lambda1 must be finite and >= 0");
  if (!(lambda2 >= 0.0))
    throw std::invalid_argument("lambda2 must be >= 0 or infinity");
  if (!(gamma >= 0.0) || std::isinf(gamma))
    throw std::invalid_argument("gamma must be finite and >= 0");
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be > 0");
  if (pi2_cap < 1) throw std::invalid_argument("pi2_cap must be >= 1");
}

Box Box::centered(int d, int half_width) {
  Box box;
  box.d = d;
  for (int j = 0; j < d; ++j) {
    box.lo[j] = -half_width;
    box.hi[j] = half_width;
  }
  return box;
}

std::int64_t Box::volume() const {
  std::int64_t v = 1;
  for (int j = 0; j < d; ++j) v *= hi[j] - lo[j] + 1;
  return v;
}

bool Box::contains(const std::array<int, 3>& c) const {
  for (int j = 0; j < d; ++j)
    if (c[j] < lo[j] || c[j] > hi[j]) return false;
  return true;
}

std::int64_t BlockGeometry::m_bound() const {
  std::int64_t m = 4ll * d * k;
  for (int j = 0; j < d - 1; ++j) m *= 4ll * k + 1;
  return m;
}

Simulator::Simulator(const SimParams& params, const Box& box)
    : params_(params), box_(box) {
  params_.validate();
  if (box_.d != params_.d)
    throw std::invalid_argument("box dimension must match params.d");
  std::int64_t stride = 1;
  for (int j = params_.d - 1; j >= 0; --j) {
    stride_[j] = static_cast<int>(stride);
    stride *= box_.hi[j] - box_.lo[j] + 1;
  }
  volume_ = stride;
  states_.resize(volume_);
  cnt1_.resize(volume_);
  cnt2_.resize(volume_);
  pos_.assign(volume_, -1);
  reset_state();
}

Simulator::Simulator(const SimParams& params)
    : Simulator(params, Box::centered(params.d, params.half_width)) {}

std::int32_t Simulator::index_of(const std::array<int, 3>& c) const {
  std::int64_t idx = 0;
  for (int j = 0; j < params_.d; ++j)
    idx += static_cast<std::int64_t>(c[j] - box_.lo[j]) * stride_[j];
  return static_cast<std::int32_t>(idx);
}

std::array<int, 3> Simulator::coords_of(std::int32_t idx) const {
  std::array<int, 3> c{};
  std::int64_t rem = idx;
  for (int j = 0; j < params_.d; ++j) {
    c[j] = static_cast<int>(rem / stride_[j]) + box_.lo[j];
    rem %= stride_[j];
  }
  return c;
}

SiteState Simulator::state_at(const std::array<int, 3>& c) const {
  if (!box_.contains(c))
    throw std::invalid_argument("state_at: site outside the box");
  return states_[index_of(c)];
}

void Simulator::reset_state() {
  std::fill(states_.begin(), states_.end(), SiteState::healthy);
  std::fill(cnt1_.begin(), cnt1_.end(), std::int16_t{0});
  std::fill(cnt2_.begin(), cnt2_.end(), std::int16_t{0});
  std::fill(pos_.begin(), pos_.end(), std::int32_t{-1});
  infected1_.clear();
  infected2_.clear();
  recent_infections_.clear();
  sum1_ = 0;
  sum2_ = 0;
  time_ = 0.0;
  t_cum_ = 0.0;
  pi1_ = 0;
  onsets_ = 0;
  max_space_ = 0;

  // Frozen symptomatic exterior contributes permanent state-2 neighbors to
  // the sites on the faces of the box.
  if (params_.boundary == Boundary::symptomatic_frozen) {
    for (std::int32_t idx = 0; idx < volume_; ++idx) {
      const auto c = coords_of(idx);
      int exterior = 0;
      for (int j = 0; j < params_.d; ++j) {
        if (c[j] == box_.lo[j]) ++exterior;
        if (c[j] == box_.hi[j]) ++exterior;
      }
      cnt2_[idx] = static_cast<std::int16_t>(exterior);
      sum2_ += exterior;  // every site starts healthy
    }
  }
}

namespace {
int sup_norm(const std::array<int, 3>& c, int d) {
  int m = 0;
  for (int j = 0; j < d; ++j) m = std::max(m, std::abs(c[j]));
  return m;
}
}  // namespace

void Simulator::note_initial_infection(std::int32_t idx) {
  max_space_ = std::max(max_space_, sup_norm(coords_of(idx), params_.d));
}

void Simulator::set_state(std::int32_t idx, SiteState next) {
  const SiteState old = states_[idx];
  if (old == next) return;

  if (old == SiteState::healthy) {
    sum1_ -= cnt1_[idx];
    sum2_ -= cnt2_[idx];
  }

  const auto c = coords_of(idx);
  for (int j = 0; j < params_.d; ++j) {
    for (int step : {-1, +1}) {
      std::array<int, 3> nc = c;
      nc[j] += step;
      std::int32_t nb;
      if (nc[j] < box_.lo[j] || nc[j] > box_.hi[j]) {
        if (params_.boundary != Boundary::periodic) continue;  // frozen exterior
        nc[j] = (nc[j] < box_.lo[j]) ? box_.hi[j] : box_.lo[j];
        nb = index_of(nc);
      } else {
        nb = index_of(nc);
      }
      const bool nb_healthy = states_[nb] == SiteState::healthy;
      if (old == SiteState::asymptomatic) {
        --cnt1_[nb];
        if (nb_healthy) --sum1_;
      } else if (old == SiteState::symptomatic) {
        --cnt2_[nb];
        if (nb_healthy) --sum2_;
      }
      if (next == SiteState::asymptomatic) {
        ++cnt1_[nb];
        if (nb_healthy) ++sum1_;
      } else if (next == SiteState::symptomatic) {
        ++cnt2_[nb];
        if (nb_healthy) ++sum2_;
      }
    }
  }

  if (next == SiteState::healthy) {
    sum1_ += cnt1_[idx];
    sum2_ += cnt2_[idx];
  }

  // Infected-list membership, swap-remove.
  auto remove_from = [&](std::vector<std::int32_t>& list) {
    const std::int32_t p = pos_[idx];
    list[p] = list.back();
    pos_[list[p]] = p;
    list.pop_back();
    pos_[idx] = -1;
  };
  if (old == SiteState::asymptomatic) remove_from(infected1_);
  if (old == SiteState::symptomatic) remove_from(infected2_);
  if (next == SiteState::asymptomatic) {
    pos_[idx] = static_cast<std::int32_t>(infected1_.size());
    infected1_.push_back(idx);
  } else if (next == SiteState::symptomatic) {
    pos_[idx] = static_cast<std::int32_t>(infected2_.size());
    infected2_.push_back(idx);
  }

  states_[idx] = next;

  if (old == SiteState::healthy && next == SiteState::asymptomatic) {
    ++pi1_;
    recent_infections_.push_back(idx);
    max_space_ = std::max(max_space_, sup_norm(c, params_.d));
  }
  if (old == SiteState::asymptomatic && next == SiteState::symptomatic)
    ++onsets_;
}

void Simulator::closure_sweep_full() {
  if (!params_.lambda2_infinite()) return;
  closure_buffer_.clear();
  for (std::int32_t idx = 0; idx < volume_; ++idx)
    if (states_[idx] == SiteState::healthy && cnt2_[idx] > 0)
      closure_buffer_.push_back(idx);
  for (std::int32_t idx : closure_buffer_)
    set_state(idx, SiteState::asymptomatic);
}

void Simulator::closure_around(std::int32_t idx) {
  if (!params_.lambda2_infinite()) return;
  closure_buffer_.clear();
  auto consider = [&](std::int32_t i) {
    if (states_[i] == SiteState::healthy && cnt2_[i] > 0)
      closure_buffer_.push_back(i);
  };
  consider(idx);
  const auto c = coords_of(idx);
  for (int j = 0; j < params_.d; ++j) {
    for (int step : {-1, +1}) {
      std::array<int, 3> nc = c;
      nc[j] += step;
      if (nc[j] < box_.lo[j] || nc[j] > box_.hi[j]) {
        if (params_.boundary != Boundary::periodic) continue;
        nc[j] = (nc[j] < box_.lo[j]) ? box_.hi[j] : box_.lo[j];
      }
      consider(index_of(nc));
    }
  }
  for (std::int32_t i : closure_buffer_) set_state(i, SiteState::asymptomatic);
}

void Simulator::init_all_healthy() {
  reset_state();
  closure_sweep_full();
}

void Simulator::init_single_symptomatic_at_origin() {
  reset_state();
  const std::array<int, 3> origin{};
  if (!box_.contains(origin))
    throw std::invalid_argument("origin not contained in the box");
  set_state(index_of(origin), SiteState::symptomatic);
  note_initial_infection(index_of(origin));
  closure_sweep_full();
}

void Simulator::init_all_symptomatic() {
  reset_state();
  for (std::int32_t idx = 0; idx < volume_; ++idx) {
    set_state(idx, SiteState::symptomatic);
    note_initial_infection(idx);
  }
  closure_sweep_full();
}

void Simulator::init_explicit(
    const std::vector<std::pair<std::array<int, 3>, SiteState>>& sites) {
  reset_state();
  for (const auto& [c, s] : sites) {
    if (!box_.contains(c))
      throw std::invalid_argument("init_explicit: site outside the box");
    set_state(index_of(c), s);
    if (s != SiteState::healthy) note_initial_infection(index_of(c));
  }
  closure_sweep_full();
}

StepResult Simulator::step(Rng& rng) {
  recent_infections_.clear();

  const double n1 = static_cast<double>(infected1_.size());
  const double n2 = static_cast<double>(infected2_.size());
  const double two_d = 2.0 * params_.d;
  const double r_rec = n1 + n2;
  const double r_onset = params_.gamma * n1;
  const double r_inf1 =
      params_.lambda1 > 0.0 ? params_.lambda1 * sum1_ / two_d : 0.0;
  const double r_inf2 = (!params_.lambda2_infinite() && params_.lambda2 > 0.0)
                            ? params_.lambda2 * sum2_ / two_d
                            : 0.0;
  const double total = r_rec + r_onset + r_inf1 + r_inf2;

  StepResult res;
  if (total <= 0.0) {
    res.status = StepStatus::absorbed;
    return res;
  }

  const double dt = rng.exponential(total);
  const std::int64_t infected = infected_count();
  if (time_ + dt > params_.horizon) {
    t_cum_ += infected * (params_.horizon - time_);
    time_ = params_.horizon;
    res.status = StepStatus::horizon;
    return res;
  }
  t_cum_ += infected * dt;
  time_ += dt;

  const double u = rng.uniform() * total;
  std::int32_t idx;
  EventKind kind;
  if (u < r_rec) {
    const std::uint64_t j = rng.index(infected1_.size() + infected2_.size());
    idx = j < infected1_.size() ? infected1_[j]
                                : infected2_[j - infected1_.size()];
    kind = EventKind::recover;
    set_state(idx, SiteState::healthy);
  } else if (u < r_rec + r_onset) {
    idx = infected1_[rng.index(infected1_.size())];
    kind = EventKind::onset;
    set_state(idx, SiteState::symptomatic);
  } else {
    // Infection of a healthy site; channel 1 (from asymptomatic) or
    // channel 2 (from symptomatic, frozen exterior included).
    const bool channel1 = (u - r_rec - r_onset) < r_inf1;
    const auto& cnt = channel1 ? cnt1_ : cnt2_;
    const std::int64_t pairs = channel1 ? sum1_ : sum2_;
    std::int64_t j = static_cast<std::int64_t>(
        rng.index(static_cast<std::uint64_t>(pairs)));
    idx = -1;
    for (std::int32_t i = 0; i < volume_; ++i) {
      if (states_[i] != SiteState::healthy) continue;
      j -= cnt[i];
      if (j < 0) {
        idx = i;
        break;
      }
    }
    assert(idx >= 0);
    kind = channel1 ? EventKind::infect1 : EventKind::infect2;
    set_state(idx, SiteState::asymptomatic);
  }
  closure_around(idx);

  res.status = StepStatus::event;
  res.event = Event{time_, coords_of(idx), kind};
  return res;
}

RunSummary run_single_source(const SimParams& params, Rng& rng) {
  params.validate();
  if (params.boundary == Boundary::symptomatic_frozen)
    throw std::invalid_argument(
        "boundary: symptomatic_frozen is reserved for block experiments");

  Simulator sim(params);
  sim.init_single_symptomatic_at_origin();

  RunSummary summary;
  bool horizon_hit = false;
  while (true) {
    if (sim.onsets() + 1 >= params.pi2_cap) {
      summary.pi2_capped = true;
      break;
    }
    const StepResult res = sim.step(rng);
    if (res.status == StepStatus::absorbed) {
      summary.extinct = true;
      summary.extinction_time = sim.time();
      break;
    }
    if (res.status == StepStatus::horizon) {
      horizon_hit = true;
      break;
    }
  }
  summary.pi1 = sim.pi1();
  summary.pi2 = 1 + sim.onsets();
  summary.t_cumulative = sim.t_cumulative();
  summary.max_space = sim.max_space();
  summary.max_time = summary.extinct ? *summary.extinction_time
                     : horizon_hit  ? params.horizon
                                    : sim.time();
  return summary;
}

BlockOutcome run_block_experiment(const BlockGeometry& geom,
                                  const SimParams& params, BlockInitial initial,
                                  Rng& rng) {
  if (geom.k < 1) throw std::invalid_argument("k must be >= 1");
  SimParams p = params;
  p.d = geom.d;
  p.half_width = 2 * geom.k;
  p.horizon = 2.0 * geom.k;
  p.validate();

  Simulator sim(p);
  switch (initial) {
    case BlockInitial::all_healthy:
      sim.init_all_healthy();
      break;
    case BlockInitial::all_symptomatic:
      sim.init_all_symptomatic();
      break;
  }

  const int k = geom.k;
  auto periphery = [&](std::int32_t idx) {
    const auto c = sim.coords_of(idx);
    for (int j = 0; j < p.d; ++j)
      if (std::abs(c[j]) == 2 * k) return true;
    return false;
  };
  auto count_infected_in_a = [&]() {
    std::int64_t n = 0;
    for (std::int32_t idx : sim.infected1())
      if (sup_norm(sim.coords_of(idx), p.d) <= k) ++n;
    for (std::int32_t idx : sim.infected2())
      if (sup_norm(sim.coords_of(idx), p.d) <= k) ++n;
    return n;
  };

  BlockOutcome out;
  out.card_lambda_minus = sim.infected_count();
  std::int64_t periphery_initial = 0;
  for (std::int32_t idx : sim.infected1())
    if (periphery(idx)) ++periphery_initial;
  for (std::int32_t idx : sim.infected2())
    if (periphery(idx)) ++periphery_initial;

  std::int64_t periphery_entries = 0;  // 0 -> 1 flips at t > 0
  std::int64_t in_a = count_infected_in_a();
  const double t_end = 2.0 * k;
  while (true) {
    const StepResult res = sim.step(rng);
    const double seg_end =
        res.status == StepStatus::event ? std::min(sim.time(), t_end) : t_end;
    if (in_a > 0 && seg_end >= static_cast<double>(k))
      out.healthy_block = false;
    if (res.status != StepStatus::event) break;
    for (std::int32_t idx : sim.recent_infections())
      if (periphery(idx)) ++periphery_entries;
    in_a = count_infected_in_a();
  }

  out.card_lambda_plus = periphery_initial + periphery_entries;
  out.card_lambda_union = out.card_lambda_minus + periphery_entries;
  return out;
}

}  // namespace acp::lattice
