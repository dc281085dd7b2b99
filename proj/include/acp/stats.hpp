#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace acp::stats {

struct TailEstimate {
  double k = 0.0;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t n = 0;
};

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

struct DominanceReport {
  bool holds = false;
  double max_violation = 0.0;
};

// Fraction of samples strictly greater than k, with a Wilson score 95% CI.
TailEstimate tail_estimate(std::span<const double> samples, double k);

// OLS of log(p_hat) on k; bins with p_hat <= 0 are excluded and at least
// three positive points are required.
DecayFit fit_decay_slope(std::span<const std::pair<double, double>> points);

// Empirical stochastic dominance: holds iff the survival function of `a`
// never exceeds that of `b` by more than twice the joint standard error,
// at every integer threshold up to the largest observation.
DominanceReport dominance_check(std::span<const double> a,
                                std::span<const double> b);

}  // namespace acp::stats
