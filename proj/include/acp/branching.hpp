#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "acp/rng.hpp"

namespace acp::branching {

// Parameters of the dominating Galton-Watson process: lattice dimension d
// and symptom-onset rate gamma.
struct GWParams {
  int d = 1;
  double gamma = 0.0;

  // Offspring mean 4d*gamma/(gamma+1) < 1.
  bool subcritical() const { return gamma < 1.0 / (4.0 * d - 1.0); }
  void validate() const;
};

struct ProgenyResult {
  std::uint64_t progeny = 1;      // root always counts
  std::uint64_t generations = 0;  // last nonempty generation
  bool capped = false;
};

// Exponential-tail certificate: P(X > K) <= c * s^-K.
struct TailBound {
  double c = 1.0;
  double s = 1.0;
  double bound(double k) const;
};

struct FixedPointDivergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultProgenyCap = 1'000'000;

// Healthy time windows in the neighborhood of a symptomatic site:
// 2d plus the shifted geometric count N with mean 2d.
std::uint64_t sample_window_count(const GWParams& params, Rng& rng);

// Offspring Y = Y_1 + ... + Y_{2d+N}, Y_j iid Bernoulli(gamma/(gamma+1)).
std::uint64_t sample_offspring(const GWParams& params, Rng& rng);

// Total progeny of the process started from a single root, breadth-first,
// truncated at `cap` so that supercritical parameters terminate.
ProgenyResult simulate_progeny(const GWParams& params, std::uint64_t cap,
                               Rng& rng);

double pgf_window_count(double s, const GWParams& params);    // G_N
double pgf_onset_bernoulli(double s, const GWParams& params);  // G_{Y_j}
double pgf_offspring(double s, const GWParams& params);        // G_Y

// Smallest fixed point of x -> s * G_Y(x), iterated from 0. Throws
// FixedPointDivergence when the iterates blow up or the budget runs out,
// which is the signature of s beyond the radius of convergence.
double solve_progeny_pgf(double s, const GWParams& params, double tol);
std::optional<double> try_solve_progeny_pgf(double s, const GWParams& params,
                                            double tol);

// Finds s1 > 1 with G_pi(s1) finite by bisection on convergence of the
// fixed-point solve, backed off by 0.99 from the detected boundary, and
// returns {c = G_pi(s1), s = s1}. Requires subcritical parameters.
TailBound tail_certificate(const GWParams& params,
                           std::optional<double> target_s = std::nullopt);

// Tail certificate for the raw infection count (number of 0 -> 1 flips),
// assembled from the progeny certificate and phi(s0):
// c = c1 + 1, s = min(s1, phi(s0))^(1/6d).
TailBound infection_count_certificate(const GWParams& params);

// PGF of the dominating type-1 creation count given at most l symptomatic
// individuals: (s^2d / (1 + 2d(1-s)))^l.
double cumulative_infection_pgf(double s, const GWParams& params,
                                std::uint64_t l);

struct PhiReport {
  double phi_at_s0;    // (1/2)(1 + 1/4d)^4d
  double lower_bound;  // 1 + (1/4)(1 - 1/4d)
};
PhiReport phi_check(int d);

double offspring_mean(const GWParams& params);  // 4d*gamma/(gamma+1)
double progeny_mean(const GWParams& params);    // (gamma+1)/(gamma+1-4d*gamma)

}  // namespace acp::branching
