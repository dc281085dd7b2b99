#include "acp/branching.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace acp::branching {

namespace {
constexpr int kIterationBudget = 100'000;
constexpr double kDivergenceCeiling = 1e10;
constexpr double kSolveTol = 1e-12;
}  // namespace

void GWParams::validate() const {
  if (d < 1) throw std::invalid_argument("d must be >= 1");
  if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be >= 0");
}

double TailBound::bound(double k) const { return c * std::pow(s, -k); }

std::uint64_t sample_window_count(const GWParams& params, Rng& rng) {
  // P(N = i) = (2d/(2d+1))^i * (1/(2d+1))
  const double q = 2.0 * params.d / (2.0 * params.d + 1.0);
  return rng.geometric_failures(q);
}

std::uint64_t sample_offspring(const GWParams& params, Rng& rng) {
  const std::uint64_t trials = 2 * params.d + sample_window_count(params, rng);
  const double p = params.gamma / (params.gamma + 1.0);
  std::uint64_t y = 0;
  for (std::uint64_t j = 0; j < trials; ++j)
    if (rng.bernoulli(p)) ++y;
  return y;
}

ProgenyResult simulate_progeny(const GWParams& params, std::uint64_t cap,
                               Rng& rng) {
  if (cap < 1) throw std::invalid_argument("cap must be >= 1");
  ProgenyResult res;
  std::uint64_t current = 1;  // X_0
  res.progeny = 1;
  if (res.progeny >= cap) {
    res.capped = true;
    res.progeny = cap;
    return res;
  }
  std::uint64_t gen = 0;
  while (current > 0) {
    std::uint64_t next = 0;
    for (std::uint64_t i = 0; i < current; ++i) {
      next += sample_offspring(params, rng);
      if (res.progeny + next >= cap) {
        res.progeny = cap;
        res.capped = true;
        res.generations = gen + 1;
        return res;
      }
    }
    if (next == 0) break;
    ++gen;
    res.progeny += next;
    current = next;
  }
  res.generations = gen;
  return res;
}

double pgf_window_count(double s, const GWParams& params) {
  if (s < 0.0) throw std::domain_error("pgf_window_count: s < 0");
  const double denom = 1.0 + 2.0 * params.d * (1.0 - s);
  if (denom <= 0.0)
    throw std::domain_error("pgf_window_count: s at or beyond the pole");
  return 1.0 / denom;
}

double pgf_onset_bernoulli(double s, const GWParams& params) {
  return (params.gamma * s + 1.0) / (params.gamma + 1.0);
}

double pgf_offspring(double s, const GWParams& params) {
  if (s < 0.0) throw std::domain_error("pgf_offspring: s < 0");
  const double denom =
      params.gamma + 1.0 + 2.0 * params.d * params.gamma * (1.0 - s);
  if (denom <= 0.0)
    throw std::domain_error("pgf_offspring: s at or beyond the pole");
  const double factor = pgf_onset_bernoulli(s, params);
  return (params.gamma + 1.0) / denom *
         std::pow(factor, 2.0 * params.d);
}

std::optional<double> try_solve_progeny_pgf(double s, const GWParams& params,
                                            double tol) {
  double x = 0.0;
  for (int it = 0; it < kIterationBudget; ++it) {
    double gx;
    try {
      gx = pgf_offspring(x, params);
    } catch (const std::domain_error&) {
      return std::nullopt;
    }
    const double next = s * gx;
    if (!std::isfinite(next) || next > kDivergenceCeiling) return std::nullopt;
    if (std::abs(next - x) <= tol) return x;  // residual |x - s G_Y(x)| <= tol
    x = next;
  }
  return std::nullopt;
}

double solve_progeny_pgf(double s, const GWParams& params, double tol) {
  if (s < 0.0) throw std::domain_error("solve_progeny_pgf: s < 0");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
  auto x = try_solve_progeny_pgf(s, params, tol);
  if (!x)
    throw FixedPointDivergence(
        "solve_progeny_pgf: no convergence at s = " + std::to_string(s));
  return *x;
}

TailBound tail_certificate(const GWParams& params,
                           std::optional<double> target_s) {
  params.validate();
  if (!params.subcritical())
    throw std::domain_error(
        "tail_certificate: parameters not subcritical (gamma >= 1/(4d-1))");

  if (target_s) {
    if (!(*target_s > 1.0))
      throw std::invalid_argument("target_s must be > 1");
    const double c = solve_progeny_pgf(*target_s, params, kSolveTol);
    return {c, *target_s};
  }

  if (params.gamma == 0.0) {
    // pi == 1 and G_pi(s) = s; any s > 1 works.
    return {2.0, 2.0};
  }

  auto converges = [&](double s) {
    return try_solve_progeny_pgf(s, params, kSolveTol).has_value();
  };

  // The radius of convergence of G_pi lies below the pole of G_Y.
  double lo = 1.0;
  double hi = 1.0 + (params.gamma + 1.0) / (2.0 * params.d * params.gamma);
  if (converges(hi)) {
    lo = hi;
  } else {
    while (hi - lo > 1e-6) {
      const double mid = 0.5 * (lo + hi);
      if (converges(mid))
        lo = mid;
      else
        hi = mid;
    }
  }
  const double s1 = 1.0 + 0.99 * (lo - 1.0);
  const double c = solve_progeny_pgf(s1, params, kSolveTol);
  return {c, s1};
}

TailBound infection_count_certificate(const GWParams& params) {
  const TailBound progeny = tail_certificate(params);
  const PhiReport phi = phi_check(params.d);
  const double base = std::min(progeny.s, phi.phi_at_s0);
  const double s2 = std::pow(base, 1.0 / (6.0 * params.d));
  return {progeny.c + 1.0, s2};
}

double cumulative_infection_pgf(double s, const GWParams& params,
                                std::uint64_t l) {
  if (l < 1) throw std::invalid_argument("l must be >= 1");
  if (s < 0.0) throw std::domain_error("cumulative_infection_pgf: s < 0");
  const double denom = 1.0 + 2.0 * params.d * (1.0 - s);
  if (denom <= 0.0)
    throw std::domain_error(
        "cumulative_infection_pgf: s at or beyond the pole");
  const double one = std::pow(s, 2.0 * params.d) / denom;
  return std::pow(one, static_cast<double>(l));
}

PhiReport phi_check(int d) {
  if (d < 1) throw std::invalid_argument("d must be >= 1");
  const double s0 = 1.0 + 1.0 / (4.0 * d);
  PhiReport rep;
  rep.phi_at_s0 = 0.5 * std::pow(s0, 4.0 * d);
  rep.lower_bound = 1.0 + 0.25 * (1.0 - 1.0 / (4.0 * d));
  return rep;
}

double offspring_mean(const GWParams& params) {
  return 4.0 * params.d * params.gamma / (params.gamma + 1.0);
}

double progeny_mean(const GWParams& params) {
  const double denom =
      params.gamma + 1.0 - 4.0 * params.d * params.gamma;
  if (denom <= 0.0)
    throw std::domain_error("progeny_mean: parameters not subcritical");
  return (params.gamma + 1.0) / denom;
}

}  // namespace acp::branching
