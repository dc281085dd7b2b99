#include "acp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "acp/branching.hpp"
#include "acp/csv.hpp"
#include "acp/ctmc_oracle.hpp"
#include "acp/lattice.hpp"
#include "acp/meanfield.hpp"
#include "acp/percolation.hpp"
#include "acp/replicas.hpp"
#include "acp/stats.hpp"

namespace acp::verify {

namespace {

using branching::GWParams;
using lattice::Boundary;
using lattice::SimParams;

std::uint64_t scaled(const VerifyOptions& opt, std::uint64_t n) {
  const auto s = static_cast<std::uint64_t>(static_cast<double>(n) * opt.scale);
  return std::max<std::uint64_t>(100, s);
}

std::uint64_t sub_seed(const VerifyOptions& opt, int criterion, int part = 0) {
  return mix64(opt.seed + 0x9e3779b97f4a7c15ULL *
                              (static_cast<std::uint64_t>(criterion) * 64 +
                               part + 1));
}

struct Moments {
  double mean = 0.0;
  double se = 0.0;
};

Moments moments(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

std::string fmt(double v) { return format_double(v); }

}  // namespace

CriterionResult offspring_law(const VerifyOptions& opt) {
  CriterionResult res{1, "offspring_law", true, ""};
  std::ostringstream out;
  const std::uint64_t n = scaled(opt, 100'000);
  const std::vector<GWParams> combos = {
      {1, 0.1}, {1, 0.3}, {1, 1.0}, {2, 0.1}};
  int part = 0;
  for (const GWParams& gw : combos) {
    auto samples = replicate<double>(
        n, sub_seed(opt, 1, part++), opt.jobs, [&](std::uint64_t, Rng& rng) {
          return static_cast<double>(branching::sample_offspring(gw, rng));
        });
    const Moments m = moments(samples);
    const double target = branching::offspring_mean(gw);
    const bool mean_ok = std::abs(m.mean - target) <= 3.0 * m.se;
    res.pass = res.pass && mean_ok;
    out << "d=" << gw.d << " gamma=" << fmt(gw.gamma) << " mean=" << fmt(m.mean)
        << " target=" << fmt(target) << (mean_ok ? "" : " MEAN-FAIL");
    for (double s : {0.0, 0.25, 0.5, 0.75}) {
      double emp = 0.0;
      for (double y : samples) emp += std::pow(s, y);
      emp /= static_cast<double>(n);
      const double exact = branching::pgf_offspring(s, gw);
      const bool ok = std::abs(emp - exact) <= 0.01;
      res.pass = res.pass && ok;
      if (!ok)
        out << " PGF-FAIL(s=" << fmt(s) << " emp=" << fmt(emp)
            << " exact=" << fmt(exact) << ")";
    }
    out << "; ";
  }
  res.details = out.str();
  return res;
}

CriterionResult progeny_pgf(const VerifyOptions& opt) {
  CriterionResult res{2, "progeny_pgf", true, ""};
  std::ostringstream out;
  const GWParams gw{1, 0.1};

  double max_resid = 0.0;
  for (int i = 0; i <= 10; ++i) {
    const double s = 0.1 * i;
    const double x = branching::solve_progeny_pgf(s, gw, 1e-12);
    const double resid = std::abs(x - s * branching::pgf_offspring(x, gw));
    max_resid = std::max(max_resid, resid);
  }
  const bool resid_ok = max_resid <= 1e-10;
  res.pass = res.pass && resid_ok;
  out << "max_residual=" << fmt(max_resid);

  for (const GWParams& sub : {GWParams{1, 0.1}, GWParams{1, 0.2}, GWParams{2, 0.1}}) {
    const double at_one = branching::solve_progeny_pgf(1.0, sub, 1e-12);
    const bool ok = std::abs(at_one - 1.0) <= 1e-8;
    res.pass = res.pass && ok;
    if (!ok) out << " NORMALIZATION-FAIL(d=" << sub.d << ")";
  }

  const double h = 1e-6;
  const double deriv = (branching::solve_progeny_pgf(1.0, gw, 1e-12) -
                        branching::solve_progeny_pgf(1.0 - h, gw, 1e-12)) /
                       h;
  const double deriv_target = branching::progeny_mean(gw);  // 11/7
  const bool deriv_ok = std::abs(deriv - deriv_target) <= 1e-3;
  res.pass = res.pass && deriv_ok;
  out << " derivative=" << fmt(deriv) << " target=" << fmt(deriv_target);

  const std::uint64_t n = scaled(opt, 1'000'000);
  auto progeny = replicate<double>(
      n, sub_seed(opt, 2), opt.jobs, [&](std::uint64_t, Rng& rng) {
        return static_cast<double>(
            branching::simulate_progeny(gw, branching::kDefaultProgenyCap, rng)
                .progeny);
      });
  const Moments m = moments(progeny);
  const bool mean_ok = std::abs(m.mean - deriv_target) <= 3.0 * m.se;
  res.pass = res.pass && mean_ok;
  out << " mean_progeny=" << fmt(m.mean) << (mean_ok ? "" : " MEAN-FAIL");
  res.details = out.str();
  return res;
}

CriterionResult exponential_tails(const VerifyOptions& opt) {
  CriterionResult res{3, "exponential_tails", true, ""};
  std::ostringstream out;
  const GWParams gw{1, 0.2};
  const std::uint64_t n = scaled(opt, 100'000);

  auto pi_samples = replicate<double>(
      n, sub_seed(opt, 3, 0), opt.jobs, [&](std::uint64_t, Rng& rng) {
        return static_cast<double>(
            branching::simulate_progeny(gw, branching::kDefaultProgenyCap, rng)
                .progeny);
      });

  SimParams sp;
  sp.d = 1;
  sp.half_width = 100;
  sp.lambda1 = 0.0;
  sp.lambda2 = lattice::kInfiniteRate;
  sp.gamma = 0.2;
  sp.horizon = 1000.0;
  auto pi1_samples = replicate<double>(
      n, sub_seed(opt, 3, 1), opt.jobs, [&](std::uint64_t, Rng& rng) {
        return static_cast<double>(lattice::run_single_source(sp, rng).pi1);
      });

  auto fit_tail = [&](const std::vector<double>& samples, const char* label) {
    std::vector<std::pair<double, double>> points;
    for (int k = 1; k <= 15; ++k)
      points.emplace_back(k, stats::tail_estimate(samples, k).p_hat);
    const stats::DecayFit fit = stats::fit_decay_slope(points);
    const bool ok = fit.slope < 0.0 && fit.r2 >= 0.95;
    res.pass = res.pass && ok;
    out << label << " slope=" << fmt(fit.slope) << " r2=" << fmt(fit.r2)
        << (ok ? "" : " FIT-FAIL") << "; ";
  };
  fit_tail(pi_samples, "pi");
  fit_tail(pi1_samples, "pi1");

  const branching::TailBound cert_pi = branching::tail_certificate(gw);
  const branching::TailBound cert_pi1 =
      branching::infection_count_certificate(gw);
  bool bounds_ok = true;
  for (int k = 0; k <= 20; ++k) {
    if (stats::tail_estimate(pi_samples, k).p_hat > cert_pi.bound(k))
      bounds_ok = false;
    if (stats::tail_estimate(pi1_samples, k).p_hat > cert_pi1.bound(k))
      bounds_ok = false;
  }
  res.pass = res.pass && bounds_ok;
  out << "cert_pi(c=" << fmt(cert_pi.c) << ",s=" << fmt(cert_pi.s)
      << ") cert_pi1(c=" << fmt(cert_pi1.c) << ",s=" << fmt(cert_pi1.s) << ")"
      << (bounds_ok ? "" : " BOUND-FAIL");
  res.details = out.str();
  return res;
}

CriterionResult stochastic_domination(const VerifyOptions& opt) {
  CriterionResult res{4, "stochastic_domination", true, ""};
  std::ostringstream out;
  const std::uint64_t n = scaled(opt, 10'000);
  const std::uint64_t cap = 2000;  // identical caps keep the comparison fair
  int part = 0;
  for (int d : {1, 2}) {
    for (double gamma : {0.1, 0.2}) {
      SimParams sp;
      sp.d = d;
      sp.half_width = d == 1 ? 100 : 60;
      sp.lambda1 = 0.0;
      sp.lambda2 = lattice::kInfiniteRate;
      sp.gamma = gamma;
      sp.horizon = 1000.0;
      sp.pi2_cap = cap;
      auto spatial = replicate<double>(
          n, sub_seed(opt, 4, part++), opt.jobs, [&](std::uint64_t, Rng& rng) {
            return static_cast<double>(lattice::run_single_source(sp, rng).pi2);
          });
      const GWParams gw{d, gamma};
      auto progeny = replicate<double>(
          n, sub_seed(opt, 4, part++), opt.jobs, [&](std::uint64_t, Rng& rng) {
            return static_cast<double>(
                branching::simulate_progeny(gw, cap, rng).progeny);
          });
      const stats::DominanceReport rep = stats::dominance_check(spatial, progeny);
      res.pass = res.pass && rep.holds;
      out << "d=" << d << " gamma=" << fmt(gamma)
          << " max_violation=" << fmt(rep.max_violation)
          << (rep.holds ? "" : " DOMINANCE-FAIL") << "; ";
    }
  }
  res.details = out.str();
  return res;
}

CriterionResult ctmc_oracle_equivalence(const VerifyOptions& opt) {
  CriterionResult res{5, "ctmc_oracle_equivalence", true, ""};
  std::ostringstream out;
  const std::uint64_t n = scaled(opt, 100'000);
  int part = 0;
  int checked = 0, failed = 0;
  for (int sites = 1; sites <= 4; ++sites) {
    for (double l1 : {0.0, 0.5, 1.0}) {
      for (double l2 : {0.0, 0.5, 1.0}) {
        for (double g : {0.0, 0.5, 1.0}) {
          SimParams sp;
          sp.d = 1;
          sp.lambda1 = l1;
          sp.lambda2 = l2;
          sp.gamma = g;
          sp.horizon = 1000.0;
          sp.boundary = Boundary::healthy_frozen;

          const int mid = (sites - 1) / 2;
          std::vector<lattice::SiteState> initial(
              sites, lattice::SiteState::healthy);
          initial[mid] = lattice::SiteState::symptomatic;
          const lattice::OracleResult oracle =
              lattice::exact_small_lattice_oracle(sp, sites, initial);

          lattice::Box box;
          box.d = 1;
          box.lo[0] = 0;
          box.hi[0] = sites - 1;
          struct RunOut {
            double time;
            double extinct;
          };
          auto runs = replicate<RunOut>(
              n, sub_seed(opt, 5, part++), opt.jobs,
              [&](std::uint64_t, Rng& rng) {
                lattice::Simulator sim(sp, box);
                sim.init_explicit({{{mid, 0, 0},
                                    lattice::SiteState::symptomatic}});
                while (true) {
                  const auto r = sim.step(rng);
                  if (r.status == lattice::StepStatus::absorbed)
                    return RunOut{sim.time(), 1.0};
                  if (r.status == lattice::StepStatus::horizon)
                    return RunOut{sim.time(), 0.0};
                }
              });
          std::vector<double> times, extincts;
          times.reserve(n);
          extincts.reserve(n);
          for (const RunOut& r : runs) {
            times.push_back(r.time);
            extincts.push_back(r.extinct);
          }
          const Moments mt = moments(times);
          const Moments mp = moments(extincts);
          const bool time_ok =
              std::abs(mt.mean - oracle.mean_extinction_time) <=
              3.0 * mt.se + 1e-9;
          const bool prob_ok = std::abs(mp.mean - oracle.extinction_prob) <=
                               3.0 * mp.se + 1e-9;
          ++checked;
          if (!(time_ok && prob_ok)) {
            ++failed;
            res.pass = false;
            out << "FAIL sites=" << sites << " l1=" << fmt(l1)
                << " l2=" << fmt(l2) << " g=" << fmt(g)
                << " mc_time=" << fmt(mt.mean)
                << " oracle_time=" << fmt(oracle.mean_extinction_time) << "; ";
          }
        }
      }
    }
  }
  out << "checked=" << checked << " failed=" << failed;
  res.details = out.str();
  return res;
}

CriterionResult meanfield_threshold(const VerifyOptions& opt) {
  (void)opt;
  CriterionResult res{6, "meanfield_threshold", true, ""};
  std::ostringstream out;
  int iff_failures = 0, convergence_failures = 0;
  for (double l1 = 0.0; l1 <= 3.0 + 1e-12; l1 += 0.5) {
    for (double l2 = 0.0; l2 <= 3.0 + 1e-12; l2 += 0.5) {
      for (double g : {0.25, 0.5, 1.0}) {
        const meanfield::MFParams p{l1, l2, g};
        const auto fp = meanfield::interior_fixed_point(p, 1e-12);
        const bool exists = fp.point.has_value();
        if (exists != meanfield::threshold_check(p)) {
          ++iff_failures;
          res.pass = false;
          out << "IFF-FAIL(l1=" << fmt(l1) << ",l2=" << fmt(l2)
              << ",g=" << fmt(g) << "); ";
        }
        const auto traj =
            meanfield::integrate({0.1, 0.1}, p, 200.0, 0.01);
        const meanfield::MFState final_state = traj.back().second;
        const meanfield::MFState attractor =
            exists ? *fp.point : meanfield::MFState{0.0, 0.0};
        const double dist =
            std::max(std::abs(final_state.u1 - attractor.u1),
                     std::abs(final_state.u2 - attractor.u2));
        if (dist > 1e-6) {
          ++convergence_failures;
          res.pass = false;
          out << "CONV-FAIL(l1=" << fmt(l1) << ",l2=" << fmt(l2)
              << ",g=" << fmt(g) << ",dist=" << fmt(dist) << "); ";
        }
      }
    }
  }
  const auto fp = meanfield::interior_fixed_point({0.0, 3.0, 1.0}, 1e-12);
  const bool instance_ok =
      fp.point && std::abs(fp.point->u1 - 1.0 / 6.0) <= 1e-8 &&
      std::abs(fp.point->u2 - 1.0 / 6.0) <= 1e-8;
  res.pass = res.pass && instance_ok;
  out << "iff_failures=" << iff_failures
      << " convergence_failures=" << convergence_failures
      << " instance(0,3,1)=" << (instance_ok ? "ok" : "FAIL");
  res.details = out.str();
  return res;
}

CriterionResult extinction_phase(const VerifyOptions& opt) {
  CriterionResult res{7, "extinction_phase", true, ""};
  std::ostringstream out;
  const std::uint64_t n = scaled(opt, 10'000);
  int part = 0;
  for (double l1 : {0.0, 0.02}) {
    SimParams sp;
    sp.d = 1;
    sp.half_width = 100;
    sp.lambda1 = l1;
    sp.lambda2 = lattice::kInfiniteRate;
    sp.gamma = 0.2;
    sp.horizon = 1000.0;
    auto runs = replicate<lattice::RunSummary>(
        n, sub_seed(opt, 7, part++), opt.jobs,
        [&](std::uint64_t, Rng& rng) {
          return lattice::run_single_source(sp, rng);
        });
    std::uint64_t extinct = 0;
    for (const auto& r : runs)
      if (r.extinct) ++extinct;
    const bool all_extinct = extinct == n;
    res.pass = res.pass && all_extinct;

    std::vector<std::pair<double, double>> points;
    for (int k = 1; k <= 12; ++k) {
      std::uint64_t over = 0;
      for (const auto& r : runs)
        if (r.max_space > k || r.max_time > static_cast<double>(k)) ++over;
      points.emplace_back(k, static_cast<double>(over) / static_cast<double>(n));
    }
    const stats::DecayFit fit = stats::fit_decay_slope(points);
    const bool fit_ok = fit.slope < 0.0 && fit.r2 >= 0.9;
    res.pass = res.pass && fit_ok;
    out << "lambda1=" << fmt(l1) << " extinct=" << extinct << "/" << n
        << (all_extinct ? "" : " EXTINCT-FAIL") << " slope=" << fmt(fit.slope)
        << " r2=" << fmt(fit.r2) << (fit_ok ? "" : " FIT-FAIL") << "; ";
  }
  res.details = out.str();
  return res;
}

CriterionResult block_events(const VerifyOptions& opt) {
  CriterionResult res{8, "block_events", true, ""};
  std::ostringstream out;
  const std::uint64_t n = scaled(opt, 1'000);
  const std::vector<int> ks = {2, 4, 6, 8};
  std::vector<stats::TailEstimate> h_estimates;
  int part = 0;
  for (int k : ks) {
    lattice::BlockGeometry geom{k, 1};
    SimParams sp;
    sp.d = 1;
    sp.lambda1 = 0.0;
    sp.lambda2 = lattice::kInfiniteRate;
    sp.gamma = 0.2;
    sp.boundary = Boundary::symptomatic_frozen;
    auto outcomes = replicate<lattice::BlockOutcome>(
        n, sub_seed(opt, 8, part++), opt.jobs,
        [&](std::uint64_t, Rng& rng) {
          return lattice::run_block_experiment(
              geom, sp, lattice::BlockInitial::all_symptomatic, rng);
        });

    std::vector<double> healthy;
    healthy.reserve(n);
    bool card_ok = true;
    std::uint64_t union_over = 0;
    const std::int64_t card_cap = 4ll * k + 1;  // (4K+1)^d, d = 1
    const std::int64_t three_m = 3 * geom.m_bound();
    for (const auto& o : outcomes) {
      healthy.push_back(o.healthy_block ? 1.0 : 0.0);
      if (o.card_lambda_minus > card_cap) card_ok = false;
      if (o.card_lambda_union > three_m) ++union_over;
    }
    const double union_frac =
        static_cast<double>(union_over) / static_cast<double>(n);
    const bool union_ok = union_frac <= 0.01;
    res.pass = res.pass && card_ok && union_ok;

    const stats::TailEstimate ph = stats::tail_estimate(healthy, 0.5);
    h_estimates.push_back(ph);
    out << "K=" << k << " P(H)=" << fmt(ph.p_hat) << " ci=["
        << fmt(ph.ci_low) << "," << fmt(ph.ci_high) << "]"
        << " union_frac=" << fmt(union_frac) << (card_ok ? "" : " CARD-FAIL")
        << (union_ok ? "" : " UNION-FAIL") << "; ";
  }

  for (std::size_t i = 1; i < h_estimates.size(); ++i) {
    const bool nondecreasing =
        h_estimates[i].p_hat >= h_estimates[i - 1].p_hat ||
        h_estimates[i].ci_high >= h_estimates[i - 1].ci_low;
    if (!nondecreasing) {
      res.pass = false;
      out << "MONOTONE-FAIL(K=" << ks[i] << "); ";
    }
  }
  const bool level_ok = h_estimates.back().p_hat >= 0.9;
  res.pass = res.pass && level_ok;
  if (!level_ok)
    out << "LEVEL-FAIL(P(H) at K=8 = " << fmt(h_estimates.back().p_hat)
        << " < 0.9)";
  res.details = out.str();
  return res;
}

namespace {

// Independent brute-force oracle: enumerates all (2d+1)^n arrow sequences
// and counts the self-avoiding ones. Deliberately different from the DFS
// in the percolation module.
std::uint64_t brute_force_sa_paths(int n, int d) {
  const int moves = 2 * d + 1;
  std::vector<int> seq(n, 0);
  std::uint64_t count = 0;
  while (true) {
    std::vector<percolation::SiteL> path{percolation::SiteL{}};
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      percolation::SiteL next = path.back();
      if (seq[i] < 2 * d) {
        const int axis = seq[i] / 2;
        next.m[axis] += (seq[i] % 2 == 0) ? 1 : -1;
      } else {
        next.n += 1;
      }
      for (const auto& prev : path)
        if (prev == next) {
          ok = false;
          break;
        }
      if (ok) path.push_back(next);
    }
    if (ok) ++count;
    int i = 0;
    for (; i < n; ++i) {
      if (++seq[i] < moves) break;
      seq[i] = 0;
    }
    if (i == n) break;
    if (n == 0) break;
  }
  return count;
}

// All directed self-avoiding paths of length n from the origin (d = 1).
std::vector<std::vector<percolation::SiteL>> all_sa_paths_d1(int n) {
  std::vector<std::vector<percolation::SiteL>> out;
  std::vector<percolation::SiteL> path{percolation::SiteL{}};
  auto dfs = [&](auto&& self, int remaining) -> void {
    if (remaining == 0) {
      out.push_back(path);
      return;
    }
    for (const auto& next : percolation::out_neighbors(path.back(), 1)) {
      if (std::find(path.begin(), path.end(), next) != path.end()) continue;
      path.push_back(next);
      self(self, remaining - 1);
      path.pop_back();
    }
  };
  dfs(dfs, n);
  return out;
}

}  // namespace

CriterionResult percolation_combinatorics(const VerifyOptions& opt) {
  (void)opt;
  CriterionResult res{9, "percolation_combinatorics", true, ""};
  std::ostringstream out;

  for (int d = 1; d <= 2; ++d) {
    for (int n = 0; n <= 6; ++n) {
      const auto rep = percolation::count_directed_sa_paths(n, d);
      const std::uint64_t brute = brute_force_sa_paths(n, d);
      if (rep.count != brute ||
          static_cast<double>(rep.count) > rep.bound) {
        res.pass = false;
        out << "COUNT-FAIL(n=" << n << ",d=" << d << ",dfs=" << rep.count
            << ",brute=" << brute << "); ";
      }
    }
  }

  std::uint64_t paths_checked = 0;
  for (int n = 0; n <= 6; ++n) {
    for (const auto& path : all_sa_paths_d1(n)) {
      const auto kept = percolation::extract_two_separated(path, 1);
      const auto needed = static_cast<std::size_t>(
          std::ceil(static_cast<double>(n + 1) / 25.0));
      bool ok = kept.size() >= needed;
      for (std::size_t i = 0; i < kept.size() && ok; ++i)
        for (std::size_t j = i + 1; j < kept.size() && ok; ++j)
          if (percolation::chebyshev(kept[i], kept[j], 1) <= 2) ok = false;
      if (!ok) {
        res.pass = false;
        out << "EXTRACT-FAIL(n=" << n << "); ";
      }
      ++paths_checked;
    }
  }

  double max_rel = 0.0;
  for (int d = 1; d <= 3; ++d) {
    const double log_eps = -std::pow(5.0, d + 1) * std::log(4.0 * d + 2.0);
    for (int n = 1; n <= 100; ++n) {
      const double lhs = percolation::log_closed_path_bound(n, d, log_eps);
      const double rhs = -n * std::log(2.0);
      max_rel = std::max(max_rel, std::abs(lhs - rhs) / std::abs(rhs));
    }
  }
  const bool identity_ok = max_rel <= 1e-9;
  res.pass = res.pass && identity_ok;
  out << "paths_checked=" << paths_checked
      << " bound_identity_max_rel=" << fmt(max_rel)
      << (identity_ok ? "" : " IDENTITY-FAIL");
  res.details = out.str();
  return res;
}

std::vector<CriterionResult> run_all_criteria(const VerifyOptions& opt) {
  return {offspring_law(opt),
          progeny_pgf(opt),
          exponential_tails(opt),
          stochastic_domination(opt),
          ctmc_oracle_equivalence(opt),
          meanfield_threshold(opt),
          extinction_phase(opt),
          block_events(opt),
          percolation_combinatorics(opt)};
}

std::string format_report(const std::vector<CriterionResult>& results) {
  std::ostringstream out;
  for (const auto& r : results)
    out << "criterion " << r.id << " " << r.name << ": "
        << (r.pass ? "PASS" : "FAIL") << " (" << r.details << ")\n";
  return out.str();
}

}  // namespace acp::verify
