#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "acp/branching.hpp"
#include "acp/rng.hpp"

using namespace acp;
using branching::GWParams;

TEST_CASE("window count has mean 2d and P(N=0) = 1/(2d+1)") {
  const GWParams gw{1, 0.5};
  Rng rng(11);
  const int n = 200000;
  double sum = 0.0;
  std::int64_t zeros = 0;
  for (int i = 0; i < n; ++i) {
    const auto v = branching::sample_window_count(gw, rng);
    sum += static_cast<double>(v);
    if (v == 0) ++zeros;
  }
  CHECK(std::abs(sum / n - 2.0) < 3.0 * std::sqrt(6.0 / n));
  CHECK(std::abs(static_cast<double>(zeros) / n - 1.0 / 3.0) < 0.01);
}

TEST_CASE("window count pgf values") {
  const GWParams gw{1, 0.0};
  CHECK(branching::pgf_window_count(1.0, gw) == doctest::Approx(1.0));
  CHECK(branching::pgf_window_count(0.0, gw) == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(branching::pgf_window_count(1.6, gw), std::domain_error);
}

TEST_CASE("offspring pgf: P(Y=0) = 1/8 at d=1 gamma=1") {
  // G_Y(0) = (gamma+1)/(gamma+1+2d*gamma) * (1/(gamma+1))^{2d} = 1/8
  const GWParams gw{1, 1.0};
  CHECK(branching::pgf_offspring(0.0, gw) == doctest::Approx(0.125));
  CHECK(branching::pgf_offspring(1.0, gw) == doctest::Approx(1.0));
}

TEST_CASE("offspring mean: sampled vs closed form") {
  const GWParams gw{1, 1.0};
  CHECK(branching::offspring_mean(gw) == doctest::Approx(2.0));
  Rng rng(13);
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    sum += static_cast<double>(branching::sample_offspring(gw, rng));
  CHECK(std::abs(sum / n - 2.0) < 0.05);
}

TEST_CASE("progeny pgf fixed point: residual and normalization") {
  const GWParams gw{1, 0.1};
  for (double s : {0.1, 0.5, 0.9, 1.0}) {
    const double x = branching::solve_progeny_pgf(s, gw, 1e-12);
    CHECK(std::abs(x - s * branching::pgf_offspring(x, gw)) < 1e-10);
  }
  CHECK(branching::solve_progeny_pgf(1.0, gw, 1e-12) ==
        doctest::Approx(1.0).epsilon(1e-8));
  // Monotone in s on [0, 1]
  double prev = 0.0;
  for (double s : {0.2, 0.4, 0.6, 0.8, 1.0}) {
    const double x = branching::solve_progeny_pgf(s, gw, 1e-12);
    CHECK(x >= prev);
    prev = x;
  }
}

TEST_CASE("progeny mean is 11/7 at d=1 gamma=0.1") {
  const GWParams gw{1, 0.1};
  CHECK(branching::progeny_mean(gw) == doctest::Approx(11.0 / 7.0));
  Rng rng(17);
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    sum += static_cast<double>(
        branching::simulate_progeny(gw, branching::kDefaultProgenyCap, rng)
            .progeny);
  CHECK(std::abs(sum / n - 11.0 / 7.0) < 0.05);
}

TEST_CASE("subcriticality boundary gamma < 1/(4d-1)") {
  CHECK(GWParams{1, 0.33}.subcritical());
  CHECK_FALSE(GWParams{1, 0.34}.subcritical());
  CHECK(GWParams{2, 0.14}.subcritical());
  CHECK_FALSE(GWParams{2, 1.0 / 7.0}.subcritical());
}

TEST_CASE("tail certificate dominates the exact tail") {
  const GWParams gw{1, 0.1};
  const branching::TailBound cert = branching::tail_certificate(gw);
  CHECK(cert.s > 1.0);
  CHECK(cert.c >= 1.0);
  // Markov: P(pi > K) <= G_pi(s1) s1^-K; spot-check against simulation.
  Rng rng(19);
  const int n = 200000;
  std::vector<std::int64_t> over(30, 0);
  for (int i = 0; i < n; ++i) {
    const auto p =
        branching::simulate_progeny(gw, branching::kDefaultProgenyCap, rng)
            .progeny;
    for (std::size_t k = 0; k < over.size(); ++k)
      if (p > k) ++over[k];
  }
  for (std::size_t k = 0; k < over.size(); ++k)
    CHECK(static_cast<double>(over[k]) / n <=
          cert.bound(static_cast<double>(k)));
}

TEST_CASE("tail certificate in the trivial gamma = 0 case") {
  const auto cert = branching::tail_certificate(GWParams{1, 0.0});
  CHECK(cert.c == doctest::Approx(2.0));
  CHECK(cert.s == doctest::Approx(2.0));
}

TEST_CASE("tail certificate rejects supercritical parameters") {
  CHECK_THROWS_AS(branching::tail_certificate(GWParams{1, 0.5}),
                  std::domain_error);
}

TEST_CASE("infection count certificate combines both pieces") {
  const GWParams gw{1, 0.2};
  const auto progeny = branching::tail_certificate(gw);
  const auto cert = branching::infection_count_certificate(gw);
  CHECK(cert.c == doctest::Approx(progeny.c + 1.0));
  const auto phi = branching::phi_check(1);
  const double base = std::min(progeny.s, phi.phi_at_s0);
  CHECK(cert.s == doctest::Approx(std::pow(base, 1.0 / 6.0)));
  CHECK(cert.s > 1.0);
}

TEST_CASE("cumulative infection pgf closed form") {
  const GWParams gw{1, 0.0};
  // s^2 / (1 + 2(1-s)) at s = 0.5: 0.25/2 = 0.125
  CHECK(branching::cumulative_infection_pgf(0.5, gw, 1) ==
        doctest::Approx(0.125));
  CHECK(branching::cumulative_infection_pgf(0.5, gw, 2) ==
        doctest::Approx(0.015625));
  CHECK(branching::cumulative_infection_pgf(1.0, gw, 5) ==
        doctest::Approx(1.0));
}

TEST_CASE("phi check values at d=1") {
  const auto phi = branching::phi_check(1);
  CHECK(phi.phi_at_s0 == doctest::Approx(1.220703125));
  CHECK(phi.lower_bound == doctest::Approx(1.1875));
  for (int d = 1; d <= 4; ++d) {
    const auto p = branching::phi_check(d);
    CHECK(p.phi_at_s0 >= p.lower_bound);
  }
}

TEST_CASE("progeny cap flags truncation") {
  const GWParams gw{1, 1.0};  // supercritical
  Rng rng(23);
  int capped = 0;
  for (int i = 0; i < 200; ++i)
    if (branching::simulate_progeny(gw, 1000, rng).capped) ++capped;
  CHECK(capped > 0);
}

TEST_CASE("parameter validation names the offending field") {
  try {
    GWParams{1, -1.0}.validate();
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("gamma") != std::string::npos);
  }
}
