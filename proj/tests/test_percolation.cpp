#include <doctest.h>

#include <cmath>
#include <vector>

#include "acp/percolation.hpp"
#include "acp/rng.hpp"

using namespace acp;
using percolation::SiteL;

TEST_CASE("path counts for small n") {
  CHECK(percolation::count_directed_sa_paths(0, 1).count == 1);
  CHECK(percolation::count_directed_sa_paths(1, 1).count == 3);
  // Length 2, d=1: 3*3 = 9 walks minus the two immediate backtracks.
  CHECK(percolation::count_directed_sa_paths(2, 1).count == 7);
  CHECK(percolation::count_directed_sa_paths(1, 2).count == 5);
}

TEST_CASE("counts never exceed the (2d+1)^n bound") {
  for (int d = 1; d <= 2; ++d)
    for (int n = 0; n <= 7; ++n) {
      const auto rep = percolation::count_directed_sa_paths(n, d);
      CHECK(static_cast<double>(rep.count) <= rep.bound);
      CHECK(rep.bound == doctest::Approx(std::pow(2.0 * d + 1.0, n)));
    }
}

TEST_CASE("enumeration budget guard") {
  CHECK_THROWS_AS(percolation::count_directed_sa_paths(50, 3),
                  percolation::EnumerationBudgetExceeded);
}

TEST_CASE("chebyshev distance spans space and time") {
  SiteL a{};
  SiteL b{};
  b.m[0] = 2;
  b.n = -3;
  CHECK(percolation::chebyshev(a, b, 1) == 3);
  b.n = 1;
  CHECK(percolation::chebyshev(a, b, 1) == 2);
}

TEST_CASE("out neighbors: 2d spatial plus one temporal") {
  const auto nb = percolation::out_neighbors(SiteL{}, 2);
  CHECK(nb.size() == 5);
  int up = 0;
  for (const auto& s : nb)
    if (s.n == 1) ++up;
  CHECK(up == 1);
}

TEST_CASE("two-separated extraction: pairwise distance and guarantee") {
  // A straight temporal path 0..10: greedy keeps every third site.
  std::vector<SiteL> path;
  for (int n = 0; n <= 10; ++n) {
    SiteL s{};
    s.n = n;
    path.push_back(s);
  }
  const auto kept = percolation::extract_two_separated(path, 1);
  CHECK(kept.size() == 4);  // n = 0, 3, 6, 9
  for (std::size_t i = 0; i < kept.size(); ++i)
    for (std::size_t j = i + 1; j < kept.size(); ++j)
      CHECK(percolation::chebyshev(kept[i], kept[j], 1) > 2);
  // Guarantee: at least ceil((len+1)/5^(d+1)) sites survive.
  CHECK(kept.size() >= static_cast<std::size_t>(std::ceil(11.0 / 25.0)));
}

TEST_CASE("closed path bound matches its log form") {
  for (int d = 1; d <= 3; ++d)
    for (int n : {0, 1, 5, 10}) {
      const double eps = 0.01;
      const double direct = percolation::closed_path_bound(n, d, eps);
      const double via_log =
          std::exp(percolation::log_closed_path_bound(n, d, std::log(eps)));
      CHECK(direct == doctest::Approx(via_log));
    }
}

TEST_CASE("bound equals 2^-n at the calibrated epsilon") {
  for (int d = 1; d <= 3; ++d) {
    const double log_eps = -std::pow(5.0, d + 1) * std::log(4.0 * d + 2.0);
    for (int n : {1, 10, 100}) {
      const double lhs = percolation::log_closed_path_bound(n, d, log_eps);
      const double rhs = -n * std::log(2.0);
      CHECK(std::abs(lhs - rhs) <= 1e-9 * std::abs(rhs));
    }
  }
}

TEST_CASE("field search: fully closed field percolates, empty does not") {
  percolation::FieldExtent extent{3, 4};
  const int volume = (2 * 3 + 1) * (4 + 1);
  const auto all_closed = percolation::search_closed_field(
      std::vector<std::uint8_t>(volume, 1), 1, extent);
  CHECK(all_closed.has_closed_path_from_level0);
  CHECK(all_closed.longest_closed_path >= extent.height);
  const auto all_open = percolation::search_closed_field(
      std::vector<std::uint8_t>(volume, 0), 1, extent);
  CHECK_FALSE(all_open.has_closed_path_from_level0);
  CHECK(all_open.longest_closed_path == -1);
}

TEST_CASE("search is monotone under adding closed sites") {
  percolation::FieldExtent extent{4, 4};
  const int volume = (2 * 4 + 1) * (4 + 1);
  Rng rng(101);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<std::uint8_t> sparse(volume), dense(volume);
    for (int i = 0; i < volume; ++i) {
      const double u = rng.uniform();
      sparse[i] = u < 0.2 ? 1 : 0;
      dense[i] = u < 0.6 ? 1 : 0;  // coupled: sparse closed => dense closed
    }
    const auto a = percolation::search_closed_field(sparse, 1, extent);
    const auto b = percolation::search_closed_field(dense, 1, extent);
    if (a.has_closed_path_from_level0) CHECK(b.has_closed_path_from_level0);
  }
}

TEST_CASE("sampled field frequency tracks epsilon") {
  percolation::FieldExtent extent{1, 0};  // 3 sites at level 0 only
  Rng rng(103);
  int hits = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i)
    if (percolation::sample_field_and_search(0.5, 1, extent, rng)
            .has_closed_path_from_level0)
      ++hits;
  // P(at least one of 3 closed) = 1 - 0.5^3 = 0.875
  CHECK(std::abs(static_cast<double>(hits) / n - 0.875) < 0.01);
}
