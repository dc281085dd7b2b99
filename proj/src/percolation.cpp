#include "acp/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace acp::percolation {

namespace {
void check_dim(int d) {
  if (d < 1 || d > kMaxDim)
    throw std::invalid_argument("d must be in [1, 3]");
}

std::uint64_t dfs_count(std::vector<SiteL>& path, int remaining, int d) {
  if (remaining == 0) return 1;
  std::uint64_t total = 0;
  for (const SiteL& next : out_neighbors(path.back(), d)) {
    if (std::find(path.begin(), path.end(), next) != path.end()) continue;
    path.push_back(next);
    total += dfs_count(path, remaining - 1, d);
    path.pop_back();
  }
  return total;
}
}  // namespace

int chebyshev(const SiteL& a, const SiteL& b, int d) {
  int dist = std::abs(a.n - b.n);
  for (int j = 0; j < d; ++j) dist = std::max(dist, std::abs(a.m[j] - b.m[j]));
  return dist;
}

std::vector<SiteL> out_neighbors(const SiteL& site, int d) {
  check_dim(d);
  std::vector<SiteL> out;
  out.reserve(2 * d + 1);
  for (int j = 0; j < d; ++j) {
    for (int step : {-1, +1}) {
      SiteL s = site;
      s.m[j] += step;
      out.push_back(s);
    }
  }
  SiteL up = site;
  up.n += 1;
  out.push_back(up);
  return out;
}

PathReport count_directed_sa_paths(int n, int d) {
  check_dim(d);
  if (n < 0) throw std::invalid_argument("n must be >= 0");
  const double budget =
      static_cast<double>(n) * std::pow(2.0 * d + 1.0, n);
  if (budget > 1e8)
    throw EnumerationBudgetExceeded("count_directed_sa_paths: n*(2d+1)^n > 1e8");
  std::vector<SiteL> path{SiteL{}};
  PathReport rep;
  rep.length = n;
  rep.count = dfs_count(path, n, d);
  rep.bound = std::pow(2.0 * d + 1.0, n);
  return rep;
}

std::vector<SiteL> extract_two_separated(std::span<const SiteL> path, int d) {
  check_dim(d);
  std::vector<SiteL> kept;
  for (const SiteL& site : path) {
    bool separated = true;
    for (const SiteL& k : kept) {
      if (chebyshev(site, k, d) <= 2) {
        separated = false;
        break;
      }
    }
    if (separated) kept.push_back(site);
  }
  return kept;
}

double closed_path_bound(int n, int d, double epsilon) {
  if (epsilon < 0.0 || epsilon > 1.0)
    throw std::invalid_argument("epsilon must be in [0, 1]");
  if (epsilon == 0.0) return n == 0 ? 1.0 : 0.0;
  return std::exp(log_closed_path_bound(n, d, std::log(epsilon)));
}

double log_closed_path_bound(int n, int d, double log_epsilon) {
  check_dim(d);
  if (n < 0) throw std::invalid_argument("n must be >= 0");
  const double separated = static_cast<double>(n) / std::pow(5.0, d + 1);
  return n * std::log(2.0 * d + 1.0) + separated * log_epsilon;
}

FieldSearch search_closed_field(const std::vector<std::uint8_t>& closed,
                                int d, const FieldExtent& extent) {
  check_dim(d);
  const int w = 2 * extent.half_width + 1;
  std::size_t volume = static_cast<std::size_t>(extent.height + 1);
  for (int j = 0; j < d; ++j) volume *= w;
  if (closed.size() != volume)
    throw std::invalid_argument("search_closed_field: field size mismatch");

  auto index = [&](const SiteL& s) {
    std::size_t idx = static_cast<std::size_t>(s.n);
    for (int j = 0; j < d; ++j)
      idx = idx * w + static_cast<std::size_t>(s.m[j] + extent.half_width);
    return idx;
  };
  auto inside = [&](const SiteL& s) {
    if (s.n < 0 || s.n > extent.height) return false;
    for (int j = 0; j < d; ++j)
      if (std::abs(s.m[j]) > extent.half_width) return false;
    return true;
  };

  std::vector<int> dist(volume, -1);
  std::deque<SiteL> queue;

  // Seed from every closed level-0 site.
  SiteL s{};
  s.n = 0;
  std::vector<int> coord(d, -extent.half_width);
  bool done = false;
  while (!done) {
    for (int j = 0; j < d; ++j) s.m[j] = coord[j];
    if (closed[index(s)]) {
      dist[index(s)] = 0;
      queue.push_back(s);
    }
    int j = 0;
    for (; j < d; ++j) {
      if (++coord[j] <= extent.half_width) break;
      coord[j] = -extent.half_width;
    }
    done = (j == d);
  }

  FieldSearch result;
  result.has_closed_path_from_level0 = !queue.empty();
  int longest = queue.empty() ? -1 : 0;
  while (!queue.empty()) {
    const SiteL cur = queue.front();
    queue.pop_front();
    const int dcur = dist[index(cur)];
    for (const SiteL& nb : out_neighbors(cur, d)) {
      if (!inside(nb)) continue;
      const std::size_t idx = index(nb);
      if (!closed[idx] || dist[idx] >= 0) continue;
      dist[idx] = dcur + 1;
      longest = std::max(longest, dcur + 1);
      queue.push_back(nb);
    }
  }
  result.longest_closed_path = longest;
  return result;
}

FieldSearch sample_field_and_search(double epsilon, int d,
                                    const FieldExtent& extent, Rng& rng) {
  if (epsilon < 0.0 || epsilon > 1.0)
    throw std::invalid_argument("epsilon must be in [0, 1]");
  check_dim(d);
  const int w = 2 * extent.half_width + 1;
  std::size_t volume = static_cast<std::size_t>(extent.height + 1);
  for (int j = 0; j < d; ++j) volume *= w;
  std::vector<std::uint8_t> closed(volume);
  for (std::size_t i = 0; i < volume; ++i)
    closed[i] = rng.bernoulli(epsilon) ? 1 : 0;
  return search_closed_field(closed, d, extent);
}

}  // namespace acp::percolation
