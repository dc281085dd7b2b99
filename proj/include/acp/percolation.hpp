#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "acp/rng.hpp"

namespace acp::percolation {

inline constexpr int kMaxDim = 3;

// Site of the directed space-time graph on Z^d x N. Only the first d
// spatial coordinates are meaningful.
struct SiteL {
  std::array<int, kMaxDim> m{};
  int n = 0;
  friend bool operator==(const SiteL&, const SiteL&) = default;
};

// Sup-norm distance over the combined (m, n) coordinates, matching the
// block-disjointness criterion used for 2-dependence.
int chebyshev(const SiteL& a, const SiteL& b, int d);

// The 2d spatial neighbors at the same level plus the site one level up.
std::vector<SiteL> out_neighbors(const SiteL& site, int d);

struct PathReport {
  int length = 0;
  std::uint64_t count = 0;
  double bound = 0.0;  // (2d+1)^length
};

struct EnumerationBudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exact count of directed self-avoiding paths of length n from the origin.
// Guarded by n*(2d+1)^n <= 1e8.
PathReport count_directed_sa_paths(int n, int d);

// Greedy extraction of a pairwise sup-distance > 2 subset from a directed
// self-avoiding path; output size >= ceil((length+1)/5^(d+1)).
std::vector<SiteL> extract_two_separated(std::span<const SiteL> path, int d);

// (2d+1)^n * epsilon^(n/5^(d+1)), the union bound on a closed path of
// length n. log variant works in log-space for extreme epsilon.
double closed_path_bound(int n, int d, double epsilon);
double log_closed_path_bound(int n, int d, double log_epsilon);

// Finite window of the percolation graph: m in [-half_width, half_width]^d,
// levels 0..height.
struct FieldExtent {
  int half_width = 0;
  int height = 0;
};

struct FieldSearch {
  bool has_closed_path_from_level0 = false;
  int longest_closed_path = -1;  // max BFS depth over reachable closed sites
};

// Samples iid closed sites with probability epsilon and searches along the
// arrows from all closed level-0 sites.
FieldSearch sample_field_and_search(double epsilon, int d,
                                    const FieldExtent& extent, Rng& rng);

// Search over an explicitly given field (row-major over levels then
// spatial coordinates); used for coupled-sampling checks.
FieldSearch search_closed_field(const std::vector<std::uint8_t>& closed,
                                int d, const FieldExtent& extent);

}  // namespace acp::percolation
