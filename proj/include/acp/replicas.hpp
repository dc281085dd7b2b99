#pragma once

#include <cstdint>
#include <thread>
#include <vector>

#include "acp/rng.hpp"

namespace acp {

// Runs fn(replica_index, rng) for replicas 0..n-1 across up to `jobs`
// threads. Replica r always uses Rng::substream(seed, r) and writes slot r,
// so results are independent of scheduling.
template <class T, class Fn>
std::vector<T> replicate(std::uint64_t n, std::uint64_t seed, int jobs,
                         Fn&& fn) {
  std::vector<T> out(n);
  if (jobs < 1) jobs = 1;
  if (jobs == 1) {
    for (std::uint64_t r = 0; r < n; ++r) {
      Rng rng = Rng::substream(seed, r);
      out[r] = fn(r, rng);
    }
    return out;
  }
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (int w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w] {
      for (std::uint64_t r = w; r < n; r += jobs) {
        Rng rng = Rng::substream(seed, r);
        out[r] = fn(r, rng);
      }
    });
  }
  for (auto& t : workers) t.join();
  return out;
}

}  // namespace acp
