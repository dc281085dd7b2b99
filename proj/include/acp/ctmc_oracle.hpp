#pragma once

#include <vector>

#include "acp/lattice.hpp"

namespace acp::lattice {

struct OracleResult {
  double extinction_prob = 0.0;
  double mean_extinction_time = 0.0;
};

// Exact CTMC solution on a path of up to 5 sites: builds the generator of
// the finite chain (neighbor fractions use denominator 2d, missing
// neighbors are healthy) and solves linear systems for the absorption
// probability into the all-healthy state and the expected absorption time.
// lambda2 = infinity is handled by quotienting the state space to
// configurations with no healthy site adjacent to a symptomatic one.
OracleResult exact_small_lattice_oracle(const SimParams& params, int n_sites,
                                        const std::vector<SiteState>& initial);

}  // namespace acp::lattice
