#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace acp::verify {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string details;
};

struct VerifyOptions {
  std::uint64_t seed = 20260823;
  double scale = 1.0;  // multiplies Monte Carlo sample counts
  int jobs = 1;
};

CriterionResult offspring_law(const VerifyOptions&);              // 1
CriterionResult progeny_pgf(const VerifyOptions&);                // 2
CriterionResult exponential_tails(const VerifyOptions&);          // 3
CriterionResult stochastic_domination(const VerifyOptions&);      // 4
CriterionResult ctmc_oracle_equivalence(const VerifyOptions&);    // 5
CriterionResult meanfield_threshold(const VerifyOptions&);        // 6
CriterionResult extinction_phase(const VerifyOptions&);           // 7
CriterionResult block_events(const VerifyOptions&);               // 8
CriterionResult percolation_combinatorics(const VerifyOptions&);  // 9

std::vector<CriterionResult> run_all_criteria(const VerifyOptions&);

// One line per criterion, deterministic formatting.
std::string format_report(const std::vector<CriterionResult>&);

}  // namespace acp::verify
