#include "acp/ctmc_oracle.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>

namespace acp::lattice {

namespace {

int get_site(int code, int i) {
  for (int j = 0; j < i; ++j) code /= 3;
  return code % 3;
}

int with_site(int code, int i, int value) {
  int p = 1;
  for (int j = 0; j < i; ++j) p *= 3;
  return code + (value - get_site(code, i)) * p;
}

// One simultaneous sweep: every healthy site adjacent to a symptomatic one
// becomes asymptomatic. New 1s never create new 2s, so one sweep closes.
int closure(int code, int n) {
  int out = code;
  for (int i = 0; i < n; ++i) {
    if (get_site(code, i) != 0) continue;
    const bool left = i > 0 && get_site(code, i - 1) == 2;
    const bool right = i + 1 < n && get_site(code, i + 1) == 2;
    if (left || right) out = with_site(out, i, 1);
  }
  return out;
}

bool legal(int code, int n) { return closure(code, n) == code; }

}  // namespace

OracleResult exact_small_lattice_oracle(const SimParams& params, int n_sites,
                                        const std::vector<SiteState>& initial) {
  params.validate();
  if (n_sites < 1 || n_sites > 5)
    throw std::invalid_argument("oracle supports 1 to 5 sites");
  if (static_cast<int>(initial.size()) != n_sites)
    throw std::invalid_argument("initial configuration size mismatch");
  if (params.boundary != Boundary::healthy_frozen)
    throw std::invalid_argument("oracle supports healthy_frozen boundary only");

  const bool inf2 = params.lambda2_infinite();
  const double two_d = 2.0 * params.d;
  int n_codes = 1;
  for (int i = 0; i < n_sites; ++i) n_codes *= 3;

  // Enumerate (legal) states; index 0 is the all-healthy absorbing state.
  std::map<int, int> state_index;
  std::vector<int> codes;
  for (int code = 0; code < n_codes; ++code) {
    if (inf2 && !legal(code, n_sites)) continue;
    state_index[code] = static_cast<int>(codes.size());
    codes.push_back(code);
  }
  const int n_states = static_cast<int>(codes.size());

  int init_code = 0;
  for (int i = 0; i < n_sites; ++i)
    init_code = with_site(init_code, i, static_cast<int>(initial[i]));
  if (inf2) init_code = closure(init_code, n_sites);
  const int init_idx = state_index.at(init_code);
  if (init_code == 0) return {1.0, 0.0};

  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n_states, n_states);
  auto add_rate = [&](int from_code, int to_code, double rate) {
    if (rate <= 0.0) return;
    if (inf2) to_code = closure(to_code, n_sites);
    const int from = state_index.at(from_code);
    const int to = state_index.at(to_code);
    if (from == to) return;
    q(from, to) += rate;
    q(from, from) -= rate;
  };

  for (int code : codes) {
    for (int i = 0; i < n_sites; ++i) {
      const int s = get_site(code, i);
      if (s == 1) {
        add_rate(code, with_site(code, i, 0), 1.0);
        add_rate(code, with_site(code, i, 2), params.gamma);
      } else if (s == 2) {
        add_rate(code, with_site(code, i, 0), 1.0);
      } else {
        int c1 = 0, c2 = 0;
        if (i > 0) {
          if (get_site(code, i - 1) == 1) ++c1;
          if (get_site(code, i - 1) == 2) ++c2;
        }
        if (i + 1 < n_sites) {
          if (get_site(code, i + 1) == 1) ++c1;
          if (get_site(code, i + 1) == 2) ++c2;
        }
        double rate = params.lambda1 * c1 / two_d;
        if (!inf2) rate += params.lambda2 * c2 / two_d;
        // inf2: legal states have c2 == 0 at healthy sites
        add_rate(code, with_site(code, i, 1), rate);
      }
    }
  }

  // Transient block (everything except the absorbing all-healthy state 0).
  const int nt = n_states - 1;
  Eigen::MatrixXd qtt(nt, nt);
  Eigen::VectorXd q_abs(nt);
  for (int r = 0; r < nt; ++r) {
    for (int c = 0; c < nt; ++c) qtt(r, c) = q(r + 1, c + 1);
    q_abs(r) = q(r + 1, 0);
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(-qtt);
  const Eigen::VectorXd h = lu.solve(q_abs);
  const Eigen::VectorXd t = lu.solve(Eigen::VectorXd::Ones(nt));

  OracleResult res;
  res.extinction_prob = h(init_idx - 1);
  res.mean_extinction_time = t(init_idx - 1);
  return res;
}

}  // namespace acp::lattice
