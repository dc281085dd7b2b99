#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace acp::meanfield {

struct MFParams {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double gamma = 0.0;
  void validate() const;
};

// Densities of asymptomatic (u1) and symptomatic (u2) sites.
struct MFState {
  double u1 = 0.0;
  double u2 = 0.0;
};

struct FixedPointReport {
  std::optional<MFState> point;  // interior fixed point, if any
  std::array<double, 2> eigen_real_parts{};  // at the point, else at the origin
  bool stable = false;
};

struct SimplexViolation : std::runtime_error {
  double time;
  SimplexViolation(const std::string& msg, double t)
      : std::runtime_error(msg), time(t) {}
};

// u1' = (l1 u1 + l2 u2)(1 - u1 - u2) - (gamma + 1) u1,  u2' = gamma u1 - u2
std::pair<double, double> mf_derivative(const MFState& state,
                                        const MFParams& params);

// Fixed-step RK4 trajectory, (t, state) at every step including t = 0.
// States must stay in the simplex within 1e-9 or SimplexViolation is thrown.
std::vector<std::pair<double, MFState>> integrate(const MFState& start,
                                                  const MFParams& params,
                                                  double t_end, double dt);

// Epidemic criterion: lambda1 + gamma*lambda2 > 1 + gamma (strict).
bool threshold_check(const MFParams& params);

// Substitutes u2 = gamma*u1 and solves the reduced scalar equation on
// (0, 1/(1+gamma)) by bisection; reports the Jacobian eigenvalues there.
FixedPointReport interior_fixed_point(const MFParams& params, double tol);

// Real parts of the eigenvalues of the analytic Jacobian at `point`.
std::array<double, 2> jacobian_stability(const MFState& point,
                                         const MFParams& params);

}  // namespace acp::meanfield
