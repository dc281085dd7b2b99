#include "acp/meanfield.hpp"

#include <cmath>
#include <string>

namespace acp::meanfield {

namespace {
constexpr double kSimplexTol = 1e-9;

bool in_simplex(const MFState& s, double tol) {
  return s.u1 >= -tol && s.u2 >= -tol && s.u1 + s.u2 <= 1.0 + tol;
}

MFState rk4_step(const MFState& s, const MFParams& p, double dt) {
  auto f = [&](const MFState& x) { return mf_derivative(x, p); };
  const auto k1 = f(s);
  const auto k2 = f({s.u1 + 0.5 * dt * k1.first, s.u2 + 0.5 * dt * k1.second});
  const auto k3 = f({s.u1 + 0.5 * dt * k2.first, s.u2 + 0.5 * dt * k2.second});
  const auto k4 = f({s.u1 + dt * k3.first, s.u2 + dt * k3.second});
  return {s.u1 + dt / 6.0 * (k1.first + 2 * k2.first + 2 * k3.first + k4.first),
          s.u2 + dt / 6.0 *
                     (k1.second + 2 * k2.second + 2 * k3.second + k4.second)};
}
}  // namespace

void MFParams::validate() const {
  if (!(lambda1 >= 0.0)) throw std::invalid_argument("lambda1 must be >= 0");
  if (!(lambda2 >= 0.0) || std::isinf(lambda2))
    throw std::invalid_argument("lambda2 must be finite and >= 0");
  if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be >= 0");
}

std::pair<double, double> mf_derivative(const MFState& s,
                                        const MFParams& p) {
  const double infected = p.lambda1 * s.u1 + p.lambda2 * s.u2;
  const double u1p = infected * (1.0 - s.u1 - s.u2) - (p.gamma + 1.0) * s.u1;
  const double u2p = p.gamma * s.u1 - s.u2;
  return {u1p, u2p};
}

std::vector<std::pair<double, MFState>> integrate(const MFState& start,
                                                  const MFParams& params,
                                                  double t_end, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (!in_simplex(start, kSimplexTol))
    throw SimplexViolation("integrate: start outside the simplex", 0.0);

  std::vector<std::pair<double, MFState>> out;
  out.reserve(static_cast<std::size_t>(t_end / dt) + 2);
  MFState s = start;
  double t = 0.0;
  out.emplace_back(t, s);
  while (t < t_end - 0.5 * dt) {
    s = rk4_step(s, params, dt);
    t += dt;
    if (!in_simplex(s, kSimplexTol))
      throw SimplexViolation(
          "integrate: simplex violated at t = " + std::to_string(t), t);
    out.emplace_back(t, s);
  }
  return out;
}

bool threshold_check(const MFParams& params) {
  return params.lambda1 + params.gamma * params.lambda2 >
         1.0 + params.gamma;
}

std::array<double, 2> jacobian_stability(const MFState& s,
                                         const MFParams& p) {
  const double infected = p.lambda1 * s.u1 + p.lambda2 * s.u2;
  const double rem = 1.0 - s.u1 - s.u2;
  const double a = p.lambda1 * rem - infected - (p.gamma + 1.0);
  const double b = p.lambda2 * rem - infected;
  const double c = p.gamma;
  const double d = -1.0;
  const double tr = a + d;
  const double det = a * d - b * c;
  const double disc = tr * tr - 4.0 * det;
  if (disc >= 0.0) {
    const double root = std::sqrt(disc);
    return {0.5 * (tr - root), 0.5 * (tr + root)};
  }
  return {0.5 * tr, 0.5 * tr};
}

FixedPointReport interior_fixed_point(const MFParams& params, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
  FixedPointReport rep;

  // With u2 = gamma*u1, u1' = 0 reduces to g(u) = 0 on (0, 1/(1+gamma)):
  // g(u) = (l1 + gamma*l2)(1 - (1+gamma)u) - (gamma+1).
  const double force = params.lambda1 + params.gamma * params.lambda2;
  const double g0 = force - (params.gamma + 1.0);
  if (g0 > 0.0) {
    double lo = 0.0, hi = 1.0 / (1.0 + params.gamma);
    // g(hi) = -(gamma+1) < 0, bracketing is guaranteed.
    while (hi - lo > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      const double g =
          force * (1.0 - (1.0 + params.gamma) * mid) - (params.gamma + 1.0);
      if (g > 0.0)
        lo = mid;
      else
        hi = mid;
    }
    const double u1 = 0.5 * (lo + hi);
    rep.point = MFState{u1, params.gamma * u1};
    rep.eigen_real_parts = jacobian_stability(*rep.point, params);
  } else {
    rep.eigen_real_parts = jacobian_stability(MFState{0.0, 0.0}, params);
  }
  rep.stable =
      rep.eigen_real_parts[0] < 0.0 && rep.eigen_real_parts[1] < 0.0;
  return rep;
}

}  // namespace acp::meanfield
