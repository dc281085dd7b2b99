#include "acp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace acp::stats {

namespace {
constexpr double kZ95 = 1.959963984540054;

double survival(const std::vector<double>& sorted, double k) {
  const auto it = std::upper_bound(sorted.begin(), sorted.end(), k);
  return static_cast<double>(sorted.end() - it) /
         static_cast<double>(sorted.size());
}
}  // namespace

TailEstimate tail_estimate(std::span<const double> samples, double k) {
  if (samples.empty()) throw std::invalid_argument("samples must be nonempty");
  const double n = static_cast<double>(samples.size());
  std::size_t over = 0;
  for (double x : samples)
    if (x > k) ++over;
  const double p = static_cast<double>(over) / n;

  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  TailEstimate est;
  est.k = k;
  est.p_hat = p;
  est.ci_low = std::max(0.0, center - half);
  est.ci_high = std::min(1.0, center + half);
  est.n = samples.size();
  return est;
}

DecayFit fit_decay_slope(std::span<const std::pair<double, double>> points) {
  std::vector<std::pair<double, double>> logs;
  for (const auto& [k, p] : points)
    if (p > 0.0) logs.emplace_back(k, std::log(p));
  if (logs.size() < 3)
    throw std::invalid_argument(
        "fit_decay_slope: need at least 3 points with p_hat > 0");

  const double n = static_cast<double>(logs.size());
  double sx = 0, sy = 0;
  for (const auto& [x, y] : logs) {
    sx += x;
    sy += y;
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [x, y] : logs) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  DecayFit fit;
  if (sxx == 0.0)
    throw std::invalid_argument("fit_decay_slope: degenerate k values");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = (syy == 0.0) ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

DominanceReport dominance_check(std::span<const double> a,
                                std::span<const double> b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("dominance_check: empty input");
  std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  const double max_k = std::max(sa.back(), sb.back());

  DominanceReport rep;
  rep.holds = true;
  rep.max_violation = -1.0;
  for (double k = 0.0; k <= max_k; k += 1.0) {
    const double pa = survival(sa, k);
    const double pb = survival(sb, k);
    const double se =
        std::sqrt(pa * (1.0 - pa) / na + pb * (1.0 - pb) / nb);
    const double exceedance = pa - pb - 2.0 * se;
    rep.max_violation = std::max(rep.max_violation, exceedance);
    if (exceedance > 0.0) rep.holds = false;
  }
  return rep;
}

}  // namespace acp::stats
