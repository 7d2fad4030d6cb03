#include <algorithm>
#include <cmath>
#include <vector>

#include "telegraph/errors.hpp"
#include "telegraph/kernels.hpp"
#include "telegraph/numeric.hpp"

namespace telegraph::numeric {

double cdf_derivative(const std::function<double(double)>& cdf, double x, double h, double lo, double hi) {
  if (!(h > 0.0)) throw DomainError("cdf_derivative: step must be positive");
  if (x < lo || x > hi) throw DomainError("cdf_derivative: x outside [lo, hi]");
  const double room = std::min(x - lo, hi - x);
  if (room >= 1e-3 * h) {
    const double step = std::min(h, room);
    auto central = [&](double s) { return (cdf(x + s) - cdf(x - s)) / (2.0 * s); };
    return (4.0 * central(0.5 * step) - central(step)) / 3.0;
  }
  // At (or numerically at) an endpoint: second-order one-sided formula,
  // pointing into the interval, plus one Richardson step.
  const double dir = (x - lo <= hi - x) ? 1.0 : -1.0;
  const double step = std::min(h, 0.5 * (hi - lo)) / 2.0;
  const double f0 = cdf(x);
  auto one_sided = [&](double s) {
    return dir * (-3.0 * f0 + 4.0 * cdf(x + dir * s) - cdf(x + 2.0 * dir * s)) / (2.0 * s);
  };
  return (4.0 * one_sided(0.5 * step) - one_sided(step)) / 3.0;
}

double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw DomainError("ks_statistic: empty sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> f(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) f[i] = cdf(sorted[i]);
  return kernels::ks_sup(f);
}

double ks_pvalue(double d, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double lam = (sn + 0.12 + 0.11 / sn) * d;
  if (lam < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lam * lam);
    sum += (k % 2 == 1 ? 1.0 : -1.0) * term;
    if (term < 1e-16 * sum) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_critical_1pct(std::size_t n) { return 1.63 / std::sqrt(static_cast<double>(n)); }

SampleSummary summarize(std::span<const double> v) {
  SampleSummary s;
  s.n = v.size();
  if (v.empty()) return s;
  const double n = static_cast<double>(v.size());
  s.mean = kernels::sum(v) / n;
  if (v.size() > 1) {
    const double ss = kernels::sum_sq_dev(v, s.mean);
    s.variance = ss / (n - 1.0);
    s.std_error = std::sqrt(s.variance / n);
    double cov = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) cov += (v[i] - s.mean) * (v[i - 1] - s.mean);
    s.lag1_autocorrelation = ss > 0.0 ? cov / ss : 0.0;
  }
  return s;
}

double chi_square(std::span<const std::size_t> observed, std::span<const double> expected_prob,
                  std::size_t total) {
  if (observed.size() != expected_prob.size()) throw DomainError("chi_square: size mismatch");
  double x2 = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = expected_prob[i] * static_cast<double>(total);
    if (!(e > 0.0)) throw DomainError("chi_square: expected count must be positive");
    const double d = static_cast<double>(observed[i]) - e;
    x2 += d * d / e;
  }
  return x2;
}

}  // namespace telegraph::numeric
