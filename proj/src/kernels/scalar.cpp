#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "common.hpp"
#include "telegraph/kernels.hpp"

namespace telegraph::kernels::scalar {

namespace {

double scaled_series(unsigned n, double z) {
  const auto& inv = detail::series_table().inv[n];
  const double h = 0.5 * z;
  const double q = h * h;
  double term = n == 0 ? 1.0 : h;
  double s = term;
  double c = 0.0;
  for (int k = 1; k <= detail::kSeriesTerms; ++k) {
    term *= q * inv[k];
    const double y = term - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s * std::exp(-z);
}

double scaled_hankel(unsigned n, double z) {
  const auto& coef = detail::hankel_table().coef[n];
  const double rz = 1.0 / z;
  double term = 1.0;
  double s = 1.0;
  for (int k = 1; k <= detail::kHankelTerms; ++k) {
    term *= coef[k] * rz;
    s += term;
  }
  return s * detail::kInvSqrt2Pi / std::sqrt(z);
}

}  // namespace

void bessel_i_scaled(unsigned n, std::span<const double> z, std::span<double> out) {
  if (n > 1) throw std::invalid_argument("kernels::bessel_i_scaled: order must be 0 or 1");
  if (out.size() < z.size()) throw std::invalid_argument("kernels::bessel_i_scaled: output too short");
  for (std::size_t i = 0; i < z.size(); ++i) {
    out[i] = z[i] < detail::kHankelThreshold ? scaled_series(n, z[i]) : scaled_hankel(n, z[i]);
  }
}

double ks_sup(std::span<const double> f) {
  const double n = static_cast<double>(f.size());
  double d = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::max(f[i] - lo, hi - f[i]));
  }
  return d;
}

double sum(std::span<const double> v) {
  double s = 0.0;
  double c = 0.0;
  for (double x : v) {
    const double t = s + x;
    c += std::fabs(s) >= std::fabs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  return s + c;
}

double sum_sq_dev(std::span<const double> v, double center) {
  double s = 0.0;
  double c = 0.0;
  for (double x : v) {
    const double d = (x - center) * (x - center);
    const double t = s + d;
    c += s >= d ? (s - t) + d : (d - t) + s;
    s = t;
  }
  return s + c;
}

}  // namespace telegraph::kernels::scalar
