#include <cmath>
#include <string>
#include <vector>

#include "internal.hpp"
#include "telegraph/analytic.hpp"
#include "telegraph/kernels.hpp"
#include "telegraph/numeric.hpp"

namespace telegraph::analytic {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be a positive finite number");
}

}  // namespace

double geometric_pmf(unsigned m, const ModelParams& p) {
  p.validate();
  if (m < 1) throw DomainError("geometric_pmf: m must be >= 1");
  if (p.alpha == 1.0) return m == 1 ? 1.0 : 0.0;
  return p.alpha * std::pow(1.0 - p.alpha, static_cast<double>(m - 1));
}

double h_density(double y, double t, const ModelParams& p, const SeriesControl& ctrl) {
  p.validate();
  require_positive(y, "h_density: y");
  require_positive(t, "h_density: t");
  const double lm = p.lambda * p.mu;
  const long double z = 2.0L * std::sqrt(static_cast<long double>(lm) * t * y);
  const long double i1 = detail::scaled_bessel_ext(1, z, ctrl);
  const long double v = std::sqrt(static_cast<long double>(lm) * t / y) * i1 *
                        std::exp(z - static_cast<long double>(p.lambda) * t - static_cast<long double>(p.mu) * y);
  return static_cast<double>(v);
}

double g0_subdensity(double y, double t, const ModelParams& p, const SeriesControl& ctrl) {
  require_positive(t, "g0_subdensity: t");
  if (!(y > 0.0 && y < t)) throw DomainError("g0_subdensity: require 0 < y < t");
  return (t - y) / t * h_density(y, t, p, ctrl);
}

double gx_subdensity(double y, double t, const ModelParams& p, const SeriesControl& ctrl) {
  p.validate();
  require_positive(t, "gx_subdensity: t");
  const double x = p.x;
  if (!(x > 0.0)) throw DomainError("gx_subdensity: requires x > 0 (use g0_subdensity)");
  if (!(y > 0.0 && y < x + t)) throw DomainError("gx_subdensity: require 0 < y < x + t");
  const double hy = h_density(y, t, p, ctrl);
  if (y <= x) return hy;
  const double s = t - y + x;  // in (0, t)
  const double lower = t + x - y;
  numeric::QuadOptions o;
  o.rel_tol = 1e-12;
  o.abs_tol = 1e-300;
  const auto inner = numeric::integrate(
      [&](double u) {
        return h_density(u - t + y - x, u, p, ctrl) * h_density(t - u + x, t - u, p, ctrl) / u;
      },
      lower, t, o);
  return hy - h_density(y, y - x, p, ctrl) * std::exp(-p.lambda * s) - s * inner.value;
}

double psi0(double t, const ModelParams& p, const SeriesControl& ctrl) {
  p.validate();
  require_positive(t, "psi0: t");
  const long double r = std::sqrt(static_cast<long double>(p.lambda) * p.mu);
  const long double z = 2.0L * t * r;
  const long double i1 = detail::scaled_bessel_ext(1, z, ctrl);
  const long double v = p.lambda / (t * r) * i1 * std::exp(z - (static_cast<long double>(p.lambda) + p.mu) * t);
  return static_cast<double>(v);
}

void psi0_batch(std::span<const double> t, std::span<double> out, const ModelParams& p) {
  p.validate();
  if (out.size() < t.size()) throw DomainError("psi0_batch: output too short");
  const double r = std::sqrt(p.lambda * p.mu);
  std::vector<double> z(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    require_positive(t[i], "psi0_batch: t");
    z[i] = 2.0 * t[i] * r;
  }
  kernels::bessel_i_scaled(1, z, out);
  for (std::size_t i = 0; i < t.size(); ++i) {
    out[i] *= p.lambda / (t[i] * r) * std::exp(z[i] - (p.lambda + p.mu) * t[i]);
  }
}

double pdf_c0(double y, const ModelParams& p, const SeriesControl& ctrl) {
  require_positive(y, "pdf_c0: y");
  return 0.5 * psi0(0.5 * y, p, ctrl);
}

void pdf_c0_batch(std::span<const double> y, std::span<double> out, const ModelParams& p) {
  if (out.size() < y.size()) throw DomainError("pdf_c0_batch: output too short");
  std::vector<double> half(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) half[i] = 0.5 * y[i];
  psi0_batch(half, out, p);
  for (std::size_t i = 0; i < y.size(); ++i) out[i] *= 0.5;
}

double pdf_cx(double y, const ModelParams& p, const SeriesControl& ctrl) {
  p.validate();
  if (!std::isfinite(y)) throw DomainError("pdf_cx: y must be finite");
  if (p.x == 0.0) return y > 0.0 ? pdf_c0(y, p, ctrl) : 0.0;
  if (y <= p.x) return 0.0;
  return 0.5 * psi_x_series(0.5 * (y - p.x), p, ctrl);
}

double decay_rate_t(const ModelParams& p) { return MgfDomain::of(p).bound_t; }

double decay_rate_c(const ModelParams& p) { return MgfDomain::of(p).bound_c; }

double decay_rate_a0(const ModelParams& p) {
  const double bound = MgfDomain::of(p).bound_c;
  if (p.alpha == 1.0) return bound;
  const double b = 1.0 - p.alpha;
  if (b * b < p.mu / p.lambda) return bound;
  // Pole of M_A0 inside the branch-point bound.
  const double u = p.lambda * b + p.mu / b;
  return std::min(bound, 0.5 * (p.lambda + p.mu - u));
}

}  // namespace telegraph::analytic
