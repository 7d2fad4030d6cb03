#include <cmath>

#include "internal.hpp"
#include "telegraph/analytic.hpp"

namespace telegraph::analytic::printed {

double pdf_c0_with_lambda(double y, const ModelParams& p) {
  p.validate();
  if (!(y > 0.0) || !std::isfinite(y)) throw DomainError("pdf_c0_with_lambda: y must be positive");
  const long double r = std::sqrt(static_cast<long double>(p.lambda) * p.mu);
  const long double z = y * r;
  const long double i1 = detail::scaled_bessel_ext(1, z, {});
  const long double v = std::sqrt(static_cast<long double>(p.lambda) / p.mu) * p.lambda / y * i1 *
                        std::exp(z - (static_cast<long double>(p.lambda) + p.mu) * y / 2.0L);
  return static_cast<double>(v);
}

double var_cx(const ModelParams& p) {
  p.validate();
  const double l = p.lambda;
  const double m = p.mu;
  const double x = p.x;
  const double d = l - m;
  return 4.0 * m / (d * d * d) - 2.0 * (l * l - m * m - 2.0 * l * m) * x / (d * d * d) -
         (l + m) * (l + m) * x * x / (2.0 * d * d);
}

double var_ax(const ModelParams& p) {
  p.validate();
  const double l = p.lambda;
  const double m = p.mu;
  const double a = p.alpha;
  const double x = p.x;
  const double d = l - m;
  return 4.0 * m / (a * d * d * d) - 2.0 * (l * l - m * m - 2.0 * a * l * m) * x / (a * d * d * d) -
         (l + m) * (l + m) * x * x / (2.0 * d * d);
}

double moment_cx(unsigned n, const ModelParams& p) {
  double f = 1.0;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return analytic::moment_cx(n, p) / f;
}

}  // namespace telegraph::analytic::printed
