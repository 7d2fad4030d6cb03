#include <cmath>
#include <string>

#include "telegraph/analytic.hpp"
#include "telegraph/errors.hpp"

namespace telegraph::analytic {

namespace {

void require_below(double s, double bound, const char* what) {
  if (!std::isfinite(s) || !(s < bound)) {
    throw DomainError(std::string(what) + ": s = " + std::to_string(s) +
                      " is not below the abscissa of convergence " + std::to_string(bound));
  }
}

// sqrt((lambda+mu-2s)^2 - 4 lambda mu), real for s below bound_c.
double root_c(double s, const ModelParams& p) {
  const double a = p.lambda + p.mu - 2.0 * s;
  return std::sqrt((a - 2.0 * std::sqrt(p.lambda * p.mu)) * (a + 2.0 * std::sqrt(p.lambda * p.mu)));
}

// Abscissa for A-type transforms: the branch point, or the pole of the
// geometric sum when it comes first.
double bound_a(const ModelParams& p) { return decay_rate_a0(p); }

}  // namespace

double mgf_c0(double s, const ModelParams& p) {
  require_below(s, MgfDomain::of(p).bound_c, "mgf_c0");
  // [(a - R)/(2 mu)] rationalized to avoid cancellation.
  return 2.0 * p.lambda / (p.lambda + p.mu - 2.0 * s + root_c(s, p));
}

double mgf_a0(double s, const ModelParams& p) {
  if (p.alpha == 1.0) return mgf_c0(s, p);
  require_below(s, bound_a(p), "mgf_a0");
  return 2.0 * p.alpha * p.lambda /
         (2.0 * p.lambda * (p.alpha - 1.0) + (p.lambda + p.mu - 2.0 * s) + root_c(s, p));
}

double mgf_exp_factor(double s, const ModelParams& p) {
  require_below(s, MgfDomain::of(p).bound_c, "mgf_exp_factor");
  return std::exp(0.5 * p.x * (p.lambda - p.mu - root_c(s, p)));
}

double mgf_tx(double s, const ModelParams& p) {
  require_below(s, MgfDomain::of(p).bound_t, "mgf_tx");
  const double a = p.lambda + p.mu - s;
  const double g = 2.0 * std::sqrt(p.lambda * p.mu);
  const double r = std::sqrt((a - g) * (a + g));
  return 2.0 * p.lambda / (a + r) * std::exp(0.5 * p.x * (p.lambda - p.mu - s - r));
}

double mgf_cx(double s, const ModelParams& p) { return mgf_c0(s, p) * mgf_exp_factor(s, p); }

double mgf_ax(double s, const ModelParams& p) {
  if (p.alpha == 1.0) return mgf_cx(s, p);
  require_below(s, bound_a(p), "mgf_ax");
  return 2.0 * p.alpha * p.lambda * mgf_exp_factor(s, p) /
         (2.0 * p.lambda * (p.alpha - 1.0) + (p.lambda + p.mu - 2.0 * s) + root_c(s, p));
}

}  // namespace telegraph::analytic
