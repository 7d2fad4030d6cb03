#include <cmath>

#include "internal.hpp"
#include "telegraph/analytic.hpp"

namespace telegraph::analytic {

namespace {

// 1F2((m-1)/2; (m+1)/2, c; z) for z >= 0; all terms positive.
long double f12_a(unsigned m, long double c, long double z, const SeriesControl& ctrl) {
  const long double a = (static_cast<long double>(m) - 1.0L) / 2.0L;
  const long double b = (static_cast<long double>(m) + 1.0L) / 2.0L;
  const auto terms = static_cast<std::size_t>(4.0L * std::sqrt(z) + 200.0L);
  return specfun::hyper_1f2_ext(a, b, c, z, detail::inner_ctrl(ctrl, terms));
}

}  // namespace

double pdf_a0(double y, const ModelParams& p, const SeriesControl& ctrl) {
  p.validate();
  ctrl.validate();
  if (!(y > 0.0) || !std::isfinite(y)) throw DomainError("pdf_a0: y must be positive");
  if (p.alpha == 1.0) return pdf_c0(y, p, ctrl);

  const long double lam = p.lambda;
  const long double mu = p.mu;
  const long double Y = y;
  const long double beta = 1.0L - p.alpha;
  const long double Z = Y * std::sqrt(lam * mu);
  const long double z4 = lam * mu * Y * Y / 4.0L;
  const long double half_ly = lam * Y / 2.0L;

  // The exponential factor is kept inside the sum through the scaled Bessel
  // function so the leading term stays O(1) for large y.
  const long double head = std::sqrt(lam / mu) * detail::scaled_bessel_ext(1, Z, ctrl);
  const long double scale = std::exp(-Z);

  const long double tol = std::max(static_cast<long double>(ctrl.rel_tol) * 1e-4L, 1e-20L);
  const auto cap = std::max<std::size_t>(ctrl.max_terms, static_cast<std::size_t>(2.0L * Z + 200.0L));
  long double sum = 0.0L;
  long double pref = half_ly * half_ly * beta * scale;  // m = 2: (ly/2)^2 (1-a) / (1 * 1!)
  long double prev = 0.0L;
  std::size_t small = 0;
  unsigned m = 2;
  for (;; ++m) {
    if (m > cap) throw TruncationError("pdf_a0: m-series did not converge", static_cast<double>(prev), m);
    const long double ml = m;
    const long double bracket = 2.0L * ml * f12_a(m, ml, z4, ctrl) - (ml + 1.0L) * f12_a(m, ml + 1.0L, z4, ctrl);
    const long double term = pref * bracket;
    sum += term;
    const bool growing = std::fabs(term) > std::fabs(prev);
    prev = term;
    if (!growing && std::fabs(term) <= tol * (head + std::fabs(sum))) {
      if (++small >= ctrl.consecutive_small) break;
    } else {
      small = 0;
    }
    if (term == 0.0L) break;
    // (ly/2)^{m+1} b^m / (m (m!)) over (ly/2)^m b^{m-1} / ((m-1)(m-1)!)
    pref *= half_ly * beta * (ml - 1.0L) / (ml * ml);
  }

  const long double v = static_cast<long double>(p.alpha) * std::exp(Z - (lam + mu) * Y / 2.0L) / Y * (head + sum);
  return static_cast<double>(detail::checked(v, "pdf_a0"));
}

}  // namespace telegraph::analytic
