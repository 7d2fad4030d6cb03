#include <cmath>

#include "internal.hpp"
#include "telegraph/analytic.hpp"
#include "telegraph/numeric.hpp"

namespace telegraph::analytic {

// psi_x(t) = lambda e^{Z-L} [ e^{-Z} I_0(Z) + (1/2) sum_r w_r E_r ] with
//   Z = 2 sqrt(lambda mu t (t+x)),  L = (lambda+mu) t + mu x,
//   w_r = e^{-Z} (Z/2)^{2r} / (r! (r+1)!),
//   E_r = sum_j Binom(r, t/(t+x))(j) (j+r+1) [F_{r+j} - 1],
// which regroups the double series so both sums run over normalized
// weights summed outward from their modes.
double psi_x_series(double t, const ModelParams& p, const SeriesControl& ctrl) {
  p.validate();
  ctrl.validate();
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("psi_x_series: t must be positive");
  if (!(p.x > 0.0)) throw DomainError("psi_x_series: requires x > 0 (use psi0)");
  const long double lam = p.lambda;
  const long double mu = p.mu;
  const long double T = t;
  const long double X = p.x;
  const long double Z = 2.0L * std::sqrt(lam * mu * T * (T + X));
  const long double L = (lam + mu) * T + mu * X;
  const long double h2 = 0.25L * Z * Z;
  const long double log_p = std::log(T) - std::log(T + X);
  const long double log_q = std::log(X) - std::log(T + X);
  const long double odds = T / X;

  const long double i0 = detail::scaled_bessel_ext(0, Z, ctrl);
  detail::OneF2Family fam(lam * mu * T * T, ctrl);

  auto inner = [&](std::size_t r) {
    const long double rl = static_cast<long double>(r);
    std::size_t jm = static_cast<std::size_t>(std::floor((rl + 1.0L) * std::exp(log_p)));
    if (jm > r) jm = r;
    const long double jl = static_cast<long double>(jm);
    const long double log_b = std::lgamma(rl + 1.0L) - std::lgamma(jl + 1.0L) - std::lgamma(rl - jl + 1.0L) +
                              jl * log_p + (rl - jl) * log_q;
    long double e = 0.0L;
    detail::walk_from_mode(
        jm, std::exp(log_b),
        [&](std::size_t j) {
          return static_cast<long double>(r - j) / static_cast<long double>(j + 1) * odds;
        },
        [&](std::size_t j, long double b, long double tol) {
          const long double term = b * static_cast<long double>(j + r + 1) * fam.minus_one(r + j);
          e += term;
          return std::fabs(term) <= tol * std::fabs(e);
        },
        1e-21L, ctrl, r + 1, "psi_x_series inner sum");
    return e;
  };

  std::size_t mode = 0;
  if (h2 > 2.0L) {
    const long double r = std::floor((-3.0L + std::sqrt(1.0L + 4.0L * h2)) / 2.0L);
    mode = r > 0.0L ? static_cast<std::size_t>(r) : 0;
  }
  const long double ml = static_cast<long double>(mode);
  const long double log_w = -Z + 2.0L * ml * std::log(0.5L * Z) - std::lgamma(ml + 1.0L) - std::lgamma(ml + 2.0L);
  const long double tol = std::max(static_cast<long double>(ctrl.rel_tol) * 1e-6L, 1e-20L);
  const auto span = std::max<std::size_t>(ctrl.max_terms, static_cast<std::size_t>(40.0L * std::sqrt(Z + 1.0L) + 100.0L));

  long double s = 0.0L;
  detail::walk_from_mode(
      mode, std::exp(log_w), [&](std::size_t r) { return h2 / ((r + 1.0L) * (r + 2.0L)); },
      [&](std::size_t r, long double w, long double tl) {
        const long double term = w * inner(r);
        s += term;
        return std::fabs(term) <= tl * std::max(i0, std::fabs(s));
      },
      tol, ctrl, mode + span, "psi_x_series");

  const long double v = lam * std::exp(Z - L) * (i0 + 0.5L * s);
  return static_cast<double>(detail::checked(v, "psi_x_series"));
}

double psi_x(double t, const ModelParams& p, const SeriesControl& ctrl) {
  p.validate();
  return p.x == 0.0 ? psi0(t, p, ctrl) : psi_x_series(t, p, ctrl);
}

double psi_x_integral(double t, const ModelParams& p, double rel_tol) {
  p.validate();
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("psi_x_integral: t must be positive");
  const double x = p.x;
  const double lam = p.lambda;
  const double mu = p.mu;
  numeric::QuadOptions o;
  o.rel_tol = rel_tol;
  o.abs_tol = 1e-300;
  const double atom = lam * std::exp(-lam * t - mu * (t + x));
  double integral = 0.0;
  if (x == 0.0) {
    integral = numeric::integrate([&](double y) { return g0_subdensity(y, t, p) * std::exp(-mu * (t - y)); },
                                  0.0, t, o)
                   .value;
  } else {
    auto f = [&](double y) { return gx_subdensity(y, t, p) * std::exp(-mu * (t + x - y)); };
    integral = numeric::integrate(f, 0.0, x, o).value + numeric::integrate(f, x, x + t, o).value;
  }
  return atom + lam * integral;
}

}  // namespace telegraph::analytic
