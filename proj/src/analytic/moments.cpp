#include <cmath>
#include <vector>

#include "internal.hpp"
#include "telegraph/analytic.hpp"

namespace telegraph::analytic {

namespace {

long double factorial(unsigned n) {
  long double f = 1.0L;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

long double gen_binom_ext(long double x, unsigned h) {
  long double p = 1.0L;
  for (unsigned i = 0; i < h; ++i) p *= (x - i) / (i + 1.0L);
  return p;
}

void require_order(unsigned n) {
  if (n < 1) throw DomainError("moment order must be >= 1");
  if (n > 150) throw DomainError("moment order above 150 overflows double");
}

// 2F1((h+1)/2, (h+2)/2; 2; 4 lambda mu/(lambda+mu)^2), slowly convergent
// when lambda and mu are close, so the term cap follows the geometric rate.
long double f21_moment(unsigned h, const ModelParams& p, const SeriesControl& ctrl) {
  const long double s = static_cast<long double>(p.lambda) + p.mu;
  const long double z = 4.0L * p.lambda * p.mu / (s * s);
  const long double rate = -std::log(z);
  const auto terms = static_cast<std::size_t>((46.0L + (h + 1.0L) * std::log(1.0L + 1.0L / (1.0L - z))) / rate + 200.0L);
  return specfun::hyper_2f1_ext((h + 1.0L) / 2.0L, (h + 2.0L) / 2.0L, 2.0L, z, detail::inner_ctrl(ctrl, terms));
}

// binom(j/2, h) 2F1(-h, -j/2; j/2+1-h; q2). For even j with j/2 < h <= j the
// 2F1 hits a zero Pochhammer denominator before terminating while the
// binomial vanishes; the coefficient is then summed from the convolution
// sum_k binom(j/2,k) binom(j/2,h-k) q2^k it was derived from.
long double coeff_k(unsigned j, unsigned h, long double q2, const SeriesControl& ctrl, MomentDiagnostics* diag) {
  const long double half = j / 2.0L;
  const bool even = j % 2 == 0;
  if (even && h > j) return 0.0L;
  if (even && 2 * h >= j + 2) {
    if (diag) ++diag->pole_substitutions;
    long double s = 0.0L;
    long double qk = 1.0L;
    for (unsigned k = 0; k <= h; ++k) {
      s += gen_binom_ext(half, k) * gen_binom_ext(half, h - k) * qk;
      qk *= q2;
    }
    return s;
  }
  const SeriesControl c = detail::inner_ctrl(ctrl, h + 8);
  return gen_binom_ext(half, h) * specfun::hyper_2f1_ext(-static_cast<long double>(h), -half, half + 1.0L - h, q2, c);
}

// J(h) = sum_j [-(lambda-mu) x/2]^j / j! * coeff_k(j, h).
long double j_series(unsigned h, const ModelParams& p, const SeriesControl& ctrl, MomentDiagnostics* diag) {
  const long double sl = std::sqrt(static_cast<long double>(p.lambda));
  const long double sm = std::sqrt(static_cast<long double>(p.mu));
  const long double q = (sl - sm) / (sl + sm);
  const long double q2 = q * q;
  const long double c = (static_cast<long double>(p.lambda) - p.mu) * p.x / 2.0L;
  if (c == 0.0L) return coeff_k(0, h, q2, ctrl, diag);
  const auto cap = std::max<std::size_t>(ctrl.max_terms, static_cast<std::size_t>(4.0L * c + 2.0L * h + 100.0L));
  const long double tol = std::max(static_cast<long double>(ctrl.rel_tol) * 1e-6L, 1e-20L);
  long double sum = 0.0L;
  long double pw = 1.0L;  // (-c)^j / j!
  std::size_t small = 0;
  for (unsigned j = 0;; ++j) {
    if (j >= cap) throw TruncationError("moment j-series did not converge", static_cast<double>(pw), j);
    const long double term = pw * coeff_k(j, h, q2, ctrl, diag);
    sum += term;
    if (diag) diag->j_terms = std::max<std::size_t>(diag->j_terms, j + 1);
    const bool past_peak = j > 2.0L * c + h;
    if (past_peak && std::fabs(term) <= tol * std::fabs(sum)) {
      if (++small >= ctrl.consecutive_small) break;
    } else {
      small = 0;
    }
    pw *= -c / (j + 1.0L);
  }
  return sum;
}

bool near_removable_singularity(const ModelParams& p) {
  return std::fabs(p.mu + p.lambda * (p.alpha - 1.0)) < 1e-3 * p.lambda;
}

}  // namespace

double moment_c0(unsigned n, const ModelParams& p, const SeriesControl& ctrl) {
  p.validate();
  ctrl.validate();
  require_order(n);
  const long double s = static_cast<long double>(p.lambda) + p.mu;
  const long double v = p.lambda * std::pow(2.0L, n) * factorial(n) / std::pow(s, n + 1.0L) * f21_moment(n, p, ctrl);
  return static_cast<double>(v);
}

double moment_a0(unsigned n, const ModelParams& p, const SeriesControl& ctrl, MomentDiagnostics* diag) {
  p.validate();
  ctrl.validate();
  require_order(n);
  if (p.alpha == 1.0) return moment_c0(n, p, ctrl);
  if (near_removable_singularity(p)) {
    if (diag) diag->used_taylor_recursion = true;
    return moments_by_recursion(n, p.with_x(0.0)).a0[n - 1];
  }
  const long double lam = p.lambda;
  const long double mu = p.mu;
  const long double al = p.alpha;
  const long double d = 4.0L * lam * al * (mu + lam * (al - 1.0L));
  const long double a = 8.0L * lam * (al - 1.0L);
  long double sum = (2.0L * mu + 2.0L * lam * (al - 1.0L)) * std::pow(a, n);
  for (unsigned h = 1; h <= n; ++h) {
    sum += std::pow(d, h) * std::pow(a, n - h) * lam * mu * std::pow(2.0L, h + 1.0L) / std::pow(lam + mu, h + 1.0L) *
           f21_moment(h, p, ctrl);
  }
  const long double v = 2.0L * al * lam * factorial(n) / std::pow(d, n + 1.0L) * sum;
  return static_cast<double>(v);
}

double moment_cx(unsigned n, const ModelParams& p, const SeriesControl& ctrl, MomentDiagnostics* diag) {
  p.validate();
  ctrl.validate();
  require_order(n);
  const long double lam = p.lambda;
  const long double mu = p.mu;
  const long double sl = std::sqrt(lam);
  const long double sm = std::sqrt(mu);
  const long double kappa = (sl - sm) * (sl - sm);
  long double sum = 0.0L;
  for (unsigned h = 0; h <= n; ++h) {
    const long double j = j_series(h, p, ctrl, diag);
    if (j == 0.0L) continue;
    sum += std::pow(-(lam + mu) / kappa, h) * f21_moment(n - h, p, ctrl) * j;
  }
  const long double pre =
      factorial(n) * lam / (lam + mu) * std::exp(p.x / 2.0L * (lam - mu)) * std::pow(2.0L / (lam + mu), n);
  return static_cast<double>(detail::checked(pre * sum, "moment_cx"));
}

double moment_ax(unsigned n, const ModelParams& p, const SeriesControl& ctrl, MomentDiagnostics* diag) {
  p.validate();
  ctrl.validate();
  require_order(n);
  if (p.alpha == 1.0) return moment_cx(n, p, ctrl, diag);
  if (near_removable_singularity(p)) {
    if (diag) diag->used_taylor_recursion = true;
    return moments_by_recursion(n, p).ax[n - 1];
  }
  const long double lam = p.lambda;
  const long double mu = p.mu;
  const long double al = p.alpha;
  const long double sl = std::sqrt(lam);
  const long double sm = std::sqrt(mu);
  const long double kappa = (sl - sm) * (sl - sm);
  const long double d = 4.0L * lam * al * (mu + lam * (al - 1.0L));
  const long double a = 8.0L * lam * (al - 1.0L);
  const long double rho = (al * mu + al * lam * (al - 1.0L)) / ((al - 1.0L) * (lam + mu));
  long double sum = 0.0L;
  for (unsigned h = 0; h <= n; ++h) {
    const long double j = j_series(h, p, ctrl, diag);
    if (j == 0.0L) continue;
    long double inner = 0.0L;
    for (unsigned m = 1; m <= n - h; ++m) inner += std::pow(rho, m) * f21_moment(m, p, ctrl);
    const long double bracket = 2.0L * mu + 2.0L * lam * (al - 1.0L) + 2.0L * lam * mu / (lam + mu) * inner;
    sum += std::pow(-2.0L / kappa, h) * std::pow(a, n - h) / std::pow(d, n - h + 1.0L) * bracket * j;
  }
  const long double pre = factorial(n) * 2.0L * al * lam * std::exp(p.x / 2.0L * (lam - mu));
  return static_cast<double>(detail::checked(pre * sum, "moment_ax"));
}

MomentTable moments_by_recursion(unsigned n_max, const ModelParams& p) {
  p.validate();
  if (n_max > 150) throw DomainError("moments_by_recursion: n_max above 150");
  const long double lam = p.lambda;
  const long double mu = p.mu;
  const long double al = p.alpha;
  const std::size_t n1 = n_max + 1;

  // Taylor coefficients of M_C0: mu M^2 - (lambda+mu-2s) M + lambda = 0.
  std::vector<long double> c(n1, 0.0L);
  c[0] = 1.0L;
  for (std::size_t n = 1; n < n1; ++n) {
    long double conv = 0.0L;
    for (std::size_t k = 1; k < n; ++k) conv += c[k] * c[n - k];
    c[n] = (2.0L * c[n - 1] + mu * conv) / (lam - mu);
  }
  // M_A0 = alpha M_C0 / (1 - (1-alpha) M_C0).
  std::vector<long double> g(n1, 0.0L);
  g[0] = 1.0L;
  for (std::size_t n = 1; n < n1; ++n) {
    long double conv = 0.0L;
    for (std::size_t k = 1; k <= n; ++k) conv += c[k] * g[n - k];
    g[n] = c[n] + (1.0L - al) / al * conv;
  }
  // R(s) = sqrt(rho(s)), rho = (lambda-mu)^2 - 4(lambda+mu)s + 4s^2.
  std::vector<long double> rho(n1, 0.0L);
  rho[0] = (lam - mu) * (lam - mu);
  if (n1 > 1) rho[1] = -4.0L * (lam + mu);
  if (n1 > 2) rho[2] = 4.0L;
  std::vector<long double> r(n1, 0.0L);
  r[0] = lam - mu;
  for (std::size_t n = 1; n < n1; ++n) {
    long double conv = 0.0L;
    for (std::size_t k = 1; k < n; ++k) conv += r[k] * r[n - k];
    r[n] = (rho[n] - conv) / (2.0L * r[0]);
  }
  // E(s) = exp(f), f = (x/2)(lambda - mu - R).
  std::vector<long double> f(n1, 0.0L);
  for (std::size_t n = 1; n < n1; ++n) f[n] = -0.5L * p.x * r[n];
  std::vector<long double> e(n1, 0.0L);
  e[0] = 1.0L;
  for (std::size_t n = 1; n < n1; ++n) {
    long double acc = 0.0L;
    for (std::size_t k = 1; k <= n; ++k) acc += k * f[k] * e[n - k];
    e[n] = acc / n;
  }

  MomentTable t;
  long double fact = 1.0L;
  for (std::size_t n = 1; n < n1; ++n) {
    fact *= n;
    long double cx = 0.0L;
    long double ax = 0.0L;
    for (std::size_t h = 0; h <= n; ++h) {
      cx += c[n - h] * e[h];
      ax += g[n - h] * e[h];
    }
    t.c0.push_back(static_cast<double>(fact * c[n]));
    t.a0.push_back(static_cast<double>(fact * g[n]));
    t.cx.push_back(static_cast<double>(fact * cx));
    t.ax.push_back(static_cast<double>(fact * ax));
  }
  return t;
}

MeanVar closed_mean_var(const ModelParams& p) {
  p.validate();
  const double l = p.lambda;
  const double m = p.mu;
  const double a = p.alpha;
  const double x = p.x;
  const double d = l - m;
  const double d3 = d * d * d;
  MeanVar r{};
  r.E_Cx = (2.0 + (l + m) * x) / d;
  r.Var_Cx = (4.0 * (l + m) + 8.0 * l * m * x) / d3;
  r.E_Ax = (2.0 + a * (l + m) * x) / (a * d);
  r.Var_Ax = 4.0 * (l + m * (2.0 * a - 1.0)) / (a * a * d3) + 8.0 * l * m * x / d3;
  return r;
}

}  // namespace telegraph::analytic
