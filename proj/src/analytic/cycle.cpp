#include <cmath>
#include <functional>
#include <vector>

#include "internal.hpp"
#include "telegraph/analytic.hpp"
#include "telegraph/numeric.hpp"

namespace telegraph::analytic {

namespace {

void check_cycle_args(double y, double tau, double t, const char* what) {
  if (!(t > 0.0) || !std::isfinite(t) || !std::isfinite(tau) || !(tau > t)) {
    throw DomainError(std::string(what) + ": requires 0 < t < tau");
  }
  if (!(y >= 0.0) || !(y <= t)) throw DomainError(std::string(what) + ": requires 0 <= y <= t");
}

// e^{-lambda t} psi_t(tau - t): no downward time before t.
long double atom_part(double tau, double t, const ModelParams& p, const SeriesControl& ctrl) {
  return std::exp(-static_cast<long double>(p.lambda) * t) * psi_x_series(tau - t, p.with_x(t), ctrl);
}

}  // namespace

// Atom + lambda e^{-(lambda+mu) tau} (B + C):
//   B = lambda mu y sum_j (lambda mu y d)^j / j! 0F1(; j+1; lambda mu d (tau-y))
//         [t/(j+1)! G_j - y/(j+2)! H_j],
//   C = (lambda mu / 2) sum_r (lambda mu d)^r / (r! (r+1)!) sum_s binom(r,s) (2r+1-s) d^{r-s}
//         [F_{2r-s} - 1] K_s,
//   K_s = sum_{k<=s+1} binom(s+1,k) (t-y)^{s+1-k} y^{k+1}/(k+1) G_k,
// with d = tau - t, G_k = 1F2(1; k+2, 2; lambda mu t y), H_j = 1F2(2; j+3, 2; lambda mu t y)
// and F_q the first-passage 1F2 family at lambda mu d^2.
double joint_subdist(double y, double tau, double t, const ModelParams& p, const SeriesControl& ctrl) {
  p.validate();
  ctrl.validate();
  check_cycle_args(y, tau, t, "joint_subdist");
  const long double atom = atom_part(tau, t, p, ctrl);
  if (y == 0.0) return static_cast<double>(atom);

  const long double lm = static_cast<long double>(p.lambda) * p.mu;
  const long double T = t;
  const long double Y = y;
  const long double d = static_cast<long double>(tau) - t;
  const long double zty = lm * T * Y;
  const long double pre = p.lambda * std::exp(-(static_cast<long double>(p.lambda) + p.mu) * tau);
  const long double tol = std::max(static_cast<long double>(ctrl.rel_tol) * 1e-3L, 1e-19L);
  const auto cap = std::max<std::size_t>(ctrl.max_terms,
                                         static_cast<std::size_t>(6.0L * std::sqrt(lm * d * tau + lm * T * Y) + 100.0L));
  const auto big = static_cast<std::size_t>(4.0L * std::sqrt(lm * tau * tau) + 100.0L);
  const SeriesControl sc = detail::inner_ctrl(ctrl, big);
  // Reference magnitude of the bracketed sum for the stopping rule.
  const long double ref = pre > 0.0L ? atom / pre : 0.0L;

  std::vector<long double> g;  // G_k
  auto G = [&](std::size_t k) {
    while (g.size() <= k) g.push_back(specfun::hyper_1f2_ext(1.0L, g.size() + 2.0L, 2.0L, zty, sc));
    return g[k];
  };

  long double b = 0.0L;
  {
    long double w = 1.0L;     // (lambda mu y d)^j / j!
    long double f1 = 1.0L;    // 1/(j+1)!
    std::size_t small = 0;
    for (std::size_t j = 0;; ++j) {
      if (j >= cap) throw TruncationError("joint_subdist: j-series did not converge", static_cast<double>(w), j);
      const long double jl = static_cast<long double>(j);
      const long double f2 = f1 / (jl + 2.0L);
      const long double h = specfun::hyper_1f2_ext(2.0L, jl + 3.0L, 2.0L, zty, sc);
      const long double z0 = specfun::hyper_0f1_ext(jl + 1.0L, lm * d * (tau - Y), sc);
      const long double term = lm * Y * w * z0 * (T * f1 * G(j) - Y * f2 * h);
      b += term;
      if (std::fabs(term) <= tol * (std::fabs(b) + ref)) {
        if (++small >= ctrl.consecutive_small) break;
      } else {
        small = 0;
      }
      w *= lm * Y * d / (jl + 1.0L);
      f1 = f2;
    }
  }

  long double c = 0.0L;
  {
    detail::OneF2Family fam(lm * d * d, ctrl);
    std::vector<long double> ks;  // K_s
    auto K = [&](std::size_t s) {
      while (ks.size() <= s) {
        const std::size_t n = ks.size() + 1;
        long double acc = 0.0L;
        long double binom = 1.0L;
        for (std::size_t k = 0; k <= n; ++k) {
          acc += binom * std::pow(T - Y, static_cast<long double>(n - k)) * std::pow(Y, k + 1.0L) / (k + 1.0L) * G(k);
          binom *= static_cast<long double>(n - k) / (k + 1.0L);
        }
        ks.push_back(acc);
      }
      return ks[s];
    };
    long double w = 1.0L;  // (lambda mu d)^r / (r! (r+1)!)
    std::size_t small = 0;
    for (std::size_t r = 0;; ++r) {
      if (r >= cap) throw TruncationError("joint_subdist: r-series did not converge", static_cast<double>(w), r);
      long double inner = 0.0L;
      long double binom = 1.0L;  // binom(r, s)
      for (std::size_t s = 0; s <= r; ++s) {
        inner += binom * (2.0L * r + 1.0L - s) * std::pow(d, static_cast<long double>(r - s)) *
                 fam.minus_one(2 * r - s) * K(s);
        binom *= static_cast<long double>(r - s) / (s + 1.0L);
      }
      const long double term = 0.5L * lm * w * inner;
      c += term;
      if (std::fabs(term) <= tol * (std::fabs(b) + std::fabs(c) + ref)) {
        if (++small >= ctrl.consecutive_small) break;
      } else {
        small = 0;
      }
      w *= lm * d / ((r + 1.0L) * (r + 2.0L));
    }
  }

  return static_cast<double>(detail::checked(atom + pre * (b + c), "joint_subdist"));
}

double joint_subdist_constructive(double y, double tau, double t, const ModelParams& p, double rel_tol) {
  p.validate();
  check_cycle_args(y, tau, t, "joint_subdist_constructive");
  const double atom = static_cast<double>(atom_part(tau, t, p, {}));
  if (y == 0.0) return atom;
  const double d = tau - t;
  numeric::QuadOptions o;
  o.rel_tol = rel_tol;
  o.abs_tol = 1e-300;
  auto f = [&](double u) {
    if (u <= 0.0 || u >= t) return 0.0;
    return g0_subdensity(u, t, p) * psi_x(d, p.with_x(t - u));
  };
  return atom + numeric::integrate(f, 0.0, y, o).value;
}

namespace {

double series_or_constructive(double y, double tau, double t, const ModelParams& p, const SeriesControl& ctrl) {
  try {
    return joint_subdist(y, tau, t, p, ctrl);
  } catch (const TruncationError&) {
    return joint_subdist_constructive(y, tau, t, p, std::max(ctrl.rel_tol, 1e-10));
  }
}

double checked_psi0(double tau, const ModelParams& p, const SeriesControl& ctrl) {
  const double v = psi0(tau, p.with_x(0.0), ctrl);
  if (!(v > 1e-280)) throw DomainError("conditional law: psi0(tau) underflows; conditioning on T0 = tau is degenerate");
  return v;
}

void check_cond_args(double xval, double t, double tau, const ModelParams& p) {
  p.validate();
  if (p.x != 0.0) throw DomainError("within-cycle law is defined for x = 0 only");
  if (!(t > 0.0) || !(tau > t) || !std::isfinite(tau)) throw DomainError("within-cycle law: requires 0 < t < tau");
  if (!(xval >= 0.0) || !(xval <= t)) throw DomainError("within-cycle law: requires 0 <= x <= t");
}

// P[W(t) > w, T0 in d tau]/d tau = F_{Y(w),T0}(t - w, tau).
double upper_tail(double w, double t, double tau, const ModelParams& p, const SeriesControl& ctrl) {
  return series_or_constructive(t - w, tau, w, p, ctrl);
}

}  // namespace

double cond_cdf_within_cycle(double xval, double t, double tau, const ModelParams& p, const SeriesControl& ctrl) {
  check_cond_args(xval, t, tau, p);
  ctrl.validate();
  const double norm = checked_psi0(tau, p, ctrl);
  if (xval == 0.0) return 0.0;
  const double first = upper_tail(t / 2.0, t, tau, p, ctrl);
  const double second = upper_tail((t + xval) / 2.0, t, tau, p, ctrl);
  return (first - second) / norm;
}

double cond_atom(double t, double tau, const ModelParams& p, const SeriesControl& ctrl) {
  check_cond_args(0.0, t, tau, p);
  ctrl.validate();
  const double norm = checked_psi0(tau, p, ctrl);
  return static_cast<double>(atom_part(tau, t, p, ctrl)) / norm;
}

double cond_pdf_within_cycle(double xval, double t, double tau, const ModelParams& p, const SeriesControl& ctrl) {
  check_cond_args(xval, t, tau, p);
  ctrl.validate();
  const double norm = checked_psi0(tau, p, ctrl);
  // Only the second term depends on x; the first cancels in the difference.
  auto cdf = [&](double x) { return -upper_tail((t + x) / 2.0, t, tau, p, ctrl) / norm; };
  return numeric::cdf_derivative(cdf, xval, 1e-3 * t, 0.0, t);
}

CyclePoint cycle_point(double t, double tau, std::span<const double> xs, const ModelParams& p,
                       const SeriesControl& ctrl) {
  check_cond_args(0.0, t, tau, p);
  ctrl.validate();
  const double norm = checked_psi0(tau, p, ctrl);
  const double first = upper_tail(t / 2.0, t, tau, p, ctrl);
  auto tail = [&](double x) { return upper_tail((t + x) / 2.0, t, tau, p, ctrl) / norm; };
  CyclePoint out;
  out.t = t;
  out.tau = tau;
  out.atom_prob = static_cast<double>(atom_part(tau, t, p, ctrl)) / norm;
  for (double x : xs) {
    check_cond_args(x, t, tau, p);
    out.x.push_back(x);
    out.cdf.push_back(x == 0.0 ? 0.0 : first / norm - tail(x));
    out.pdf.push_back(numeric::cdf_derivative([&](double v) { return -tail(v); }, x, 1e-3 * t, 0.0, t));
  }
  return out;
}

}  // namespace telegraph::analytic
