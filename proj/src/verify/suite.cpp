#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "telegraph/analytic.hpp"
#include "telegraph/errors.hpp"
#include "telegraph/kernels.hpp"
#include "telegraph/numeric.hpp"
#include "telegraph/sim.hpp"
#include "telegraph/verify.hpp"

namespace telegraph::verify {

namespace an = telegraph::analytic;

bool Report::passed() const { return failures() == 0; }

std::size_t Report::failures() const {
  return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const auto& c) { return !c.passed; }));
}

double CentralMoments::variance_se(std::size_t n) const {
  return std::sqrt(std::max(0.0, m4 - var * var) / static_cast<double>(n));
}

CentralMoments central_moments(double e1, double e2, double e3, double e4) {
  CentralMoments c;
  c.var = e2 - e1 * e1;
  c.m4 = e4 - 4.0 * e3 * e1 + 6.0 * e2 * e1 * e1 - 3.0 * e1 * e1 * e1 * e1;
  return c;
}

namespace {

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) break;
    }
    x[i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

}  // namespace

WindowedLaw windowed_cond_law(const ModelParams& p, double t, double tau, double delta, std::span<const double> xs) {
  std::vector<double> gx;
  std::vector<double> gw;
  gauss_legendre(10, gx, gw);
  WindowedLaw out;
  out.cdf.assign(xs.size(), 0.0);
  double mass = 0.0;
  for (std::size_t k = 0; k < gx.size(); ++k) {
    const double tk = tau + delta * gx[k];
    const double wk = gw[k] * an::psi0(tk, p);
    mass += wk;
    const double atom = an::cond_atom(t, tk, p);
    out.atom += wk * atom;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double x = std::clamp(xs[i], 0.0, t);
      out.cdf[i] += wk * (an::cond_cdf_within_cycle(x, t, tk, p) + (xs[i] >= t ? atom : 0.0));
    }
  }
  out.atom /= mass;
  for (double& c : out.cdf) c /= mass;
  return out;
}

double sup_cdf_distance(std::span<const double> samples, std::span<const double> xs, std::span<const double> cdf) {
  std::vector<double> v(samples.begin(), samples.end());
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto k = std::upper_bound(v.begin(), v.end(), xs[i]) - v.begin();
    worst = std::max(worst, std::fabs(static_cast<double>(k) / n - cdf[i]));
  }
  return worst;
}

namespace {

using Clock = std::chrono::steady_clock;

class Suite {
 public:
  explicit Suite(const Options& o) : opts_(o) {}

  void check(const std::string& name, const std::function<CheckResult()>& body) {
    const auto t0 = Clock::now();
    CheckResult r;
    try {
      r = body();
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.name = name;
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    report_.checks.push_back(std::move(r));
  }

  Report take() { return std::move(report_); }
  const Options& opts() const { return opts_; }

 private:
  Options opts_;
  Report report_;
};

CheckResult close_rel(double value, double ref, double tol, const std::string& detail = {}) {
  CheckResult r;
  r.value = value;
  r.reference = ref;
  r.tolerance = tol;
  r.passed = std::isfinite(value) && std::fabs(value - ref) <= tol * std::fabs(ref);
  r.detail = detail;
  return r;
}

CheckResult close_abs(double value, double ref, double tol, const std::string& detail = {}) {
  CheckResult r;
  r.value = value;
  r.reference = ref;
  r.tolerance = tol;
  r.passed = std::isfinite(value) && std::fabs(value - ref) <= tol;
  r.detail = detail;
  return r;
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(10);
  s << v;
  return s.str();
}

double integral(const std::function<double(double)>& f, double lo, double rate) {
  numeric::QuadOptions o;
  o.rel_tol = 1e-10;
  o.abs_tol = 1e-14;
  o.decay_rate = rate;
  return numeric::integrate(f, lo, numeric::kInf, o).value;
}

void fast_checks(Suite& s) {
  const bool mutate = s.opts().mutate_printed_fc0;
  for (double mu : {0.5, 1.5}) {
    const ModelParams base{2.0, mu, 1.0, 0.0};
    const std::string tag = "(lambda=2,mu=" + fmt(mu) + ")";
    s.check("normalization psi0 " + tag, [&] {
      const double v = integral([&](double t) { return an::psi0(t, base); }, 0.0, an::decay_rate_t(base));
      return close_abs(v, 1.0, 1e-6, "integral = " + fmt(v));
    });
    s.check("normalization pdf_c0 " + tag, [&] {
      auto f = [&](double y) { return mutate ? an::printed::pdf_c0_with_lambda(y, base) : an::pdf_c0(y, base); };
      const double v = integral(f, 0.0, an::decay_rate_c(base));
      std::string d = "integral = " + fmt(v);
      if (std::fabs(v - base.lambda) < 1e-6 * base.lambda) d += " = lambda (printed leading factor)";
      return close_abs(v, 1.0, 1e-6, d);
    });
    for (double x : {1.0, 2.0}) {
      const ModelParams p = base.with_x(x);
      s.check("normalization pdf_cx " + tag + " x=" + fmt(x), [&] {
        const double v = integral([&](double y) { return an::pdf_cx(y, p); }, x, an::decay_rate_c(p));
        return close_abs(v, 1.0, 1e-6, "integral = " + fmt(v));
      });
    }
    for (double a : {0.1, 0.5, 0.9}) {
      const ModelParams p = base.with_alpha(a);
      s.check("normalization pdf_a0 " + tag + " alpha=" + fmt(a), [&] {
        const double v = integral([&](double y) { return an::pdf_a0(y, p); }, 0.0, an::decay_rate_a0(p));
        return close_abs(v, 1.0, 1e-6, "integral = " + fmt(v));
      });
    }
  }

  const ModelParams p{2.0, 0.5, 0.5, 1.0};
  s.check("boundary f_A0(0+) = alpha lambda/2", [&] {
    return close_rel(an::pdf_a0(1e-6, p), p.alpha * p.lambda / 2.0, 1e-6);
  });
  s.check("boundary f_Cx(x+) = lambda e^{-mu x}/2", [&] {
    return close_rel(an::pdf_cx(p.x + 1e-6, p), p.lambda * std::exp(-p.mu * p.x) / 2.0, 1e-6);
  });

  s.check("MGF factorizations on s-grid", [&] {
    double worst = 0.0;
    for (double sv : {-1.0, -0.5, -0.1, 0.0, 0.1, 0.2}) {
      const double e = an::mgf_exp_factor(sv, p);
      worst = std::max(worst, std::fabs(an::mgf_cx(sv, p) / (an::mgf_c0(sv, p) * e) - 1.0));
      worst = std::max(worst, std::fabs(an::mgf_ax(sv, p) / (an::mgf_a0(sv, p) * e) - 1.0));
      const double c0 = an::mgf_c0(sv, p);
      worst = std::max(worst, std::fabs(an::mgf_a0(sv, p) * (1.0 + (p.alpha - 1.0) * c0) / (p.alpha * c0) - 1.0));
    }
    return close_abs(worst, 0.0, 1e-12, "max relative deviation = " + fmt(worst));
  });

  s.check("moment series vs Taylor recursion (n=1..4)", [&] {
    const auto t = an::moments_by_recursion(4, p);
    double worst = 0.0;
    for (unsigned n = 1; n <= 4; ++n) {
      worst = std::max(worst, std::fabs(an::moment_c0(n, p) / t.c0[n - 1] - 1.0));
      worst = std::max(worst, std::fabs(an::moment_a0(n, p) / t.a0[n - 1] - 1.0));
      worst = std::max(worst, std::fabs(an::moment_cx(n, p) / t.cx[n - 1] - 1.0));
      worst = std::max(worst, std::fabs(an::moment_ax(n, p) / t.ax[n - 1] - 1.0));
    }
    return close_abs(worst, 0.0, 1e-10, "max relative deviation = " + fmt(worst));
  });

  s.check("closed means/variances vs series moments", [&] {
    const auto mv = an::closed_mean_var(p);
    const double ecx = an::moment_cx(1, p);
    const double eax = an::moment_ax(1, p);
    double worst = std::fabs(ecx / mv.E_Cx - 1.0);
    worst = std::max(worst, std::fabs(eax / mv.E_Ax - 1.0));
    worst = std::max(worst, std::fabs((an::moment_cx(2, p) - ecx * ecx) / mv.Var_Cx - 1.0));
    worst = std::max(worst, std::fabs((an::moment_ax(2, p) - eax * eax) / mv.Var_Ax - 1.0));
    return close_abs(worst, 0.0, 1e-10, "max relative deviation = " + fmt(worst));
  });

  s.check("psi0 = M/M/1 busy-period density", [&] {
    double worst = 0.0;
    for (int k = 1; k <= 50; ++k) {
      const double t = 0.1 * k;
      // Busy period, arrival rate mu, service rate lambda.
      const double a = p.mu;
      const double b = p.lambda;
      const double bp = std::sqrt(b / a) * std::exp(-(a + b) * t) * std::cyl_bessel_i(1.0, 2.0 * t * std::sqrt(a * b)) / t;
      worst = std::max(worst, std::fabs(an::psi0(t, p) / bp - 1.0));
    }
    return close_abs(worst, 0.0, 1e-10, "max relative deviation = " + fmt(worst));
  });

  s.check("psi_x series vs integral form at (x,t)=(1,1)", [&] {
    return close_rel(an::psi_x_series(1.0, p), an::psi_x_integral(1.0, p), 1e-6);
  });

  s.check("within-cycle atom + continuous mass = 1 (t=5, tau=6)", [&] {
    const ModelParams q{2.0, 0.5, 1.0, 0.0};
    const double v = an::cond_atom(5.0, 6.0, q) + an::cond_cdf_within_cycle(5.0, 5.0, 6.0, q);
    return close_abs(v, 1.0, 1e-4);
  });
}

void full_checks(Suite& s) {
  const auto& o = s.opts();
  const std::size_t n = o.mc_paths;
  sim::SampleOptions so;
  so.threads = o.threads;

  const ModelParams p{2.0, 0.5, 0.5, 1.0};
  const sim::Reducer reducers[] = {sim::reduce::c_x, sim::reduce::a_x, sim::reduce::m};
  std::vector<sim::SampleStats> st;
  s.check("Monte Carlo run (x=1, alpha=0.5)", [&] {
    st = sim::sample_many(p, {o.seed, 1}, n, reducers, so);
    CheckResult r;
    r.passed = true;
    r.detail = std::to_string(n) + " paths";
    return r;
  });
  if (st.size() == 3) {
    const auto mv = an::closed_mean_var(p);
    const auto tcx = an::moments_by_recursion(4, p);
    auto within = [](double v, double ref, double se) {
      CheckResult r;
      r.value = v;
      r.reference = ref;
      r.tolerance = 3.0 * se;
      r.passed = std::fabs(v - ref) <= 3.0 * se;
      r.detail = "z = " + fmt((v - ref) / se);
      return r;
    };
    s.check("MC mean C_x within 3 SE", [&] { return within(st[0].summary.mean, mv.E_Cx, st[0].summary.std_error); });
    s.check("MC variance C_x within 3 SE", [&] {
      const auto c = central_moments(tcx.cx[0], tcx.cx[1], tcx.cx[2], tcx.cx[3]);
      return within(st[0].summary.variance, mv.Var_Cx, c.variance_se(n));
    });
    s.check("MC mean A_x within 3 SE", [&] { return within(st[1].summary.mean, mv.E_Ax, st[1].summary.std_error); });
    s.check("MC variance A_x within 3 SE", [&] {
      const auto c = central_moments(tcx.ax[0], tcx.ax[1], tcx.ax[2], tcx.ax[3]);
      return within(st[1].summary.variance, mv.Var_Ax, c.variance_se(n));
    });
    s.check("MC mean M within 3 SE", [&] { return within(st[2].summary.mean, 1.0 / p.alpha, st[2].summary.std_error); });
  }

  s.check("MC C_0 mean and KS test (1% level)", [&] {
    const ModelParams q{2.0, 0.5, 1.0, 0.0};
    sim::SampleOptions ko = so;
    ko.keep_samples = true;
    const std::size_t nk = std::min<std::size_t>(n, 100'000);
    auto r = sim::sample_many(q, {o.seed, 2}, nk, sim::reduce::c_x, ko);
    std::vector<double> v = r.samples;
    std::sort(v.begin(), v.end());
    const auto cdf = numeric::cumulative_integral([&](double y) { return an::pdf_c0(y, q); }, 0.0, v);
    const double d = kernels::ks_sup(cdf);
    CheckResult c;
    c.value = d;
    c.tolerance = numeric::ks_critical_1pct(nk);
    const double z = (r.summary.mean - 2.0 / (q.lambda - q.mu)) / r.summary.std_error;
    c.passed = d < c.tolerance && std::fabs(z) <= 3.0;
    c.detail = "D = " + fmt(d) + ", mean z = " + fmt(z);
    return c;
  });

  s.check("conditional law vs rejection sampling (t=5, tau=6, delta=0.3)", [&] {
    const ModelParams q{2.0, 0.5, 1.0, 0.0};
    const double t = 5.0;
    sim::WithinCycleOptions wo;
    wo.threads = o.threads;
    const auto w = sim::sample_within_cycle(q, {o.seed, 3}, t, 6.0, 0.3, 100'000, wo);
    std::vector<double> xs(201);
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = t * static_cast<double>(i) / 200.0;
    const auto law = windowed_cond_law(q, t, 6.0, 0.3, xs);
    const double d = sup_cdf_distance(w.x, xs, law.cdf);
    const double f = w.atom_frequency();
    const double se = std::sqrt(law.atom * (1.0 - law.atom) / static_cast<double>(w.accepted));
    CheckResult c;
    c.value = d;
    c.tolerance = 0.01;
    c.passed = d < 0.01 && std::fabs(f - law.atom) <= 3.0 * se;
    c.detail = "sup |F_n - F| = " + fmt(d) + ", atom z = " + fmt((f - law.atom) / se) + ", " +
               std::to_string(w.accepted) + " accepted of " + std::to_string(w.attempts);
    return c;
  });
}

}  // namespace

Report run(const Options& opts) {
  Suite s(opts);
  fast_checks(s);
  if (opts.level == Level::full) full_checks(s);
  return s.take();
}

}  // namespace telegraph::verify
