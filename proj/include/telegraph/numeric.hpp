#pragma once

#include <concepts>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace telegraph::numeric {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Integrand evaluated on batches of abscissae (one Gauss-Kronrod panel at
/// a time), so vectorized kernels can be used. Scalar callables are
/// wrapped implicitly.
class Integrand {
 public:
  using Batch = std::function<void(std::span<const double>, std::span<double>)>;

  template <class F>
    requires std::invocable<const F&, double> && (!std::same_as<std::decay_t<F>, Integrand>)
  Integrand(F f)  // NOLINT(google-explicit-constructor)
      : fn_([f = std::move(f)](std::span<const double> x, std::span<double> y) {
          for (std::size_t i = 0; i < x.size(); ++i) y[i] = f(x[i]);
        }) {}

  static Integrand batch(Batch fn) {
    Integrand out;
    out.fn_ = std::move(fn);
    return out;
  }

  void operator()(std::span<const double> x, std::span<double> y) const { fn_(x, y); }
  double operator()(double x) const {
    double y = 0.0;
    fn_(std::span<const double>(&x, 1), std::span<double>(&y, 1));
    return y;
  }

 private:
  Integrand() = default;
  Batch fn_;
};

struct QuadOptions {
  double abs_tol = 0.0;
  double rel_tol = 1e-10;
  std::size_t max_subdivisions = 4000;
  // Semi-infinite domains: known exponential decay rate of |f| (0 means
  // estimate it from the integrand), the relative size below which the
  // tail bound |f(T)|/rate stops the integration, and the first block
  // length (0 picks 4/rate).
  double decay_rate = 0.0;
  double tail_rel = 1e-16;
  double initial_block = 0.0;
};

struct QuadResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;  // includes tail_bound
  std::size_t evaluations = 0;
  double tail_bound = 0.0;
};

/// Adaptive Gauss-Kronrod 10/21 integration of f over [a,b];
/// b may be +infinity. Throws QuadratureError when the tolerance cannot be
/// met within max_subdivisions, DomainError for a >= b or bad options.
QuadResult integrate(const Integrand& f, double a, double b, const QuadOptions& opts = {});
QuadResult integrate(const Integrand& f, double a, double b, double tol);

/// F(x_i) = int_lo^{x_i} f for ascending points x_i >= lo, accumulated
/// panel by panel (one adaptive integral per gap).
std::vector<double> cumulative_integral(const Integrand& f, double lo, std::span<const double> sorted_points,
                                        double tol = 1e-10);

/// int e^{s y} pdf(y) dy over [lo, inf). `decay_rate` is the exponential
/// decay rate of pdf; s must be below it.
double numeric_mgf(const Integrand& pdf, double s, double lo, double decay_rate, double tol = 1e-10);

/// int y^n pdf(y) dy over [lo, inf).
double numeric_moment(const Integrand& pdf, unsigned n, double lo, double decay_rate, double tol = 1e-10);

/// d/dx cdf(x) by central differences with one Richardson step. The step is
/// shrunk to stay inside [lo, hi]; at an endpoint a one-sided second-order
/// formula is extrapolated instead.
double cdf_derivative(const std::function<double(double)>& cdf, double x, double h,
                      double lo = -kInf, double hi = kInf);

// Goodness of fit and sample statistics.

/// sup_x |F_n(x) - F(x)|; sorts a copy of the samples.
double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf);

/// Asymptotic Kolmogorov p-value with Stephens' small-sample correction.
double ks_pvalue(double d, std::size_t n);

/// 1.63/sqrt(n): the 1% critical value of the one-sample KS statistic.
double ks_critical_1pct(std::size_t n);

struct SampleSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double std_error = 0.0;
  double lag1_autocorrelation = 0.0;
};

SampleSummary summarize(std::span<const double> v);

/// Pearson chi-square over categories; `expected` are probabilities.
double chi_square(std::span<const std::size_t> observed, std::span<const double> expected_prob,
                  std::size_t total);

}  // namespace telegraph::numeric
