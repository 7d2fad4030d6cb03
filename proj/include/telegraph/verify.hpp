#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "telegraph/model.hpp"

// Self-check suite reconciling series, integral forms, quadrature and
// simulation. Used by `telegraph verify`.
namespace telegraph::verify {

enum class Level { fast, full };

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  std::string detail;
  double seconds = 0.0;
};

struct Report {
  std::vector<CheckResult> checks;
  bool passed() const;
  std::size_t failures() const;
};

struct Options {
  Level level = Level::fast;
  // Replace pdf_c0 by the printed form with its leading lambda; the
  // normalization check must then fail.
  bool mutate_printed_fc0 = false;
  std::uint64_t seed = 20240601;
  std::size_t threads = 0;
  std::size_t mc_paths = 1'000'000;
};

Report run(const Options& opts);

/// Law of X(t) given T0 in (tau - delta, tau + delta): the conditional law
/// averaged over the window with weight psi0, as rejection sampling
/// produces it. Returns P[X(t) <= x] (atom at t included) for each x.
struct WindowedLaw {
  double atom = 0.0;
  std::vector<double> cdf;
};
WindowedLaw windowed_cond_law(const ModelParams& p, double t, double tau, double delta, std::span<const double> xs);

/// max_i |F_n(xs[i]) - cdf[i]| for the empirical CDF of `samples`.
double sup_cdf_distance(std::span<const double> samples, std::span<const double> xs, std::span<const double> cdf);

/// Central moments of order 2 and 4 from raw moments E[X], ..., E[X^4].
struct CentralMoments {
  double var = 0.0;
  double m4 = 0.0;
  /// Standard error of the unbiased sample variance from n draws.
  double variance_se(std::size_t n) const;
};
CentralMoments central_moments(double e1, double e2, double e3, double e4);

}  // namespace telegraph::verify
