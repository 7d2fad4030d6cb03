#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "telegraph/errors.hpp"
#include "telegraph/model.hpp"
#include "telegraph/specfun.hpp"

namespace telegraph::analytic::detail {

using specfun::SeriesControl;

// Tolerance for sums whose result is later subject to cancellation: the
// caller's tolerance tightened towards extended precision.
inline SeriesControl inner_ctrl(const SeriesControl& ctrl, std::size_t min_terms) {
  ctrl.validate();
  SeriesControl c = ctrl.widened(min_terms);
  c.rel_tol = std::max(ctrl.rel_tol * 1e-7, 1e-19);
  return c;
}

// e^{-z} I_n(z) in extended precision: power series below z = 40, Hankel
// expansion (summed to its smallest term) above.
inline long double scaled_bessel_ext(unsigned n, long double z, const SeriesControl& ctrl) {
  if (z < 40.0L || n > 3) {
    if (z > 11000.0L) throw DomainError("Bessel argument beyond the extended-precision range (z > 11000)");
    const auto terms = static_cast<std::size_t>(z + 10.0L * std::sqrt(z) + 64.0L);
    return specfun::bessel_i_ext(n, z, inner_ctrl(ctrl, terms)) * std::exp(-z);
  }
  const long double mu = 4.0L * n * n;
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int k = 1; k < 200; ++k) {
    const long double odd = 2.0L * k - 1.0L;
    const long double next = -term * (mu - odd * odd) / (8.0L * k * z);
    if (std::fabs(next) >= std::fabs(term)) break;
    term = next;
    sum += term;
    if (std::fabs(term) <= 1e-21L * std::fabs(sum)) break;
  }
  return sum / std::sqrt(2.0L * 3.14159265358979323846264338327950288L * z);
}

inline long double checked(long double v, const char* where) {
  if (!std::isfinite(v)) throw DomainError(std::string(where) + ": result not representable (argument too large)");
  return v;
}

// Cache of F_q - 1 with F_q = 1F2(-1/2; (q+1)/2, 1 + q/2; z), the family
// appearing in the first-passage series. All terms past the first are
// negative, so the difference is summed directly without cancellation.
class OneF2Family {
 public:
  OneF2Family(long double z, const SeriesControl& ctrl) : z_(z), ctrl_(ctrl) {}

  long double minus_one(std::size_t q) {
    if (q >= cache_.size()) cache_.resize(q + 64, std::numeric_limits<long double>::quiet_NaN());
    long double& slot = cache_[q];
    if (std::isnan(slot)) slot = compute(q);
    return slot;
  }

 private:
  long double compute(std::size_t q) const {
    if (z_ == 0.0L) return 0.0L;
    const long double a = -0.5L;
    const long double b = (static_cast<long double>(q) + 1.0L) / 2.0L;
    const long double c = 1.0L + static_cast<long double>(q) / 2.0L;
    long double term = a * z_ / (b * c);
    long double sum = term;
    const long double tol = std::max(ctrl_.rel_tol * 1e-7, 1e-19);
    const auto cap = static_cast<std::size_t>(4.0L * std::sqrt(z_) + 200.0L) + ctrl_.max_terms;
    std::size_t small = 0;
    for (std::size_t n = 1; n < cap; ++n) {
      const long double nl = static_cast<long double>(n);
      const long double ratio = (a + nl) * z_ / ((b + nl) * (c + nl) * (nl + 1.0L));
      term *= ratio;
      sum += term;
      if (std::fabs(term) <= tol * std::fabs(sum) && ratio < 1.0L) {
        if (++small >= ctrl_.consecutive_small) return checked(sum, "1F2 series");
      } else {
        small = 0;
      }
    }
    throw TruncationError("1F2(-1/2; (q+1)/2, 1+q/2; z) series", static_cast<double>(std::fabs(term)), cap);
  }

  long double z_;
  SeriesControl ctrl_;
  std::vector<long double> cache_;
};

// Walks a unimodal nonnegative weight sequence w_k outward from its mode,
// calling visit(k, w_k) until consecutive_small successive contributions in
// each direction fall below tol * |running total| as reported by visit.
// `ratio_up(k)` = w_{k+1}/w_k. Returns the number of indices visited.
template <class RatioUp, class Visit>
std::size_t walk_from_mode(std::size_t mode, long double w_mode, RatioUp ratio_up, Visit visit,
                           long double tol, const SeriesControl& ctrl, std::size_t max_index,
                           const char* what) {
  std::size_t visited = 0;
  // Upward, including the mode itself.
  long double w = w_mode;
  std::size_t small = 0;
  std::size_t k = mode;
  for (;; ++k) {
    if (k > max_index) {
      throw TruncationError(std::string(what) + ": outer series did not converge", static_cast<double>(w), visited);
    }
    const bool tiny = visit(k, w, tol);
    ++visited;
    if (tiny) {
      if (++small >= ctrl.consecutive_small) break;
    } else {
      small = 0;
    }
    w *= ratio_up(k);
    if (w == 0.0L) break;
  }
  // Downward.
  w = w_mode;
  small = 0;
  for (k = mode; k > 0; --k) {
    w /= ratio_up(k - 1);
    const bool tiny = visit(k - 1, w, tol);
    ++visited;
    if (tiny) {
      if (++small >= ctrl.consecutive_small) break;
    } else {
      small = 0;
    }
  }
  return visited;
}

}  // namespace telegraph::analytic::detail
