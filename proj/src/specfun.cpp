#include "telegraph/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "telegraph/errors.hpp"

namespace telegraph::specfun {

void SeriesControl::validate() const {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw DomainError("SeriesControl: rel_tol must lie in (0,1)");
  if (max_terms < 1) throw DomainError("SeriesControl: max_terms must be >= 1");
  if (consecutive_small < 1) throw DomainError("SeriesControl: consecutive_small must be >= 1");
}

SeriesControl SeriesControl::widened(std::size_t min_terms) const {
  SeriesControl out = *this;
  out.max_terms = std::max(max_terms, min_terms);
  return out;
}

namespace {

bool is_nonpositive_integer(long double v) { return v <= 0.0L && v == std::floor(v); }

// Sum of t_0 = 1, t_{n+1} = t_n * z/(n+1) * prod(a_i + n) / prod(b_j + n).
template <std::size_t P, std::size_t Q>
long double pfq_sum(const std::array<long double, P>& a, const std::array<long double, Q>& b,
                    long double z, const SeriesControl& ctrl, const char* name) {
  ctrl.validate();
  long double term = 1.0L;
  long double sum = 1.0L;
  std::size_t small_run = 0;
  const long double tol = ctrl.rel_tol;
  for (std::size_t n = 0;; ++n) {
    if (n + 1 >= ctrl.max_terms) {
      throw TruncationError(std::string(name) + ": stopping rule not met",
                            static_cast<double>(std::fabs(term)), n + 1);
    }
    const auto nl = static_cast<long double>(n);
    for (long double bj : b) {
      if (bj + nl == 0.0L) {
        throw DomainError(std::string(name) + ": Pochhammer pole in denominator at index " +
                          std::to_string(n + 1));
      }
    }
    long double ratio = z / (nl + 1.0L);
    bool terminated = false;
    for (long double ai : a) {
      if (ai + nl == 0.0L) terminated = true;
      ratio *= ai + nl;
    }
    if (terminated) return sum;
    for (long double bj : b) ratio /= bj + nl;
    term *= ratio;
    sum += term;
    if (!std::isfinite(sum)) throw DomainError(std::string(name) + ": overflow in extended precision");
    if (std::fabs(term) <= tol * std::fabs(sum)) {
      if (++small_run >= ctrl.consecutive_small) return sum;
    } else {
      small_run = 0;
    }
  }
}

// Hankel expansion of e^{-z} I_n(z), valid for z large compared with n^2.
double bessel_i_scaled_asymptotic(unsigned n, double z) {
  const double mu = 4.0 * n * n;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = -term * (mu - odd * odd) / (k * 8.0 * z);
    if (std::fabs(next) > std::fabs(term)) break;
    term = next;
    sum += term;
    if (std::fabs(term) <= 1e-18 * std::fabs(sum)) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * z);
}

std::size_t bessel_terms_needed(long double z) {
  return static_cast<std::size_t>(z + 10.0L * std::sqrt(z) + 64.0L);
}

}  // namespace

double rising_factorial(double d, unsigned n) {
  double p = 1.0;
  for (unsigned i = 0; i < n; ++i) p *= d + i;
  return p;
}

double gen_binom(double x, unsigned h) {
  double p = 1.0;
  for (unsigned i = 0; i < h; ++i) p *= (x - i) / (i + 1.0);
  return p;
}

long double bessel_i_ext(unsigned n, long double z, const SeriesControl& ctrl) {
  if (!(z >= 0.0L)) throw DomainError("bessel_i: argument must be >= 0");
  if (z == 0.0L) return n == 0 ? 1.0L : 0.0L;
  const std::array<long double, 0> a{};
  const std::array<long double, 1> b{static_cast<long double>(n) + 1.0L};
  const long double series = pfq_sum(a, b, z * z / 4.0L, ctrl, "bessel_i");
  long double prefactor = 1.0L;
  for (unsigned k = 1; k <= n; ++k) prefactor *= (z / 2.0L) / k;
  return prefactor * series;
}

double bessel_i(unsigned n, double z, const SeriesControl& ctrl) {
  const long double v = bessel_i_ext(n, z, ctrl);
  const auto out = static_cast<double>(v);
  if (!std::isfinite(out)) throw DomainError("bessel_i: result overflows double; use bessel_i_scaled");
  return out;
}

double bessel_i_scaled(unsigned n, double z, const SeriesControl& ctrl) {
  if (!(z >= 0.0)) throw DomainError("bessel_i_scaled: argument must be >= 0");
  if (z >= 40.0 && n <= 3) return bessel_i_scaled_asymptotic(n, z);
  const SeriesControl wide = ctrl.widened(bessel_terms_needed(z));
  return static_cast<double>(bessel_i_ext(n, z, wide) * std::exp(-static_cast<long double>(z)));
}

long double hyper_0f1_ext(long double b, long double z, const SeriesControl& ctrl) {
  if (is_nonpositive_integer(b)) throw DomainError("hyper_0f1: b is a nonpositive integer (pole at index " +
                                                   std::to_string(static_cast<long long>(-b) + 1) + ")");
  const std::array<long double, 0> a{};
  const std::array<long double, 1> bb{b};
  return pfq_sum(a, bb, z, ctrl, "hyper_0f1");
}

long double hyper_1f2_ext(long double a, long double b, long double c, long double z,
                          const SeriesControl& ctrl) {
  const std::array<long double, 1> aa{a};
  const std::array<long double, 2> bb{b, c};
  return pfq_sum(aa, bb, z, ctrl, "hyper_1f2");
}

long double hyper_2f1_ext(long double a, long double b, long double c, long double z,
                          const SeriesControl& ctrl) {
  const bool terminating = is_nonpositive_integer(a) || is_nonpositive_integer(b);
  if (!terminating && !(std::fabs(z) < 1.0L)) {
    throw DomainError("hyper_2f1: |z| >= 1 requires a terminating series (no analytic continuation)");
  }
  const std::array<long double, 2> aa{a, b};
  const std::array<long double, 1> bb{c};
  return pfq_sum(aa, bb, z, ctrl, "hyper_2f1");
}

double hyper_0f1(double b, double z, const SeriesControl& ctrl) {
  return static_cast<double>(hyper_0f1_ext(b, z, ctrl));
}

double hyper_1f2(double a, double b, double c, double z, const SeriesControl& ctrl) {
  return static_cast<double>(hyper_1f2_ext(a, b, c, z, ctrl));
}

double hyper_2f1(double a, double b, double c, double z, const SeriesControl& ctrl) {
  return static_cast<double>(hyper_2f1_ext(a, b, c, z, ctrl));
}

}  // namespace telegraph::specfun
