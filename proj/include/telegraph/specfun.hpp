#pragma once

#include <cstddef>

namespace telegraph::specfun {

/// Truncation policy shared by every infinite series in the library.
///
/// A sum stops once `consecutive_small` successive terms each satisfy
/// |term| <= rel_tol * |partial sum|. Requiring several small terms in a
/// row keeps alternating and slowly-starting series from stopping early.
struct SeriesControl {
  double rel_tol = 1e-12;
  std::size_t max_terms = 500;
  std::size_t consecutive_small = 3;

  /// Throws DomainError unless 0 < rel_tol < 1, max_terms >= 1 and
  /// consecutive_small >= 1.
  void validate() const;

  /// Copy with max_terms raised to at least `min_terms`.
  SeriesControl widened(std::size_t min_terms) const;
};

// (d)_n = d (d+1) ... (d+n-1), (d)_0 = 1.
double rising_factorial(double d, unsigned n);

// x (x-1) ... (x-h+1) / h!, defined for real x.
double gen_binom(double x, unsigned h);

/// Modified Bessel function of the first kind by its power series,
/// accumulated in extended precision.
///
/// Requires z >= 0. Throws TruncationError if the stopping rule is not met
/// within ctrl.max_terms, and DomainError if I_n(z) overflows a double
/// (use bessel_i_scaled for large arguments).
double bessel_i(unsigned n, double z, const SeriesControl& ctrl = {});

/// e^{-z} I_n(z). Uses the power series for moderate z and the Hankel
/// asymptotic expansion once z >= 40 and n <= 3. Term caps are widened
/// internally to the series peak.
double bessel_i_scaled(unsigned n, double z, const SeriesControl& ctrl = {});

/// Extended-precision I_n(z) for internal use; finite up to z ~ 11000.
long double bessel_i_ext(unsigned n, long double z, const SeriesControl& ctrl);

/// 0F1(;b;z). Negative z is allowed (alternating series).
double hyper_0f1(double b, double z, const SeriesControl& ctrl = {});

/// 1F2(a;b,c;z). Terminates when a is a nonpositive integer; throws
/// DomainError naming the index when a denominator Pochhammer symbol
/// vanishes before termination.
double hyper_1f2(double a, double b, double c, double z, const SeriesControl& ctrl = {});

/// Gauss 2F1(a,b;c;z) for |z| < 1, or any z when the series terminates.
/// No analytic continuation: |z| >= 1 without termination is a DomainError.
double hyper_2f1(double a, double b, double c, double z, const SeriesControl& ctrl = {});

// Extended-precision variants used inside the analytic series.
long double hyper_0f1_ext(long double b, long double z, const SeriesControl& ctrl);
long double hyper_1f2_ext(long double a, long double b, long double c, long double z,
                          const SeriesControl& ctrl);
long double hyper_2f1_ext(long double a, long double b, long double c, long double z,
                          const SeriesControl& ctrl);

}  // namespace telegraph::specfun
