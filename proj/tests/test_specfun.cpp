#include <cmath>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <gtest/gtest.h>

#include "telegraph/errors.hpp"
#include "telegraph/specfun.hpp"

namespace {

using namespace telegraph;
using namespace telegraph::specfun;
using Big = boost::multiprecision::cpp_dec_float_50;
using Rational = boost::multiprecision::cpp_rational;

// Independent oracles: the defining series in 50-digit decimal arithmetic.
Big bessel_oracle(unsigned n, Big z) {
  Big half = z / 2;
  Big term = 1;
  for (unsigned i = 1; i <= n; ++i) term *= half / i;
  Big sum = term;
  for (int k = 1; k < 400; ++k) {
    term *= half * half / (Big(k) * Big(k + n));
    sum += term;
    if (term < sum * Big("1e-45")) break;
  }
  return sum;
}

Big pfq_oracle(std::vector<Big> a, std::vector<Big> b, Big z) {
  Big term = 1;
  Big sum = 1;
  for (int n = 0; n < 2000; ++n) {
    Big num = z;
    for (auto& ai : a) num *= ai + n;
    Big den = n + 1;
    for (auto& bi : b) den *= bi + n;
    if (num == 0) break;
    term *= num / den;
    sum += term;
    if (abs(term) < abs(sum) * Big("1e-45") && n > 5) break;
  }
  return sum;
}

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

TEST(SeriesControl, Validation) {
  EXPECT_NO_THROW((SeriesControl{}.validate()));
  EXPECT_THROW((SeriesControl{0.0, 10, 3}.validate()), DomainError);
  EXPECT_THROW((SeriesControl{1.0, 10, 3}.validate()), DomainError);
  EXPECT_THROW((SeriesControl{1e-12, 0, 3}.validate()), DomainError);
  EXPECT_EQ(SeriesControl{}.widened(2000).max_terms, 2000u);
  EXPECT_EQ(SeriesControl{}.widened(10).max_terms, 500u);
}

TEST(RisingFactorial, Examples) {
  EXPECT_EQ(rising_factorial(3.7, 0), 1.0);
  EXPECT_EQ(rising_factorial(1.0, 5), 120.0);
  EXPECT_DOUBLE_EQ(rising_factorial(0.5, 3), 1.875);
  EXPECT_EQ(rising_factorial(-2.0, 3), 0.0);
}

TEST(GenBinom, Examples) {
  EXPECT_EQ(gen_binom(2.5, 0), 1.0);
  EXPECT_DOUBLE_EQ(gen_binom(3.0, 2), 3.0);
  EXPECT_DOUBLE_EQ(gen_binom(0.5, 2), -0.125);
  EXPECT_EQ(gen_binom(2.0, 3), 0.0);
}

TEST(BesselI, TrivialValues) {
  EXPECT_EQ(bessel_i(0, 0.0), 1.0);
  EXPECT_EQ(bessel_i(1, 0.0), 0.0);
  EXPECT_EQ(bessel_i(3, 0.0), 0.0);
}

TEST(BesselI, MatchesExtendedPrecisionSeries) {
  for (unsigned n : {0u, 1u, 2u, 5u}) {
    for (double z : {1e-3, 0.5, 2.0, 10.0, 35.0, 120.0}) {
      const double want = static_cast<double>(bessel_oracle(n, Big(z)));
      // exp(z) carries a relative error of order z * eps.
      EXPECT_LT(rel(bessel_i(n, z), want), 1e-15 + 4e-16 * z) << "n=" << n << " z=" << z;
    }
  }
  EXPECT_LT(rel(bessel_i(1, 2.0), static_cast<double>(bessel_oracle(1, Big(2)))), 1e-15);
}

TEST(BesselI, PositiveAndRecurrence) {
  for (double z : {0.5, 2.0, 10.0}) {
    for (unsigned n : {1u, 2u, 3u}) {
      EXPECT_GT(bessel_i(n, z), 0.0);
      const double lhs = bessel_i(n - 1, z) - bessel_i(n + 1, z);
      const double rhs = 2.0 * n / z * bessel_i(n, z);
      EXPECT_LT(rel(lhs, rhs), 1e-9);
    }
  }
}

TEST(BesselI, ScaledAgreesWithBoost) {
  for (unsigned n : {0u, 1u, 2u}) {
    for (double z : {0.1, 5.0, 39.9, 40.0, 100.0, 700.0}) {
      const double want = boost::math::cyl_bessel_i(static_cast<double>(n), z) * std::exp(-z);
      const double got = bessel_i_scaled(n, z);
      if (std::isfinite(want) && want > 0.0) {
        EXPECT_LT(rel(got, want), 1e-13) << "n=" << n << " z=" << z;
      }
    }
  }
  // Beyond double range of I_n itself.
  const double big = bessel_i_scaled(1, 5000.0);
  EXPECT_NEAR(big * std::sqrt(2.0 * M_PI * 5000.0), 1.0 - 3.0 / 40000.0, 1e-8);
}

TEST(BesselI, OverflowAndTruncationAreReported) {
  EXPECT_THROW(bessel_i(0, 800.0, SeriesControl{}.widened(2000)), DomainError);
  try {
    bessel_i(0, 200.0, SeriesControl{1e-12, 20, 3});
    FAIL() << "expected TruncationError";
  } catch (const TruncationError& e) {
    EXPECT_GT(e.last_term(), 0.0);
    EXPECT_GE(e.terms(), 20u);
  }
  EXPECT_THROW(bessel_i(0, -1.0), DomainError);
}

TEST(Hyper0F1, ValuesAndBesselIdentity) {
  EXPECT_EQ(hyper_0f1(1.0, 0.0), 1.0);
  const double want = static_cast<double>(pfq_oracle({}, {Big(2)}, Big(1)));
  EXPECT_LT(rel(hyper_0f1(2.0, 1.0), want), 1e-15);
  for (unsigned j : {0u, 1u, 4u}) {
    for (double z : {0.3, 2.0, 9.0}) {
      double fact = 1.0;
      for (unsigned i = 2; i <= j; ++i) fact *= i;
      const double viaBessel = fact * std::pow(z, -0.5 * j) * bessel_i(j, 2.0 * std::sqrt(z));
      EXPECT_LT(rel(hyper_0f1(j + 1.0, z), viaBessel), 1e-10);
    }
  }
  // Alternating series.
  const double neg = static_cast<double>(pfq_oracle({}, {Big("1.5")}, Big(-20)));
  EXPECT_NEAR(hyper_0f1(1.5, -20.0), neg, 1e-12);
}

TEST(Hyper0F1, PoleNamesIndex) {
  try {
    hyper_0f1(-2.0, 1.0);
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("index 3"), std::string::npos) << e.what();
  }
}

TEST(Hyper1F2, Values) {
  EXPECT_EQ(hyper_1f2(0.3, 1.2, 2.5, 0.0), 1.0);
  const double want = static_cast<double>(pfq_oracle({Big("-0.5")}, {Big(1), Big("1.5")}, Big("0.25")));
  EXPECT_LT(rel(hyper_1f2(-0.5, 1.0, 1.5, 0.25), want), 1e-15);
  // 1F2(1; 2, 2; z) = (I_0(2 sqrt z) - 1)/z.
  for (double z : {0.5, 4.0, 30.0}) {
    const double closed = (boost::math::cyl_bessel_i(0.0, 2.0 * std::sqrt(z)) - 1.0) / z;
    EXPECT_LT(rel(hyper_1f2(1.0, 2.0, 2.0, z), closed), 1e-13);
  }
  const double neg = static_cast<double>(pfq_oracle({Big(2)}, {Big(3), Big(2)}, Big(-15)));
  EXPECT_NEAR(hyper_1f2(2.0, 3.0, 2.0, -15.0), neg, 1e-12);
}

TEST(Hyper1F2, TerminationBeforePoleIsFine) {
  // a = -1 terminates after one term; the b = -3 pole lies beyond.
  EXPECT_DOUBLE_EQ(hyper_1f2(-1.0, -3.0, 1.0, 0.6), 1.0 + 0.6 / 3.0);
  EXPECT_THROW(hyper_1f2(-3.0, -1.0, 1.0, 0.6), DomainError);
}

TEST(Hyper2F1, TerminatingMatchesExactRational) {
  const Rational z(1, 3);
  for (int k : {1, 2, 5, 8}) {
    Rational term = 1;
    Rational sum = 1;
    for (int n = 0; n < k; ++n) {
      term *= Rational(-k + n) * Rational(k + 2 + n) / (Rational(k + 3 + n) * Rational(n + 1)) * z;
      sum += term;
    }
    const double want = static_cast<double>(sum);
    EXPECT_LT(rel(hyper_2f1(-k, k + 2.0, k + 3.0, 1.0 / 3.0), want), 1e-14) << "k=" << k;
  }
}

TEST(Hyper2F1, BinomialCollapseAndDomain) {
  EXPECT_EQ(hyper_2f1(0.2, 0.7, 1.3, 0.0), 1.0);
  EXPECT_LT(rel(hyper_2f1(1.5, 2.0, 2.0, 0.5), std::pow(0.5, -1.5)), 1e-12);
  EXPECT_THROW(hyper_2f1(0.5, 1.0, 2.0, 1.0), DomainError);
  EXPECT_THROW(hyper_2f1(0.5, 1.0, 2.0, -1.5), DomainError);
  // Terminating series are fine at any z.
  EXPECT_DOUBLE_EQ(hyper_2f1(-1.0, 2.0, 3.0, 4.0), 1.0 - 8.0 / 3.0);
  // Pole before termination.
  EXPECT_THROW(hyper_2f1(-3.0, 1.0, -1.0, 0.5), DomainError);
}

TEST(Hyper2F1, SlowConvergenceNearOne) {
  const double z = 4.0 * 2.0 * 1.5 / (3.5 * 3.5);
  const double want = static_cast<double>(pfq_oracle({Big(1), Big("1.5")}, {Big(2)}, Big(z)));
  EXPECT_THROW(hyper_2f1(1.0, 1.5, 2.0, z), TruncationError);
  EXPECT_LT(rel(hyper_2f1(1.0, 1.5, 2.0, z, SeriesControl{}.widened(5000)), want), 1e-10);
}

}  // namespace
