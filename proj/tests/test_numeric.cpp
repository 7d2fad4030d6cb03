#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>
#include <gtest/gtest.h>

#include "telegraph/analytic.hpp"
#include "telegraph/errors.hpp"
#include "telegraph/numeric.hpp"

namespace {

using namespace telegraph;
using namespace telegraph::numeric;

TEST(Integrate, ExponentialDensity) {
  QuadOptions o;
  o.rel_tol = 1e-10;
  const auto r = integrate([](double t) { return 2.0 * std::exp(-2.0 * t); }, 0.0, kInf, o);
  EXPECT_NEAR(r.value, 1.0, 1e-10);
  EXPECT_GE(r.abs_error_estimate, r.tail_bound);
  EXPECT_GT(r.evaluations, 0u);
}

TEST(Integrate, PolynomialTimesExponential) {
  // int_0^inf t^k e^{-a t} dt = k!/a^{k+1}.
  for (int k : {0, 1, 3, 6}) {
    for (double a : {0.3, 1.0, 4.0}) {
      double fact = 1.0;
      for (int i = 2; i <= k; ++i) fact *= i;
      const double want = fact / std::pow(a, k + 1);
      const double got =
          integrate([&](double t) { return std::pow(t, k) * std::exp(-a * t); }, 0.0, kInf, 1e-11).value;
      EXPECT_NEAR(got / want, 1.0, 1e-9) << "k=" << k << " a=" << a;
    }
  }
  // Finite interval, polynomial: exact.
  EXPECT_NEAR(integrate([](double x) { return x * x * x - x; }, -1.0, 2.0, 1e-12).value, 15.0 / 4.0 - 1.5, 1e-13);
}

TEST(Integrate, LaplaceTransformOfBesselI1) {
  const double p = 1.25;
  const double c = 1.0;
  const double want = (p / std::sqrt(p * p - c * c) - 1.0) / c;
  QuadOptions o;
  o.rel_tol = 1e-11;
  o.decay_rate = p - c;
  const double got = integrate(
      [&](double t) { return std::exp(-p * t) * boost::math::cyl_bessel_i(1.0, c * t); }, 0.0, kInf, o).value;
  EXPECT_NEAR(got / want, 1.0, 1e-9);
}

TEST(Integrate, Psi0Normalization) {
  const ModelParams p{2.0, 0.5, 1.0, 0.0};
  QuadOptions o;
  o.decay_rate = analytic::decay_rate_t(p);
  EXPECT_NEAR(integrate([&](double t) { return analytic::psi0(t, p); }, 0.0, kInf, o).value, 1.0, 1e-10);
}

TEST(Integrate, EstimatesDecayWhenUnknown) {
  const auto r = integrate([](double t) { return 0.5 * std::exp(-0.5 * t); }, 0.0, kInf, 1e-10);
  EXPECT_NEAR(r.value, 1.0, 1e-9);
}

TEST(Integrate, ErrorsAreReported) {
  EXPECT_THROW(integrate([](double) { return 1.0; }, 1.0, 1.0, 1e-8), DomainError);
  EXPECT_THROW(integrate([](double) { return 1.0; }, 0.0, kInf, 1e-8), QuadratureError);
  QuadOptions o;
  o.max_subdivisions = 5;
  EXPECT_THROW(integrate([](double x) { return std::sin(1.0 / x); }, 1e-4, 1.0, o), QuadratureError);
}

TEST(Integrate, BatchIntegrandMatchesScalar) {
  const Integrand batch = Integrand::batch([](std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::cos(x[i]);
  });
  EXPECT_NEAR(integrate(batch, 0.0, 1.0, 1e-12).value, std::sin(1.0), 1e-14);
}

TEST(CumulativeIntegral, MatchesClosedFormCdf) {
  const std::vector<double> x{0.0, 0.1, 0.5, 0.5, 2.0, 7.0};
  const auto f = cumulative_integral([](double t) { return std::exp(-t); }, 0.0, x);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(f[i], 1.0 - std::exp(-x[i]), 1e-13);
  const std::vector<double> bad{1.0, 0.5};
  EXPECT_THROW(cumulative_integral([](double) { return 1.0; }, 0.0, bad), DomainError);
}

TEST(NumericMgf, AgreesWithClosedForms) {
  const ModelParams p{2.0, 0.5, 0.5, 0.0};
  auto c0 = [&](double y) { return analytic::pdf_c0(y, p); };
  EXPECT_NEAR(numeric_mgf(c0, 0.0, 0.0, analytic::decay_rate_c(p)), 1.0, 1e-10);
  EXPECT_NEAR(numeric_mgf(c0, 0.2, 0.0, analytic::decay_rate_c(p)) / analytic::mgf_c0(0.2, p), 1.0, 1e-8);
  auto a0 = [&](double y) { return analytic::pdf_a0(y, p); };
  EXPECT_NEAR(numeric_mgf(a0, -1.0, 0.0, analytic::decay_rate_a0(p)) / analytic::mgf_a0(-1.0, p), 1.0, 1e-8);
  EXPECT_THROW(numeric_mgf(c0, 1.0, 0.0, analytic::decay_rate_c(p)), DomainError);
}

TEST(NumericMoment, MeanOfC0) {
  const ModelParams p{2.0, 0.5, 1.0, 0.0};
  const double m = numeric_moment([&](double y) { return analytic::pdf_c0(y, p); }, 1, 0.0, analytic::decay_rate_c(p));
  EXPECT_NEAR(m, 4.0 / 3.0, 1e-9);
}

TEST(CdfDerivative, InteriorAndEndpoints) {
  auto cdf = [](double x) { return 1.0 - std::exp(-2.0 * x); };
  EXPECT_NEAR(cdf_derivative(cdf, 0.7, 1e-2), 2.0 * std::exp(-1.4), 1e-8);
  EXPECT_NEAR(cdf_derivative(cdf, 0.0, 1e-2, 0.0, 1.0), 2.0, 1e-6);
  EXPECT_NEAR(cdf_derivative(cdf, 1.0, 1e-2, 0.0, 1.0), 2.0 * std::exp(-2.0), 1e-6);
  EXPECT_NEAR(cdf_derivative(cdf, 0.995, 1e-2, 0.0, 1.0), 2.0 * std::exp(-1.99), 1e-6);
  EXPECT_THROW(cdf_derivative(cdf, 2.0, 1e-2, 0.0, 1.0), DomainError);
}

TEST(Ks, NullCalibration) {
  // Under H0 the statistic exceeds 1.63/sqrt(N) with probability ~1%.
  std::mt19937_64 g(11);
  std::exponential_distribution<double> e(1.5);
  int rejections = 0;
  const int reps = 200;
  for (int r = 0; r < reps; ++r) {
    std::vector<double> v(2000);
    for (auto& x : v) x = e(g);
    const double d = ks_statistic(v, [](double x) { return 1.0 - std::exp(-1.5 * x); });
    if (d > ks_critical_1pct(v.size())) ++rejections;
    EXPECT_GE(ks_pvalue(d, v.size()), 0.0);
  }
  EXPECT_LE(rejections, 8);
  EXPECT_NEAR(ks_critical_1pct(10000), 0.0163, 1e-12);
}

TEST(Ks, PvalueMonotone) {
  EXPECT_GT(ks_pvalue(0.01, 1000), ks_pvalue(0.05, 1000));
  EXPECT_NEAR(ks_pvalue(1.63 / std::sqrt(1e6), 1000000), 0.01, 2e-3);
}

TEST(Summary, MomentsAndAutocorrelation) {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const auto s = summarize(v);
  EXPECT_EQ(s.n, 4u);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_DOUBLE_EQ(s.variance, 5.0 / 3.0);
  EXPECT_DOUBLE_EQ(s.std_error, std::sqrt(5.0 / 12.0));
  // sum (v_i - m)(v_{i-1} - m) / sum (v_i - m)^2 = (-0.75 + 0.25 - 0.75)/5 ... computed directly:
  EXPECT_DOUBLE_EQ(s.lag1_autocorrelation, ((-0.5) * (-1.5) + 0.5 * (-0.5) + 1.5 * 0.5) / 5.0);
}

TEST(ChiSquare, Basic) {
  const std::vector<std::size_t> obs{10, 20, 30};
  const std::vector<double> pr{1.0 / 6, 2.0 / 6, 3.0 / 6};
  EXPECT_DOUBLE_EQ(chi_square(obs, pr, 60), 0.0);
  const std::vector<std::size_t> obs2{12, 18, 30};
  EXPECT_NEAR(chi_square(obs2, pr, 60), 4.0 / 10 + 4.0 / 20, 1e-14);
}

}  // namespace
