#include <cmath>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>
#include <gtest/gtest.h>

#include "telegraph/analytic.hpp"
#include "telegraph/errors.hpp"
#include "telegraph/numeric.hpp"

namespace {

using namespace telegraph;
using namespace telegraph::analytic;
using numeric::integrate;
using numeric::kInf;
using numeric::QuadOptions;

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

double integral(const numeric::Integrand& f, double lo, double decay) {
  QuadOptions o;
  o.rel_tol = 1e-11;
  o.decay_rate = decay;
  return integrate(f, lo, kInf, o).value;
}

// A_0 is the sum of M i.i.d. copies of 2 T_0, and the sum of m busy periods
// is the M/M/1 first-passage time from level m to 0.
double a0_mixture_oracle(double y, const ModelParams& p) {
  double s = 0.0;
  for (int m = 1; m < 400; ++m) {
    s += p.alpha * std::pow(1.0 - p.alpha, m - 1) * (m / y) * std::pow(p.lambda / p.mu, 0.5 * m) *
         std::exp(-0.5 * (p.lambda + p.mu) * y) * boost::math::cyl_bessel_i(m, y * std::sqrt(p.lambda * p.mu));
  }
  return s;
}

TEST(ModelParams, Validation) {
  EXPECT_NO_THROW((ModelParams{2.0, 0.5, 0.3, 1.0}.validate()));
  EXPECT_THROW((ModelParams{2.0, 2.0, 0.3, 0.0}.validate()), DomainError);
  EXPECT_THROW((ModelParams{2.0, 0.0, 0.3, 0.0}.validate()), DomainError);
  EXPECT_THROW((ModelParams{2.0, 0.5, 0.0, 0.0}.validate()), DomainError);
  EXPECT_THROW((ModelParams{2.0, 0.5, 1.1, 0.0}.validate()), DomainError);
  EXPECT_THROW((ModelParams{2.0, 0.5, 0.5, -1.0}.validate()), DomainError);
  EXPECT_THROW((ModelParams{NAN, 0.5, 0.5, 0.0}.validate()), DomainError);
}

TEST(GeometricPmf, ValuesAndNormalization) {
  const ModelParams p{2.0, 0.5, 0.3, 0.0};
  EXPECT_DOUBLE_EQ(geometric_pmf(1, p), 0.3);
  double s = 0.0;
  for (unsigned m = 1; m < 400; ++m) s += geometric_pmf(m, p);
  EXPECT_NEAR(s, 1.0, 1e-14);
  EXPECT_THROW(geometric_pmf(0, p), DomainError);
}

TEST(HDensity, MassSmallYLimitAndPositivity) {
  const ModelParams p{2.0, 0.5, 1.0, 0.0};
  for (double t : {0.3, 1.0, 4.0}) {
    const double mass = integral([&](double y) { return h_density(y, t, p); }, 0.0, p.mu);
    EXPECT_NEAR(mass, 1.0 - std::exp(-p.lambda * t), 1e-10) << "t=" << t;
    EXPECT_NEAR(h_density(1e-9, t, p) / (p.lambda * p.mu * t * std::exp(-p.lambda * t)), 1.0, 1e-6);
  }
  for (int i = 1; i <= 20; ++i)
    for (int j = 1; j <= 20; ++j) EXPECT_GE(h_density(0.5 * i, 0.5 * j, p), 0.0);
  EXPECT_THROW(h_density(0.0, 1.0, p), DomainError);
  EXPECT_THROW(h_density(1.0, -1.0, p), DomainError);
}

TEST(G0Subdensity, FactorAndEndpoint) {
  const ModelParams p{2.0, 0.5, 1.0, 0.0};
  const double t = 1.5;
  for (double y : {0.1, 0.7, 1.2}) {
    EXPECT_NEAR(g0_subdensity(y, t, p), (t - y) / t * h_density(y, t, p), 1e-15);
    EXPECT_LE(g0_subdensity(y, t, p), h_density(y, t, p));
  }
  EXPECT_LT(g0_subdensity(t - 1e-10, t, p), 1e-9);
  EXPECT_THROW(g0_subdensity(t, t, p), DomainError);
}

TEST(GxSubdensity, BranchesAndContinuity) {
  const ModelParams p{2.0, 0.5, 1.0, 1.0};
  const double t = 1.0;
  EXPECT_DOUBLE_EQ(gx_subdensity(0.4, t, p), h_density(0.4, t, p));
  const double left = gx_subdensity(1.0 - 1e-9, t, p);
  const double right = gx_subdensity(1.0 + 1e-9, t, p);
  EXPECT_LT(rel(left, right), 1e-8);
  EXPECT_GE(gx_subdensity(1.9, t, p), 0.0);
  EXPECT_THROW(gx_subdensity(2.0, t, p), DomainError);
  EXPECT_THROW(gx_subdensity(0.5, t, p.with_x(0.0)), DomainError);
}

TEST(Psi0, NormalizationAndLimit) {
  for (double mu : {0.5, 1.5}) {
    const ModelParams p{2.0, mu, 1.0, 0.0};
    EXPECT_NEAR(integral([&](double t) { return psi0(t, p); }, 0.0, decay_rate_t(p)), 1.0, 1e-9);
    EXPECT_NEAR(psi0(1e-10, p), p.lambda, 1e-8);
  }
  EXPECT_THROW(psi0(0.0, ModelParams{}), DomainError);
}

TEST(Psi0, EqualsBusyPeriodDensity) {
  // Busy period of an M/M/1 queue with arrival rate a and service rate b.
  const double a = 0.5;
  const double b = 2.0;
  const ModelParams p{b, a, 1.0, 0.0};
  for (double t = 0.1; t <= 5.0 + 1e-12; t += 0.1) {
    const double bp = std::sqrt(b / a) * std::exp(-(a + b) * t) *
                      boost::math::cyl_bessel_i(1.0, 2.0 * t * std::sqrt(a * b)) / t;
    EXPECT_LT(rel(psi0(t, p), bp), 1e-10) << "t=" << t;
  }
}

TEST(PsiX, FrozenValues) {
  const ModelParams p{2.0, 0.5, 1.0, 1.0};
  EXPECT_LT(rel(psi_x_series(0.5, p), 0.60597721286761774), 1e-13);
  EXPECT_LT(rel(psi_x_series(1.0, p), 0.33094380320509198), 1e-13);
  EXPECT_LT(rel(psi_x_series(2.0, p), 0.11715643065563167), 1e-13);
  EXPECT_LT(rel(psi0(1.0, p.with_x(0.0)), 0.2611348480480557), 1e-13);
}

TEST(PsiX, SeriesAgreesWithIntegralForm) {
  const ModelParams p{2.0, 0.5, 1.0, 1.0};
  for (auto [x, t] : std::vector<std::pair<double, double>>{{1.0, 0.5}, {1.0, 1.0}, {2.0, 1.0}, {0.3, 2.5}}) {
    const auto q = p.with_x(x);
    EXPECT_LT(rel(psi_x_series(t, q), psi_x_integral(t, q)), 1e-8) << "x=" << x << " t=" << t;
  }
  EXPECT_LT(rel(psi_x_integral(1.0, p.with_x(0.0)), psi0(1.0, p)), 1e-8);
}

TEST(PsiX, SmallXTendsToPsi0) {
  const ModelParams p{2.0, 0.5, 1.0, 1e-6};
  for (double t : {0.5, 1.0, 2.0}) EXPECT_LT(rel(psi_x_series(t, p), psi0(t, p)), 1e-4);
  EXPECT_EQ(psi_x(1.0, p.with_x(0.0)), psi0(1.0, p));
}

TEST(PsiX, NormalizationAndShortTimeLimit) {
  for (double x : {1.0, 2.0}) {
    const ModelParams p{2.0, 0.5, 1.0, x};
    EXPECT_NEAR(integral([&](double t) { return psi_x_series(t, p); }, 0.0, decay_rate_t(p)), 1.0, 1e-8);
    EXPECT_LT(rel(psi_x_series(1e-9, p), p.lambda * std::exp(-p.mu * x)), 1e-6);
  }
}

TEST(PdfC0, ScalingAndMean) {
  const ModelParams p{2.0, 0.5, 1.0, 0.0};
  for (double y : {0.2, 1.0, 7.0}) EXPECT_DOUBLE_EQ(pdf_c0(y, p), 0.5 * psi0(0.5 * y, p));
  const double mean = integral([&](double y) { return y * pdf_c0(y, p); }, 0.0, decay_rate_c(p));
  EXPECT_NEAR(mean, 2.0 / (p.lambda - p.mu), 1e-9);
  std::vector<double> y{0.1, 2.0, 9.0};
  std::vector<double> out(3);
  pdf_c0_batch(y, out, p);
  for (int i = 0; i < 3; ++i) EXPECT_LT(rel(out[i], pdf_c0(y[i], p)), 1e-12);
}

TEST(PdfCx, BoundaryValueSupportAndLimits) {
  const ModelParams p{2.0, 0.5, 1.0, 1.0};
  EXPECT_LT(rel(pdf_cx(1.0 + 1e-6, p), p.lambda * std::exp(-p.mu) / 2.0), 1e-6);
  EXPECT_EQ(pdf_cx(1.0, p), 0.0);
  EXPECT_EQ(pdf_cx(0.3, p), 0.0);
  EXPECT_DOUBLE_EQ(pdf_cx(2.4, p), 0.5 * psi_x_series(0.7, p));
  const auto small = p.with_x(1e-6);
  for (double y : {0.5, 2.0, 4.0}) EXPECT_LT(rel(pdf_cx(y, small), pdf_c0(y, small)), 1e-4);
}

TEST(PdfCx, Figure3OrderingNearOrigin) {
  for (double x : {1.0, 2.0}) {
    double prev = kInf;
    for (double mu : {0.1, 0.5, 1.0, 1.5}) {
      const double v = pdf_cx(x + 0.01, ModelParams{2.0, mu, 1.0, x});
      EXPECT_LT(v, prev) << "x=" << x << " mu=" << mu;
      prev = v;
    }
  }
}

TEST(PdfA0, MatchesBesselMixtureOracle) {
  for (double mu : {0.5, 1.5}) {
    for (double a : {0.1, 0.5, 0.9}) {
      const ModelParams p{2.0, mu, a, 0.0};
      for (double y : {0.01, 0.5, 2.0, 5.0, 10.0, 30.0}) {
        EXPECT_LT(rel(pdf_a0(y, p), a0_mixture_oracle(y, p)), 1e-12) << mu << " " << a << " " << y;
      }
    }
  }
}

TEST(PdfA0, FrozenValuesAndBoundary) {
  const ModelParams p{2.0, 0.5, 0.5, 0.0};
  EXPECT_LT(rel(pdf_a0(0.5, p), 0.35364125126981782), 1e-13);
  EXPECT_LT(rel(pdf_a0(2.0, p), 0.15884359021467193), 1e-13);
  EXPECT_LT(rel(pdf_a0(10.0, p), 0.010223523169860868), 1e-13);
  EXPECT_LT(rel(pdf_a0(1e-6, p), p.alpha * p.lambda / 2.0), 1e-6);
}

TEST(PdfA0, NormalizationMeanAndMonotonicity) {
  const ModelParams p{2.0, 0.5, 0.5, 0.0};
  auto f = [&](double y) { return pdf_a0(y, p); };
  EXPECT_NEAR(integral(f, 0.0, decay_rate_a0(p)), 1.0, 1e-9);
  EXPECT_NEAR(integral([&](double y) { return y * f(y); }, 0.0, decay_rate_a0(p)), 8.0 / 3.0, 1e-8);
  double prev = kInf;
  for (double y = 0.05; y < 10.0; y += 0.05) {
    EXPECT_LT(f(y), prev);
    prev = f(y);
  }
}

TEST(PdfA0, AlphaOneIsC0) {
  const ModelParams p{2.0, 1.5, 1.0, 0.0};
  for (double y : {0.1, 1.0, 3.0, 12.0}) EXPECT_DOUBLE_EQ(pdf_a0(y, p), pdf_c0(y, p));
}

}  // namespace
