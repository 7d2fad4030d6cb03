#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "telegraph/model.hpp"
#include "telegraph/specfun.hpp"

// Closed-form distribution theory of the elastic telegraph process under
// exponential up/down times. Densities are evaluated from their series
// representations in extended precision; the integral representations are
// kept as independent cross-checks.
namespace telegraph::analytic {

using specfun::SeriesControl;

// Boundary-visit count.

/// P(M = m) = alpha (1-alpha)^{m-1}, m >= 1.
double geometric_pmf(unsigned m, const ModelParams& p);

// Compound Poisson building blocks.

/// Density of the cumulative downward time Y(t) on y > 0.
double h_density(double y, double t, const ModelParams& p, const SeriesControl& ctrl = {});

/// d/dy P[Y(t) <= y, T_0 > t] for 0 < y < t.
double g0_subdensity(double y, double t, const ModelParams& p, const SeriesControl& ctrl = {});

/// d/dy P[Y(t) <= y, T_x > t] for 0 < y < x + t, x = p.x > 0. The inner
/// integral of the y > x branch is done by adaptive quadrature.
double gx_subdensity(double y, double t, const ModelParams& p, const SeriesControl& ctrl = {});

// First-passage densities of the stopping times T_x.

/// Density of T_0 (equivalently the M/M/1 busy period with arrival rate mu
/// and service rate lambda).
double psi0(double t, const ModelParams& p, const SeriesControl& ctrl = {});

/// psi0 on a batch of points through the vectorized Bessel kernel.
void psi0_batch(std::span<const double> t, std::span<double> out, const ModelParams& p);

/// Density of T_x, x = p.x > 0, from its Bessel/1F2 double series.
double psi_x_series(double t, const ModelParams& p, const SeriesControl& ctrl = {});

/// psi0 when p.x == 0, psi_x_series otherwise.
double psi_x(double t, const ModelParams& p, const SeriesControl& ctrl = {});

/// Density of T_x from the general integral representation (x >= 0),
/// evaluated by nested quadrature. Slow; an independent oracle.
double psi_x_integral(double t, const ModelParams& p, double rel_tol = 1e-11);

// Renewal cycles and absorption times.

/// Density of C_0 = 2 T_0 in law: psi0(y/2)/2.
double pdf_c0(double y, const ModelParams& p, const SeriesControl& ctrl = {});
void pdf_c0_batch(std::span<const double> y, std::span<double> out, const ModelParams& p);

/// Density of C_x = x + 2 T_x in law: psi_x((y-x)/2)/2 for y > x, and 0 on
/// y <= x (outside the support; not a domain error).
double pdf_cx(double y, const ModelParams& p, const SeriesControl& ctrl = {});

/// Density of A_0 from its m-series of 1F2 terms. alpha = 1 gives pdf_c0.
double pdf_a0(double y, const ModelParams& p, const SeriesControl& ctrl = {});

/// Exponential decay rates of the densities (used as quadrature envelopes).
double decay_rate_t(const ModelParams& p);   // psi_x
double decay_rate_c(const ModelParams& p);   // f_C0, f_Cx
double decay_rate_a0(const ModelParams& p);  // f_A0, f_Ax

// Moment generating functions. Arguments at or above the abscissa of
// convergence (MgfDomain) are domain errors.

double mgf_c0(double s, const ModelParams& p);
double mgf_a0(double s, const ModelParams& p);
double mgf_tx(double s, const ModelParams& p);
double mgf_cx(double s, const ModelParams& p);
double mgf_ax(double s, const ModelParams& p);

/// exp{(x/2)[lambda - mu - sqrt((lambda+mu-2s)^2 - 4 lambda mu)]}, the factor
/// linking the x = 0 and x > 0 transforms.
double mgf_exp_factor(double s, const ModelParams& p);

// Moments.

struct MomentDiagnostics {
  std::size_t j_terms = 0;                // terms used in the j-series
  std::size_t pole_substitutions = 0;     // 2F1 pole cases summed as convolutions
  bool used_taylor_recursion = false;     // removable-singularity fallback
};

double moment_c0(unsigned n, const ModelParams& p, const SeriesControl& ctrl = {});
double moment_a0(unsigned n, const ModelParams& p, const SeriesControl& ctrl = {},
                 MomentDiagnostics* diag = nullptr);
double moment_cx(unsigned n, const ModelParams& p, const SeriesControl& ctrl = {},
                 MomentDiagnostics* diag = nullptr);
double moment_ax(unsigned n, const ModelParams& p, const SeriesControl& ctrl = {},
                 MomentDiagnostics* diag = nullptr);

/// Raw moments E[C_0^n], E[A_0^n], E[C_x^n], E[A_x^n] for n = 1..n_max
/// from the Taylor coefficients of the MGFs (exact recursions).
struct MomentTable {
  std::vector<double> c0, a0, cx, ax;
};
MomentTable moments_by_recursion(unsigned n_max, const ModelParams& p);

struct MeanVar {
  double E_Cx, Var_Cx, E_Ax, Var_Ax;
};

/// Means and variances of C_x and A_x in closed form.
MeanVar closed_mean_var(const ModelParams& p);

// Within-cycle conditional law (x = 0).

/// F_{Y(t),T_0}(y, tau) = P[Y(t) <= y, T_0 in d tau]/d tau for 0 <= y <= t < tau
/// from its multi-series. y = 0 gives the atom part e^{-lambda t} psi_t(tau - t).
double joint_subdist(double y, double tau, double t, const ModelParams& p, const SeriesControl& ctrl = {});

/// Same quantity from e^{-lambda t} psi_t(tau-t) + int_0^y g_0(u,t) psi_{t-u}(tau-t) du.
double joint_subdist_constructive(double y, double tau, double t, const ModelParams& p,
                                  double rel_tol = 1e-10);

/// Continuous part of P[X(t) <= xval | T_0 = tau], 0 <= xval <= t < tau.
double cond_cdf_within_cycle(double xval, double t, double tau, const ModelParams& p,
                             const SeriesControl& ctrl = {});

/// P[X(t) = t | T_0 = tau].
double cond_atom(double t, double tau, const ModelParams& p, const SeriesControl& ctrl = {});

/// Density of the continuous part: numerical derivative of the CDF in xval.
double cond_pdf_within_cycle(double xval, double t, double tau, const ModelParams& p,
                             const SeriesControl& ctrl = {});

struct CyclePoint {
  double t = 0.0;
  double tau = 0.0;
  double atom_prob = 0.0;
  std::vector<double> x;
  std::vector<double> cdf;  // continuous part
  std::vector<double> pdf;
};

CyclePoint cycle_point(double t, double tau, std::span<const double> xs, const ModelParams& p,
                       const SeriesControl& ctrl = {});

// Display equations reproduced as printed, for regression tests only.
namespace printed {

/// f_C0 with its leading factor lambda; integrates to lambda.
double pdf_c0_with_lambda(double y, const ModelParams& p);

/// Printed closed-form variances of C_x and A_x.
double var_cx(const ModelParams& p);
double var_ax(const ModelParams& p);

/// The printed moment series without the factor n!.
double moment_cx(unsigned n, const ModelParams& p);

}  // namespace printed

}  // namespace telegraph::analytic
