#pragma once

#include <cstddef>
#include <span>

// Data-parallel hot loops with a scalar reference implementation and an
// AVX2 variant chosen at runtime. Both variants run the same algorithm, so
// they agree to rounding (rel ~1e-14); tests check this.
namespace telegraph::kernels {

enum class Isa { scalar, avx2 };

/// Best variant supported by this build and CPU. TELEGRAPH_FORCE_SCALAR=1
/// in the environment pins the scalar path.
Isa detected_isa();

/// Variant currently used by the dispatching entry points.
Isa active_isa();

/// Overrides the dispatch choice (tests and benchmarks). Requesting an
/// unsupported variant falls back to scalar; returns the variant in effect.
Isa set_isa(Isa isa);

const char* isa_name(Isa isa);

/// out[i] = e^{-z[i]} I_n(z[i]) for n in {0,1}, z[i] >= 0.
void bessel_i_scaled(unsigned n, std::span<const double> z, std::span<double> out);

/// Kolmogorov-Smirnov sup distance given sorted samples' CDF values:
/// max_i max(F_i - i/N, (i+1)/N - F_i).
double ks_sup(std::span<const double> cdf_at_sorted);

/// Compensated sum.
double sum(std::span<const double> v);

/// Compensated sum of (v[i] - center)^2.
double sum_sq_dev(std::span<const double> v, double center);

// Direct access to each variant for equivalence testing.
namespace scalar {
void bessel_i_scaled(unsigned n, std::span<const double> z, std::span<double> out);
double ks_sup(std::span<const double> cdf_at_sorted);
double sum(std::span<const double> v);
double sum_sq_dev(std::span<const double> v, double center);
}  // namespace scalar

namespace avx2 {
bool available();
void bessel_i_scaled(unsigned n, std::span<const double> z, std::span<double> out);
double ks_sup(std::span<const double> cdf_at_sorted);
double sum(std::span<const double> v);
double sum_sq_dev(std::span<const double> v, double center);
}  // namespace avx2

}  // namespace telegraph::kernels
