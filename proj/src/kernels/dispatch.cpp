#include <atomic>
#include <cstdlib>
#include <cstring>

#include "telegraph/kernels.hpp"

#ifndef TELEGRAPH_HAVE_AVX2
#define TELEGRAPH_HAVE_AVX2 0
#endif

namespace telegraph::kernels {

#if !TELEGRAPH_HAVE_AVX2
namespace avx2 {
bool available() { return false; }
void bessel_i_scaled(unsigned n, std::span<const double> z, std::span<double> out) {
  scalar::bessel_i_scaled(n, z, out);
}
double ks_sup(std::span<const double> f) { return scalar::ks_sup(f); }
double sum(std::span<const double> v) { return scalar::sum(v); }
double sum_sq_dev(std::span<const double> v, double center) { return scalar::sum_sq_dev(v, center); }
}  // namespace avx2
#endif

namespace {

bool force_scalar_env() {
  const char* v = std::getenv("TELEGRAPH_FORCE_SCALAR");
  return v != nullptr && std::strcmp(v, "") != 0 && std::strcmp(v, "0") != 0;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detected_isa()};
  return isa;
}

}  // namespace

Isa detected_isa() {
  if (force_scalar_env()) return Isa::scalar;
  return avx2::available() ? Isa::avx2 : Isa::scalar;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

Isa set_isa(Isa isa) {
  if (isa == Isa::avx2 && !avx2::available()) isa = Isa::scalar;
  current().store(isa, std::memory_order_relaxed);
  return isa;
}

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

void bessel_i_scaled(unsigned n, std::span<const double> z, std::span<double> out) {
  if (active_isa() == Isa::avx2) {
    avx2::bessel_i_scaled(n, z, out);
  } else {
    scalar::bessel_i_scaled(n, z, out);
  }
}

double ks_sup(std::span<const double> f) {
  if (f.empty()) return 0.0;
  return active_isa() == Isa::avx2 ? avx2::ks_sup(f) : scalar::ks_sup(f);
}

double sum(std::span<const double> v) {
  return active_isa() == Isa::avx2 ? avx2::sum(v) : scalar::sum(v);
}

double sum_sq_dev(std::span<const double> v, double center) {
  return active_isa() == Isa::avx2 ? avx2::sum_sq_dev(v, center) : scalar::sum_sq_dev(v, center);
}

}  // namespace telegraph::kernels
