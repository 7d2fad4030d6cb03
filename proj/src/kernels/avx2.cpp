#include <immintrin.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "common.hpp"
#include "telegraph/kernels.hpp"

namespace telegraph::kernels::avx2 {

namespace {

inline __m256d abs_pd(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

// Neumaier step on four lanes.
inline void neumaier(__m256d& s, __m256d& c, __m256d x) {
  const __m256d t = _mm256_add_pd(s, x);
  const __m256d s_big = _mm256_cmp_pd(abs_pd(s), abs_pd(x), _CMP_GE_OQ);
  const __m256d a = _mm256_add_pd(_mm256_sub_pd(s, t), x);
  const __m256d b = _mm256_add_pd(_mm256_sub_pd(x, t), s);
  c = _mm256_add_pd(c, _mm256_blendv_pd(b, a, s_big));
  s = t;
}

inline double hsum(__m256d v) {
  alignas(32) std::array<double, 4> a;
  _mm256_store_pd(a.data(), v);
  return (a[0] + a[1]) + (a[2] + a[3]);
}

void bessel_block(unsigned n, const double* z, double* out) {
  const auto& inv = detail::series_table().inv[n];
  const auto& coef = detail::hankel_table().coef[n];
  const __m256d zv = _mm256_loadu_pd(z);

  // Power series with Kahan compensation, identical to the scalar loop.
  const __m256d h = _mm256_mul_pd(_mm256_set1_pd(0.5), zv);
  const __m256d q = _mm256_mul_pd(h, h);
  __m256d term = n == 0 ? _mm256_set1_pd(1.0) : h;
  __m256d s = term;
  __m256d c = _mm256_setzero_pd();
  for (int k = 1; k <= detail::kSeriesTerms; ++k) {
    term = _mm256_mul_pd(term, _mm256_mul_pd(q, _mm256_set1_pd(inv[k])));
    const __m256d y = _mm256_sub_pd(term, c);
    const __m256d t = _mm256_add_pd(s, y);
    c = _mm256_sub_pd(_mm256_sub_pd(t, s), y);
    s = t;
  }

  // Hankel expansion.
  const __m256d rz = _mm256_div_pd(_mm256_set1_pd(1.0), zv);
  __m256d ht = _mm256_set1_pd(1.0);
  __m256d hs = ht;
  for (int k = 1; k <= detail::kHankelTerms; ++k) {
    ht = _mm256_mul_pd(ht, _mm256_mul_pd(_mm256_set1_pd(coef[k]), rz));
    hs = _mm256_add_pd(hs, ht);
  }

  alignas(32) std::array<double, 4> zs, ss, hss;
  _mm256_store_pd(zs.data(), zv);
  _mm256_store_pd(ss.data(), s);
  _mm256_store_pd(hss.data(), hs);
  for (int i = 0; i < 4; ++i) {
    out[i] = zs[i] < detail::kHankelThreshold ? ss[i] * std::exp(-zs[i])
                                              : hss[i] * detail::kInvSqrt2Pi / std::sqrt(zs[i]);
  }
}

}  // namespace

bool available() { return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"); }

void bessel_i_scaled(unsigned n, std::span<const double> z, std::span<double> out) {
  if (n > 1) throw std::invalid_argument("kernels::bessel_i_scaled: order must be 0 or 1");
  if (out.size() < z.size()) throw std::invalid_argument("kernels::bessel_i_scaled: output too short");
  std::size_t i = 0;
  for (; i + 4 <= z.size(); i += 4) bessel_block(n, z.data() + i, out.data() + i);
  if (i < z.size()) {
    // Pad the tail block with a harmless argument.
    std::array<double, 4> zt{1.0, 1.0, 1.0, 1.0};
    std::array<double, 4> ot{};
    std::copy(z.begin() + static_cast<std::ptrdiff_t>(i), z.end(), zt.begin());
    bessel_block(n, zt.data(), ot.data());
    std::copy_n(ot.begin(), z.size() - i, out.begin() + static_cast<std::ptrdiff_t>(i));
  }
}

double ks_sup(std::span<const double> f) {
  const std::size_t n = f.size();
  __m256d dmax = _mm256_setzero_pd();
  __m256d idx = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
  const __m256d step = _mm256_set1_pd(4.0);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d nv = _mm256_set1_pd(static_cast<double>(n));
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d fv = _mm256_loadu_pd(f.data() + i);
    const __m256d lo = _mm256_div_pd(idx, nv);
    const __m256d hi = _mm256_div_pd(_mm256_add_pd(idx, one), nv);
    dmax = _mm256_max_pd(dmax, _mm256_max_pd(_mm256_sub_pd(fv, lo), _mm256_sub_pd(hi, fv)));
    idx = _mm256_add_pd(idx, step);
  }
  alignas(32) std::array<double, 4> a;
  _mm256_store_pd(a.data(), dmax);
  double d = std::max(std::max(a[0], a[1]), std::max(a[2], a[3]));
  for (; i < n; ++i) {
    const double lo = static_cast<double>(i) / static_cast<double>(n);
    const double hi = static_cast<double>(i + 1) / static_cast<double>(n);
    d = std::max(d, std::max(f[i] - lo, hi - f[i]));
  }
  return d;
}

double sum(std::span<const double> v) {
  __m256d s = _mm256_setzero_pd();
  __m256d c = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= v.size(); i += 4) neumaier(s, c, _mm256_loadu_pd(v.data() + i));
  double tail = 0.0;
  for (; i < v.size(); ++i) tail += v[i];
  return hsum(s) + (hsum(c) + tail);
}

double sum_sq_dev(std::span<const double> v, double center) {
  const __m256d cv = _mm256_set1_pd(center);
  __m256d s = _mm256_setzero_pd();
  __m256d c = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= v.size(); i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(v.data() + i), cv);
    neumaier(s, c, _mm256_mul_pd(d, d));
  }
  double tail = 0.0;
  for (; i < v.size(); ++i) tail += (v[i] - center) * (v[i] - center);
  return hsum(s) + (hsum(c) + tail);
}

}  // namespace telegraph::kernels::avx2
