#pragma once

#include <array>
#include <cmath>
#include <numbers>

namespace telegraph::kernels::detail {

// Power series below, Hankel expansion at and above.
inline constexpr double kHankelThreshold = 40.0;
inline constexpr int kSeriesTerms = 64;
inline constexpr int kHankelTerms = 24;

// 1/(k(k+n)) for k = 1..kSeriesTerms, n in {0,1}.
struct SeriesTable {
  std::array<double, kSeriesTerms + 1> inv[2];
  SeriesTable() {
    for (int n = 0; n < 2; ++n) {
      inv[n][0] = 0.0;
      for (int k = 1; k <= kSeriesTerms; ++k) inv[n][k] = 1.0 / (static_cast<double>(k) * (k + n));
    }
  }
};

// -(4n^2 - (2k-1)^2) / (8k) for k = 1..kHankelTerms.
struct HankelTable {
  std::array<double, kHankelTerms + 1> coef[2];
  HankelTable() {
    for (int n = 0; n < 2; ++n) {
      coef[n][0] = 0.0;
      for (int k = 1; k <= kHankelTerms; ++k) {
        const double odd = 2.0 * k - 1.0;
        coef[n][k] = -(4.0 * n * n - odd * odd) / (8.0 * k);
      }
    }
  }
};

inline const SeriesTable& series_table() {
  static const SeriesTable t;
  return t;
}

inline const HankelTable& hankel_table() {
  static const HankelTable t;
  return t;
}

inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

}  // namespace telegraph::kernels::detail
