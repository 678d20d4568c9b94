#pragma once

// Closed-form entries, purity and determinant of rho(x) in the standard basis.
// Shared by the public physicality test and the integrator's inner loop.

#include <numbers>

#include "qutrit/bloch.hpp"

namespace qutrit::detail {

inline constexpr double kInvSqrt3 = 1.0 / std::numbers::sqrt3;

struct Diagonal {
  double a;  // rho_11
  double b;  // rho_22
  double c;  // rho_33
};

inline Diagonal diagonal_of(double x3, double x8) {
  return {1.0 / 3.0 + 0.5 * x3 + 0.5 * kInvSqrt3 * x8, 1.0 / 3.0 - kInvSqrt3 * x8,
          1.0 / 3.0 - 0.5 * x3 + 0.5 * kInvSqrt3 * x8};
}

// rho_12 = (x1 - i x2)/2, rho_13 = (x4 - i x5)/2, rho_23 = (x6 + i x7)/2.

inline double purity_of(const Coords& x, const Diagonal& d) {
  const double off = x[0] * x[0] + x[1] * x[1] + x[3] * x[3] + x[4] * x[4] + x[5] * x[5] +
                     x[6] * x[6];
  return d.a * d.a + d.b * d.b + d.c * d.c + 0.5 * off;
}

inline double det_of(const Coords& x, const Diagonal& d) {
  // 8 Re(rho_12 rho_23 rho_31)
  const double triple =
      (x[0] * x[5] + x[1] * x[6]) * x[3] - (x[0] * x[6] - x[1] * x[5]) * x[4];
  return d.a * d.b * d.c + 0.25 * triple - 0.25 * d.a * (x[5] * x[5] + x[6] * x[6]) -
         0.25 * d.b * (x[3] * x[3] + x[4] * x[4]) - 0.25 * d.c * (x[0] * x[0] + x[1] * x[1]);
}

inline bool psd_from(double purity, double det) {
  return purity <= 1.0 + kPhysicalTolerance && det >= -kPhysicalTolerance;
}

}  // namespace qutrit::detail
