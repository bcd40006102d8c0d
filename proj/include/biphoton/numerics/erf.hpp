#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "biphoton/numerics/grid.hpp"

namespace biphoton {

namespace detail {

inline constexpr double kInvSqrtPi = 0.56418958354775628694807945156077;

// erf(z) = 2z/sqrt(pi) exp(-z^2) sum_n (2z^2)^n / (2n+1)!!
// Worst cancellation grows like exp(|z|^2), so this is used for |z| <= 3 only.
inline complex erf_kummer_series(complex z) {
  const complex two_z2 = 2.0 * z * z;
  complex term = 1.0;
  complex sum = 1.0;
  const double min_terms = std::abs(two_z2);
  for (int n = 1; n < 500; ++n) {
    term *= two_z2 / static_cast<double>(2 * n + 1);
    sum += term;
    if (n > min_terms && std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return 2.0 * kInvSqrtPi * z * std::exp(-z * z) * sum;
}

// Maclaurin series. Accurate near the imaginary axis where erf grows like
// exp(y^2) and the terms do not cancel.
inline complex erf_maclaurin(complex z) {
  const complex z2 = z * z;
  complex power = z;
  complex sum = z;
  for (int n = 1; n < 5000; ++n) {
    power *= -z2 / static_cast<double>(n);
    const complex term = power / static_cast<double>(2 * n + 1);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return 2.0 * kInvSqrtPi * sum;
}

// Faddeeva function w(zeta) for Im(zeta) > 0 from the Laplace continued
// fraction w = (i/sqrt(pi)) / (zeta - (1/2)/(zeta - 1/(zeta - (3/2)/...))),
// evaluated with the modified Lentz algorithm.
inline complex faddeeva_continued_fraction(complex zeta) {
  constexpr double tiny = 1e-300;
  complex f = zeta;
  complex c = f;
  complex d = 0.0;
  for (int n = 1; n < 200000; ++n) {
    const double a = -0.5 * static_cast<double>(n);
    d = zeta + a * d;
    if (d == complex{}) d = tiny;
    d = 1.0 / d;
    c = zeta + a / c;
    if (c == complex{}) c = tiny;
    const complex delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return complex(0.0, kInvSqrtPi) / f;
}

}  // namespace detail

// Error function of a complex argument (entire). Three evaluation routes:
// inside |z| <= 2 the Kummer series where |Re z| >= |Im z| and the Maclaurin
// series otherwise (each alternates badly in the other sector), the Maclaurin
// series in the strip |Re z| < 1/2, and erfc(z) = exp(-z^2) w(iz) elsewhere. Relative accuracy is
// better than 1e-12 for |z| < 1e3 away from the overflow region |Im z| > 26.
inline complex complex_erf(complex z) {
  if (std::abs(z) <= 2.0)
    return std::abs(z.real()) >= std::abs(z.imag()) ? detail::erf_kummer_series(z) : detail::erf_maclaurin(z);
  if (z.real() < 0.0) return -complex_erf(-z);
  if (z.real() < 0.5) return detail::erf_maclaurin(z);
  const complex w = detail::faddeeva_continued_fraction(complex(-z.imag(), z.real()));
  return 1.0 - std::exp(-z * z) * w;
}

// Principal square root of i/alpha for real nonzero alpha:
// exp(+i pi/4)/sqrt(alpha) for alpha > 0, exp(-i pi/4)/sqrt(|alpha|) for alpha < 0.
inline complex sqrt_i_over(double alpha) {
  return std::sqrt(complex(0.0, 1.0 / alpha));
}

}  // namespace biphoton
