#pragma once

#include <cmath>

namespace cavchain {

// Bessel function of the first kind, order zero.
//
// Power series sum_m (-1)^m (x^2/4)^m / (m!)^2 for moderate arguments,
// accumulated in extended precision to absorb the alternating-sum
// cancellation, and the Hankel asymptotic expansion beyond. Arguments seen
// in practice are oscillation phase amplitudes of order one.
inline double bessel_j0(double x) {
  x = std::fabs(x);
  if (x <= 16.0) {
    const long double q = 0.25L * static_cast<long double>(x) * static_cast<long double>(x);
    long double term = 1.0L;
    long double sum = 1.0L;
    for (int m = 1; m < 200; ++m) {
      term *= -q / (static_cast<long double>(m) * static_cast<long double>(m));
      sum += term;
      if (std::fabs(static_cast<double>(term)) < 1e-20 * (1.0 + std::fabs(static_cast<double>(sum)))) {
        break;
      }
    }
    return static_cast<double>(sum);
  }
  // J0(x) ~ sqrt(2/(pi x)) [P(x) cos(x - pi/4) - Q(x) sin(x - pi/4)]
  const double z = 1.0 / x;
  const double z2 = z * z;
  const double p = 1.0 + z2 * (-9.0 / 128.0 + z2 * 3675.0 / 32768.0);
  const double q = z * (-1.0 / 8.0 + z2 * 75.0 / 1024.0);
  const double chi = x - 0.25 * M_PI;
  return std::sqrt(2.0 / (M_PI * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace cavchain
