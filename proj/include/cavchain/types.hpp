#pragma once

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cavchain {

using Scalar = double;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kTwoPi = 2.0 * M_PI;

// Thrown when a truncated-basis computation cannot be converged within the
// allowed basis size.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Reduce an angle to [0, 2*pi). All angular dependence in this code is
// 2*pi-periodic, so the reduction never changes a computed quantity.
inline double reduce_two_pi(double angle) {
  double r = std::fmod(angle, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

// Reduce an angle to (-pi, pi].
inline double reduce_pm_pi(double angle) {
  double r = std::fmod(angle, kTwoPi);
  if (r > M_PI) r -= kTwoPi;
  if (r <= -M_PI) r += kTwoPi;
  return r;
}

}  // namespace cavchain
