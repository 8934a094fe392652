#pragma once

#include <cstddef>
#include <functional>

namespace grhs {

inline constexpr double kDefaultQuadratureTolerance = 1e-12;

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
  std::size_t intervals = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature of f over [a, b].
///
/// Subdivides the interval with the largest error estimate until the summed
/// estimate drops below max(abs_tol, 50 eps |integral of |f||), the round-off
/// floor past which an absolute target is unreachable in double precision.
/// b < a is allowed and flips the sign. Throws NumericalError when the
/// subdivision budget runs out or f returns a non-finite value.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol = kDefaultQuadratureTolerance,
                                    std::size_t max_intervals = 4000);

}  // namespace grhs
