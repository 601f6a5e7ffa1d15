#pragma once

#include <functional>

namespace cuelab {

struct QuadratureResult {
  double value = 0;
  double error = 0;
};

/// Adaptive Gauss-Kronrod (7/15) quadrature of f over [a, b].
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol = 1e-12, double rel_tol = 1e-12, int max_depth = 40);

/// Integral over [a, b] split into panels of length at most `panel`; for
/// oscillatory integrands with period about `panel`.
QuadratureResult integrate_panels(const std::function<double(double)>& f, double a, double b,
                                  double panel, double abs_tol = 1e-13);

}  // namespace cuelab
