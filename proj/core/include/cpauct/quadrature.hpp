#pragma once

#include <functional>
#include <initializer_list>
#include <vector>

namespace cpauct {

inline constexpr double kQuadratureRelTol = 1e-9;

// Adaptive Gauss-Kronrod integral of f over [a, b]. Throws NumericError when
// the error estimate fails to reach rel_tol (scaled by the integral's
// magnitude, with an absolute floor for integrals near zero).
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = kQuadratureRelTol);

// Integrates piecewise over consecutive [pts[i], pts[i+1]] segments and sums.
// Callers list interior kinks/discontinuities of f as breakpoints so each
// segment is smooth.
double integrate_segments(const std::function<double(double)>& f,
                          const std::vector<double>& pts,
                          double rel_tol = kQuadratureRelTol);

}  // namespace cpauct
