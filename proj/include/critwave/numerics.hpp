#ifndef CRITWAVE_NUMERICS_HPP
#define CRITWAVE_NUMERICS_HPP

// Low-level numerics shared by all modules: second-order stencils, trapezoid
// quadrature with fractional end cells, interpolation, and one adaptive
// quadrature routine used where a grid-independent reference value is needed.

#include <functional>
#include <span>
#include <vector>

namespace critwave::num {

inline double sqr(double x) { return x * x; }

// Trapezoid over uniformly spaced samples.
double trapezoid(std::span<const double> f, double h);

// Integral over [a, b] of the piecewise-linear interpolant of samples f_i at
// x0 + i*h. The interpolant is 0 outside the stored range, so windows beyond
// the data contribute nothing. Additive across shared endpoints.
double integrate_linear(std::span<const double> f, double x0, double h, double a, double b);

// Second-order first derivative on uniform samples: centered in the interior,
// one-sided three-point stencils at both ends.
std::vector<double> derivative(std::span<const double> f, double h);

// Piecewise-linear interpolation at x; 0 outside the stored range.
double interp_linear(std::span<const double> f, double x0, double h, double x);

// Catmull-Rom cubic interpolation at x; falls back to linear in the outermost
// cells and to 0 outside the stored range.
double interp_cubic(std::span<const double> f, double x0, double h, double x);

// Adaptive Simpson quadrature to an absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol);

// C^2 ramp: 0 for x <= lo, 1 for x >= hi, quintic smoothstep in between.
double smoothstep(double lo, double hi, double x);

}  // namespace critwave::num

#endif
