#include "critwave/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace critwave::num {

double trapezoid(std::span<const double> f, double h) {
  if (f.size() < 2) return 0.0;
  double sum = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) sum += f[i];
  return sum * h;
}

namespace {

// Integral of the linear interpolant over one full cell [x_i, x_{i+1}].
inline double cell_full(const std::span<const double>& f, std::size_t i, double h) {
  return 0.5 * (f[i] + f[i + 1]) * h;
}

// Integral over [x_i + a*h, x_i + b*h] with 0 <= a <= b <= 1.
inline double cell_part(const std::span<const double>& f, std::size_t i, double h, double a,
                        double b) {
  const double fa = f[i] + (f[i + 1] - f[i]) * a;
  const double fb = f[i] + (f[i + 1] - f[i]) * b;
  return 0.5 * (fa + fb) * (b - a) * h;
}

}  // namespace

double integrate_linear(std::span<const double> f, double x0, double h, double a, double b) {
  if (f.size() < 2 || !(b > a)) return 0.0;
  const double x_end = x0 + h * static_cast<double>(f.size() - 1);
  a = std::max(a, x0);
  b = std::min(b, x_end);
  if (!(b > a)) return 0.0;

  const double ta = (a - x0) / h;
  const double tb = (b - x0) / h;
  auto ia = static_cast<std::size_t>(std::clamp(std::floor(ta), 0.0,
                                                static_cast<double>(f.size() - 2)));
  auto ib = static_cast<std::size_t>(std::clamp(std::floor(tb), 0.0,
                                                static_cast<double>(f.size() - 2)));
  const double fa = ta - static_cast<double>(ia);
  const double fb = tb - static_cast<double>(ib);

  if (ia == ib) return cell_part(f, ia, h, fa, fb);

  double sum = cell_part(f, ia, h, fa, 1.0);
  for (std::size_t i = ia + 1; i < ib; ++i) sum += cell_full(f, i, h);
  sum += cell_part(f, ib, h, 0.0, fb);
  return sum;
}

std::vector<double> derivative(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  std::vector<double> d(n, 0.0);
  if (n < 3) {
    if (n == 2) d[0] = d[1] = (f[1] - f[0]) / h;
    return d;
  }
  const double inv2h = 1.0 / (2.0 * h);
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv2h;
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) * inv2h;
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv2h;
  return d;
}

double interp_linear(std::span<const double> f, double x0, double h, double x) {
  if (f.empty()) return 0.0;
  const double t = (x - x0) / h;
  if (t < 0.0 || t > static_cast<double>(f.size() - 1)) return 0.0;
  if (f.size() == 1) return f[0];
  auto i = static_cast<std::size_t>(std::clamp(std::floor(t), 0.0,
                                               static_cast<double>(f.size() - 2)));
  const double w = t - static_cast<double>(i);
  return f[i] + (f[i + 1] - f[i]) * w;
}

double interp_cubic(std::span<const double> f, double x0, double h, double x) {
  const std::size_t n = f.size();
  if (n < 4) return interp_linear(f, x0, h, x);
  const double t = (x - x0) / h;
  if (t < 0.0 || t > static_cast<double>(n - 1)) return 0.0;
  auto i = static_cast<std::size_t>(std::clamp(std::floor(t), 0.0, static_cast<double>(n - 2)));
  if (i == 0 || i + 2 >= n) return interp_linear(f, x0, h, x);
  const double w = t - static_cast<double>(i);
  const double fm1 = f[i - 1], f0 = f[i], f1 = f[i + 1], f2 = f[i + 2];
  // Catmull-Rom
  const double a0 = -0.5 * fm1 + 1.5 * f0 - 1.5 * f1 + 0.5 * f2;
  const double a1 = fm1 - 2.5 * f0 + 2.0 * f1 - 0.5 * f2;
  const double a2 = -0.5 * fm1 + 0.5 * f1;
  return ((a0 * w + a1) * w + a2) * w + f0;
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa, double b, double fb,
               double m, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double fa, double b,
                     double fb, double m, double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, fa, m, fm, lm, flm);
  const double right = simpson(f, m, fm, b, fb, rm, frm);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  if (!(b > a)) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = simpson(f, a, fa, b, fb, m, fm);
  return adaptive_step(f, a, fa, b, fb, m, fm, whole, tol, 48);
}

double smoothstep(double lo, double hi, double x) {
  if (x <= lo) return 0.0;
  if (x >= hi) return 1.0;
  const double t = (x - lo) / (hi - lo);
  return t * t * t * (t * (6.0 * t - 15.0) + 10.0);
}

}  // namespace critwave::num
