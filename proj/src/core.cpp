#include "critwave/core.hpp"

#include <algorithm>
#include <cmath>

#include "critwave/numerics.hpp"

namespace critwave {

RadialGrid::RadialGrid(double dr_, std::size_t n) : dr(dr_), n_points(n) {
  if (!(dr > 0.0)) fail(errc::invalid_parameter, "grid spacing must be positive");
  if (n_points < 8) fail(errc::invalid_parameter, "grid needs at least 8 points");
}

RadialGrid RadialGrid::with_extent(double dr_, double r_max) {
  if (!(dr_ > 0.0) || !(r_max > 0.0))
    fail(errc::invalid_parameter, "grid spacing and extent must be positive");
  auto n = static_cast<std::size_t>(std::llround(r_max / dr_));
  return RadialGrid(dr_, n);
}

FieldState::FieldState(const RadialGrid& g, double t)
    : grid(g), u(g.n_points, 0.0), ut(g.n_points, 0.0), time(t) {}

bool FieldState::finite() const {
  auto ok = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  return u.size() == grid.n_points && ut.size() == grid.n_points && ok(u) && ok(ut);
}

double ground_state_value(double r) { return 1.0 / std::sqrt(1.0 / 3.0 + r * r); }

double ground_state_value(double alpha, double r) {
  const double l2 = alpha * alpha * alpha * alpha;  // lambda^2
  return (1.0 / alpha) / std::sqrt(1.0 / 3.0 + r * r / l2);
}

FieldState ground_state(GroundStateParam p, const RadialGrid& g) {
  if (p.alpha == 0.0) fail(errc::invalid_parameter, "ground state requires alpha != 0");
  FieldState s(g);
  for (std::size_t i = 0; i < g.n_points; ++i) s.u[i] = ground_state_value(p.alpha, g.r(i));
  return s;
}

void check_same_grid(const FieldState& a, const FieldState& b) {
  if (!(a.grid == b.grid)) fail(errc::grid_mismatch, "field states live on different grids");
}

namespace {

// Integrand samples on [0, r_max]: node 0 holds the value at r = 0, which is
// 0 for every r^2-weighted density of a bounded field.
template <typename F>
std::vector<double> weighted_density(const FieldState& s, F&& f) {
  const std::size_t n = s.grid.n_points;
  const auto du = num::derivative(std::span<const double>(s.u), s.grid.dr);
  std::vector<double> w(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = s.grid.r(i);
    w[i + 1] = f(du[i], s.ut[i], s.u[i]) * r * r;
  }
  return w;
}

}  // namespace

double energy(const FieldState& s) {
  if (!s.finite()) fail(errc::numeric, "energy of a non-finite state");
  auto w = weighted_density(s, [](double du, double ut, double u) {
    const double u2 = u * u;
    return 0.5 * du * du + 0.5 * ut * ut - u2 * u2 * u2 / 6.0;
  });
  return constants::four_pi * num::trapezoid(w, s.grid.dr);
}

double h1l2_norm_sq(const FieldState& s, double R) {
  if (R >= s.grid.r_max()) fail(errc::domain_exceeded, "norm radius beyond the grid");
  auto w = weighted_density(
      s, [](double du, double ut, double) { return du * du + ut * ut; });
  const double v = constants::four_pi *
                   num::integrate_linear(w, 0.0, s.grid.dr, std::max(R, 0.0), s.grid.r_max());
  return std::max(v, 0.0);
}

double l6_norm(const FieldState& s) {
  auto w = weighted_density(s, [](double, double, double u) {
    const double u2 = u * u;
    return u2 * u2 * u2;
  });
  return std::pow(constants::four_pi * num::trapezoid(w, s.grid.dr), 1.0 / 6.0);
}

NormReport norm_report(const FieldState& s) {
  return NormReport{h1l2_norm_sq(s, 0.0), l6_norm(s), energy(s)};
}

double tail_correction_sq(double alpha, double r_max) {
  return constants::four_pi * alpha * alpha / r_max;
}

double y_norm(std::span<const FieldState> history, double t0, double t1, double R) {
  if (!(t1 >= t0)) fail(errc::invalid_parameter, "y_norm needs t1 >= t0");
  if (t1 == t0) return 0.0;

  std::vector<double> ts, q;
  for (const auto& s : history) {
    if (s.time < t0 - 1e-12 || s.time > t1 + 1e-12) continue;
    const std::size_t n = s.grid.n_points;
    std::vector<double> w(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = s.grid.r(i);
      const double u2 = s.u[i] * s.u[i];
      w[i + 1] = u2 * u2 * u2 * u2 * u2 * r * r;  // |u|^10 r^2
    }
    const double inner = constants::four_pi *
                         num::integrate_linear(w, 0.0, s.grid.dr,
                                               std::abs(s.time) + R, s.grid.r_max());
    ts.push_back(s.time);
    q.push_back(std::sqrt(std::max(inner, 0.0)));
  }
  if (ts.size() < 2) fail(errc::coverage, "y_norm needs at least two snapshots in the interval");

  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < ts.size(); ++k)
    acc += 0.5 * (q[k] + q[k + 1]) * (ts[k + 1] - ts[k]);
  return std::pow(acc, 0.2);
}

FieldState superpose(const std::vector<GroundStateParam>& bubbles, const FieldState& extra) {
  FieldState out = extra;
  for (const auto& p : bubbles) {
    if (p.alpha == 0.0) fail(errc::invalid_parameter, "superpose requires alpha != 0");
    for (std::size_t i = 0; i < out.grid.n_points; ++i)
      out.u[i] += ground_state_value(p.alpha, out.grid.r(i));
  }
  return out;
}

FieldState superpose(const std::vector<GroundStateParam>& bubbles, const RadialGrid& g) {
  return superpose(bubbles, FieldState(g));
}

}  // namespace critwave
