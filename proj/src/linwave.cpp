#include "critwave/linwave.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "critwave/numerics.hpp"

namespace critwave {

double RadiationProfile::value(double s) const {
  return num::interp_linear(g, s_min, ds, s);
}

double RadiationProfile::l2_sq(double a, double b) const {
  if (g.size() < 2) return 0.0;
  std::vector<double> g2(g.size());
  std::transform(g.begin(), g.end(), g2.begin(), [](double x) { return x * x; });
  return num::integrate_linear(g2, s_min, ds, a, b);
}

double RadiationProfile::l2_sq() const { return l2_sq(s_min, s_max()); }

double RadiationProfile::l2_sq_outside(double R) const {
  return l2_sq(s_min, -R) + l2_sq(R, s_max());
}

bool RadiationProfile::finite() const {
  return ds > 0.0 &&
         std::all_of(g.begin(), g.end(), [](double x) { return std::isfinite(x); });
}

RadiationProfile profile_from_data(const FieldState& s) {
  const std::size_t n = s.grid.n_points;
  const double dr = s.grid.dr;

  // d/dr (r u0) on nodes r = 0, dr, ..., n*dr; the smooth 1D wave variable
  // vanishes at the origin.
  std::vector<double> w(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) w[i + 1] = s.grid.r(i) * s.u[i];
  const auto dw = num::derivative(w, dr);

  RadiationProfile out;
  out.direction = Direction::minus;
  out.ds = dr;
  out.s_min = -s.grid.r_max();
  out.g.assign(2 * n + 1, 0.0);
  out.g[n] = 0.5 * dw[0];
  for (std::size_t k = 1; k <= n; ++k) {
    const double ru1 = s.grid.r(k - 1) * s.ut[k - 1];
    out.g[n + k] = 0.5 * (dw[k] + ru1);
    out.g[n - k] = 0.5 * (dw[k] - ru1);
  }
  if (!out.finite()) fail(errc::numeric, "non-finite radiation profile");
  return out;
}

FieldState data_from_profile(const RadiationProfile& gm, const RadialGrid& grid) {
  if (gm.direction != Direction::minus)
    fail(errc::invalid_parameter, "data_from_profile expects a minus-direction profile");

  // Cumulative integral of the linear interpolant of g, evaluated at +/- r.
  const std::size_t m = gm.g.size();
  std::vector<double> cum(m, 0.0);
  for (std::size_t i = 1; i < m; ++i)
    cum[i] = cum[i - 1] + 0.5 * (gm.g[i - 1] + gm.g[i]) * gm.ds;
  auto cum_at = [&](double x) -> double {
    if (x <= gm.s_min) return 0.0;
    if (x >= gm.s_max()) return cum.back();
    const double t = (x - gm.s_min) / gm.ds;
    auto i = static_cast<std::size_t>(t);
    const double w = t - static_cast<double>(i);
    const double ga = gm.g[i] + (gm.g[i + 1] - gm.g[i]) * w;
    return cum[i] + 0.5 * (gm.g[i] + ga) * w * gm.ds;
  };

  FieldState s(grid);
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    const double r = grid.r(i);
    s.u[i] = (cum_at(r) - cum_at(-r)) / r;
    s.ut[i] = (gm.value(r) - gm.value(-r)) / r;
  }
  return s;
}

RadiationProfile conjugate(const RadiationProfile& g) {
  RadiationProfile out;
  out.direction = g.direction == Direction::minus ? Direction::plus : Direction::minus;
  out.ds = g.ds;
  out.s_min = -g.s_max();
  out.g.resize(g.g.size());
  for (std::size_t i = 0; i < g.g.size(); ++i) out.g[i] = -g.g[g.g.size() - 1 - i];
  return out;
}

FreeWaveValue free_wave_evaluate(const RadiationProfile& gm, double r, double t) {
  if (gm.direction != Direction::minus)
    fail(errc::invalid_parameter, "free_wave_evaluate expects a minus-direction profile");
  if (!(r > 0.0)) fail(errc::invalid_parameter, "free_wave_evaluate needs r > 0");

  const double integral = num::integrate_linear(gm.g, gm.s_min, gm.ds, t - r, t + r);
  const double gp = gm.value(t + r);
  const double gmv = gm.value(t - r);
  FreeWaveValue v{};
  v.u = integral / r;
  v.ut = (gp - gmv) / r;
  v.ur = (gp + gmv) / r - v.u / r;
  return v;
}

TailIdentity tail_identity_check(const FieldState& s, double R) {
  if (!(R > 0.0) || R >= s.grid.r_max())
    fail(errc::invalid_parameter, "tail identity needs R in (0, r_max)");
  const auto gm = profile_from_data(s);
  const double u0R = num::interp_linear(s.u, s.grid.dr, s.grid.dr, R);
  TailIdentity out{};
  out.lhs = h1l2_norm_sq(s, R);
  out.rhs = 8.0 * std::numbers::pi * gm.l2_sq_outside(R) +
            constants::four_pi * R * u0R * u0R;
  return out;
}

}  // namespace critwave
