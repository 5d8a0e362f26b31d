#include "critwave/radiation.hpp"

#include <algorithm>
#include <cmath>

#include "critwave/numerics.hpp"

namespace critwave {

Extraction extract_gplus(const SimulationRecord& rec, const ExtractionConfig& cfg) {
  if (cfg.t_samples.empty()) fail(errc::invalid_parameter, "no extraction times");
  if (!(cfg.s_max > cfg.s_min)) fail(errc::invalid_parameter, "empty extraction window");
  if (rec.snapshots.empty()) fail(errc::coverage, "empty record");

  const double t_last = *std::max_element(cfg.t_samples.begin(), cfg.t_samples.end());
  if (rec.outcome != Outcome::completed && rec.event_time <= t_last)
    fail(errc::precondition, "record flagged before the latest extraction time");

  const RadialGrid& g = rec.snapshots.front().grid;
  const double dr = g.dr;

  struct NullSample {
    double t;
    std::vector<double> a;  // r * ut on nodes
    std::vector<double> b;  // -r * ur = u - d/dr(r u) on nodes
  };
  std::vector<NullSample> prepared;
  for (double t : cfg.t_samples) {
    const FieldState& s = rec.at_time(t);
    if (s.time + cfg.s_max > g.r_max() - 2.0 * dr)
      fail(errc::coverage, "window exceeds the grid at an extraction time");
    NullSample ns;
    ns.t = s.time;
    const std::size_t n = g.n_points;
    std::vector<double> w(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) w[i + 1] = g.r(i) * s.u[i];
    const auto dw = num::derivative(w, dr);
    ns.a.resize(n);
    ns.b.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      ns.a[i] = g.r(i) * s.ut[i];
      ns.b[i] = s.u[i] - dw[i + 1];
    }
    prepared.push_back(std::move(ns));
  }

  const auto n_s = static_cast<std::size_t>(std::floor((cfg.s_max - cfg.s_min) / dr)) + 1;
  Extraction out;
  out.gplus.direction = Direction::plus;
  out.gplus.s_min = cfg.s_min;
  out.gplus.ds = dr;
  out.gplus.g.assign(n_s, 0.0);
  out.spread_s.assign(n_s, 0.0);

  double max_gap = 0.0;
  for (std::size_t j = 0; j < n_s; ++j) {
    const double s = cfg.s_min + dr * static_cast<double>(j);
    double lo = 0.0, hi = 0.0, sum = 0.0;
    bool first = true;
    for (const auto& ns : prepared) {
      const double r = ns.t + s;
      if (r <= dr) fail(errc::coverage, "null line leaves the grid near the origin");
      const double A = num::interp_cubic(ns.a, dr, dr, r);
      const double B = num::interp_cubic(ns.b, dr, dr, r);
      const double est = 0.5 * (A + B);
      max_gap = std::max(max_gap, std::abs(A - B));
      sum += est;
      if (first) {
        lo = hi = est;
        first = false;
      } else {
        lo = std::min(lo, est);
        hi = std::max(hi, est);
      }
    }
    out.gplus.g[j] = sum / static_cast<double>(prepared.size());
    out.spread_s[j] = hi - lo;
  }

  double scale = 0.0, spread = 0.0;
  for (std::size_t j = 0; j < n_s; ++j) {
    scale = std::max(scale, std::abs(out.gplus.g[j]));
    spread = std::max(spread, out.spread_s[j]);
  }
  out.report.max_ab_gap = max_gap;
  out.report.spread = spread;
  out.report.scale = scale;
  out.report.converged = scale > 0.0 ? (spread / scale <= cfg.consistency_tol) : true;
  return out;
}

double strength_at(const RadiationProfile& gplus, double t) {
  return std::sqrt(std::max(gplus.l2_sq(-t, gplus.s_max()), 0.0));
}

double local_strength(const RadiationProfile& gplus, double t, double ell) {
  if (!(ell > 1.0)) fail(errc::invalid_parameter, "ell must exceed 1");
  return std::sqrt(std::max(gplus.l2_sq(-t, -t / ell), 0.0));
}

StrengthCurve strength(const RadiationProfile& gplus, std::span<const double> ts, double ell) {
  if (!(ell > 1.0)) fail(errc::invalid_parameter, "ell must exceed 1");
  StrengthCurve c;
  c.ell = ell;
  for (double t : ts) {
    if (!(t > 0.0)) fail(errc::invalid_parameter, "strength times must be positive");
    c.t.push_back(t);
    c.phi.push_back(strength_at(gplus, t));
    c.phi_ell.push_back(local_strength(gplus, t, ell));
  }
  return c;
}

double window_energy(const RadiationProfile& g, double a, double b) {
  if (!(a < b)) fail(errc::invalid_parameter, "window_energy needs a < b");
  return constants::four_pi * g.l2_sq(a, b);
}

}  // namespace critwave
