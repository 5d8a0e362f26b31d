#include "critwave/nlsolve.hpp"

#include <algorithm>
#include <cmath>

#include "critwave/numerics.hpp"

namespace critwave {

void EvolutionConfig::validate() const {
  if (!(cfl > 0.0) || cfl > 1.0) fail(errc::invalid_parameter, "cfl must lie in (0, 1]");
  if (!(t_final >= 0.0)) fail(errc::invalid_parameter, "t_final must be nonnegative");
}

const FieldState& SimulationRecord::at_time(double t, double tol) const {
  const FieldState* best = nullptr;
  double gap = tol;
  for (const auto& s : snapshots) {
    const double d = std::abs(s.time - t);
    if (d <= gap) {
      gap = d;
      best = &s;
    }
  }
  if (!best) fail(errc::coverage, "no snapshot near the requested time");
  return *best;
}

const FieldState& SimulationRecord::at_time(double t) const {
  if (snapshots.size() < 2) return at_time(t, 1e-9);
  const double span = snapshots.back().time - snapshots.front().time;
  return at_time(t, 0.51 * span / static_cast<double>(snapshots.size() - 1) + 1e-12);
}

double support_radius(const FieldState& s, double tol) {
  for (std::size_t i = s.grid.n_points; i-- > 0;) {
    if (std::abs(s.u[i]) + std::abs(s.ut[i]) > tol) return s.grid.r(i);
  }
  return 0.0;
}

namespace {

struct StepPlan {
  double dt;
  std::size_t steps;
  std::vector<std::size_t> snapshot_steps;  // sorted, includes 0 and the last step
};

StepPlan make_plan(const EvolutionConfig& cfg, double dr) {
  StepPlan p{};
  if (cfg.t_final <= 0.0) {
    p.dt = cfg.cfl * dr;
    p.steps = 0;
    p.snapshot_steps = {0};
    return p;
  }
  const double dt0 = cfg.cfl * dr;
  p.steps = static_cast<std::size_t>(std::ceil(cfg.t_final / dt0 - 1e-12));
  p.dt = cfg.t_final / static_cast<double>(p.steps);

  std::vector<std::size_t> marks{0, p.steps};
  if (!cfg.snapshot_times.empty()) {
    for (double t : cfg.snapshot_times) {
      auto k = static_cast<std::size_t>(std::clamp(
          std::llround(t / p.dt), 0ll, static_cast<long long>(p.steps)));
      marks.push_back(k);
    }
  } else if (cfg.snapshot_stride > 0) {
    for (std::size_t k = cfg.snapshot_stride; k < p.steps; k += cfg.snapshot_stride)
      marks.push_back(k);
  }
  std::sort(marks.begin(), marks.end());
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
  p.snapshot_steps = std::move(marks);
  return p;
}

inline double quintic(double u) {
  const double u2 = u * u;
  return u2 * u2 * u;
}

}  // namespace

SimulationRecord evolve(const FieldState& initial, const EvolutionConfig& cfg) {
  cfg.validate();
  if (!initial.finite()) fail(errc::precondition, "initial state is not finite");
  const RadialGrid& g = initial.grid;
  const std::size_t n = g.n_points;
  const double dr = g.dr;

  if (cfg.check_support) {
    const double rs = support_radius(initial);
    if (rs + cfg.t_final + 2.0 * cfg.cfl * dr > g.r_max() + 1e-9)
      fail(errc::precondition,
           "domain too small: r_max must cover support + t_final for an exact boundary");
  }

  double max_u0 = 0.0;
  for (double x : initial.u) max_u0 = std::max(max_u0, std::abs(x));
  const auto du0 = num::derivative(std::span<const double>(initial.u), dr);
  double max_du0 = 0.0;
  for (double x : du0) max_du0 = std::max(max_du0, std::abs(x));
  const double amp_thr = cfg.blowup_amp > 0.0 ? cfg.blowup_amp : 1e3 * std::max(1.0, max_u0);
  const double grad_thr = cfg.blowup_grad > 0.0 ? cfg.blowup_grad : 1e6 * std::max(1.0, max_du0);

  const StepPlan plan = make_plan(cfg, dr);
  const double dt = plan.dt;
  const bool nonlinear = cfg.nonlinearity == Nonlinearity::focusing_quintic;

  SimulationRecord rec;
  auto record = [&](const FieldState& s) {
    rec.snapshots.push_back(s);
    rec.energy_trace.emplace_back(s.time, energy(s));
  };

  // Reduced variable v = r u; v(0) = 0 at the origin, v pinned to 0 at r_max.
  std::vector<double> r(n), inv_r(n);
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = g.r(i);
    inv_r[i] = 1.0 / r[i];
  }
  std::vector<double> v_prev(n), v_cur(n), v_next(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v_cur[i] = r[i] * initial.u[i];
  v_cur[n - 1] = 0.0;

  FieldState snap(g, initial.time);
  snap.u = initial.u;
  snap.ut = initial.ut;
  record(snap);
  if (plan.steps == 0) return rec;

  const double inv_dr2 = 1.0 / (dr * dr);
  auto lap = [&](const std::vector<double>& v, std::size_t i) {
    const double left = i == 0 ? 0.0 : v[i - 1];
    return (left - 2.0 * v[i] + v[i + 1]) * inv_dr2;
  };

  // First step: second-order Taylor with v_tt = v'' + r F(v/r).
  v_prev = v_cur;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double f = nonlinear ? quintic(initial.u[i]) * r[i] : 0.0;
    v_next[i] = v_cur[i] + dt * r[i] * initial.ut[i] + 0.5 * dt * dt * (lap(v_cur, i) + f);
  }
  v_next[n - 1] = 0.0;
  std::swap(v_prev, v_cur);
  std::swap(v_cur, v_next);  // v_cur is now step 1, v_prev step 0

  std::size_t next_mark = 1;  // plan.snapshot_steps[0] == 0 already recorded
  const double dt2 = dt * dt;

  for (std::size_t k = 1; k <= plan.steps; ++k) {
    const double t_cur = dt * static_cast<double>(k);

    // advance v_cur (step k) to v_next (step k+1); the extra step past
    // t_final only serves the centered time derivative of the last snapshot.
    double max_abs_v_over_r = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double ui = v_cur[i] * inv_r[i];
      const double f = nonlinear ? quintic(ui) * r[i] : 0.0;
      const double nv = 2.0 * v_cur[i] - v_prev[i] + dt2 * (lap(v_cur, i) + f);
      v_next[i] = nv;
      const double au = std::abs(ui);
      if (au > max_abs_v_over_r) max_abs_v_over_r = au;
      if (!std::isfinite(nv)) finite = false;
    }
    v_next[n - 1] = 0.0;

    if (cfg.cone_clean >= 0.0) {
      const double edge = t_cur - cfg.cone_clean;
      if (edge > dr) {
        for (std::size_t i = 0; i < n && r[i] < edge; ++i) {
          const double m = num::smoothstep(edge - 0.5 * cfg.cone_clean, edge, r[i]);
          v_next[i] *= m;
          v_cur[i] *= m;
        }
      }
    }

    if (!finite) {
      rec.outcome = Outcome::numeric_failure;
      rec.event_time = t_cur;
      return rec;
    }

    bool blown = max_abs_v_over_r > amp_thr;
    if (!blown && grad_thr < 1e300) {
      // discrete H^1 density check on u = v/r, every step, cheap stencil scan
      double max_grad = 0.0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        const double gl = std::abs(v_cur[i + 1] * inv_r[i + 1] - v_cur[i] * inv_r[i]) / dr;
        if (gl > max_grad) max_grad = gl;
      }
      blown = max_grad > grad_thr;
    }
    if (blown) {
      rec.outcome = Outcome::blowup_detected;
      rec.event_time = t_cur;
      return rec;
    }

    if (next_mark < plan.snapshot_steps.size() && plan.snapshot_steps[next_mark] == k) {
      FieldState s(g, t_cur);
      for (std::size_t i = 0; i < n; ++i) {
        s.u[i] = v_cur[i] * inv_r[i];
        s.ut[i] = (v_next[i] - v_prev[i]) / (2.0 * dt) * inv_r[i];
      }
      record(s);
      ++next_mark;
    }

    std::swap(v_prev, v_cur);
    std::swap(v_cur, v_next);
  }

  rec.outcome = Outcome::completed;
  return rec;
}

SimulationRecord evolve_linear(const FieldState& initial, EvolutionConfig cfg) {
  cfg.nonlinearity = Nonlinearity::off;
  return evolve(initial, cfg);
}

FieldState rescale_state(const FieldState& s, double lambda) {
  if (!(lambda > 0.0)) fail(errc::invalid_parameter, "rescale needs lambda > 0");
  FieldState out(s.grid, s.time * lambda);
  const double a = 1.0 / std::sqrt(lambda);
  const double b = a / lambda;
  const double x0 = s.grid.dr;
  for (std::size_t i = 0; i < s.grid.n_points; ++i) {
    const double q = s.grid.r(i) / lambda;
    out.u[i] = a * num::interp_cubic(s.u, x0, s.grid.dr, q);
    out.ut[i] = b * num::interp_cubic(s.ut, x0, s.grid.dr, q);
  }
  return out;
}

}  // namespace critwave
