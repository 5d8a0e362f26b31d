#include "critwave/bubbles.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <optional>

#include "critwave/numerics.hpp"
#include "critwave/radiation.hpp"

namespace critwave {

double PeelConfig::beta1() const { return std::sqrt(c2) / std::sqrt(1.0 / 3.0 + c2 * c2); }

void PeelConfig::validate() const {
  if (!(c2 >= 10.0)) fail(errc::invalid_parameter, "c2 must be at least 10");
  if (!(beta > 2.0 * beta1()))
    fail(errc::invalid_parameter, "stopping threshold beta must exceed 2*beta1");
  if (n_max == 0) fail(errc::invalid_parameter, "n_max must be positive");
}

std::vector<double> BubbleList::lambdas() const {
  std::vector<double> out(alphas.size());
  std::transform(alphas.begin(), alphas.end(), out.begin(), [](double a) { return a * a; });
  return out;
}

std::vector<int> BubbleList::signs() const {
  std::vector<int> out(alphas.size());
  std::transform(alphas.begin(), alphas.end(), out.begin(),
                 [](double a) { return a >= 0.0 ? 1 : -1; });
  return out;
}

std::vector<GroundStateParam> BubbleList::params() const {
  std::vector<GroundStateParam> out;
  out.reserve(alphas.size());
  for (double a : alphas) out.push_back({a});
  return out;
}

namespace {

struct Detection {
  double radius;  // sub-grid refined crossing of the beta1 level
  double sign;    // sign of w at the detection node
};

// Outermost radius where the running sup of h(r) = r^{1/2}|w(r)| (taken from
// r_max inward) first reaches the detection level. Ties break toward larger
// radii by construction of the scan.
std::optional<Detection> detect(const std::vector<double>& w, const RadialGrid& g,
                                double level) {
  const std::size_t n = g.n_points;
  double prev_h = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    const double r = g.r(i);
    const double h = std::sqrt(r) * std::abs(w[i]);
    if (h >= level) {
      if (i + 1 >= n)
        fail(errc::domain_exceeded, "detection level attained at the grid boundary");
      // crossing between nodes i and i+1: h(i) >= level > h(i+1)
      double radius = r;
      if (h > prev_h && h - prev_h > 0.0) {
        const double frac = (h - level) / (h - prev_h);
        radius = r + frac * g.dr;
      }
      if (radius < 8.0 * g.dr)
        fail(errc::resolution, "fewer than 8 nodes below the detection radius");
      return Detection{radius, w[i] >= 0.0 ? 1.0 : -1.0};
    }
    prev_h = h;
  }
  return std::nullopt;
}

double sup_h(const std::vector<double>& w, const RadialGrid& g) {
  double m = 0.0;
  for (std::size_t i = 0; i < g.n_points; ++i)
    m = std::max(m, std::sqrt(g.r(i)) * std::abs(w[i]));
  return m;
}

void subtract_bubble(std::vector<double>& w, const RadialGrid& g, double alpha) {
  for (std::size_t i = 0; i < g.n_points; ++i) w[i] -= ground_state_value(alpha, g.r(i));
}

void add_bubble(std::vector<double>& w, const RadialGrid& g, double alpha) {
  for (std::size_t i = 0; i < g.n_points; ++i) w[i] += ground_state_value(alpha, g.r(i));
}

}  // namespace

BubbleList peel(const FieldState& state, const FieldState& background, const PeelConfig& cfg) {
  cfg.validate();
  check_same_grid(state, background);
  const RadialGrid& g = state.grid;
  const std::size_t n = g.n_points;

  std::vector<double> w(n), wt(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = state.u[i] - background.u[i];
    wt[i] = state.ut[i] - background.ut[i];
    if (!std::isfinite(w[i]) || !std::isfinite(wt[i]))
      fail(errc::numeric, "peel difference is not finite");
  }

  const double beta1 = cfg.beta1();
  BubbleList out;
  std::vector<double> work = w;
  bool capped = false;

  while (out.alphas.size() < cfg.n_max) {
    if (sup_h(work, g) < cfg.beta) break;
    const auto det = detect(work, g, beta1);
    if (!det) break;  // sup in [beta1, beta): below the continuation threshold
    const double alpha = det->sign * std::sqrt(det->radius / cfg.c2);
    out.alphas.push_back(alpha);
    subtract_bubble(work, g, alpha);
    if (out.alphas.size() == cfg.n_max && sup_h(work, g) >= cfg.beta) capped = true;
  }

  // Cyclic re-detection: each bubble is re-located on the data with all the
  // other fitted bubbles removed. A single outside-in pass carries an
  // O(sqrt(lambda ratio)) bias from the inner bubbles' 1/r tails; the sweeps
  // contract it.
  for (std::size_t sweep = 0; sweep < cfg.refine_sweeps && !out.alphas.empty(); ++sweep) {
    double max_change = 0.0;
    for (std::size_t j = 0; j < out.alphas.size(); ++j) {
      add_bubble(work, g, out.alphas[j]);  // work = w - sum_{k != j} W^{alpha_k}
      try {
        const auto det = detect(work, g, beta1);
        if (det) {
          const double alpha = det->sign * std::sqrt(det->radius / cfg.c2);
          max_change = std::max(max_change,
                                std::abs(alpha - out.alphas[j]) / std::abs(out.alphas[j]));
          out.alphas[j] = alpha;
        }
      } catch (const error&) {
        // keep the previous estimate when a re-detection leaves the grid
      }
      subtract_bubble(work, g, out.alphas[j]);
    }
    if (max_change < cfg.refine_rtol) break;
  }

  std::sort(out.alphas.begin(), out.alphas.end(),
            [](double a, double b) { return std::abs(a) > std::abs(b); });
  for (std::size_t j = 0; j + 1 < out.alphas.size(); ++j)
    out.ratios.push_back(std::abs(out.alphas[j + 1]) / std::abs(out.alphas[j]));

  out.r_stop = capped ? cfg.c2 * out.alphas.back() * out.alphas.back() : 0.0;
  FieldState res(g);
  res.u = work;
  res.ut = wt;
  out.residual_sq = h1l2_norm_sq(res, out.r_stop);
  return out;
}

namespace {

// Full-norm residual of state minus the bubble sum, as a function of one
// bubble's alpha with the others held fixed.
struct FitWork {
  const FieldState* state;
  RadialGrid grid;
  std::vector<double> partial_u;  // state.u - sum_{k != j} W^{alpha_k}
  std::vector<double> scratch;

  double residual_sq(double alpha) {
    const std::size_t n = grid.n_points;
    scratch.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      scratch[i] = partial_u[i] - ground_state_value(alpha, grid.r(i));
    FieldState r(grid);
    r.u = scratch;
    r.ut = state->ut;
    return h1l2_norm_sq(r, 0.0);
  }
};

double golden_min(const std::function<double(double)>& f, double lo, double hi, int iters) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int k = 0; k < iters; ++k) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

NeighborhoodVerdict membership_M(const FieldState& state, std::size_t n, double eps,
                                 double kappa, const PeelConfig& cfg) {
  if (n == 0) fail(errc::invalid_parameter, "membership needs n >= 1");
  if (!(eps > 0.0) || !(kappa > 0.0))
    fail(errc::invalid_parameter, "eps and kappa must be positive");

  PeelConfig pc = cfg;
  pc.n_max = n;
  const FieldState zero(state.grid);
  BubbleList seed = peel(state, zero, pc);

  std::vector<double> alphas = seed.alphas;
  while (alphas.size() < n) {
    const double prev = alphas.empty() ? 1.0 : std::abs(alphas.back());
    alphas.push_back(prev * std::min(kappa, 0.1) * 0.5);
  }

  // Per-scale refinement, outermost first, two full cycles. Seeded bubbles
  // try both signs.
  const std::size_t n_seeded = seed.alphas.size();
  for (int cycle = 0; cycle < 2; ++cycle) {
    for (std::size_t j = 0; j < alphas.size(); ++j) {
      FitWork fw{&state, state.grid, state.u, {}};
      for (std::size_t k = 0; k < alphas.size(); ++k) {
        if (k == j) continue;
        for (std::size_t i = 0; i < state.grid.n_points; ++i)
          fw.partial_u[i] -= ground_state_value(alphas[k], state.grid.r(i));
      }
      auto refine_signed = [&](double a0) {
        const double s = a0 >= 0.0 ? 1.0 : -1.0;
        const double m = std::abs(a0);
        auto fn = [&](double loga) { return fw.residual_sq(s * std::exp(loga)); };
        const double best = golden_min(fn, std::log(m) - std::log(4.0),
                                       std::log(m) + std::log(4.0), 40);
        return s * std::exp(best);
      };
      double a_new = refine_signed(alphas[j]);
      if (j >= n_seeded && cycle == 0) {
        const double a_flip = refine_signed(-alphas[j]);
        if (fw.residual_sq(a_flip) < fw.residual_sq(a_new)) a_new = a_flip;
      }
      alphas[j] = a_new;
    }
  }

  std::sort(alphas.begin(), alphas.end(),
            [](double a, double b) { return std::abs(a) > std::abs(b); });

  NeighborhoodVerdict v;
  v.fitted.alphas = alphas;
  FieldState res = state;
  for (double a : alphas)
    for (std::size_t i = 0; i < state.grid.n_points; ++i)
      res.u[i] -= ground_state_value(a, state.grid.r(i));
  v.fitted.residual_sq = h1l2_norm_sq(res, 0.0);
  v.fitted.r_stop = 0.0;
  for (std::size_t j = 0; j + 1 < alphas.size(); ++j)
    v.fitted.ratios.push_back(std::abs(alphas[j + 1]) / std::abs(alphas[j]));

  const double res_norm = std::sqrt(v.fitted.residual_sq);
  v.slack.push_back(eps - res_norm);
  const double k2 = kappa * kappa;
  for (double rho : v.fitted.ratios) v.slack.push_back(k2 - rho * rho);
  v.member = std::all_of(v.slack.begin(), v.slack.end(), [](double s) { return s >= 0.0; });
  return v;
}

NeighborhoodVerdict membership_R(const FieldState& state, std::size_t n, double delta,
                                 const MembershipRConfig& cfg) {
  if (n == 0) fail(errc::invalid_parameter, "membership needs n >= 1");
  if (!(delta > 0.0)) fail(errc::invalid_parameter, "delta must be positive");

  NeighborhoodVerdict v;

  // Squared-norm window on the uncut state.
  const double norm_sq = h1l2_norm_sq(state, 0.0);
  const double W2 = constants::w_h1_norm_sq;
  const double lo = (static_cast<double>(n) - 0.5) * W2;
  const double hi = (static_cast<double>(n) + 0.5) * W2;
  const double window_slack = std::min(norm_sq - lo, hi - norm_sq);

  // Interior cutoff: data multiplied by a ramp supported in r > r_cut/2; the
  // exterior region and the measured tail window s > r_cut are unaffected.
  const double dr = cfg.dr > 0.0 ? cfg.dr : state.grid.dr;
  const double supp = support_radius(state, 1e-10);
  const double r_max = supp + cfg.horizon + cfg.horizon * cfg.cfl * 0.1 + 4.0 * dr;
  RadialGrid g = RadialGrid::with_extent(dr, std::max(r_max, cfg.horizon + cfg.s_tail_max + 4.0 * dr));

  FieldState fwd(g), bwd(g);
  const double x0 = state.grid.dr;
  for (std::size_t i = 0; i < g.n_points; ++i) {
    const double r = g.r(i);
    const double ramp = num::smoothstep(0.5 * cfg.r_cut, cfg.r_cut, r);
    const double u = ramp * num::interp_cubic(state.u, x0, state.grid.dr, r);
    const double ut = ramp * num::interp_cubic(state.ut, x0, state.grid.dr, r);
    fwd.u[i] = u;
    fwd.ut[i] = ut;
    bwd.u[i] = u;
    bwd.ut[i] = -ut;  // time reversal
  }

  EvolutionConfig ec;
  ec.cfl = cfg.cfl;
  ec.t_final = cfg.horizon;
  ec.snapshot_times = {0.25 * cfg.horizon, 0.5 * cfg.horizon, cfg.horizon};
  ec.cone_clean = 1.0;

  auto tail_of = [&](const FieldState& init) -> std::pair<double, bool> {
    SimulationRecord rec = evolve(init, ec);
    if (rec.outcome != Outcome::completed) return {0.0, true};
    ExtractionConfig xc;
    xc.t_samples = ec.snapshot_times;
    xc.s_min = cfg.r_cut;
    xc.s_max = cfg.s_tail_max;
    const Extraction ex = extract_gplus(rec, xc);
    return {std::sqrt(std::max(ex.gplus.l2_sq(), 0.0)), false};
  };

  auto fut_fwd = std::async(std::launch::async, tail_of, std::cref(fwd));
  auto fut_bwd = std::async(std::launch::async, tail_of, std::cref(bwd));
  const auto [tail_plus, blew_fwd] = fut_fwd.get();
  const auto [tail_minus, blew_bwd] = fut_bwd.get();

  v.blowup_flag = blew_fwd || blew_bwd;
  v.slack = {window_slack, delta - tail_plus, delta - tail_minus};
  v.member = !v.blowup_flag &&
             std::all_of(v.slack.begin(), v.slack.end(), [](double s) { return s >= 0.0; });
  if (v.blowup_flag) v.detail = "exterior evolution flagged before the horizon";

  PeelConfig pc;
  pc.n_max = n;
  try {
    v.fitted = peel(state, FieldState(state.grid), pc);
  } catch (const error&) {
    // the fitted list is diagnostic only
  }
  return v;
}

}  // namespace critwave
