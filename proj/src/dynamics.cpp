#include "critwave/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "critwave/numerics.hpp"

namespace critwave {

BubbleCount bubble_count(double E, const RadiationProfile& gplus, double t) {
  if (!std::isfinite(E)) fail(errc::invalid_parameter, "bubble_count needs a finite energy");
  const double tail = constants::four_pi * gplus.l2_sq(-t, gplus.s_max());
  const double q = (E - tail) / constants::w_energy;
  BubbleCount out;
  out.count = static_cast<int>(std::max(0ll, std::llround(q)));
  out.residual = std::abs(E - tail - out.count * constants::w_energy);
  out.ambiguous = out.residual > 0.4 * constants::w_energy;
  return out;
}

namespace {

// phi_ell^2(t) as a function with breakpoints where either window edge
// crosses a profile node; between breakpoints it is smooth, so sign changes
// are bracketed on the breakpoint mesh and refined by bisection.
struct LocalStrengthSq {
  const RadiationProfile* g;
  double ell;
  double operator()(double t) const {
    const double v = g->l2_sq(-t, -t / ell);
    return v > 0.0 ? v : 0.0;
  }
};

double bisect_crossing(const LocalStrengthSq& f, double level, double lo, double hi) {
  double flo = f(lo) - level;
  for (int k = 0; k < 80; ++k) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid) - level;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Segmentation segment(const RadiationProfile& gplus, double E, double R,
                     const SegmentationParams& p) {
  if (!(p.ell > 1.0)) fail(errc::invalid_parameter, "ell must exceed 1");
  if (!(p.delta < p.delta_star) || !(p.delta > 0.0))
    fail(errc::invalid_parameter, "need 0 < delta < delta_star");
  if (!(R > 0.0)) fail(errc::invalid_parameter, "R must be positive");

  const double t_end = -gplus.s_min;
  const double t_lo = p.ell * R;
  if (!(t_end > t_lo))
    fail(errc::coverage, "profile does not reach past ell*R in the past direction");

  Segmentation seg;
  seg.t_end = t_end;

  LocalStrengthSq phi2{&gplus, p.ell};
  const double q_level = num::sqr(p.delta_star / 4.0);
  const double p_level = num::sqr(p.delta / 4.0);

  // Breakpoint mesh: window edges -t and -t/ell crossing profile nodes.
  std::vector<double> mesh{t_lo, t_end};
  for (std::size_t i = 0; i < gplus.g.size(); ++i) {
    const double s = gplus.s_min + gplus.ds * static_cast<double>(i);
    if (s >= 0.0) break;
    const double t1 = -s;
    const double t2 = -s * p.ell;
    if (t1 > t_lo && t1 < t_end) mesh.push_back(t1);
    if (t2 > t_lo && t2 < t_end) mesh.push_back(t2);
  }
  std::sort(mesh.begin(), mesh.end());
  mesh.erase(std::unique(mesh.begin(), mesh.end()), mesh.end());

  // Q components: phi_ell^2 < (delta_star/4)^2.
  struct Component {
    double a, b;
    bool meets_p;
    int J;
  };
  std::vector<Component> comps;
  bool inside = phi2(t_lo) < q_level;
  double cur_a = t_lo;
  bool cur_meets_p = phi2(t_lo) <= p_level;
  for (std::size_t k = 0; k + 1 < mesh.size(); ++k) {
    const bool next_inside = phi2(mesh[k + 1]) < q_level;
    if (inside) cur_meets_p = cur_meets_p || phi2(mesh[k + 1]) <= p_level;
    if (next_inside != inside) {
      const double tc = bisect_crossing(phi2, q_level, mesh[k], mesh[k + 1]);
      if (inside) {
        comps.push_back({cur_a, tc, cur_meets_p, 0});
      } else {
        cur_a = tc;
        cur_meets_p = false;
      }
      inside = next_inside;
    }
  }
  if (inside) comps.push_back({cur_a, t_end, cur_meets_p, 0});

  if (comps.empty()) {
    seg.empty_stable = true;
    seg.diagnosis =
        "local radiation strength never drops below delta_star/4 on (ell*R, t_end]; "
        "square-integrable profiles cannot sustain this to the data end";
    seg.prep_end = t_end;
    seg.prep_energy = window_energy(gplus, -t_end, 0.0);
    seg.tail_energy = window_energy(gplus, 0.0, gplus.s_max());
    return seg;
  }

  // Bubble count per component; non-increasing across the closure of Q.
  for (auto& c : comps) {
    const BubbleCount bc = bubble_count(E, gplus, 0.5 * (c.a + c.b));
    c.J = bc.count;
  }
  for (std::size_t k = 0; k + 1 < comps.size(); ++k) {
    if (comps[k + 1].J > comps[k].J) {
      fail(errc::inconsistency,
           "bubble count increases across stable components near t = " +
               std::to_string(comps[k + 1].a));
    }
  }

  // One stable period per bubble-count level: the component meeting P when
  // one exists, otherwise the earliest component of that level, flagged.
  std::vector<int> levels;
  for (const auto& c : comps)
    if (levels.empty() || levels.back() != c.J) levels.push_back(c.J);

  for (int J : levels) {
    const Component* pick = nullptr;
    bool arbitrary = true;
    for (const auto& c : comps) {
      if (c.J != J) continue;
      if (c.meets_p) {
        pick = &c;
        arbitrary = false;
        break;
      }
      if (!pick) pick = &c;
    }
    StablePeriod sp;
    sp.a = pick->a;
    sp.b = pick->b;
    sp.bubbles = J;
    sp.arbitrary_choice = arbitrary;
    seg.stable.push_back(sp);
  }
  // The last stable period stands in for [a_m, +inf): when the chosen
  // component of the final level is not the one reaching the data end,
  // prefer the final component (square-integrable profiles are quiet there).
  if (comps.back().J == seg.stable.back().bubbles &&
      seg.stable.back().b < comps.back().b) {
    seg.stable.back().a = comps.back().a;
    seg.stable.back().b = comps.back().b;
    seg.stable.back().arbitrary_choice = !comps.back().meets_p;
  }
  seg.stable.back().unbounded = std::abs(seg.stable.back().b - t_end) < 1e-12 * t_end;

  for (auto& sp : seg.stable) sp.leak = window_energy(gplus, -sp.b, -sp.a);

  for (std::size_t k = 0; k + 1 < seg.stable.size(); ++k) {
    CollisionPeriod cp;
    cp.begin = seg.stable[k].b;
    cp.end = seg.stable[k + 1].a;
    cp.budget = window_energy(gplus, -cp.end, -cp.begin);
    cp.ratio = cp.end / cp.begin;
    seg.collisions.push_back(cp);
  }

  seg.prep_end = seg.stable.front().a;
  seg.a1_over_R = seg.prep_end / R;
  seg.prep_energy = window_energy(gplus, -seg.prep_end, 0.0);
  seg.tail_energy = window_energy(gplus, 0.0, gplus.s_max());
  return seg;
}

namespace {

// cutoff 1 on s <= 2, 0 on s >= 3; the weight is its square.
inline double cutoff(double s) { return 1.0 - num::smoothstep(2.0, 3.0, s); }
inline double cutoff_prime(double s) {
  if (s <= 2.0 || s >= 3.0) return 0.0;
  const double t = s - 2.0;
  return -30.0 * t * t * (t - 1.0) * (t - 1.0);
}
inline double weight(double s) { return num::sqr(cutoff(s)); }
inline double weight_prime(double s) { return 2.0 * cutoff(s) * cutoff_prime(s); }

}  // namespace

VirialResult virial(const SimulationRecord& rec, double T, double K0) {
  if (!(T > 0.0)) fail(errc::invalid_parameter, "virial needs T > 0");
  VirialResult out;
  bool any = false;
  double min_norm = std::numeric_limits<double>::infinity();
  double t_min = 0.0;

  for (const auto& s : rec.snapshots) {
    if (s.time < T - 1e-9 || s.time > 5.0 * T + 1e-9) continue;
    any = true;
    const std::size_t n = s.grid.n_points;
    const double t = s.time;
    std::vector<double> wj(n + 1, 0.0), wjp_a(n + 1, 0.0), wjp_b(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = s.grid.r(i);
      const double ph = weight(r / t);
      const double php = weight_prime(r / t);
      wj[i + 1] = s.u[i] * s.u[i] * ph * r * r;
      wjp_a[i + 1] = s.u[i] * s.ut[i] * ph * r * r;
      wjp_b[i + 1] = s.u[i] * s.u[i] * php * (r / (t * t)) * r * r;
    }
    const double J = constants::four_pi * num::trapezoid(wj, s.grid.dr);
    const double Jp = constants::four_pi *
                      (2.0 * num::trapezoid(wjp_a, s.grid.dr) - num::trapezoid(wjp_b, s.grid.dr));
    out.trace.t.push_back(t);
    out.trace.J.push_back(J);
    out.trace.Jprime.push_back(Jp);
    out.trace.Q.push_back(J > 0.0 ? Jp / J : std::numeric_limits<double>::quiet_NaN());

    const double nrm = h1l2_norm_sq(s, 0.0);
    if (nrm < min_norm) {
      min_norm = nrm;
      t_min = t;
    }
  }
  if (!any) fail(errc::coverage, "record does not cover [T, 5T]");

  out.least.min_norm_sq = min_norm;
  out.least.t_min = t_min;
  out.least.energy = rec.energy_trace.front().second;
  out.least.bound = 6.0 * out.least.energy + K0;
  out.least.within = min_norm <= out.least.bound;
  const FieldState& at_T = rec.at_time(T);
  out.least.exterior_norm_sq_at_T =
      T < at_T.grid.r_max() ? h1l2_norm_sq(at_T, T) : 0.0;
  return out;
}

OnePassReport one_pass_check(const SimulationRecord& rec, std::size_t n, double delta,
                             std::span<const double> sample_times,
                             const MembershipRConfig& mcfg) {
  OnePassReport rep;
  for (double t : sample_times) {
    rep.times.push_back(t);
    try {
      const FieldState& s = rec.at_time(t);
      const auto v = membership_R(s, n, delta, mcfg);
      rep.verdict.push_back(v.member ? 1 : 0);
    } catch (const error&) {
      rep.verdict.push_back(-1);
    }
  }

  // contiguity of the known membership pattern: no 1 after a 1->0 transition
  int state = 0;  // 0: before, 1: inside, 2: after
  rep.contiguous = true;
  for (std::size_t i = 0; i < rep.verdict.size(); ++i) {
    const int v = rep.verdict[i];
    if (v < 0) continue;
    if (v == 1) {
      if (state == 2) {
        rep.contiguous = false;
        rep.offending.push_back(i);
      } else {
        state = 1;
      }
    } else if (state == 1) {
      state = 2;
    }
  }
  return rep;
}

DichotomyResult dichotomy_experiment(double lambda_amp, const RadialGrid& grid,
                                     const EvolutionConfig& ecfg, const DichotomyConfig& dcfg) {
  if (!(lambda_amp > 0.0)) fail(errc::invalid_parameter, "lambda_amp must be positive");

  FieldState s(grid);
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    const double r = grid.r(i);
    const double ramp = 1.0 - num::smoothstep(dcfg.truncate_at, dcfg.truncate_at + dcfg.ramp_width, r);
    s.u[i] = lambda_amp * ground_state_value(r) * ramp;
    s.ut[i] = dcfg.velocity_bump * std::exp(-r * r);
  }

  DichotomyResult out;
  out.energy = energy(s);
  out.precondition_ok = out.energy < constants::w_energy * (1.0 - 1e-9);
  if (!out.precondition_ok) {
    out.cls = DichotomyClass::undecided;
    return out;
  }

  EvolutionConfig ec = ecfg;
  ec.t_final = dcfg.t_final;
  if (ec.snapshot_stride == 0 && ec.snapshot_times.empty()) ec.snapshot_stride = 64;
  const SimulationRecord rec = evolve(s, ec);

  auto core_amp = [&](const FieldState& f) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.grid.n_points && f.grid.r(i) < 1.0; ++i)
      m = std::max(m, std::abs(f.u[i]));
    return m;
  };
  out.initial_core_amp = core_amp(s);

  if (rec.outcome == Outcome::blowup_detected || rec.outcome == Outcome::numeric_failure) {
    out.cls = DichotomyClass::blowup;
    out.blowup_time = rec.event_time;
    return out;
  }

  const double window_start = dcfg.t_final * (1.0 - dcfg.window_fraction);
  double window_max = 0.0;
  for (const auto& snap : rec.snapshots) {
    if (snap.time < window_start) continue;
    window_max = std::max(window_max, core_amp(snap));
  }
  out.final_core_amp = window_max;
  out.cls = window_max < dcfg.decay_fraction * out.initial_core_amp
                ? DichotomyClass::scatter_proxy
                : DichotomyClass::undecided;
  return out;
}

}  // namespace critwave
