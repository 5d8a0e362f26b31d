#include "critwave/verify.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "critwave/dynamics.hpp"
#include "critwave/numerics.hpp"

namespace critwave::verify {

namespace {

using clock_t_ = std::chrono::steady_clock;

std::string fmt(double x) {
  std::ostringstream ss;
  ss.precision(4);
  ss << x;
  return ss.str();
}

struct Check {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (detail.tellp() > 0) detail << "; ";
    detail << (ok ? "" : "FAIL ") << what;
  }
};

// --- shared data builders -------------------------------------------------

FieldState gaussian_state(const RadialGrid& g, double a0, double c0, double w0, double a1,
                          double c1, double w1) {
  FieldState s(g);
  for (std::size_t i = 0; i < g.n_points; ++i) {
    const double r = g.r(i);
    if (a0 != 0.0) s.u[i] = a0 * std::exp(-num::sqr(r - c0) / w0);
    if (a1 != 0.0) s.ut[i] = a1 * std::exp(-num::sqr(r - c1) / w1);
  }
  return s;
}

std::vector<FieldState> smooth_datasets(const RadialGrid& g, std::size_t count) {
  std::vector<FieldState> out;
  out.push_back(gaussian_state(g, 1.0, 3.0, 1.0, 0.0, 0.0, 1.0));
  out.push_back(gaussian_state(g, 0.0, 0.0, 1.0, 1.0, 2.0, 1.5));
  out.push_back(gaussian_state(g, 1.0, 4.0, 2.0, 0.5, 3.5, 1.2));
  {
    FieldState s(g);
    for (std::size_t i = 0; i < g.n_points; ++i) {
      const double r = g.r(i);
      s.u[i] = std::sin(2.0 * r) * std::exp(-num::sqr(r - 5.0) / 2.0);
    }
    out.push_back(std::move(s));
  }
  {
    FieldState s(g);
    for (std::size_t i = 0; i < g.n_points; ++i) {
      const double r = g.r(i);
      s.u[i] = std::exp(-num::sqr(r - 2.5) / 0.8) - 0.7 * std::exp(-num::sqr(r - 5.0) / 1.5);
      s.ut[i] = 0.3 * std::cos(r) * std::exp(-num::sqr(r - 4.0));
    }
    out.push_back(std::move(s));
  }
  out.resize(std::min(count, out.size()));
  return out;
}

FieldState scaled_to_norm(FieldState s, double target_norm) {
  const double nrm = std::sqrt(h1l2_norm_sq(s, 0.0));
  for (auto& x : s.u) x *= target_norm / nrm;
  for (auto& x : s.ut) x *= target_norm / nrm;
  return s;
}

FieldState truncated_ground_state(const RadialGrid& g, double amp, double r_cut,
                                  double ramp_width) {
  FieldState s(g);
  for (std::size_t i = 0; i < g.n_points; ++i) {
    const double r = g.r(i);
    s.u[i] = amp * ground_state_value(r) * (1.0 - num::smoothstep(r_cut, r_cut + ramp_width, r));
  }
  return s;
}

// --- criteria ---------------------------------------------------------------

CriterionResult c01_radiation_isometry(Level level) {
  Check ck;
  const RadialGrid g(1e-3, 12000);
  const auto data = smooth_datasets(g, level == Level::fast ? 2 : 5);
  double worst = 0.0;
  for (const auto& s : data) {
    const double lhs = h1l2_norm_sq(s, 0.0);
    const auto gm = profile_from_data(s);
    const double rhs = 8.0 * 3.14159265358979323846 * gm.l2_sq();
    worst = std::max(worst, std::abs(lhs - rhs) / lhs);
  }
  ck.require(worst < 1e-5, "max_rel_err=" + fmt(worst) + " tol=1e-5 at dr=ds=1e-3");
  return {1, "radiation-isometry", ck.pass, ck.detail.str(), 0.0};
}

CriterionResult c02_tail_identity(Level level) {
  Check ck;
  const RadialGrid g(1e-4, 80000);
  const auto data = smooth_datasets(g, level == Level::fast ? 1 : 3);
  const std::vector<double> radii = level == Level::fast
                                        ? std::vector<double>{1.0, 2.0, 3.0}
                                        : std::vector<double>{0.5, 1.0, 2.0, 3.0, 5.0};
  double worst = 0.0;
  for (const auto& s : data) {
    for (double R : radii) {
      const auto [lhs, rhs] = tail_identity_check(s, R);
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(lhs, 1e-30));
    }
  }
  ck.require(worst < 1e-6, "max_rel_err=" + fmt(worst) + " tol=1e-6");
  return {2, "tail-identity", ck.pass, ck.detail.str(), 0.0};
}

CriterionResult c03_linear_solver_order(Level level) {
  Check ck;
  RadiationProfile gm;
  gm.direction = Direction::minus;
  gm.ds = 1e-3;
  gm.s_min = -8.0;
  const std::size_t m = static_cast<std::size_t>(16.0 / gm.ds) + 1;
  gm.g.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double s = gm.s_min + gm.ds * static_cast<double>(i);
    gm.g[i] = std::exp(-s * s / 2.0);
  }

  const double t_eval = 10.0;
  auto run_error = [&](double dr) {
    const RadialGrid grid = RadialGrid::with_extent(dr, 24.0);
    const FieldState init = data_from_profile(gm, grid);
    EvolutionConfig ec;
    ec.t_final = t_eval;
    ec.check_support = false;  // the profile tail is compact to double precision
    const SimulationRecord rec = evolve_linear(init, ec);
    const FieldState& fin = rec.final_state();
    double err = 0.0;
    for (std::size_t i = 0; i < grid.n_points; ++i) {
      const double r = grid.r(i);
      if (r > grid.r_max() - t_eval - 1.0) break;  // stay inside the exact region
      const auto ex = free_wave_evaluate(gm, r, t_eval);
      err = std::max(err, std::abs(r * (fin.u[i] - ex.u)));
    }
    return err;
  };

  const std::vector<double> drs =
      level == Level::fast ? std::vector<double>{0.02, 0.01} : std::vector<double>{0.02, 0.01, 0.005};
  std::vector<double> errs;
  for (double dr : drs) errs.push_back(run_error(dr));
  std::ostringstream what;
  what << "errors(v)=";
  for (double e : errs) what << fmt(e) << " ";
  bool ok = true;
  for (std::size_t k = 0; k + 1 < errs.size(); ++k) {
    const double order = std::log2(errs[k] / errs[k + 1]);
    what << "order" << k << "=" << fmt(order) << " ";
    ok = ok && order >= 1.9;
  }
  ck.require(ok, what.str() + "tol: order >= 1.9");
  return {3, "linear-solver-convergence", ck.pass, ck.detail.str(), 0.0};
}

CriterionResult c04_energy_conservation(Level level) {
  Check ck;
  const double t_final = level == Level::fast ? 5.0 : 20.0;
  const RadialGrid g = RadialGrid::with_extent(0.005, 12.0 + t_final + 1.0);
  FieldState s = scaled_to_norm(gaussian_state(g, 1.0, 3.0, 1.0, 0.0, 0.0, 1.0), 0.1);
  EvolutionConfig ec;
  ec.t_final = t_final;
  ec.snapshot_stride = 50;
  const SimulationRecord rec = evolve(s, ec);
  const double e0 = rec.energy_trace.front().second;
  double drift = 0.0;
  for (const auto& [t, e] : rec.energy_trace)
    drift = std::max(drift, std::abs(e - e0) / std::max(std::abs(e0), 1.0));
  ck.require(rec.outcome == Outcome::completed, "outcome completed");
  ck.require(drift < 1e-4, "rel_drift=" + fmt(drift) + " tol=1e-4 (norm 0.1, dr=0.005)");
  return {4, "nonlinear-energy-conservation", ck.pass, ck.detail.str(), 0.0};
}

CriterionResult c05_w_stationarity(Level level) {
  Check ck;
  const double t_final = level == Level::fast ? 5.0 : 20.0;
  const double r_cut = 50.0;
  const RadialGrid g = RadialGrid::with_extent(0.01, r_cut + 5.0 + t_final + 2.0);
  const FieldState init = truncated_ground_state(g, 1.0, r_cut, 5.0);
  EvolutionConfig ec;
  ec.t_final = t_final;
  ec.snapshot_stride = 0;
  const SimulationRecord rec = evolve(init, ec);
  const FieldState& fin = rec.final_state();
  double err = 0.0;
  for (std::size_t i = 0; i < g.n_points && g.r(i) < 25.0; ++i)
    err = std::max(err, std::abs(fin.u[i] - ground_state_value(g.r(i))));
  ck.require(rec.outcome == Outcome::completed, "outcome completed");
  ck.require(err < 1e-3, "max_|u-W|_{r<25}=" + fmt(err) + " tol=1e-3 at t=" + fmt(t_final));
  return {5, "w-stationarity-finite-speed", ck.pass, ck.detail.str(), 0.0};
}

CriterionResult c06_ground_state_constants(Level) {
  Check ck;
  // oracle: adaptive quadrature of the closed-form densities, mapped to [0,1)
  auto oracle = [](auto f) {
    return num::adaptive_simpson(
        [&](double t) {
          const double r = t / (1.0 - t);
          const double jac = 1.0 / num::sqr(1.0 - t);
          return f(r) * jac;
        },
        0.0, 1.0 - 1e-9, 1e-13);
  };
  const double I1 = oracle([](double r) { return num::sqr(num::sqr(r)) / // r^4
                                                 std::pow(1.0 / 3.0 + r * r, 3.0); });
  const double I2 = oracle([](double r) { return r * r / std::pow(1.0 / 3.0 + r * r, 3.0); });
  const double W2_oracle = constants::four_pi * I1;
  const double E_oracle = 0.5 * constants::four_pi * I1 - constants::four_pi * I2 / 6.0;

  const RadialGrid g = RadialGrid::with_extent(0.01, 200.0);
  const FieldState w = ground_state({1.0}, g);
  const double grid_value = h1l2_norm_sq(w, 0.0) + tail_correction_sq(1.0, g.r_max());

  const double rel_a = std::abs(grid_value - W2_oracle) / W2_oracle;
  const double rel_b = std::abs(W2_oracle - 3.0 * E_oracle) / W2_oracle;
  const double rel_frozen = std::abs(W2_oracle - constants::w_h1_norm_sq) / W2_oracle;
  ck.require(rel_a < 1e-3,
             "grid(tail-corrected) vs oracle rel=" + fmt(rel_a) + " tol=1e-3");
  ck.require(rel_b < 1e-6, "|W2 - 3E| rel=" + fmt(rel_b) + " tol=1e-6");
  ck.require(rel_frozen < 1e-9, "oracle vs frozen constant rel=" + fmt(rel_frozen));
  return {6, "ground-state-constants", ck.pass, ck.detail.str(), 0.0};
}

CriterionResult c07_type_one_blowup(Level) {
  Check ck;
  const double T = 2.0, r0 = 4.0;
  const double dr = 0.002;
  const RadialGrid g = RadialGrid::with_extent(dr, 8.0);
  const double A = std::pow(0.75, 0.25);
  FieldState s(g);
  for (std::size_t i = 0; i < g.n_points; ++i) {
    const double r = g.r(i);
    const double ramp = 1.0 - num::smoothstep(r0, r0 + 1.0, r);
    s.u[i] = A / std::sqrt(T) * ramp;
    s.ut[i] = 0.5 * A / (T * std::sqrt(T)) * ramp;
  }
  EvolutionConfig ec;
  ec.t_final = T + 0.25;
  ec.snapshot_stride = 64;
  const SimulationRecord rec = evolve(s, ec);

  const double dt = ec.cfl * dr;
  double worst = 0.0;
  for (const auto& snap : rec.snapshots) {
    if (snap.time > T - 10.0 * dt) break;
    const double exact = A / std::sqrt(T - snap.time);
    const double r_clean = r0 - snap.time - 0.5;
    for (std::size_t i = 0; i < g.n_points && g.r(i) < std::min(r_clean, 1.0); ++i)
      worst = std::max(worst, std::abs(snap.u[i] - exact) / exact);
  }
  ck.require(worst < 0.01, "interior ODE rel_err=" + fmt(worst) + " tol=1e-2");
  ck.require(rec.outcome == Outcome::blowup_detected, "blow-up flagged");
  ck.require(rec.event_time <= T + 0.1,
             "flag time=" + fmt(rec.event_time) + " <= T+0.1=" + fmt(T + 0.1));
  return {7, "type-one-ode-blowup", ck.pass, ck.detail.str(), 0.0};
}

CriterionResult c08_peeling_recovery(Level level) {
  Check ck;
  std::mt19937 rng(20240811u);
  auto uni = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  const std::size_t instances = level == Level::fast ? 6 : 20;
  const PeelConfig pc;
  double worst_lambda_err = 0.0;
  std::size_t bad = 0;

  for (std::size_t inst = 0; inst < instances; ++inst) {
    const std::size_t nb = 1 + inst % 3;
    std::vector<double> lambdas{std::exp(uni(std::log(0.5), std::log(2.0)))};
    if (nb >= 2) {
      // three-bubble stacks need ratios the uniform grid can resolve
      const double lo = nb == 3 ? 2.5e-3 : 1e-4;
      const double hi = nb == 3 ? 3.5e-3 : 1e-3;
      for (std::size_t j = 1; j < nb; ++j)
        lambdas.push_back(lambdas.back() * std::exp(uni(std::log(lo), std::log(hi))));
    }
    std::vector<GroundStateParam> params;
    std::bernoulli_distribution coin(0.5);
    for (double l : lambdas) params.push_back({(coin(rng) ? 1.0 : -1.0) * std::sqrt(l)});

    const double lambda_min = lambdas.back();
    const double dr = pc.c2 * lambda_min / 30.0;
    const double r_max = 1.35 * pc.c2 * lambdas.front();
    const RadialGrid g = RadialGrid::with_extent(dr, r_max);

    FieldState state = superpose(params, g);
    // smooth noise of H1 norm 1e-3
    {
      FieldState noise(g);
      for (int b = 0; b < 3; ++b) {
        const double c = std::exp(uni(std::log(2.0 * pc.c2 * lambda_min), std::log(r_max / 3.0)));
        const double w = c / 4.0;
        const double a = uni(-1.0, 1.0);
        for (std::size_t i = 0; i < g.n_points; ++i)
          noise.u[i] += a * std::exp(-num::sqr((g.r(i) - c) / w));
      }
      const double nn = std::sqrt(h1l2_norm_sq(noise, 0.0));
      for (std::size_t i = 0; i < g.n_points; ++i) state.u[i] += noise.u[i] * (1e-3 / nn);
    }

    const BubbleList peeled = peel(state, FieldState(g), pc);
    if (peeled.alphas.size() != nb) {
      ++bad;
      continue;
    }
    for (std::size_t j = 0; j < nb; ++j) {
      if (peeled.signs()[j] != params[j].sign()) ++bad;
      const double rel = std::abs(peeled.lambdas()[j] - lambdas[j]) / lambdas[j];
      worst_lambda_err = std::max(worst_lambda_err, rel);
    }
  }
  ck.require(bad == 0, "count/sign mismatches=" + std::to_string(bad));
  ck.require(worst_lambda_err < 0.02,
             "worst lambda rel_err=" + fmt(worst_lambda_err) + " tol=0.02");
  return {8, "peeling-recovery", ck.pass, ck.detail.str(), 0.0};
}

CriterionResult c09_detection_identity(Level) {
  Check ck;
  std::mt19937 rng(7u);
  auto uni = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const double alpha = (k % 2 ? -1.0 : 1.0) * std::exp(uni(std::log(0.1), std::log(3.0)));
    const double c2 = std::exp(uni(std::log(10.0), std::log(1e4)));
    const double R1 = c2 * alpha * alpha;
    const double lhs = std::sqrt(R1) * std::abs(ground_state_value(alpha, R1));
    const double rhs = std::sqrt(c2) / std::sqrt(1.0 / 3.0 + c2 * c2);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  ck.require(worst < 1e-12, "max_abs_err=" + fmt(worst) + " tol=1e-12");
  return {9, "detection-level-identity", ck.pass, ck.detail.str(), 0.0};
}

// synthetic profile with k unit-energy bursts; see c10
RadiationProfile synthetic_bursts(std::size_t k, double ds, double t_end) {
  RadiationProfile g;
  g.direction = Direction::plus;
  g.ds = ds;
  g.s_min = -t_end;
  const auto n = static_cast<std::size_t>(std::llround((t_end + 5.0) / ds)) + 1;
  g.g.assign(n, 0.0);
  auto add_burst = [&](double lo, double hi) {
    for (std::size_t i = 0; i < n; ++i) {
      const double s = g.s_min + ds * static_cast<double>(i);
      if (s > lo && s < hi)
        g.g[i] = std::sin(3.14159265358979323846 * (s - lo) / (hi - lo));
    }
    // calibrate this burst to carry exactly E(W,0) under the profile quadrature
    const double raw = window_energy(g, lo, hi);
    const double scale = std::sqrt(constants::w_energy / raw);
    for (std::size_t i = 0; i < n; ++i) {
      const double s = g.s_min + ds * static_cast<double>(i);
      if (s > lo && s < hi) g.g[i] *= scale;
    }
  };
  add_burst(-220.0, -200.0);
  if (k >= 2) add_burst(-22000.0, -20000.0);
  return g;
}

CriterionResult c10_segmentation_synthetic(Level level) {
  Check ck;
  SegmentationParams sp;
  sp.delta = 0.002;
  sp.delta_star = 0.01;
  sp.ell = 4.0;
  const std::vector<std::size_t> ks = level == Level::fast ? std::vector<std::size_t>{1}
                                                           : std::vector<std::size_t>{1, 2};
  for (std::size_t k : ks) {
    const double t_end = k == 1 ? 2000.0 : 200000.0;
    const double ds = k == 1 ? 0.05 : 0.5;
    const RadiationProfile g = synthetic_bursts(k, ds, t_end);
    const double E = constants::w_energy * static_cast<double>(k + 1);
    const Segmentation seg = segment(g, E, 1.0, sp);

    ck.require(seg.collisions.size() == k,
               "k=" + std::to_string(k) + ": collisions=" + std::to_string(seg.collisions.size()));
    ck.require(seg.stable.size() == k + 1,
               "k=" + std::to_string(k) + ": stable periods=" + std::to_string(seg.stable.size()));
    for (std::size_t j = 0; j < seg.stable.size(); ++j) {
      const int expect = static_cast<int>(k + 1 - j);
      ck.require(seg.stable[j].bubbles == expect,
                 "J_" + std::to_string(j) + "=" + std::to_string(seg.stable[j].bubbles) +
                     " expect " + std::to_string(expect));
    }
    for (const auto& cp : seg.collisions) {
      const double err = std::abs(cp.budget - constants::w_energy);
      ck.require(err < 1e-3, "budget_err=" + fmt(err) + " tol=1e-3");
    }
  }
  return {10, "segmentation-synthetic", ck.pass, ck.detail.str(), 0.0};
}

CriterionResult c11_extraction_consistency(Level level) {
  Check ck;
  const double t_final = level == Level::fast ? 20.0 : 40.0;
  const RadialGrid g = RadialGrid::with_extent(0.01, 12.0 + t_final + 12.0);
  FieldState s = scaled_to_norm(gaussian_state(g, 1.0, 3.0, 1.0, 0.0, 0.0, 1.0), 0.3);
  EvolutionConfig ec;
  ec.t_final = t_final;
  ec.snapshot_times = {0.5 * t_final, 0.7071 * t_final, t_final};
  const SimulationRecord rec = evolve(s, ec);
  ck.require(rec.outcome == Outcome::completed, "outcome completed");

  ExtractionConfig xc;
  xc.t_samples = ec.snapshot_times;
  xc.s_min = -5.0;
  xc.s_max = 10.0;
  const Extraction ex = extract_gplus(rec, xc);

  const double lhs = 8.0 * 3.14159265358979323846 * ex.gplus.l2_sq();
  const double rhs = h1l2_norm_sq(rec.final_state(), t_final - 5.0);
  const double rel = std::abs(lhs - rhs) / rhs;
  const double ab = ex.report.max_ab_gap / ex.report.scale;
  const double spread = ex.report.spread / ex.report.scale;
  ck.require(rel < 0.05, "8pi||G+||^2 vs exterior energy rel=" + fmt(rel) + " tol=0.05");
  ck.require(ab < 0.05, "A/B gap=" + fmt(ab) + " tol=0.05");
  ck.require(spread < 0.05, "across-time spread=" + fmt(spread) + " tol=0.05");
  return {11, "radiation-extraction-consistency", ck.pass, ck.detail.str(), 0.0};
}

CriterionResult c12_virial_bound(Level level) {
  Check ck;
  const double T = 5.0;
  const double K0 = 10.0 * constants::w_energy;

  auto check_run = [&](const std::string& name, const FieldState& init, double t_final) {
    EvolutionConfig ec;
    ec.t_final = t_final;
    ec.snapshot_stride = 16;
    const SimulationRecord rec = evolve(init, ec);
    const VirialResult vr = virial(rec, T, K0);
    ck.require(vr.least.within, name + ": min||u||^2=" + fmt(vr.least.min_norm_sq) +
                                    " <= 6E+K0=" + fmt(vr.least.bound));
  };

  {
    const RadialGrid g = RadialGrid::with_extent(0.02, 40.0);
    check_run("small-data", scaled_to_norm(gaussian_state(g, 1.0, 3.0, 1.0, 0.0, 0.0, 1.0), 0.3),
              26.0);
  }
  if (level == Level::full) {
    const RadialGrid g = RadialGrid::with_extent(0.02, 60.0);
    check_run("stationary-W", truncated_ground_state(g, 1.0, 30.0, 2.0), 26.0);
    check_run("near-threshold", truncated_ground_state(g, 0.95, 30.0, 2.0), 26.0);
  }
  return {12, "virial-least-norm-bound", ck.pass, ck.detail.str(), 0.0};
}

CriterionResult c13_one_pass_contiguity(Level level) {
  Check ck;
  const std::size_t n_traj = level == Level::fast ? 3 : 10;
  std::mt19937 rng(99u);
  auto uni = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };

  const std::vector<double> sample_times = level == Level::fast
                                               ? std::vector<double>{2.0, 10.0, 18.0, 26.0}
                                               : std::vector<double>{2.0, 6.0, 10.0, 14.0, 18.0,
                                                                     22.0, 26.0, 30.0};
  std::size_t hard_failures = 0;
  std::ostringstream what;

  for (std::size_t k = 0; k < n_traj; ++k) {
    const double eps = 0.02 + 0.38 * static_cast<double>(k) / std::max<std::size_t>(1, n_traj - 1);
    const double sign = k % 2 == 0 ? 1.0 : -1.0;
    const bool in_velocity = k % 3 == 2;
    const double center = uni(1.0, 3.0);

    auto run_traj = [&](double dr) {
      const RadialGrid g = RadialGrid::with_extent(dr, 60.0);
      FieldState init = truncated_ground_state(g, 1.0, 25.0, 2.0);
      FieldState bump(g);
      for (std::size_t i = 0; i < g.n_points; ++i)
        bump.u[i] = std::exp(-num::sqr(g.r(i) - center));
      const double nn = std::sqrt(h1l2_norm_sq(bump, 0.0));
      for (std::size_t i = 0; i < g.n_points; ++i) {
        const double v = sign * eps / nn * bump.u[i];
        if (in_velocity)
          init.ut[i] += v;
        else
          init.u[i] += v;
      }
      EvolutionConfig ec;
      ec.t_final = 31.0;
      ec.snapshot_stride = 0;
      ec.snapshot_times = sample_times;
      const SimulationRecord rec = evolve(init, ec);
      MembershipRConfig mc;
      mc.horizon = 16.0;
      mc.s_tail_max = 8.0;
      return one_pass_check(rec, 1, 0.2, sample_times, mc);
    };

    OnePassReport rep = run_traj(0.02);
    if (!rep.contiguous) rep = run_traj(0.01);  // resolution-doubling retry
    if (!rep.contiguous) ++hard_failures;
    what << "traj" << k << "=[";
    for (int v : rep.verdict) what << (v < 0 ? "?" : v ? "1" : "0");
    what << "] ";
  }
  ck.require(hard_failures == 0,
             what.str() + "non-contiguous after retry: " + std::to_string(hard_failures));
  return {13, "one-pass-contiguity", ck.pass, ck.detail.str(), 0.0};
}

CriterionResult c14_dichotomy_map(Level level) {
  Check ck;
  const RadialGrid g = RadialGrid::with_extent(0.01, 55.0);
  EvolutionConfig ec;
  ec.snapshot_stride = 256;
  DichotomyConfig dc;
  dc.truncate_at = 10.0;
  dc.t_final = 40.0;

  auto classify = [&](double lam, double bump) {
    DichotomyConfig d = dc;
    d.velocity_bump = bump;
    return dichotomy_experiment(lam, g, ec, d);
  };

  {
    const auto r = classify(0.5, 0.0);
    ck.require(r.precondition_ok && r.cls == DichotomyClass::scatter_proxy,
               "lambda=0.5 -> scatter (E=" + fmt(r.energy) + ", final_core=" +
                   fmt(r.final_core_amp) + ")");
  }
  if (level == Level::full) {
    const auto r = classify(0.8, 0.0);
    ck.require(r.precondition_ok && r.cls == DichotomyClass::scatter_proxy,
               "lambda=0.8 -> scatter (E=" + fmt(r.energy) + ", final_core=" +
                   fmt(r.final_core_amp) + ")");
  }
  {
    const auto r = classify(1.2, 1.0);
    ck.require(r.precondition_ok, "lambda=1.2 keeps E=" + fmt(r.energy) + " < E(W,0)");
    ck.require(r.cls == DichotomyClass::blowup,
               "lambda=1.2 -> blowup (t*=" + fmt(r.blowup_time) + ")");
  }
  return {14, "dichotomy-map", ck.pass, ck.detail.str(), 0.0};
}

}  // namespace

std::string format_line(const CriterionResult& r) {
  std::ostringstream ss;
  ss << (r.pass ? "[PASS] " : "[FAIL] ") << (r.id < 10 ? "0" : "") << r.id << " " << r.name
     << ": " << r.detail << " (" << fmt(r.seconds) << "s)";
  return ss.str();
}

Report run_suite(Level level, const std::vector<int>& only,
                 const std::function<void(const std::string&)>& sink) {
  using Fn = CriterionResult (*)(Level);
  const std::vector<Fn> criteria{
      c01_radiation_isometry,   c02_tail_identity,       c03_linear_solver_order,
      c04_energy_conservation,  c05_w_stationarity,      c06_ground_state_constants,
      c07_type_one_blowup,      c08_peeling_recovery,    c09_detection_identity,
      c10_segmentation_synthetic, c11_extraction_consistency, c12_virial_bound,
      c13_one_pass_contiguity,  c14_dichotomy_map};

  Report rep;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto t0 = clock_t_::now();
    CriterionResult r;
    try {
      r = criteria[i](level);
    } catch (const std::exception& e) {
      r.id = id;
      r.name = "criterion";
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(clock_t_::now() - t0).count();
    rep.all_pass = rep.all_pass && r.pass;
    if (sink) sink(format_line(r));
    rep.results.push_back(std::move(r));
  }
  return rep;
}

}  // namespace critwave::verify
