#ifndef CRITWAVE_NLSOLVE_HPP
#define CRITWAVE_NLSOLVE_HPP

// Explicit leapfrog evolution of the radial quintic wave equation in the
// reduced variable v = r*u, with energy monitoring, blow-up detection and
// snapshot recording. The outer boundary is exact zero Dirichlet placed
// beyond the causal horizon of the data.

#include <utility>
#include <vector>

#include "critwave/core.hpp"

namespace critwave {

enum class Nonlinearity { focusing_quintic, off };

struct EvolutionConfig {
  double cfl = 0.9;               // dt/dr, must be in (0, 1]
  double t_final = 0.0;
  std::size_t snapshot_stride = 0;  // 0: snapshots only at t = 0 and t_final
  std::vector<double> snapshot_times;  // optional explicit times (overrides stride)
  double blowup_amp = 0.0;        // <= 0: auto, 1e3 * max(1, max|u0|)
  double blowup_grad = 0.0;       // <= 0: auto, 1e6 * max(1, max|u0'|)
  Nonlinearity nonlinearity = Nonlinearity::focusing_quintic;
  bool check_support = true;      // enforce r_max >= support + t_final
  // >= 0: zero the solution deep inside the light cone r < t - cone_clean;
  // everything at r > t - cone_clean/2 is causally unaffected.
  double cone_clean = -1.0;

  void validate() const;
};

enum class Outcome { completed, blowup_detected, numeric_failure };

struct SimulationRecord {
  std::vector<FieldState> snapshots;
  std::vector<std::pair<double, double>> energy_trace;  // (t, E)
  Outcome outcome = Outcome::completed;
  double event_time = 0.0;  // blow-up / failure time when applicable

  const FieldState& final_state() const { return snapshots.back(); }
  // Nearest snapshot; errors when no snapshot lies within tol of t.
  const FieldState& at_time(double t, double tol) const;
  const FieldState& at_time(double t) const;
};

SimulationRecord evolve(const FieldState& initial, const EvolutionConfig& cfg);
SimulationRecord evolve_linear(const FieldState& initial, EvolutionConfig cfg);

// (lambda^{-1/2} u(r/lambda), lambda^{-3/2} ut(r/lambda)) on the same grid.
FieldState rescale_state(const FieldState& s, double lambda);

// Largest node radius where |u| + |ut| exceeds tol; 0 for an empty state.
double support_radius(const FieldState& s, double tol = 1e-12);

}  // namespace critwave

#endif
