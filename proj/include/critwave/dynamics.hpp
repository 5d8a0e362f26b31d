#ifndef CRITWAVE_DYNAMICS_HPP
#define CRITWAVE_DYNAMICS_HPP

// Long-time diagnostics: energy-quantized bubble counting, stable/collision
// period segmentation from the local radiation strength, the virial
// functional with the least-energy-norm bound, one-pass interval checks and
// the sub-ground-state dichotomy experiment.

#include "critwave/bubbles.hpp"
#include "critwave/radiation.hpp"

namespace critwave {

struct BubbleCount {
  int count = 0;
  double residual = 0.0;  // |E - 4pi*tail - count*E(W,0)|
  bool ambiguous = false; // residual > 0.4 * E(W,0)
};

// count = round( (E - 4*pi*||G_+||^2_{[-t,inf)}) / E(W,0) ), clamped at 0.
BubbleCount bubble_count(double E, const RadiationProfile& gplus, double t);

struct SegmentationParams {
  double delta = 0.05;
  double delta_star = 0.2;
  double ell = 100.0;
};

struct StablePeriod {
  double a = 0.0;
  double b = 0.0;
  int bubbles = 0;
  bool unbounded = false;        // b is the data end standing in for +inf
  double leak = 0.0;             // 4*pi*||G_+||^2 over (-b, -a]
  bool arbitrary_choice = false; // no component of this level met P
};

struct CollisionPeriod {
  double begin = 0.0;  // b_k
  double end = 0.0;    // a_{k+1}
  double budget = 0.0; // 4*pi*||G_+||^2 over [-a_{k+1}, -b_k]
  double ratio = 0.0;  // a_{k+1} / b_k
};

struct Segmentation {
  double prep_end = 0.0;      // a_1; preparation period is [0, a_1]
  double prep_energy = 0.0;   // 4*pi*||G_+||^2 over (-a_1, 0]
  double tail_energy = 0.0;   // 4*pi*||G_+||^2 over (0, s_max]
  std::vector<StablePeriod> stable;
  std::vector<CollisionPeriod> collisions;
  double a1_over_R = 0.0;
  double t_end = 0.0;
  bool empty_stable = false;
  std::string diagnosis;
};

Segmentation segment(const RadiationProfile& gplus, double E, double R,
                     const SegmentationParams& p);

struct VirialTrace {
  std::vector<double> t;
  std::vector<double> J;
  std::vector<double> Jprime;
  std::vector<double> Q;  // J'/J, NaN where J vanishes
};

struct LeastNormReport {
  double min_norm_sq = 0.0;
  double t_min = 0.0;
  double bound = 0.0;  // 6E + K0
  bool within = false;
  double energy = 0.0;
  double exterior_norm_sq_at_T = 0.0;  // measured smallness, reported not asserted
};

struct VirialResult {
  VirialTrace trace;
  LeastNormReport least;
};

// Evaluates J(t) = int |u|^2 phi(|x|/t) dx with phi the squared smooth cutoff
// (1 on s <= 2, 0 on s >= 3) over snapshots in [T, 5T].
VirialResult virial(const SimulationRecord& rec, double T, double K0);

struct OnePassReport {
  std::vector<double> times;
  std::vector<int> verdict;  // 1 member, 0 non-member, -1 unknown
  bool contiguous = true;
  std::vector<std::size_t> offending;
};

OnePassReport one_pass_check(const SimulationRecord& rec, std::size_t n, double delta,
                             std::span<const double> sample_times,
                             const MembershipRConfig& mcfg);

enum class DichotomyClass { scatter_proxy, blowup, undecided };

struct DichotomyConfig {
  double velocity_bump = 0.0;   // amplitude of the exp(-r^2) core velocity
  double truncate_at = 10.0;    // smooth cutoff radius for the 1/r tail
  double ramp_width = 2.0;
  double t_final = 40.0;
  double decay_fraction = 1e-2; // scatter proxy: core amp below this fraction
  double window_fraction = 0.2; // ... sustained over the trailing window
};

struct DichotomyResult {
  DichotomyClass cls = DichotomyClass::undecided;
  bool precondition_ok = true;  // E < E(W,0) as the theorem requires
  double energy = 0.0;
  double blowup_time = 0.0;
  double initial_core_amp = 0.0;
  double final_core_amp = 0.0;
};

DichotomyResult dichotomy_experiment(double lambda_amp, const RadialGrid& grid,
                                     const EvolutionConfig& ecfg, const DichotomyConfig& dcfg);

}  // namespace critwave

#endif
