#ifndef CRITWAVE_BUBBLES_HPP
#define CRITWAVE_BUBBLES_HPP

// Constructive bubble peeling: locate the outermost radius where
// r^{1/2}|w(r)| reaches the detection level beta1, subtract the matching
// W^alpha, repeat. Also the two neighborhood membership tests (fit-based
// and radiation-based).

#include <string>

#include "critwave/core.hpp"
#include "critwave/nlsolve.hpp"

namespace critwave {

struct PeelConfig {
  double c2 = 100.0;   // outer-cone constant, >= 10
  double beta = 0.25;  // stopping threshold, must exceed 2*beta1
  std::size_t n_max = 8;
  std::size_t refine_sweeps = 40;  // cyclic re-detection passes
  double refine_rtol = 1e-6;

  // Detection level c2^{1/2} (1/3 + c2^2)^{-1/2}; r^{1/2}|W^alpha| equals it
  // exactly at r = c2*alpha^2.
  double beta1() const;
  void validate() const;
};

struct BubbleList {
  std::vector<double> alphas;   // |alpha_1| > |alpha_2| > ... > 0
  double residual_sq = 0.0;     // H(r_stop) norm of the remainder
  double r_stop = 0.0;          // 0 when peeling ended below beta
  std::vector<double> ratios;   // |alpha_{j+1}| / |alpha_j|

  std::vector<double> lambdas() const;
  std::vector<int> signs() const;
  std::vector<GroundStateParam> params() const;
};

BubbleList peel(const FieldState& state, const FieldState& background, const PeelConfig& cfg);

struct NeighborhoodVerdict {
  bool member = false;
  BubbleList fitted;
  std::vector<double> slack;  // margins on the defining inequalities; member => all >= 0
  bool blowup_flag = false;
  std::string detail;
};

// Fits n signed bubbles (peel seed + per-scale golden-section refinement of
// the residual norm, outermost first); member iff the residual norm is < eps
// and every scale ratio lambda_{j+1}/lambda_j is < kappa^2.
NeighborhoodVerdict membership_M(const FieldState& state, std::size_t n, double eps,
                                 double kappa, const PeelConfig& cfg = {});

struct MembershipRConfig {
  double horizon = 20.0;   // evolve both time directions to +/- horizon
  double r_cut = 0.25;     // interior ramp: data vanish below r_cut/2
  double s_tail_max = 10.0;  // upper end of the measured tail window
  double dr = 0.0;         // 0: reuse the state's grid spacing
  double cfl = 0.9;
};

// Radiation-based neighborhood test: evolves the interior-cutoff state in
// both time directions, extracts the outgoing tails on s > r_cut, and checks
// both tails < delta together with the squared-norm window
// (n - 1/2) ||W||^2 < ||state||^2 < (n + 1/2) ||W||^2.
NeighborhoodVerdict membership_R(const FieldState& state, std::size_t n, double delta,
                                 const MembershipRConfig& cfg = {});

}  // namespace critwave

#endif
