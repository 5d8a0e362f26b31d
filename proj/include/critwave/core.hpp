#ifndef CRITWAVE_CORE_HPP
#define CRITWAVE_CORE_HPP

// Radial grids, field states, the static solution family W^alpha, and the
// norms and energies used by every other component. Fields are sampled on
// r_i = i*dr, i = 1..n_points; the origin is handled through the reduced
// variable v = r*u with v(0) = 0.

#include <cstddef>
#include <span>
#include <vector>

#include "critwave/errors.hpp"

namespace critwave {

namespace constants {
// 4*pi * int_0^inf r^4 (1/3 + r^2)^-3 dr = 3*sqrt(3)*pi^2/4
inline constexpr double w_h1_norm_sq = 12.82099220496913;
// E(W,0) = w_h1_norm_sq / 3 = sqrt(3)*pi^2/4
inline constexpr double w_energy = 4.273664068323042;
inline constexpr double four_pi = 12.566370614359172;
}  // namespace constants

struct RadialGrid {
  double dr = 0.0;
  std::size_t n_points = 0;

  RadialGrid() = default;
  RadialGrid(double dr_, std::size_t n);
  static RadialGrid with_extent(double dr_, double r_max);

  double r(std::size_t i) const { return dr * static_cast<double>(i + 1); }
  double r_max() const { return dr * static_cast<double>(n_points); }
  bool operator==(const RadialGrid&) const = default;
};

struct FieldState {
  RadialGrid grid;
  std::vector<double> u;
  std::vector<double> ut;
  double time = 0.0;

  FieldState() = default;
  explicit FieldState(const RadialGrid& g, double t = 0.0);
  bool finite() const;
};

// alpha != 0 encodes the bubble sign and the scale lambda = alpha^2.
struct GroundStateParam {
  double alpha = 1.0;
  double lambda() const { return alpha * alpha; }
  int sign() const { return alpha >= 0.0 ? 1 : -1; }
};

double ground_state_value(double r);                 // W(r) = (1/3 + r^2)^{-1/2}
double ground_state_value(double alpha, double r);   // W^alpha(r)
FieldState ground_state(GroundStateParam p, const RadialGrid& g);

struct NormReport {
  double h1l2_sq = 0.0;
  double l6 = 0.0;
  double energy = 0.0;
};

// E = 4*pi * int ( (u')^2/2 + ut^2/2 - u^6/6 ) r^2 dr over [0, r_max].
double energy(const FieldState& s);

// 4*pi * int_R^{r_max} ((u')^2 + ut^2) r^2 dr. R = 0 gives the full norm.
double h1l2_norm_sq(const FieldState& s, double R = 0.0);

double l6_norm(const FieldState& s);
NormReport norm_report(const FieldState& s);

// Analytic correction for the truncated 1/r tail of W^alpha beyond r_max:
// 4*pi*alpha^2 / r_max.
double tail_correction_sq(double alpha, double r_max);

// ( int_{t0}^{t1} ( int_{|x|>|t|+R} |u|^10 dx )^{1/2} dt )^{1/5} over recorded
// snapshots; a quadrature approximation of the L^5 L^10 cone-exterior norm.
double y_norm(std::span<const FieldState> history, double t0, double t1, double R);

void check_same_grid(const FieldState& a, const FieldState& b);

FieldState superpose(const std::vector<GroundStateParam>& bubbles, const FieldState& extra);
FieldState superpose(const std::vector<GroundStateParam>& bubbles, const RadialGrid& g);

}  // namespace critwave

#endif
