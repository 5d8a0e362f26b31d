#ifndef CRITWAVE_LINWAVE_HPP
#define CRITWAVE_LINWAVE_HPP

// Exact linear free-wave engine in the radiation-profile representation:
// the isometry (u0,u1) <-> G_-, the +/- symmetry, evaluation along null
// lines, and the exterior-energy identity. Profiles live on their own
// uniform s-grid, decoupled from the spatial grid.

#include "critwave/core.hpp"

namespace critwave {

enum class Direction { plus, minus };

struct RadiationProfile {
  double s_min = 0.0;
  double ds = 0.0;
  std::vector<double> g;
  Direction direction = Direction::minus;

  double s_max() const { return s_min + ds * static_cast<double>(g.size() - 1); }
  // Linear interpolation; identically 0 outside the stored range.
  double value(double s) const;
  // int_a^b g^2 ds with fractional end cells.
  double l2_sq(double a, double b) const;
  double l2_sq() const;
  double l2_sq_outside(double R) const;  // |s| > R
  bool finite() const;
};

// Inversion of the free-wave formulas at t = 0:
//   G_-(r)  = ( d/dr (r u0) + r u1 ) / 2
//   G_-(-r) = ( d/dr (r u0) - r u1 ) / 2
// sampled on s in [-r_max, r_max] with ds = dr.
RadiationProfile profile_from_data(const FieldState& s);

// u0(r) = (1/r) int_{-r}^{r} G_-, u1(r) = (G_-(r) - G_-(-r)) / r.
// Inverse of profile_from_data up to O(ds^2 + dr^2); the grid may extend
// beyond the profile support (zero-padded by convention).
FieldState data_from_profile(const RadiationProfile& gm, const RadialGrid& grid);

// s -> -G(-s) with the direction flag flipped; an L^2 isometry and involution.
RadiationProfile conjugate(const RadiationProfile& g);

struct FreeWaveValue {
  double u;
  double ut;
  double ur;
};

// u(r,t) = (1/r) int_{t-r}^{t+r} G_-(s) ds, with ut and ur from the
// fundamental theorem of calculus.
FreeWaveValue free_wave_evaluate(const RadiationProfile& gm, double r, double t);

struct TailIdentity {
  double lhs;  // ||(u0,u1)||^2_{H(R)}
  double rhs;  // 8*pi*||G_-||^2_{|s|>R} + 4*pi*R*u0(R)^2
};
TailIdentity tail_identity_check(const FieldState& s, double R);

}  // namespace critwave

#endif
