#ifndef CRITWAVE_RADIATION_HPP
#define CRITWAVE_RADIATION_HPP

// Extraction of outgoing radiation profiles G_+ from simulation records
// along null lines r = t + s, and the strength functions phi / phi_ell
// that drive the stable/collision segmentation.

#include "critwave/linwave.hpp"
#include "critwave/nlsolve.hpp"

namespace critwave {

struct ExtractionConfig {
  std::vector<double> t_samples;  // extraction times, matched to snapshots
  double s_min = 0.0;
  double s_max = 0.0;
  double consistency_tol = 0.05;  // on the normalized across-time spread
};

struct ExtractionReport {
  double max_ab_gap = 0.0;   // max |r*ut - (-r*ur)| over the window
  double spread = 0.0;       // max across-time spread of the estimator
  double scale = 0.0;        // max |G| used for normalization
  bool converged = true;
};

struct Extraction {
  RadiationProfile gplus;          // direction = plus
  std::vector<double> spread_s;    // per-sample across-time spread
  ExtractionReport report;
};

// Samples A = r*ut and B = -r*ur at r = t + s for each extraction time and
// returns the averaged estimator (A+B)/2 with consistency diagnostics.
Extraction extract_gplus(const SimulationRecord& rec, const ExtractionConfig& cfg);

struct StrengthCurve {
  std::vector<double> t;
  std::vector<double> phi;      // ||G_+||_{L^2([-t, inf))}
  std::vector<double> phi_ell;  // ||G_+||_{L^2([-t, -t/ell])}
  double ell = 0.0;
};

double strength_at(const RadiationProfile& gplus, double t);
double local_strength(const RadiationProfile& gplus, double t, double ell);
StrengthCurve strength(const RadiationProfile& gplus, std::span<const double> ts, double ell);

// 4*pi * int_a^b G^2 ds
double window_energy(const RadiationProfile& g, double a, double b);

}  // namespace critwave

#endif
