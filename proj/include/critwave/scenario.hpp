#ifndef CRITWAVE_SCENARIO_HPP
#define CRITWAVE_SCENARIO_HPP

// Scenario-driven pipeline: parse a strict JSON scenario, build the initial
// data, evolve, run the configured diagnostics and write the run directory
// (meta.json, energy.csv, snap_*.csv, gplus.csv, strength.csv, peel.json,
// segmentation.json) plus a checksummed manifest.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "critwave/dynamics.hpp"

namespace critwave {

struct Scenario {
  std::string name;

  enum class DataKind { bubbles, profile, ground_state_scaled, blowup_ode, custom };
  DataKind kind = DataKind::bubbles;
  std::vector<GroundStateParam> bubbles;       // kind == bubbles
  std::string data_file;                       // kind == profile / custom
  double lambda_amp = 1.0;                     // kind == ground_state_scaled
  double ode_T = 1.0, ode_r0 = 4.0;            // kind == blowup_ode
  double truncate_at = -1.0;                   // <0: auto from causal coverage
  double ramp_width = 2.0;
  double velocity_bump = 0.0;

  double dr = 0.01;
  double r_max = 10.0;

  EvolutionConfig evolution;

  struct Diagnostics {
    double ell = 100.0;
    double delta = 0.05;
    double delta_star = 0.2;
    double radius = -1.0;  // exterior smallness radius; <0: support of the data
    std::vector<double> extraction_times;
    double s_min = -5.0, s_max = 10.0;
    bool peel = true;
    bool segment = true;
  } diagnostics;
};

Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::filesystem::path& file);
FieldState build_initial_data(const Scenario& sc);

struct RunManifest {
  std::string scenario_echo;  // normalized JSON of the scenario
  std::vector<std::pair<std::string, std::string>> artifacts;  // path, checksum
  std::string outcome;
  std::vector<std::string> stage_errors;
  bool ok = true;
};

RunManifest run(const Scenario& sc, const std::filesystem::path& outdir);
RunManifest run_file(const std::filesystem::path& scenario_file,
                     const std::filesystem::path& outdir);

// Cartesian sweep over dotted-path overrides of a template scenario; one CSV
// row per instance, order-normalized regardless of parallelism.
struct SweepSpec {
  struct Axis {
    std::string path;            // e.g. "initial_data.lambda_amp"
    std::vector<std::string> values;  // JSON literals
  };
  std::vector<Axis> axes;
};

SweepSpec parse_sweep(const std::string& json_text);
std::string sweep(const std::filesystem::path& template_file, const SweepSpec& spec,
                  const std::filesystem::path& outdir, unsigned parallelism);

unsigned thread_cap(unsigned requested);  // honors CRITWAVE_THREADS

}  // namespace critwave

#endif
