#ifndef CRITWAVE_IO_HPP
#define CRITWAVE_IO_HPP

// CSV serialization of states, profiles and traces. All floating-point
// output uses 17 significant digits so roundtrips are lossless.

#include <cstdint>
#include <filesystem>
#include <string>

#include "critwave/dynamics.hpp"
#include "critwave/linwave.hpp"
#include "critwave/nlsolve.hpp"
#include "critwave/radiation.hpp"

namespace critwave::io {

std::string fmt17(double x);

void write_fieldstate_csv(const std::filesystem::path& path, const FieldState& s);
FieldState read_fieldstate_csv(const std::filesystem::path& path);

void write_profile_csv(const std::filesystem::path& path, const RadiationProfile& g);
RadiationProfile read_profile_csv(const std::filesystem::path& path);

// gplus.csv carries the per-sample across-time spread as a third column.
void write_gplus_csv(const std::filesystem::path& path, const Extraction& ex);

void write_strength_csv(const std::filesystem::path& path, const StrengthCurve& c);
void write_energy_csv(const std::filesystem::path& path,
                      const std::vector<std::pair<double, double>>& trace);

std::string segmentation_json(const Segmentation& seg);
std::string peel_json(const BubbleList& b);

std::uint64_t fnv1a64_file(const std::filesystem::path& path);
std::string hex64(std::uint64_t v);

}  // namespace critwave::io

#endif
