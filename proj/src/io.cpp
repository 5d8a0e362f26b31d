#include "critwave/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace critwave::io {

using ordered_json = nlohmann::ordered_json;

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(errc::io, "cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io, "cannot open " + path.string());
  return in;
}

// parse "key=value" tokens from a header line
double header_value(const std::string& header, const std::string& key) {
  const auto pos = header.find(key + "=");
  if (pos == std::string::npos) fail(errc::parse, "header misses field '" + key + "'");
  return std::stod(header.substr(pos + key.size() + 1));
}

}  // namespace

void write_fieldstate_csv(const std::filesystem::path& path, const FieldState& s) {
  auto out = open_out(path);
  out << "# critwave fieldstate t=" << fmt17(s.time) << " dr=" << fmt17(s.grid.dr) << "\n";
  for (std::size_t i = 0; i < s.grid.n_points; ++i)
    out << fmt17(s.grid.r(i)) << ',' << fmt17(s.u[i]) << ',' << fmt17(s.ut[i]) << "\n";
}

FieldState read_fieldstate_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string header;
  std::getline(in, header);
  if (header.rfind("# critwave fieldstate", 0) != 0)
    fail(errc::parse, path.string() + ": not a critwave fieldstate file");
  const double t = header_value(header, "t");
  const double dr = header_value(header, "dr");

  std::vector<double> u, ut;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    double r, a, b;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &r, &a, &b) != 3)
      fail(errc::parse, path.string() + ": malformed row '" + line + "'");
    u.push_back(a);
    ut.push_back(b);
  }
  FieldState s(RadialGrid(dr, u.size()), t);
  s.u = std::move(u);
  s.ut = std::move(ut);
  return s;
}

void write_profile_csv(const std::filesystem::path& path, const RadiationProfile& g) {
  auto out = open_out(path);
  out << "# critwave profile dir=" << (g.direction == Direction::plus ? "plus" : "minus")
      << " ds=" << fmt17(g.ds) << "\n";
  for (std::size_t i = 0; i < g.g.size(); ++i)
    out << fmt17(g.s_min + g.ds * static_cast<double>(i)) << ',' << fmt17(g.g[i]) << "\n";
}

RadiationProfile read_profile_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string header;
  std::getline(in, header);
  if (header.rfind("# critwave profile", 0) != 0)
    fail(errc::parse, path.string() + ": not a critwave profile file");
  RadiationProfile g;
  g.direction = header.find("dir=plus") != std::string::npos ? Direction::plus : Direction::minus;
  g.ds = header_value(header, "ds");

  bool first = true;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    double s, v;
    if (std::sscanf(line.c_str(), "%lf,%lf", &s, &v) != 2)
      fail(errc::parse, path.string() + ": malformed row '" + line + "'");
    if (first) {
      g.s_min = s;
      first = false;
    }
    g.g.push_back(v);
  }
  if (g.g.size() < 2) fail(errc::parse, path.string() + ": profile needs at least 2 samples");
  return g;
}

void write_gplus_csv(const std::filesystem::path& path, const Extraction& ex) {
  auto out = open_out(path);
  out << "# critwave profile dir=plus ds=" << fmt17(ex.gplus.ds) << "\n";
  for (std::size_t i = 0; i < ex.gplus.g.size(); ++i) {
    out << fmt17(ex.gplus.s_min + ex.gplus.ds * static_cast<double>(i)) << ','
        << fmt17(ex.gplus.g[i]) << ',' << fmt17(ex.spread_s[i]) << "\n";
  }
}

void write_strength_csv(const std::filesystem::path& path, const StrengthCurve& c) {
  auto out = open_out(path);
  out << "# critwave strength ell=" << fmt17(c.ell) << "\n";
  for (std::size_t i = 0; i < c.t.size(); ++i)
    out << fmt17(c.t[i]) << ',' << fmt17(c.phi[i]) << ',' << fmt17(c.phi_ell[i]) << "\n";
}

void write_energy_csv(const std::filesystem::path& path,
                      const std::vector<std::pair<double, double>>& trace) {
  auto out = open_out(path);
  out << "# critwave energy\n";
  for (const auto& [t, e] : trace) out << fmt17(t) << ',' << fmt17(e) << "\n";
}

std::string segmentation_json(const Segmentation& seg) {
  ordered_json j;
  j["prep"] = {{"begin", 0.0}, {"end", seg.prep_end}, {"energy", seg.prep_energy}};
  j["tail_energy"] = seg.tail_energy;
  j["a1_over_R"] = seg.a1_over_R;
  j["t_end"] = seg.t_end;
  j["empty_stable"] = seg.empty_stable;
  if (!seg.diagnosis.empty()) j["diagnosis"] = seg.diagnosis;
  j["stable"] = ordered_json::array();
  for (const auto& sp : seg.stable) {
    j["stable"].push_back({{"a", sp.a},
                           {"b", sp.b},
                           {"bubbles", sp.bubbles},
                           {"unbounded", sp.unbounded},
                           {"leak", sp.leak},
                           {"arbitrary_choice", sp.arbitrary_choice}});
  }
  j["collisions"] = ordered_json::array();
  for (const auto& cp : seg.collisions) {
    j["collisions"].push_back(
        {{"begin", cp.begin}, {"end", cp.end}, {"budget", cp.budget}, {"ratio", cp.ratio}});
  }
  return j.dump(2) + "\n";
}

std::string peel_json(const BubbleList& b) {
  ordered_json j;
  j["alphas"] = b.alphas;
  j["lambdas"] = b.lambdas();
  j["signs"] = b.signs();
  j["ratios"] = b.ratios;
  j["residual_sq"] = b.residual_sq;
  j["r_stop"] = b.r_stop;
  return j.dump(2) + "\n";
}

std::uint64_t fnv1a64_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::uint64_t h = 1469598103934665603ull;
  char buf[1 << 14];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    const auto got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
    if (!in) break;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

}  // namespace critwave::io
