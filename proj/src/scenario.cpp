#include "critwave/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "critwave/io.hpp"
#include "critwave/numerics.hpp"
#include "json.hpp"

namespace critwave {

using ordered_json = nlohmann::ordered_json;

namespace {

void reject_unknown(const ordered_json& j, const std::vector<std::string>& allowed,
                    const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      fail(errc::parse, "unknown field '" + where + key + "'");
  }
}

double need_number(const ordered_json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) fail(errc::parse, "missing field '" + where + key + "'");
  if (!j[key].is_number()) fail(errc::parse, "field '" + where + key + "' must be a number");
  return j[key].get<double>();
}

std::ifstream open_in(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) fail(errc::io, "cannot open " + p.string());
  return in;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const std::exception& e) {
    fail(errc::parse, std::string("scenario is not valid JSON: ") + e.what());
  }
  reject_unknown(j, {"name", "initial_data", "grid", "evolution", "diagnostics"}, "");

  Scenario sc;
  if (!j.contains("name") || !j["name"].is_string())
    fail(errc::parse, "missing field 'name'");
  sc.name = j["name"].get<std::string>();

  if (!j.contains("grid")) fail(errc::parse, "missing field 'grid'");
  const auto& jg = j["grid"];
  reject_unknown(jg, {"dr", "r_max"}, "grid.");
  sc.dr = need_number(jg, "dr", "grid.");
  sc.r_max = need_number(jg, "r_max", "grid.");

  if (!j.contains("initial_data")) fail(errc::parse, "missing field 'initial_data'");
  const auto& jd = j["initial_data"];
  reject_unknown(jd,
                 {"type", "bubbles", "file", "lambda_amp", "T", "r0", "truncate_at",
                  "ramp_width", "velocity_bump"},
                 "initial_data.");
  if (!jd.contains("type") || !jd["type"].is_string())
    fail(errc::parse, "missing field 'initial_data.type'");
  const std::string kind = jd["type"].get<std::string>();
  if (kind == "bubbles") {
    sc.kind = Scenario::DataKind::bubbles;
    if (!jd.contains("bubbles") || !jd["bubbles"].is_array())
      fail(errc::parse, "missing field 'initial_data.bubbles'");
    for (const auto& b : jd["bubbles"]) {
      reject_unknown(b, {"sign", "lambda"}, "initial_data.bubbles[].");
      const double sign = need_number(b, "sign", "initial_data.bubbles[].");
      const double lambda = need_number(b, "lambda", "initial_data.bubbles[].");
      if (sign != 1.0 && sign != -1.0)
        fail(errc::parse, "field 'initial_data.bubbles[].sign' must be +1 or -1");
      if (!(lambda > 0.0))
        fail(errc::parse, "field 'initial_data.bubbles[].lambda' must be positive");
      sc.bubbles.push_back({sign * std::sqrt(lambda)});
    }
  } else if (kind == "profile") {
    sc.kind = Scenario::DataKind::profile;
    if (!jd.contains("file")) fail(errc::parse, "missing field 'initial_data.file'");
    sc.data_file = jd["file"].get<std::string>();
  } else if (kind == "ground_state_scaled") {
    sc.kind = Scenario::DataKind::ground_state_scaled;
    sc.lambda_amp = need_number(jd, "lambda_amp", "initial_data.");
  } else if (kind == "blowup_ode") {
    sc.kind = Scenario::DataKind::blowup_ode;
    sc.ode_T = need_number(jd, "T", "initial_data.");
    sc.ode_r0 = need_number(jd, "r0", "initial_data.");
  } else if (kind == "custom") {
    sc.kind = Scenario::DataKind::custom;
    if (!jd.contains("file")) fail(errc::parse, "missing field 'initial_data.file'");
    sc.data_file = jd["file"].get<std::string>();
  } else {
    fail(errc::parse, "field 'initial_data.type' has unknown value '" + kind + "'");
  }
  if (jd.contains("truncate_at")) sc.truncate_at = need_number(jd, "truncate_at", "initial_data.");
  if (jd.contains("ramp_width")) sc.ramp_width = need_number(jd, "ramp_width", "initial_data.");
  if (jd.contains("velocity_bump"))
    sc.velocity_bump = need_number(jd, "velocity_bump", "initial_data.");

  if (!j.contains("evolution")) fail(errc::parse, "missing field 'evolution'");
  const auto& je = j["evolution"];
  reject_unknown(je, {"cfl", "t_final", "snapshot_stride", "nonlinearity", "blowup_amp",
                      "blowup_grad"},
                 "evolution.");
  sc.evolution.t_final = need_number(je, "t_final", "evolution.");
  if (je.contains("cfl")) sc.evolution.cfl = need_number(je, "cfl", "evolution.");
  if (je.contains("snapshot_stride"))
    sc.evolution.snapshot_stride =
        static_cast<std::size_t>(need_number(je, "snapshot_stride", "evolution."));
  if (je.contains("blowup_amp")) sc.evolution.blowup_amp = need_number(je, "blowup_amp", "evolution.");
  if (je.contains("blowup_grad"))
    sc.evolution.blowup_grad = need_number(je, "blowup_grad", "evolution.");
  if (je.contains("nonlinearity")) {
    const std::string nl = je["nonlinearity"].get<std::string>();
    if (nl == "focusing_quintic")
      sc.evolution.nonlinearity = Nonlinearity::focusing_quintic;
    else if (nl == "off")
      sc.evolution.nonlinearity = Nonlinearity::off;
    else
      fail(errc::parse, "field 'evolution.nonlinearity' has unknown value '" + nl + "'");
  }

  if (j.contains("diagnostics")) {
    const auto& jx = j["diagnostics"];
    reject_unknown(jx, {"ell", "delta", "delta_star", "radius", "extraction_times", "s_min",
                        "s_max", "peel", "segment"},
                   "diagnostics.");
    auto& d = sc.diagnostics;
    if (jx.contains("ell")) d.ell = need_number(jx, "ell", "diagnostics.");
    if (jx.contains("delta")) d.delta = need_number(jx, "delta", "diagnostics.");
    if (jx.contains("delta_star")) d.delta_star = need_number(jx, "delta_star", "diagnostics.");
    if (jx.contains("radius")) d.radius = need_number(jx, "radius", "diagnostics.");
    if (jx.contains("s_min")) d.s_min = need_number(jx, "s_min", "diagnostics.");
    if (jx.contains("s_max")) d.s_max = need_number(jx, "s_max", "diagnostics.");
    if (jx.contains("peel")) d.peel = jx["peel"].get<bool>();
    if (jx.contains("segment")) d.segment = jx["segment"].get<bool>();
    if (jx.contains("extraction_times")) {
      for (const auto& t : jx["extraction_times"]) d.extraction_times.push_back(t.get<double>());
    }
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& file) {
  auto in = open_in(file);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

FieldState build_initial_data(const Scenario& sc) {
  RadialGrid g = RadialGrid::with_extent(sc.dr, sc.r_max);
  // Auto truncation keeps the causal-coverage invariant r_max >= support + t_final.
  const double cut = sc.truncate_at > 0.0
                         ? sc.truncate_at
                         : sc.r_max - sc.evolution.t_final - sc.ramp_width - 4.0 * sc.dr;
  auto ramp_down = [&](double r) {
    return 1.0 - num::smoothstep(cut, cut + sc.ramp_width, r);
  };

  switch (sc.kind) {
    case Scenario::DataKind::bubbles: {
      if (cut <= 0.0) fail(errc::precondition, "grid cannot host bubbles plus t_final causally");
      FieldState s = superpose(sc.bubbles, g);
      for (std::size_t i = 0; i < g.n_points; ++i) s.u[i] *= ramp_down(g.r(i));
      return s;
    }
    case Scenario::DataKind::ground_state_scaled: {
      if (cut <= 0.0) fail(errc::precondition, "grid cannot host the state plus t_final causally");
      FieldState s(g);
      for (std::size_t i = 0; i < g.n_points; ++i) {
        const double r = g.r(i);
        s.u[i] = sc.lambda_amp * ground_state_value(r) * ramp_down(r);
        s.ut[i] = sc.velocity_bump * std::exp(-r * r);
      }
      return s;
    }
    case Scenario::DataKind::blowup_ode: {
      const double A = std::pow(0.75, 0.25);
      const double u0 = A / std::sqrt(sc.ode_T);
      const double u1 = 0.5 * A / (sc.ode_T * std::sqrt(sc.ode_T));
      FieldState s(g);
      for (std::size_t i = 0; i < g.n_points; ++i) {
        const double r = g.r(i);
        const double ramp = 1.0 - num::smoothstep(sc.ode_r0, sc.ode_r0 + sc.ramp_width, r);
        s.u[i] = u0 * ramp;
        s.ut[i] = u1 * ramp;
      }
      return s;
    }
    case Scenario::DataKind::profile: {
      const RadiationProfile gm = io::read_profile_csv(sc.data_file);
      if (gm.direction != Direction::minus)
        fail(errc::parse, "initial_data.file must hold a minus-direction profile");
      return data_from_profile(gm, g);
    }
    case Scenario::DataKind::custom:
      return io::read_fieldstate_csv(sc.data_file);
  }
  fail(errc::parse, "unreachable initial_data kind");
}

namespace {

std::string scenario_echo_json(const Scenario& sc) {
  ordered_json j;
  j["name"] = sc.name;
  j["grid"] = {{"dr", sc.dr}, {"r_max", sc.r_max}};
  switch (sc.kind) {
    case Scenario::DataKind::bubbles: {
      ordered_json bubbles = ordered_json::array();
      for (const auto& b : sc.bubbles)
        bubbles.push_back({{"sign", b.sign()}, {"lambda", b.lambda()}});
      j["initial_data"] = {{"type", "bubbles"}, {"bubbles", bubbles}};
      break;
    }
    case Scenario::DataKind::profile:
      j["initial_data"] = {{"type", "profile"}, {"file", sc.data_file}};
      break;
    case Scenario::DataKind::ground_state_scaled:
      j["initial_data"] = {{"type", "ground_state_scaled"}, {"lambda_amp", sc.lambda_amp}};
      break;
    case Scenario::DataKind::blowup_ode:
      j["initial_data"] = {{"type", "blowup_ode"}, {"T", sc.ode_T}, {"r0", sc.ode_r0}};
      break;
    case Scenario::DataKind::custom:
      j["initial_data"] = {{"type", "custom"}, {"file", sc.data_file}};
      break;
  }
  j["initial_data"]["truncate_at"] = sc.truncate_at;
  j["initial_data"]["ramp_width"] = sc.ramp_width;
  j["initial_data"]["velocity_bump"] = sc.velocity_bump;
  j["evolution"] = {{"cfl", sc.evolution.cfl},
                    {"t_final", sc.evolution.t_final},
                    {"snapshot_stride", sc.evolution.snapshot_stride},
                    {"nonlinearity",
                     sc.evolution.nonlinearity == Nonlinearity::off ? "off" : "focusing_quintic"}};
  j["diagnostics"] = {{"ell", sc.diagnostics.ell},
                      {"delta", sc.diagnostics.delta},
                      {"delta_star", sc.diagnostics.delta_star},
                      {"radius", sc.diagnostics.radius},
                      {"extraction_times", sc.diagnostics.extraction_times},
                      {"s_min", sc.diagnostics.s_min},
                      {"s_max", sc.diagnostics.s_max}};
  return j.dump(2);
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::completed: return "completed";
    case Outcome::blowup_detected: return "blowup_detected";
    case Outcome::numeric_failure: return "numeric_failure";
  }
  return "unknown";
}

}  // namespace

RunManifest run(const Scenario& sc, const std::filesystem::path& outdir) {
  namespace fs = std::filesystem;
  fs::create_directories(outdir);

  RunManifest mf;
  mf.scenario_echo = scenario_echo_json(sc);

  auto add_artifact = [&](const fs::path& p) {
    mf.artifacts.emplace_back(p.filename().string(), io::hex64(io::fnv1a64_file(p)));
  };
  auto stage = [&](const std::string& name, auto&& fn) {
    try {
      fn();
      return true;
    } catch (const std::exception& e) {
      mf.stage_errors.push_back(name + ": " + e.what());
      mf.ok = false;
      return false;
    }
  };

  FieldState initial;
  SimulationRecord rec;
  bool have_record = false;

  stage("simulate", [&] {
    initial = build_initial_data(sc);
    rec = evolve(initial, sc.evolution);
    have_record = true;
    mf.outcome = outcome_name(rec.outcome);
    io::write_energy_csv(outdir / "energy.csv", rec.energy_trace);
    add_artifact(outdir / "energy.csv");
    for (std::size_t k = 0; k < rec.snapshots.size(); ++k) {
      const fs::path p = outdir / ("snap_" + std::to_string(k) + ".csv");
      io::write_fieldstate_csv(p, rec.snapshots[k]);
      add_artifact(p);
    }
  });

  Extraction ex;
  bool have_gplus = false;
  if (have_record && !sc.diagnostics.extraction_times.empty() &&
      rec.outcome == Outcome::completed) {
    stage("radiate", [&] {
      ExtractionConfig xc;
      xc.t_samples = sc.diagnostics.extraction_times;
      xc.s_min = sc.diagnostics.s_min;
      xc.s_max = sc.diagnostics.s_max;
      ex = extract_gplus(rec, xc);
      have_gplus = true;
      io::write_gplus_csv(outdir / "gplus.csv", ex);
      add_artifact(outdir / "gplus.csv");

      std::vector<double> ts;
      const double t_end = sc.evolution.t_final;
      for (int k = 1; k <= 32; ++k) ts.push_back(t_end * static_cast<double>(k) / 32.0);
      const StrengthCurve curve = strength(ex.gplus, ts, sc.diagnostics.ell);
      io::write_strength_csv(outdir / "strength.csv", curve);
      add_artifact(outdir / "strength.csv");
    });
  }

  if (have_record && sc.diagnostics.peel && rec.outcome == Outcome::completed) {
    stage("peel", [&] {
      PeelConfig pc;
      const BubbleList peeled = peel(rec.final_state(), FieldState(rec.final_state().grid), pc);
      std::ofstream out(outdir / "peel.json");
      out << io::peel_json(peeled);
      out.close();
      add_artifact(outdir / "peel.json");
    });
  }

  if (have_gplus && sc.diagnostics.segment) {
    stage("segment", [&] {
      const double R = sc.diagnostics.radius > 0.0 ? sc.diagnostics.radius
                                                   : std::max(support_radius(initial), sc.dr);
      SegmentationParams sp{sc.diagnostics.delta, sc.diagnostics.delta_star, sc.diagnostics.ell};
      const Segmentation seg = segment(ex.gplus, rec.energy_trace.front().second, R, sp);
      std::ofstream out(outdir / "segmentation.json");
      out << io::segmentation_json(seg);
      out.close();
      add_artifact(outdir / "segmentation.json");
    });
  }

  // meta.json last so the manifest can checksum it
  {
    ordered_json meta;
    meta["scenario"] = ordered_json::parse(mf.scenario_echo);
    meta["outcome"] = mf.outcome;
    meta["stage_errors"] = mf.stage_errors;
    std::ofstream out(outdir / "meta.json");
    out << meta.dump(2) << "\n";
    out.close();
    add_artifact(outdir / "meta.json");
  }
  {
    ordered_json man;
    man["scenario"] = ordered_json::parse(mf.scenario_echo);
    man["outcome"] = mf.outcome;
    man["ok"] = mf.ok;
    man["stage_errors"] = mf.stage_errors;
    man["artifacts"] = ordered_json::array();
    for (const auto& [p, sum] : mf.artifacts)
      man["artifacts"].push_back({{"path", p}, {"checksum", sum}});
    std::ofstream out(outdir / "manifest.json");
    out << man.dump(2) << "\n";
  }
  return mf;
}

RunManifest run_file(const std::filesystem::path& scenario_file,
                     const std::filesystem::path& outdir) {
  return run(load_scenario(scenario_file), outdir);
}

unsigned thread_cap(unsigned requested) {
  if (const char* env = std::getenv("CRITWAVE_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap > 0) requested = std::min<unsigned>(requested, static_cast<unsigned>(cap));
  }
  return std::max(1u, requested);
}

SweepSpec parse_sweep(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const std::exception& e) {
    fail(errc::parse, std::string("sweep grid is not valid JSON: ") + e.what());
  }
  reject_unknown(j, {"overrides"}, "");
  if (!j.contains("overrides") || !j["overrides"].is_array())
    fail(errc::parse, "missing field 'overrides'");
  SweepSpec spec;
  for (const auto& a : j["overrides"]) {
    reject_unknown(a, {"path", "values"}, "overrides[].");
    if (!a.contains("path") || !a.contains("values"))
      fail(errc::parse, "overrides entries need 'path' and 'values'");
    SweepSpec::Axis axis;
    axis.path = a["path"].get<std::string>();
    for (const auto& v : a["values"]) axis.values.push_back(v.dump());
    if (axis.values.empty()) fail(errc::parse, "override '" + axis.path + "' has no values");
    spec.axes.push_back(std::move(axis));
  }
  return spec;
}

namespace {

void apply_override(ordered_json& j, const std::string& dotted, const std::string& value) {
  ordered_json* cur = &j;
  std::size_t pos = 0;
  while (true) {
    const auto dot = dotted.find('.', pos);
    const std::string key = dotted.substr(pos, dot == std::string::npos ? dot : dot - pos);
    if (dot == std::string::npos) {
      (*cur)[key] = ordered_json::parse(value);
      return;
    }
    cur = &(*cur)[key];
    pos = dot + 1;
  }
}

}  // namespace

std::string sweep(const std::filesystem::path& template_file, const SweepSpec& spec,
                  const std::filesystem::path& outdir, unsigned parallelism) {
  auto in = open_in(template_file);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string base_text = ss.str();
  parse_scenario(base_text);  // template must be valid on its own

  // cartesian product, row-major in axis order
  std::size_t total = 1;
  for (const auto& ax : spec.axes) total *= ax.values.size();

  struct Instance {
    std::size_t idx;
    std::vector<std::string> values;
    std::string outcome;
    std::string error;
    double e0 = 0.0;
  };
  std::vector<Instance> instances(total);
  for (std::size_t i = 0; i < total; ++i) {
    instances[i].idx = i;
    std::size_t rest = i;
    for (std::size_t a = spec.axes.size(); a-- > 0;) {
      const auto& ax = spec.axes[a];
      instances[i].values.insert(instances[i].values.begin(),
                                 ax.values[rest % ax.values.size()]);
      rest /= ax.values.size();
    }
  }

  std::filesystem::create_directories(outdir);
  std::atomic<std::size_t> next{0};
  const unsigned workers = thread_cap(parallelism);

  auto work = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= total) return;
      auto& inst = instances[i];
      try {
        ordered_json j = ordered_json::parse(base_text);
        for (std::size_t a = 0; a < spec.axes.size(); ++a)
          apply_override(j, spec.axes[a].path, inst.values[a]);
        const Scenario sc = parse_scenario(j.dump());
        const RunManifest mf = run(sc, outdir / ("instance_" + std::to_string(i)));
        inst.outcome = mf.outcome;
        if (!mf.ok) inst.error = mf.stage_errors.empty() ? "stage failure" : mf.stage_errors.front();
        const auto energy_csv = outdir / ("instance_" + std::to_string(i)) / "energy.csv";
        if (std::filesystem::exists(energy_csv)) {
          std::ifstream ein(energy_csv);
          std::string line;
          std::getline(ein, line);  // header
          if (std::getline(ein, line)) {
            const auto comma = line.find(',');
            inst.e0 = std::stod(line.substr(comma + 1));
          }
        }
      } catch (const std::exception& e) {
        inst.outcome = "error";
        inst.error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& th : pool) th.join();

  std::ostringstream csv;
  csv << "idx";
  for (const auto& ax : spec.axes) csv << ',' << ax.path;
  csv << ",outcome,E0,error\n";
  for (const auto& inst : instances) {
    csv << inst.idx;
    for (const auto& v : inst.values) csv << ',' << v;
    csv << ',' << inst.outcome << ',' << io::fmt17(inst.e0) << ',' << inst.error << "\n";
  }
  const std::string text = csv.str();
  std::ofstream out(outdir / "aggregate.csv");
  out << text;
  return text;
}

}  // namespace critwave
