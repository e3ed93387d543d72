#include "wrfrft/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wrfrft/echo_io.hpp"
#include "wrfrft/errors.hpp"
#include "wrfrft/signal_model.hpp"

namespace wrfrft {

using json = nlohmann::ordered_json;

const char* to_string(Plan p) {
  switch (p) {
    case Plan::single_run: return "single-run";
    case Plan::rmse: return "rmse";
    case Plan::pd: return "pd";
    case Plan::profile: return "profile";
  }
  return "?";
}

Plan plan_from_string(const std::string& s) {
  if (s == "single-run") return Plan::single_run;
  if (s == "rmse") return Plan::rmse;
  if (s == "pd") return Plan::pd;
  if (s == "profile") return Plan::profile;
  throw ValidationError("unknown plan '" + s + "' (single-run, rmse, pd, profile)");
}

namespace {

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ValidationError(where + " must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items())
    if (!ok.count(key)) throw ValidationError("unknown key '" + key + "' in " + where);
}

template <typename T>
void take(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(where + "." + key + " has the wrong type");
  }
}

std::array<AxisBounds, 5> centered_on(const TargetTruth& t, const RadarParams& radar,
                                      const std::array<double, 5>& coarsen, int half) {
  const auto base = base_steps(radar);
  const std::array<double, 5> c{t.tb_s, t.te_s, t.r0_m, t.v_mps, t.a_mps2};
  std::array<AxisBounds, 5> b;
  for (int i = 0; i < 5; ++i) b[i] = centered_bounds(c[i], half, base[i] * coarsen[i]);
  return b;
}

json target_json(const TargetTruth& t) {
  return json{{"r0_m", t.r0_m}, {"v_mps", t.v_mps}, {"a_mps2", t.a_mps2},
              {"tb_s", t.tb_s}, {"te_s", t.te_s}, {"sigma0", {t.sigma0.real(), t.sigma0.imag()}}};
}

TargetTruth parse_target(const json& j, const std::string& where) {
  check_keys(j, where, {"r0_m", "r0_cells", "v_mps", "a_mps2", "tb_s", "te_s", "sigma0"});
  TargetTruth t;
  take(j, "r0_m", t.r0_m, where);
  take(j, "v_mps", t.v_mps, where);
  take(j, "a_mps2", t.a_mps2, where);
  take(j, "tb_s", t.tb_s, where);
  take(j, "te_s", t.te_s, where);
  if (j.contains("sigma0")) {
    const json& s = j.at("sigma0");
    if (s.is_number()) t.sigma0 = s.get<double>();
    else if (s.is_array() && s.size() == 2 && s[0].is_number() && s[1].is_number())
      t.sigma0 = cdouble(s[0].get<double>(), s[1].get<double>());
    else throw ValidationError(where + ".sigma0 must be a number or [re, im]");
  }
  return t;
}

}  // namespace

ScenarioConfig config_from_preset(const std::string& preset_name) {
  const Scenario s = preset(preset_name);
  ScenarioConfig cfg;
  cfg.name = s.name;
  cfg.radar = s.radar;
  cfg.targets = s.targets;
  cfg.noise.snr_db = s.snr_db;
  cfg.bounds = centered_on(s.targets.front(), s.radar, cfg.coarsen, 3);
  return cfg;
}

ScenarioConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j, "config",
             {"preset", "name", "radar", "targets", "noise", "echo_file", "grid", "methods", "plan", "output_dir",
              "seed", "search", "slices", "detection", "sweep"});

  ScenarioConfig cfg;
  if (j.contains("preset")) {
    if (!j.at("preset").is_string()) throw ValidationError("config.preset must be a string");
    cfg = config_from_preset(j.at("preset").get<std::string>());
  }
  take(j, "name", cfg.name, "config");

  if (j.contains("radar")) {
    const json& r = j.at("radar");
    check_keys(r, "radar",
               {"carrier_hz", "bandwidth_hz", "sample_rate_hz", "prf_hz", "pulse_width_s", "t0_s", "t1_s",
                "num_cells"});
    take(r, "carrier_hz", cfg.radar.carrier_hz, "radar");
    take(r, "bandwidth_hz", cfg.radar.bandwidth_hz, "radar");
    take(r, "sample_rate_hz", cfg.radar.sample_rate_hz, "radar");
    take(r, "prf_hz", cfg.radar.prf_hz, "radar");
    take(r, "pulse_width_s", cfg.radar.pulse_width_s, "radar");
    take(r, "t0_s", cfg.radar.t0_s, "radar");
    take(r, "t1_s", cfg.radar.t1_s, "radar");
    take(r, "num_cells", cfg.radar.num_cells, "radar");
  }
  if (j.contains("targets")) {
    const json& ts = j.at("targets");
    if (!ts.is_array()) throw ValidationError("config.targets must be an array");
    cfg.targets.clear();
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const std::string where = "targets[" + std::to_string(i) + "]";
      TargetTruth t = parse_target(ts[i], where);
      if (ts[i].contains("r0_cells")) {
        if (ts[i].contains("r0_m")) throw ValidationError(where + ": give r0_m or r0_cells, not both");
        double cells = 0.0;
        take(ts[i], "r0_cells", cells, where);
        t.r0_m = cells * cfg.radar.cell_size_m();
      }
      cfg.targets.push_back(t);
    }
  }
  if (j.contains("noise")) {
    const json& n = j.at("noise");
    check_keys(n, "noise", {"snr_db", "seed", "enabled"});
    take(n, "snr_db", cfg.noise.snr_db, "noise");
    take(n, "seed", cfg.noise.seed, "noise");
    take(n, "enabled", cfg.noise.enabled, "noise");
  }
  take(j, "echo_file", cfg.echo_file, "config");

  bool explicit_bounds[5] = {false, false, false, false, false};
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    check_keys(g, "grid", {"bounds", "coarsen", "budget"});
    if (g.contains("coarsen")) {
      const json& c = g.at("coarsen");
      check_keys(c, "grid.coarsen", {"eta0", "eta1", "r0", "v", "a"});
      for (int i = 0; i < 5; ++i) take(c, kAxisNames[i], cfg.coarsen[i], "grid.coarsen");
    }
    if (g.contains("bounds")) {
      const json& b = g.at("bounds");
      check_keys(b, "grid.bounds", {"eta0", "eta1", "r0", "v", "a"});
      for (int i = 0; i < 5; ++i) {
        if (!b.contains(kAxisNames[i])) continue;
        std::array<double, 2> mm{};
        take(b, kAxisNames[i], mm, "grid.bounds");
        cfg.bounds[i] = {mm[0], mm[1]};
        explicit_bounds[i] = true;
      }
    }
    take(g, "budget", cfg.budget, "grid");
  }
  // unspecified axes are centered on the first target at the final coarsening
  if (!cfg.targets.empty()) {
    const auto c = centered_on(cfg.targets.front(), cfg.radar, cfg.coarsen, 3);
    for (int i = 0; i < 5; ++i)
      if (!explicit_bounds[i]) cfg.bounds[i] = c[i];
  } else if (!std::all_of(std::begin(explicit_bounds), std::end(explicit_bounds), [](bool b) { return b; })) {
    throw ValidationError("grid.bounds must give all five axes when there is no target");
  }

  take(j, "methods", cfg.methods, "config");
  if (j.contains("plan")) {
    std::string p;
    take(j, "plan", p, "config");
    cfg.plan = plan_from_string(p);
  }
  take(j, "output_dir", cfg.output_dir, "config");
  take(j, "seed", cfg.seed, "config");

  if (j.contains("search")) {
    const json& s = j.at("search");
    check_keys(s, "search", {"mapping", "mode", "min_dwell_s", "velocity_bands", "band_velocity_step", "prune"});
    if (s.contains("mapping")) {
      std::string m;
      take(s, "mapping", m, "search");
      cfg.search.mapping = alpha_mapping_from_string(m);
    }
    if (s.contains("mode")) {
      std::string m;
      take(s, "mode", m, "search");
      cfg.search.mode = frft_mode_from_string(m);
    }
    take(s, "min_dwell_s", cfg.search.min_dwell_s, "search");
    take(s, "velocity_bands", cfg.search.velocity_bands, "search");
    take(s, "band_velocity_step", cfg.search.band_velocity_step, "search");
    take(s, "prune", cfg.search.prune, "search");
  }
  if (j.contains("slices")) {
    const json& ss = j.at("slices");
    if (!ss.is_array()) throw ValidationError("config.slices must be an array");
    cfg.search.slices.clear();
    for (std::size_t i = 0; i < ss.size(); ++i) {
      const std::string where = "slices[" + std::to_string(i) + "]";
      check_keys(ss[i], where, {"name", "x", "y", "fixed"});
      SliceSpec spec;
      std::string x = "r0", y = "v";
      take(ss[i], "name", spec.name, where);
      take(ss[i], "x", x, where);
      take(ss[i], "y", y, where);
      spec.x = axis_from_string(x);
      spec.y = axis_from_string(y);
      if (ss[i].contains("fixed")) {
        const json& f = ss[i].at("fixed");
        check_keys(f, where + ".fixed", {"eta0", "eta1", "r0", "v", "a"});
        for (int a = 0; a < 5; ++a)
          if (f.contains(kAxisNames[a])) {
            double v = 0.0;
            take(f, kAxisNames[a], v, where + ".fixed");
            spec.fixed[a] = v;
          }
      }
      if (spec.name.empty()) spec.name = "slice" + std::to_string(i);
      cfg.search.slices.push_back(spec);
    }
  }
  if (j.contains("detection")) {
    const json& d = j.at("detection");
    check_keys(d, "detection", {"pfa", "guard", "slice_peak_fraction", "alpha_count"});
    take(d, "pfa", cfg.pfa, "detection");
    take(d, "guard", cfg.guard, "detection");
    take(d, "slice_peak_fraction", cfg.slice_peak_fraction, "detection");
    take(d, "alpha_count", cfg.alpha_count, "detection");
  }
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    check_keys(s, "sweep", {"snr_db", "trials", "half_nodes", "jitter", "profile_half"});
    take(s, "snr_db", cfg.snr_list, "sweep");
    take(s, "trials", cfg.trials, "sweep");
    take(s, "half_nodes", cfg.half_nodes, "sweep");
    take(s, "jitter", cfg.jitter, "sweep");
    take(s, "profile_half", cfg.profile_half, "sweep");
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const ScenarioConfig& cfg) {
  json j;
  j["name"] = cfg.name;
  const RadarParams& r = cfg.radar;
  j["radar"] = json{{"carrier_hz", r.carrier_hz},       {"bandwidth_hz", r.bandwidth_hz},
                    {"sample_rate_hz", r.sample_rate_hz}, {"prf_hz", r.prf_hz},
                    {"pulse_width_s", r.pulse_width_s}, {"t0_s", r.t0_s},
                    {"t1_s", r.t1_s},                   {"num_cells", r.num_cells}};
  j["targets"] = json::array();
  for (const auto& t : cfg.targets) j["targets"].push_back(target_json(t));
  j["noise"] = json{{"snr_db", cfg.noise.snr_db}, {"seed", cfg.noise.seed}, {"enabled", cfg.noise.enabled}};
  j["echo_file"] = cfg.echo_file;
  json bounds, coarsen;
  for (int i = 0; i < 5; ++i) {
    bounds[kAxisNames[i]] = {cfg.bounds[i].min, cfg.bounds[i].max};
    coarsen[kAxisNames[i]] = cfg.coarsen[i];
  }
  j["grid"] = json{{"bounds", bounds}, {"coarsen", coarsen}, {"budget", cfg.budget}};
  j["methods"] = cfg.methods;
  j["plan"] = to_string(cfg.plan);
  j["output_dir"] = cfg.output_dir;
  j["seed"] = cfg.seed;
  j["search"] = json{{"mapping", to_string(cfg.search.mapping)},
                     {"mode", to_string(cfg.search.mode)},
                     {"min_dwell_s", cfg.search.min_dwell_s},
                     {"velocity_bands", cfg.search.velocity_bands},
                     {"band_velocity_step", cfg.search.band_velocity_step},
                     {"prune", cfg.search.prune}};
  j["slices"] = json::array();
  for (const auto& s : cfg.search.slices) {
    json fixed = json::object();
    for (int a = 0; a < 5; ++a)
      if (s.fixed[a]) fixed[kAxisNames[a]] = *s.fixed[a];
    j["slices"].push_back(json{{"name", s.name},
                               {"x", kAxisNames[static_cast<int>(s.x)]},
                               {"y", kAxisNames[static_cast<int>(s.y)]},
                               {"fixed", fixed}});
  }
  j["detection"] = json{{"pfa", cfg.pfa},
                        {"guard", cfg.guard},
                        {"slice_peak_fraction", cfg.slice_peak_fraction},
                        {"alpha_count", cfg.alpha_count}};
  j["sweep"] = json{{"snr_db", cfg.snr_list},
                    {"trials", cfg.trials},
                    {"half_nodes", cfg.half_nodes},
                    {"jitter", cfg.jitter},
                    {"profile_half", cfg.profile_half}};
  return j.dump(2) + "\n";
}

SearchGrid ScenarioConfig::grid() const { return build_grid(bounds, radar, coarsen, budget); }

void ScenarioConfig::validate() const {
  radar.validate();
  if (echo_file.empty())
    for (const auto& t : targets) t.validate(radar);
  if (!std::isfinite(noise.snr_db)) throw ValidationError("noise.snr_db must be finite");
  if (methods.empty()) throw ValidationError("methods must not be empty");
  for (const auto& m : methods)
    if (!is_method(m)) throw ValidationError("unknown method '" + m + "'");
  if (!(pfa > 0.0) || pfa > 1.0) throw ValidationError("detection.pfa must lie in (0, 1]");
  if (!(slice_peak_fraction > 0.0) || slice_peak_fraction > 1.0)
    throw ValidationError("detection.slice_peak_fraction must lie in (0, 1]");
  if (alpha_count < 2) throw ValidationError("detection.alpha_count must be >= 2");
  for (const auto& s : search.slices)
    if (s.x == s.y) throw ValidationError("slice '" + s.name + "' needs two different axes");

  switch (plan) {
    case Plan::single_run:
      (void)grid();
      break;
    case Plan::rmse:
      if (targets.empty()) throw ValidationError("rmse needs a target");
      if (snr_list.empty() || trials == 0) throw ValidationError("rmse needs sweep.snr_db and sweep.trials >= 1");
      if (half_nodes < 0) throw ValidationError("sweep.half_nodes must be >= 0");
      for (const auto& m : methods)
        if (m != "wrfrft" && m != "rfrft") throw ValidationError("rmse supports wrfrft and rfrft, not " + m);
      break;
    case Plan::pd:
      if (targets.empty()) throw ValidationError("pd needs a nominal target");
      if (snr_list.empty() || trials == 0) throw ValidationError("pd needs sweep.snr_db and sweep.trials >= 1");
      break;
    case Plan::profile:
      if (targets.empty()) throw ValidationError("profile needs a target");
      if (trials == 0 || profile_half < 1) throw ValidationError("profile needs trials >= 1 and profile_half >= 1");
      break;
  }
}

std::vector<SlicePeak> slice_peaks(const Slice& s, double fraction) {
  std::vector<SlicePeak> out;
  if (s.amplitude.empty()) return out;
  const double top = *std::max_element(s.amplitude.begin(), s.amplitude.end());
  const double floor = fraction * top;
  const auto rows = static_cast<long long>(s.rows);
  const auto cols = static_cast<long long>(s.cols);
  for (long long r = 0; r < rows; ++r)
    for (long long c = 0; c < cols; ++c) {
      const double v = s.at(r, c);
      if (v < floor || v <= 0.0) continue;
      bool peak = true;
      for (long long dr = -1; dr <= 1 && peak; ++dr)
        for (long long dc = -1; dc <= 1 && peak; ++dc) {
          if (dr == 0 && dc == 0) continue;
          const long long rr = r + dr, cc = c + dc;
          if (rr < 0 || rr >= rows || cc < 0 || cc >= cols) continue;
          const double w = s.at(rr, cc);
          // plateaus count once, at their first cell in row-major order
          const bool earlier = dr < 0 || (dr == 0 && dc < 0);
          if (w > v || (earlier && w == v)) peak = false;
        }
      if (peak) out.push_back({static_cast<std::size_t>(r), static_cast<std::size_t>(c), v});
    }
  return out;
}

std::vector<SlicePeak> merge_velocity_aliases(const std::vector<SlicePeak>& peaks, const Slice& s,
                                              const SearchGrid& grid, const RadarParams& radar) {
  if (s.spec.x != AxisId::r0 || s.spec.y != AxisId::v) return peaks;
  auto fixed = [&](AxisId id) {
    const auto& ax = grid.axes[static_cast<int>(id)];
    const auto& f = s.spec.fixed[static_cast<int>(id)];
    return ax.value(f ? ax.nearest(*f) : 0);
  };
  const double half_dwell = 0.5 * (fixed(AxisId::eta1) - fixed(AxisId::eta0));
  const double blind = 0.5 * radar.wavelength_m() * radar.prf_hz;
  const double v_tol = std::max(grid.axes[3].step, 0.1 * blind);
  const double r_tol = kSpeedOfLight / (2.0 * radar.bandwidth_hz);
  std::vector<SlicePeak> order = peaks;
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.amplitude > b.amplitude; });
  std::vector<SlicePeak> kept;
  for (const auto& p : order) {
    bool alias = false;
    for (const auto& q : kept) {
      const double dv = grid.axes[3].value(p.row) - grid.axes[3].value(q.row);
      const double k = std::round(dv / blind);
      if (k == 0.0 || std::abs(dv - k * blind) > v_tol) continue;
      const double dr = grid.axes[2].value(p.col) - grid.axes[2].value(q.col);
      alias = alias || std::abs(dr + k * blind * half_dwell) <= r_tol;
    }
    if (!alias) kept.push_back(p);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  return kept;
}

void write_profile_csv(const std::string& path, const std::vector<ProfilePoint>& points) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "axis,value_s,mean_amplitude,ci_halfwidth,trials\n" << std::setprecision(10);
  for (const auto& p : points)
    out << p.axis << ',' << p.value_s << ',' << p.mean << ',' << p.ci_halfwidth << ',' << p.trials << '\n';
  if (!out) throw IoError("write failed for " + path);
}

namespace {

std::string join(const std::string& dir, const std::string& file) {
  return (std::filesystem::path(dir) / file).string();
}

void make_output_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << text << '\n';
  if (!out) throw IoError("write failed for " + path);
}

Scenario scenario_of(const ScenarioConfig& cfg) {
  Scenario s;
  s.name = cfg.name;
  s.radar = cfg.radar;
  s.targets = cfg.targets;
  s.snr_db = cfg.noise.snr_db;
  return s;
}

std::string fmt_hyp(const PeakRecord& p) {
  std::ostringstream os;
  os << std::setprecision(6) << "eta0=" << p.hyp.eta0 << "s eta1=" << p.hyp.eta1 << "s r0=" << p.hyp.r0
     << "m v=" << p.hyp.v << "m/s a=" << p.hyp.a << "m/s^2 amp=" << p.amplitude;
  return os.str();
}

RunReport run_single(const ScenarioConfig& cfg) {
  RunReport rep;
  const SearchGrid grid = cfg.grid();
  EchoMatrix echo;
  if (!cfg.echo_file.empty()) {
    echo = load_echo_file(cfg.echo_file);
  } else {
    echo = synthesize_compressed_echo(cfg.radar, cfg.targets, cfg.noise);
  }
  make_output_dir(cfg.output_dir);
  std::ostringstream summary;
  for (const auto& m : cfg.methods) {
    if (m == "wrfrft") {
      const SearchResult res = wrfrft_search(echo, grid, cfg.search);
      rep.peak = res.peak;
      std::ostringstream slice_note;
      // decision at the peak hypothesis; per-hypothesis pfa split over the grid
      SearchOptions one = cfg.search;
      const SingleResult sr = wrfrft_single(echo, rep.peak.hyp, one);
      const double pfa_cell = cfg.pfa / static_cast<double>(grid.size());
      const auto det = threshold_from_reference(std::span<const cdouble>(sr.spectrum),
                                                rep.peak.u_bin % sr.spectrum.size(), pfa_cell, cfg.guard);
      rep.peak.threshold = det.threshold;
      rep.peak.detected = detect(rep.peak.amplitude, det.threshold);
      const std::string path = join(cfg.output_dir, "peak.json");
      write_text(path, to_text(rep.peak));
      rep.files.push_back(path);
      for (const auto& s : res.slices) {
        const std::string sp = join(cfg.output_dir, "slice_" + s.spec.name + ".mat");
        save_matrix_file(matrix_from_slice(s, grid), sp);
        rep.files.push_back(sp);
        const auto peaks = merge_velocity_aliases(slice_peaks(s, cfg.slice_peak_fraction), s, grid, cfg.radar);
        slice_note << " slice_" << s.spec.name << "=" << peaks.size() << "pk";
      }
      rep.slices = res.slices;
      summary << "wrfrft " << fmt_hyp(rep.peak) << " gamma=" << det.threshold
              << (rep.peak.detected ? " detected" : " not-detected") << slice_note.str();
    } else {
      BaselineMap map;
      if (m == "rfrft") {
        RfrftOptions ro;
        ro.alpha_count = cfg.alpha_count;
        map = rfrft(echo, grid, ro, cfg.search);
      } else if (m == "grft") {
        map = grft(echo, grid);
      } else if (m == "rft") {
        map = rft(echo, grid, cfg.search);
      } else {
        map = mtd(echo);
        MatrixFile mf;
        mf.name = "mtd";
        mf.row_axis = "cell";
        mf.col_axis = "doppler_bin";
        mf.rows = map.shape[0];
        mf.cols = map.shape[1];
        mf.values = map.amplitude;
        const std::string mp = join(cfg.output_dir, "mtd.mat");
        save_matrix_file(mf, mp);
        rep.files.push_back(mp);
      }
      const std::string path = join(cfg.output_dir, m + "_peak.json");
      write_text(path, to_text(map.peak));
      rep.files.push_back(path);
      if (summary.tellp() > 0) summary << " | ";
      summary << m << " " << fmt_hyp(map.peak);
    }
  }
  rep.summary = summary.str();
  return rep;
}

RunReport run_profile(const ScenarioConfig& cfg) {
  RunReport rep;
  const TargetTruth& t = cfg.targets.front();
  const RadarParams& r = cfg.radar;
  const auto base = base_steps(r);
  const Hypothesis hyp{t.tb_s, t.te_s, t.r0_m, t.v_mps, t.a_mps2};
  const double t_last = r.pulse_time(r.num_pulses() - 1);

  struct Sweep {
    AxisId axis;
    std::vector<double> values;
  };
  std::vector<Sweep> sweeps;
  for (AxisId ax : {AxisId::eta0, AxisId::eta1}) {
    const int i = static_cast<int>(ax);
    const double center = i == 0 ? t.tb_s : t.te_s;
    const double step = base[i] * cfg.coarsen[i];
    Sweep s{ax, {}};
    for (int k = -cfg.profile_half; k <= cfg.profile_half; ++k) {
      const double v = center + k * step;
      if (v < r.t0_s - 1e-12 || v > t_last + 1e-12) continue;
      s.values.push_back(v);
    }
    sweeps.push_back(std::move(s));
  }

  std::vector<std::vector<std::vector<double>>> runs(sweeps.size(),
                                                      std::vector<std::vector<double>>(cfg.trials));
  const auto trials = static_cast<long long>(cfg.trials);
#pragma omp parallel for schedule(dynamic)
  for (long long k = 0; k < trials; ++k) {
    NoiseSpec noise = cfg.noise;
    noise.seed = trial_seed(cfg.seed, 0, static_cast<std::size_t>(k));
    const EchoMatrix echo = synthesize_compressed_echo(r, cfg.targets, noise);
    for (std::size_t s = 0; s < sweeps.size(); ++s)
      runs[s][static_cast<std::size_t>(k)] = peak_profile(echo, hyp, sweeps[s].axis, sweeps[s].values, cfg.search);
  }
  for (std::size_t s = 0; s < sweeps.size(); ++s)
    for (std::size_t i = 0; i < sweeps[s].values.size(); ++i) {
      double sum = 0.0, sq = 0.0;
      for (const auto& run : runs[s]) {
        sum += run[i];
        sq += run[i] * run[i];
      }
      const double n = static_cast<double>(cfg.trials);
      const double mean = sum / n;
      const double var = n > 1 ? std::max(0.0, (sq - n * mean * mean) / (n - 1)) : 0.0;
      rep.profile.push_back({kAxisNames[static_cast<int>(sweeps[s].axis)], sweeps[s].values[i], mean,
                             1.96 * std::sqrt(var / n), cfg.trials});
    }
  make_output_dir(cfg.output_dir);
  const std::string path = join(cfg.output_dir, "profile.csv");
  write_profile_csv(path, rep.profile);
  rep.files.push_back(path);

  std::ostringstream summary;
  summary << std::setprecision(6) << "profile";
  for (const char* axis : {"eta0", "eta1"}) {
    const ProfilePoint* best = nullptr;
    for (const auto& p : rep.profile)
      if (p.axis == axis && (!best || p.mean > best->mean)) best = &p;
    if (best) summary << ' ' << axis << "_max=" << best->value_s << "s";
  }
  summary << " -> " << path;
  rep.summary = summary.str();
  return rep;
}

}  // namespace

RunReport run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  RunReport rep;
  const Scenario scen = scenario_of(cfg);
  switch (cfg.plan) {
    case Plan::single_run:
      return run_single(cfg);
    case Plan::profile:
      return run_profile(cfg);
    case Plan::rmse: {
      RmseConfig rc;
      rc.coarsen = cfg.coarsen;
      rc.half_nodes = cfg.half_nodes;
      rc.rfrft.alpha_count = cfg.alpha_count;
      rc.search = cfg.search;
      rc.search.budget = cfg.budget;
      rep.curve = monte_carlo_rmse(scen, cfg.snr_list, cfg.trials, cfg.methods, cfg.seed, rc);
      make_output_dir(cfg.output_dir);
      const std::string path = join(cfg.output_dir, "rmse.csv");
      write_curve_csv(path, rep.curve);
      rep.files.push_back(path);
      rep.summary = "rmse " + std::to_string(rep.curve.size()) + " points -> " + path;
      return rep;
    }
    case Plan::pd: {
      DetectionConfig dc;
      dc.pfa = cfg.pfa;
      dc.guard = cfg.guard;
      dc.jitter = cfg.jitter;
      dc.search = cfg.search;
      rep.curve = detection_curve(scen, cfg.snr_list, cfg.trials, cfg.methods, cfg.seed, dc);
      make_output_dir(cfg.output_dir);
      const std::string path = join(cfg.output_dir, "pd.csv");
      write_curve_csv(path, rep.curve);
      rep.files.push_back(path);
      std::ostringstream summary;
      summary << std::setprecision(4) << "pd";
      for (const auto& m : cfg.methods) summary << ' ' << m << "@0.8=" << snr_at_level(rep.curve, m, "pd", 0.8) << "dB";
      summary << " -> " << path;
      rep.summary = summary.str();
      return rep;
    }
  }
  return rep;
}

}  // namespace wrfrft
