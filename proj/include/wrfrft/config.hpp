#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "wrfrft/baselines.hpp"
#include "wrfrft/detection.hpp"
#include "wrfrft/presets.hpp"
#include "wrfrft/wrfrft.hpp"

namespace wrfrft {

enum class Plan { single_run, rmse, pd, profile };
const char* to_string(Plan p);
Plan plan_from_string(const std::string& s);

struct ScenarioConfig {
  std::string name = "custom";
  RadarParams radar;
  std::vector<TargetTruth> targets;
  NoiseSpec noise;
  std::string echo_file;  // non-empty: load instead of synthesizing

  std::array<AxisBounds, 5> bounds{};
  std::array<double, 5> coarsen{1, 1, 1, 1, 1};
  std::uint64_t budget = kDefaultBudget;

  std::vector<std::string> methods{"wrfrft"};
  Plan plan = Plan::single_run;
  std::string output_dir = "out";
  std::uint64_t seed = 1;

  SearchOptions search;
  std::size_t alpha_count = 64;  // RFRFT
  double pfa = 1e-3;
  std::size_t guard = 5;
  double slice_peak_fraction = 0.5;

  // rmse / pd sweeps
  std::vector<double> snr_list;
  std::size_t trials = 200;
  int half_nodes = 2;
  bool jitter = true;

  // profile: endpoints swept over +-profile_half steps of the eta grid
  int profile_half = 20;

  /// Checks every nested invariant and the grid budget. Never touches the file system.
  void validate() const;
  SearchGrid grid() const;
};

/// JSON text. An optional "preset" key seeds radar, targets, SNR and grid;
/// other keys override. Unknown keys throw ValidationError. Missing bounds are
/// centered on the first target with 3 nodes each side.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);
/// Canonical form: every field explicit, no preset reference.
std::string dump_config(const ScenarioConfig& cfg);

/// Config for a preset with default plan settings.
ScenarioConfig config_from_preset(const std::string& preset_name);

/// Local maxima (8-neighbourhood, strict against earlier neighbours) at or
/// above fraction * slice maximum.
struct SlicePeak {
  std::size_t row = 0;
  std::size_t col = 0;
  double amplitude = 0.0;
};
std::vector<SlicePeak> slice_peaks(const Slice& s, double fraction);

/// Range-velocity slices only (other slices pass through). Drops each peak that
/// sits on the blind-speed ambiguity ridge of a stronger one: velocity offset
/// k*lambda*PRF/2 (k != 0) and r0 offset -k*(lambda*PRF/2)*(eta1-eta0)/2, the
/// latter within one range resolution cell c/(2B).
std::vector<SlicePeak> merge_velocity_aliases(const std::vector<SlicePeak>& peaks, const Slice& s,
                                              const SearchGrid& grid, const RadarParams& radar);

struct ProfilePoint {
  std::string axis;  // eta0 or eta1
  double value_s = 0.0;
  double mean = 0.0;
  double ci_halfwidth = 0.0;
  std::size_t trials = 0;
};
void write_profile_csv(const std::string& path, const std::vector<ProfilePoint>& points);

struct RunReport {
  std::string summary;  // one line
  std::vector<std::string> files;
  PeakRecord peak;              // single-run
  std::vector<Slice> slices;    // single-run
  std::vector<CurvePoint> curve;  // rmse / pd
  std::vector<ProfilePoint> profile;
};

/// Validates, then computes and writes artifacts under cfg.output_dir.
RunReport run_scenario(const ScenarioConfig& cfg);

}  // namespace wrfrft
