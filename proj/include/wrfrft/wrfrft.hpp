#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wrfrft/frft.hpp"
#include "wrfrft/radar.hpp"

namespace wrfrft {

/// One search tuple. alpha is filled in by alpha_for.
struct Hypothesis {
  double eta0 = 0.0;
  double eta1 = 0.0;
  double r0 = 0.0;
  double v = 0.0;
  double a = 0.0;
  Angle alpha{};
};

enum class AlphaMapping {
  calibrated,  // arccot(4 a T / (lambda PRF)): cancels the slow-time quadratic phase
  literal,     // arccot(-2 a T / (lambda PRF))
};
AlphaMapping alpha_mapping_from_string(const std::string& name);
const char* to_string(AlphaMapping m);

/// Rotation angle in (0, pi) matched to acceleration a over the window, T = eta1 - eta0 + PRT.
Angle alpha_for(double a, double eta0, double eta1, const RadarParams& radar,
                AlphaMapping mapping = AlphaMapping::calibrated);

enum class AxisId : int { eta0 = 0, eta1 = 1, r0 = 2, v = 3, a = 4 };
inline constexpr std::array<const char*, 5> kAxisNames = {"eta0", "eta1", "r0", "v", "a"};
AxisId axis_from_string(const std::string& name);

struct AxisBounds {
  double min = 0.0;
  double max = 0.0;
};

/// Grid points are min + i*step for i < count, count = max(1, round((max-min)/step)),
/// so bounds behave as a half-open interval.
struct GridAxis {
  double min = 0.0;
  double max = 0.0;
  double step = 1.0;
  std::size_t count = 1;

  double value(std::size_t i) const { return min + static_cast<double>(i) * step; }
  std::size_t nearest(double x) const;
};

/// Bounds holding 2*half+1 nodes centered on `center`.
AxisBounds centered_bounds(double center, int half, double step);

/// Base steps: d_eta = PRT, d_r = c/2B, d_v = lambda/(2(T1-T0)), d_a = lambda/(2(T1-T0)^2).
std::array<double, 5> base_steps(const RadarParams& radar);

struct SearchGrid {
  std::array<GridAxis, 5> axes;

  const GridAxis& operator[](AxisId id) const { return axes[static_cast<int>(id)]; }
  GridAxis& operator[](AxisId id) { return axes[static_cast<int>(id)]; }
  /// Product of the axis counts (windows with eta1 <= eta0 included).
  std::uint64_t size() const;
};

inline constexpr std::uint64_t kDefaultBudget = 400'000'000ULL;

/// Throws ValidationError on an empty axis and BudgetError when the grid is too large.
SearchGrid build_grid(const std::array<AxisBounds, 5>& bounds, const RadarParams& radar,
                      const std::array<double, 5>& coarsen = {1, 1, 1, 1, 1},
                      std::uint64_t budget = kDefaultBudget);

/// 2-D view of the search: two free axes, the others either pinned to a value
/// or maximized over.
struct SliceSpec {
  std::string name;
  AxisId x = AxisId::r0;
  AxisId y = AxisId::v;
  std::array<std::optional<double>, 5> fixed{};
};

struct Slice {
  SliceSpec spec;
  std::size_t rows = 0;  // y axis count
  std::size_t cols = 0;  // x axis count
  std::vector<double> amplitude;  // row-major, rows x cols
  double at(std::size_t row, std::size_t col) const { return amplitude[row * cols + col]; }
};

struct SearchOptions {
  AlphaMapping mapping = AlphaMapping::calibrated;
  FrftMode mode = FrftMode::closed_form;
  double min_dwell_s = 0.0;  // <= 0 means 10 PRT
  // Each velocity hypothesis owns the u band of its velocity cell.
  bool velocity_bands = true;
  // Band width for single evaluations and profiles; <= 0 means lambda/(2(T1-T0)).
  // Searches use the grid's velocity step.
  double band_velocity_step = 0.0;
  bool prune = true;
  std::uint64_t budget = kDefaultBudget;
  std::vector<SliceSpec> slices;
};

/// Pulse span covered by [eta0, eta1] after snapping.
struct WindowSpan {
  std::size_t first = 0;
  std::size_t count = 0;
};
WindowSpan window_span(const RadarParams& radar, double eta0, double eta1, double min_dwell_s);

/// Samples along r(t) = r0 + v (t - eta0) + a (t - eta0)^2, one per window pulse,
/// from the nearest cell. Pulses whose cell falls outside the echo give zero.
struct Extraction {
  CVector samples;
  WindowSpan span;
  bool clipped = false;
};
Extraction extract_windowed_trajectory(const EchoMatrix& echo, const Hypothesis& hyp,
                                       double min_dwell_s = 0.0);

struct SingleResult {
  CVector spectrum;       // F_alpha of the extraction
  double peak = 0.0;      // max |spectrum|
  std::size_t u_bin = 0;  // argmax bin
  double band_peak = 0.0;  // continuous-u peak inside the velocity band (search objective)
  double u_fine = 0.0;     // fractional bin of band_peak
  Angle alpha{};
  bool clipped = false;
};
SingleResult wrfrft_single(const EchoMatrix& echo, Hypothesis hyp, const SearchOptions& opts = {});

struct PeakRecord {
  Hypothesis hyp;
  double amplitude = 0.0;
  std::size_t u_bin = 0;
  std::array<std::size_t, 5> index{};
  std::uint64_t rank = 0;  // flattened lexicographic index, the tie-break key
  bool clipped = false;
  double threshold = 0.0;
  bool detected = false;
};

struct SearchResult {
  PeakRecord peak;
  std::vector<Slice> slices;
  std::uint64_t evaluated = 0;
};

SearchResult wrfrft_search(const EchoMatrix& echo, const SearchGrid& grid, const SearchOptions& opts = {});

/// Search objective as one endpoint sweeps while the physical trajectory stays
/// fixed (r0 and v are re-anchored to the new eta0).
std::vector<double> peak_profile(const EchoMatrix& echo, const Hypothesis& base, AxisId axis,
                                 const std::vector<double>& sweep, const SearchOptions& opts = {});

/// r0, v of the same trajectory referenced at a new start time.
Hypothesis reanchor(const Hypothesis& hyp, double new_eta0);

/// Text record with fields eta0_s, eta1_s, r0_m, v_mps, a_mps2, amplitude, u_bin.
std::string to_text(const PeakRecord& rec);

}  // namespace wrfrft
