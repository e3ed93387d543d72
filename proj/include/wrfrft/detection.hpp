#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wrfrft/baselines.hpp"
#include "wrfrft/presets.hpp"
#include "wrfrft/wrfrft.hpp"

namespace wrfrft {

inline constexpr std::size_t kMinReferenceCells = 32;

struct DetectionReport {
  double amplitude = 0.0;
  double threshold = 0.0;
  bool decision = false;
  double pfa = 0.0;
  double sigma_hat = 0.0;
  std::size_t reference_cells = 0;
};

/// gamma = sigma * sqrt(-2 ln pfa) for a Rayleigh envelope of per-component scale sigma.
double rayleigh_threshold(double sigma_hat, double pfa);

/// Cell averaging over |x| with `guard` cells on each side of `cut` excluded
/// (circular). sigma_hat = RMS(reference) / sqrt(2). Throws ValidationError
/// with fewer than kMinReferenceCells reference cells or pfa outside (0, 1].
DetectionReport threshold_from_reference(std::span<const double> amplitudes, std::size_t cut, double pfa,
                                         std::size_t guard = 5);
DetectionReport threshold_from_reference(std::span<const cdouble> spectrum, std::size_t cut, double pfa,
                                         std::size_t guard = 5);

/// Strict: amplitude == gamma is no detection.
inline bool detect(double amplitude, double gamma) { return amplitude > gamma; }

struct CurvePoint {
  std::string method;
  double snr_db = 0.0;
  std::string metric;
  double value = 0.0;
  double ci_halfwidth = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed0 = 0;
};

/// 95% Wilson score interval half-width for k successes in n trials.
double wilson_halfwidth(std::size_t k, std::size_t n, double z = 1.96);

/// First SNR where the curve reaches `level`, linearly interpolated; NaN if never.
double snr_at_level(const std::vector<CurvePoint>& points, const std::string& method, const std::string& metric,
                    double level);

void write_curve_csv(const std::string& path, const std::vector<CurvePoint>& points);
std::vector<CurvePoint> read_curve_csv(const std::string& path);

/// Seed of trial `trial` at SNR index `snr_index`.
std::uint64_t trial_seed(std::uint64_t seed0, std::size_t snr_index, std::size_t trial);

struct RmseConfig {
  std::array<double, 5> coarsen{1, 1, 1, 1, 1};
  int half_nodes = 2;  // grid holds 2*half_nodes+1 nodes per axis around the truth node
  RfrftOptions rfrft;
  SearchOptions search;
};

/// Per SNR and method: rmse_{eta0,eta1,r0,v,a}, frac_within_step (every
/// estimated axis within one step) with confidence half-widths. RFRFT errors
/// are taken against the truth re-anchored at T0 and cover r0, v, a.
std::vector<CurvePoint> monte_carlo_rmse(const Scenario& scenario, const std::vector<double>& snr_db,
                                         std::size_t trials, const std::vector<std::string>& methods,
                                         std::uint64_t seed0, const RmseConfig& cfg = {});

struct DetectionConfig {
  double pfa = 1e-3;
  std::size_t guard = 5;
  bool jitter = true;   // true parameters uniform within half a velocity/acceleration step of the node
  bool target = true;   // false gives noise-only trials
  SearchOptions search;
};

/// Matched-cell CA-CFAR detection per method: each method is evaluated at its
/// hypothesis matched to the nominal target, the cell under test is where the
/// noiseless nominal response peaks, and the reference cells are the rest of
/// that spectrum. Metric "pd".
std::vector<CurvePoint> detection_curve(const Scenario& scenario, const std::vector<double>& snr_db,
                                        std::size_t trials, const std::vector<std::string>& methods,
                                        std::uint64_t seed0, const DetectionConfig& cfg = {});

/// Truth trajectory referenced at a new start time (full-window baselines use T0).
TargetTruth reanchored_truth(const TargetTruth& t, double new_start);

}  // namespace wrfrft
