#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace wrfrft {

using cdouble = std::complex<double>;

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = 3.14159265358979323846;

/// Radar and observation parameters. Every grid step is derived from these.
struct RadarParams {
  double carrier_hz = 6e9;
  double bandwidth_hz = 10e6;
  double sample_rate_hz = 50e6;  // fast-time rate
  double prf_hz = 200.0;
  double pulse_width_s = 10e-6;
  double t0_s = 0.0;
  double t1_s = 4.0;
  std::size_t num_cells = 512;  // fast-time range window, cell k <-> k * cell_size_m()

  double wavelength_m() const { return kSpeedOfLight / carrier_hz; }
  double prt_s() const { return 1.0 / prf_hz; }
  double cell_size_m() const { return kSpeedOfLight / (2.0 * sample_rate_hz); }
  double chirp_rate_hz_per_s() const { return bandwidth_hz / pulse_width_s; }
  std::size_t num_pulses() const;
  double pulse_time(std::size_t n) const { return t0_s + static_cast<double>(n) * prt_s(); }

  /// Throws ValidationError unless fs >= B > 0, prf > 0, T1 > T0, num_cells > 0.
  void validate() const;
};

/// Nearest pulse index to time t and the signed snap offset t_snapped - t.
struct PulseSnap {
  std::size_t index;
  double offset_s;
};
PulseSnap snap_to_pulse(const RadarParams& radar, double t);

/// Ground truth of one target: R(t) = R0 + V (t - Tb) + A (t - Tb)^2 on [Tb, Te].
struct TargetTruth {
  double r0_m = 0.0;
  double v_mps = 0.0;
  double a_mps2 = 0.0;
  double tb_s = 0.0;
  double te_s = 0.0;
  cdouble sigma0 = 1.0;

  void validate(const RadarParams& radar) const;
};

struct NoiseSpec {
  double snr_db = 0.0;  // after pulse compression, at the target peak
  std::uint64_t seed = 0;
  bool enabled = true;  // false synthesizes a noiseless echo
};

/// Complex data cube, fast-time cells x slow-time pulses. Storage is
/// pulse-major: all cells of pulse n are contiguous.
class EchoMatrix {
 public:
  EchoMatrix() = default;
  EchoMatrix(RadarParams radar, std::size_t num_cells, std::size_t num_pulses);
  explicit EchoMatrix(const RadarParams& radar)
      : EchoMatrix(radar, radar.num_cells, radar.num_pulses()) {}

  std::size_t num_cells() const { return num_cells_; }
  std::size_t num_pulses() const { return num_pulses_; }
  const RadarParams& radar() const { return radar_; }
  double cell_size_m() const { return radar_.cell_size_m(); }
  double pulse_time(std::size_t n) const { return radar_.pulse_time(n); }

  cdouble& at(std::size_t cell, std::size_t pulse) { return data_[pulse * num_cells_ + cell]; }
  const cdouble& at(std::size_t cell, std::size_t pulse) const {
    return data_[pulse * num_cells_ + cell];
  }
  std::span<cdouble> pulse(std::size_t n) { return {data_.data() + n * num_cells_, num_cells_}; }
  std::span<const cdouble> pulse(std::size_t n) const {
    return {data_.data() + n * num_cells_, num_cells_};
  }
  std::span<cdouble> data() { return data_; }
  std::span<const cdouble> data() const { return data_; }

  EchoMatrix& operator*=(double scale);
  EchoMatrix& operator+=(const EchoMatrix& other);

 private:
  RadarParams radar_;
  std::size_t num_cells_ = 0;
  std::size_t num_pulses_ = 0;
  std::vector<cdouble> data_;
};

}  // namespace wrfrft
