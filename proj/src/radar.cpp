#include "wrfrft/radar.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wrfrft/errors.hpp"

namespace wrfrft {

std::size_t RadarParams::num_pulses() const {
  return static_cast<std::size_t>(std::llround((t1_s - t0_s) * prf_hz));
}

void RadarParams::validate() const {
  std::ostringstream err;
  if (!(bandwidth_hz > 0.0)) err << "bandwidth must be > 0; ";
  if (!(sample_rate_hz >= bandwidth_hz)) err << "fs must be >= B; ";
  if (!(prf_hz > 0.0)) err << "prf must be > 0; ";
  if (!(carrier_hz > 0.0)) err << "carrier must be > 0; ";
  if (!(pulse_width_s > 0.0)) err << "pulse width must be > 0; ";
  if (!(t1_s > t0_s)) err << "T1 must exceed T0; ";
  if (num_cells == 0) err << "num_cells must be > 0; ";
  if (!err.str().empty()) throw ValidationError("radar: " + err.str());
  if (num_pulses() < 2) throw ValidationError("radar: observation holds fewer than 2 pulses");
}

PulseSnap snap_to_pulse(const RadarParams& radar, double t) {
  const long long idx = std::llround((t - radar.t0_s) * radar.prf_hz);
  const long long last = static_cast<long long>(radar.num_pulses()) - 1;
  const std::size_t n = static_cast<std::size_t>(std::clamp(idx, 0LL, last));
  return {n, radar.pulse_time(n) - t};
}

void TargetTruth::validate(const RadarParams& radar) const {
  if (!(tb_s < te_s)) throw ValidationError("target: Tb must be < Te");
  const double eps = 1e-9;
  if (tb_s < radar.t0_s - eps || te_s > radar.t1_s + eps)
    throw ValidationError("target: dwell [Tb, Te] must lie inside [T0, T1]");
  if (!std::isfinite(r0_m) || !std::isfinite(v_mps) || !std::isfinite(a_mps2) ||
      !std::isfinite(sigma0.real()) || !std::isfinite(sigma0.imag()))
    throw ValidationError("target: non-finite parameter");
}

EchoMatrix::EchoMatrix(RadarParams radar, std::size_t num_cells, std::size_t num_pulses)
    : radar_(radar), num_cells_(num_cells), num_pulses_(num_pulses), data_(num_cells * num_pulses) {
  radar_.num_cells = num_cells;
}

EchoMatrix& EchoMatrix::operator*=(double scale) {
  for (auto& v : data_) v *= scale;
  return *this;
}

EchoMatrix& EchoMatrix::operator+=(const EchoMatrix& other) {
  if (other.num_cells_ != num_cells_ || other.num_pulses_ != num_pulses_)
    throw ValidationError("echo matrices differ in shape");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

}  // namespace wrfrft
