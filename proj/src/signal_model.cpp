#include "wrfrft/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "wrfrft/errors.hpp"
#include "wrfrft/fft.hpp"
#include "wrfrft/rng.hpp"

namespace wrfrft {
namespace {

constexpr double pi = std::numbers::pi;
// sinc envelope 1/(pi|x|) drops below 1e-3 past this argument
constexpr double kSincCutoff = 1.0 / (pi * 1e-3);

double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  return std::sin(pi * x) / (pi * x);
}

struct Dwell {
  std::size_t first;
  std::size_t last;
  double tb;  // snapped entry time
};

Dwell dwell_of(const RadarParams& radar, const TargetTruth& target) {
  const auto b = snap_to_pulse(radar, target.tb_s);
  const auto e = snap_to_pulse(radar, target.te_s);
  return {b.index, e.index, radar.pulse_time(b.index)};
}

double range_at(const TargetTruth& target, double tb, double t) {
  const double tau = t - tb;
  return target.r0_m + target.v_mps * tau + target.a_mps2 * tau * tau;
}

void check_in_window(const RadarParams& radar, const TargetTruth& target, std::size_t index) {
  const Dwell d = dwell_of(radar, target);
  const double span = static_cast<double>(radar.num_cells) * radar.cell_size_m();
  for (std::size_t n = d.first; n <= d.last; ++n) {
    const double r = range_at(target, d.tb, radar.pulse_time(n));
    if (r < 0.0 || r >= span) {
      std::ostringstream msg;
      msg << "target " << index << " leaves the range window [0, " << span << ") m at t="
          << radar.pulse_time(n) << " s (R=" << r << " m)";
      throw OutOfWindowError(msg.str());
    }
  }
}

void validate_scene(const RadarParams& radar, std::span<const TargetTruth> targets) {
  radar.validate();
  for (std::size_t i = 0; i < targets.size(); ++i) {
    targets[i].validate(radar);
    check_in_window(radar, targets[i], i);
  }
}

}  // namespace

double trajectory_range(const TargetTruth& truth, double t) {
  const double eps = 1e-12;
  if (t < truth.tb_s - eps || t > truth.te_s + eps) {
    std::ostringstream msg;
    msg << "t=" << t << " s outside the dwell [" << truth.tb_s << ", " << truth.te_s << "]";
    throw DomainError(msg.str());
  }
  return range_at(truth, truth.tb_s, t);
}

double noise_sigma(std::span<const TargetTruth> targets, const NoiseSpec& noise) {
  double ref = targets.empty() ? 1.0 : 0.0;
  for (const auto& t : targets) ref = std::max(ref, std::abs(t.sigma0));
  return ref * std::pow(10.0, -noise.snr_db / 20.0);
}

void add_noise(EchoMatrix& echo, double sigma, std::uint64_t seed) {
  const double var = sigma * sigma;
  const auto pulses = static_cast<long long>(echo.num_pulses());
#pragma omp parallel for schedule(static)
  for (long long n = 0; n < pulses; ++n) {
    CounterRng rng(seed, static_cast<std::uint64_t>(n));
    for (auto& v : echo.pulse(static_cast<std::size_t>(n))) v += rng.complex_normal(var);
  }
}

EchoMatrix synthesize_compressed_echo(const RadarParams& radar, std::span<const TargetTruth> targets,
                                      const NoiseSpec& noise) {
  validate_scene(radar, targets);
  EchoMatrix echo(radar);
  const double lambda = radar.wavelength_m();
  const double cell = radar.cell_size_m();
  const double bw_per_cell = radar.bandwidth_hz / radar.sample_rate_hz;  // sinc argument per cell
  const double half_width = kSincCutoff / bw_per_cell;
  const auto cells = static_cast<long long>(radar.num_cells);

  for (const auto& target : targets) {
    const Dwell d = dwell_of(radar, target);
    for (std::size_t n = d.first; n <= d.last; ++n) {
      const double r = range_at(target, d.tb, radar.pulse_time(n));
      const double center = r / cell;
      const cdouble phasor = target.sigma0 * std::polar(1.0, -4.0 * pi * r / lambda);
      const long long lo = std::max(0LL, static_cast<long long>(std::ceil(center - half_width)));
      const long long hi = std::min(cells - 1, static_cast<long long>(std::floor(center + half_width)));
      auto col = echo.pulse(n);
      for (long long k = lo; k <= hi; ++k)
        col[static_cast<std::size_t>(k)] += phasor * sinc(bw_per_cell * (static_cast<double>(k) - center));
    }
  }
  if (noise.enabled) add_noise(echo, noise_sigma(targets, noise), noise.seed);
  return echo;
}

EchoMatrix synthesize_raw_echo(const RadarParams& radar, std::span<const TargetTruth> targets,
                               const NoiseSpec& noise) {
  validate_scene(radar, targets);
  EchoMatrix echo(radar);
  const double lambda = radar.wavelength_m();
  const double gamma = radar.chirp_rate_hz_per_s();
  const double fs = radar.sample_rate_hz;
  for (const auto& target : targets) {
    const Dwell d = dwell_of(radar, target);
    for (std::size_t n = d.first; n <= d.last; ++n) {
      const double r = range_at(target, d.tb, radar.pulse_time(n));
      const double delay = 2.0 * r / kSpeedOfLight;
      const cdouble phasor = target.sigma0 * std::polar(1.0, -4.0 * pi * r / lambda);
      auto col = echo.pulse(n);
      for (std::size_t k = 0; k < col.size(); ++k) {
        const double tt = static_cast<double>(k) / fs - delay;
        if (tt >= 0.0 && tt < radar.pulse_width_s) col[k] += phasor * std::polar(1.0, pi * gamma * tt * tt);
      }
    }
  }
  if (!noise.enabled) return echo;

  // white noise shaped to |f| <= B/2, rescaled to keep the per-sample variance
  const double sigma = noise_sigma(targets, noise);
  const std::size_t len = radar.num_cells;
  const double keep = radar.bandwidth_hz / fs;
  const auto pulses = static_cast<long long>(echo.num_pulses());
#pragma omp parallel for schedule(static)
  for (long long n = 0; n < pulses; ++n) {
    CounterRng rng(noise.seed, static_cast<std::uint64_t>(n));
    std::vector<cdouble> w(len);
    for (auto& v : w) v = rng.complex_normal(sigma * sigma);
    fft::transform(w, -1);
    for (std::size_t k = 0; k < len; ++k) {
      const double f = static_cast<double>(k < (len + 1) / 2 ? k : len - k) / static_cast<double>(len);
      w[k] = (f <= 0.5 * keep) ? w[k] / (static_cast<double>(len) * std::sqrt(keep)) : 0.0;
    }
    fft::transform(w, +1);
    auto col = echo.pulse(static_cast<std::size_t>(n));
    for (std::size_t k = 0; k < len; ++k) col[k] += w[k];
  }
  return echo;
}

EchoMatrix pulse_compress(const EchoMatrix& raw, const RadarParams& radar) {
  const double fs = radar.sample_rate_hz;
  const auto taps = static_cast<std::size_t>(std::llround(radar.pulse_width_s * fs));
  if (taps < 2) throw ValidationError("pulse_compress: chirp too short (Tp*fs < 2 samples)");
  const double gamma = radar.chirp_rate_hz_per_s();
  const std::size_t cells = raw.num_cells();
  std::size_t len = 1;
  while (len < cells + taps) len <<= 1;

  std::vector<cdouble> ref(len, 0.0);
  for (std::size_t i = 0; i < taps; ++i) {
    const double t = static_cast<double>(i) / fs;
    ref[i] = std::polar(1.0, pi * gamma * t * t);
  }
  fft::transform(ref, -1);

  EchoMatrix out(raw.radar(), cells, raw.num_pulses());
  const double norm = 1.0 / (static_cast<double>(len) * static_cast<double>(taps));
  const auto pulses = static_cast<long long>(raw.num_pulses());
#pragma omp parallel for schedule(static)
  for (long long n = 0; n < pulses; ++n) {
    std::vector<cdouble> buf(len, 0.0);
    auto col = raw.pulse(static_cast<std::size_t>(n));
    std::copy(col.begin(), col.end(), buf.begin());
    fft::transform(buf, -1);
    // correlation: out[k] = sum_i x[k+i] conj(ref[i])
    for (std::size_t k = 0; k < len; ++k) buf[k] *= std::conj(ref[k]) * norm;
    fft::transform(buf, +1);
    auto dst = out.pulse(static_cast<std::size_t>(n));
    std::copy(buf.begin(), buf.begin() + static_cast<long long>(cells), dst.begin());
  }
  return out;
}

}  // namespace wrfrft
