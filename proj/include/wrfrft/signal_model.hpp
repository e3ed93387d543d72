#pragma once

#include <span>

#include "wrfrft/radar.hpp"

namespace wrfrft {

/// R(t) for Tb <= t <= Te; DomainError otherwise.
double trajectory_range(const TargetTruth& truth, double t);

/// Noise standard deviation per complex sample for the given targets (largest |sigma0|, or 1 with no targets).
double noise_sigma(std::span<const TargetTruth> targets, const NoiseSpec& noise);

/// Adds circular complex Gaussian noise of standard deviation sigma, keyed by (seed, pulse).
void add_noise(EchoMatrix& echo, double sigma, std::uint64_t seed);

/// Pulse-compressed echoes of every target plus calibrated noise.
EchoMatrix synthesize_compressed_echo(const RadarParams& radar,
                                      std::span<const TargetTruth> targets,
                                      const NoiseSpec& noise);

/// Raw LFM returns before matched filtering. Noise here is band-limited to B
/// with per-sample standard deviation sigma_n from the noise spec, so the SNR is
/// the per-sample input SNR.
EchoMatrix synthesize_raw_echo(const RadarParams& radar, std::span<const TargetTruth> targets,
                               const NoiseSpec& noise);

/// Matched filter against exp(j pi gamma t^2) over Tp, normalized so a unit
/// raw return compresses to a unit peak. Throws ValidationError if Tp*fs < 2.
EchoMatrix pulse_compress(const EchoMatrix& raw, const RadarParams& radar);

}  // namespace wrfrft
