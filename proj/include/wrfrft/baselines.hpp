#pragma once

#include <string>
#include <vector>

#include "wrfrft/wrfrft.hpp"

namespace wrfrft {

/// Amplitude over a method's native axes plus its global peak.
struct BaselineMap {
  std::string method;
  std::vector<std::string> axes;
  std::vector<std::size_t> shape;
  std::vector<double> amplitude;  // row-major over shape
  PeakRecord peak;
};

/// Per-cell unitary centered slow-time DFT. Axes: cell x doppler bin.
BaselineMap mtd(const EchoMatrix& echo);
/// Doppler bin -> radial velocity for an n-pulse DFT.
double doppler_bin_velocity(double bin, std::size_t n, const RadarParams& radar);

/// Full-window spectra at one (r0, v, a) hypothesis, referenced at T0.
CVector rft_spectrum(const EchoMatrix& echo, double r0, double v);
CVector rfrft_spectrum(const EchoMatrix& echo, double r0, double v, double a, Angle alpha,
                       FrftMode mode = FrftMode::closed_form);
/// Unitary coherent sum after compensating exp(-j 4 pi r(t) / lambda).
cdouble grft_value(const EchoMatrix& echo, double r0, double v, double a);
/// Unitary DFT of the compensated sequence: GRFT over a fan of velocities
/// spaced lambda/(2 T_obs) around v. Bin 0 equals grft_value.
CVector grft_velocity_fan(const EchoMatrix& echo, double r0, double v, double a);

/// Zero-acceleration WRFRFT at alpha = pi/2 over [T0, T1]. Axes: r0 x v.
BaselineMap rft(const EchoMatrix& echo, const SearchGrid& grid, const SearchOptions& opts = {});

struct RfrftOptions {
  std::size_t alpha_count = 64;
  // Explicit order range; when alpha_max <= alpha_min the range spans the
  // angles matched to the grid's acceleration axis.
  double alpha_min = 0.0;
  double alpha_max = 0.0;
};

/// Angles searched by RFRFT for a grid.
std::vector<double> rfrft_alpha_grid(const RadarParams& radar, const SearchGrid& grid, const RfrftOptions& ropts);
/// Acceleration whose full-window chirp is focused at alpha.
double implied_acceleration(Angle alpha, std::size_t n, const RadarParams& radar);

/// Full-window extraction over (r0, v, a) and an alpha grid independent of a.
/// Axes: r0 x v x a (max over alpha and u). The peak's a is the acceleration
/// implied by the best alpha.
BaselineMap rfrft(const EchoMatrix& echo, const SearchGrid& grid, const RfrftOptions& ropts = {},
                  const SearchOptions& opts = {});

/// Matched phase compensation and coherent sum over (r0, v, a).
BaselineMap grft(const EchoMatrix& echo, const SearchGrid& grid);

/// Method names accepted by the harnesses: wrfrft, rfrft, grft, rft, mtd.
bool is_method(const std::string& name);

}  // namespace wrfrft
