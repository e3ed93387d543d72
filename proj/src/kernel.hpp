#pragma once

#include <span>
#include <vector>

#include "wrfrft/radar.hpp"
#include "wrfrft/wrfrft.hpp"

namespace wrfrft::detail {

// Slow-time dechirp exp(j pi cot (m-c)^2 / n): the input chirp of the
// closed-form FRFT on the sqrt(2 pi / n) grid.
std::vector<cdouble> dechirp_vector(std::size_t n, double cot);

// Centre of the u band owned by velocity v, as a slow-time frequency in rad/sample.
double band_center(double v, double cot, std::size_t n, const RadarParams& radar);
// Width of the band owned by one velocity step.
double band_width(double dv, const RadarParams& radar);

double cot_of(Angle alpha);

// Converts a slow-time frequency to a fractional centered-DFT bin in (-0.5, n-0.5].
double omega_to_bin(double omega, std::size_t n);

struct BandPeak {
  double amplitude = 0.0;  // unitary scale, |DTFT| / sqrt(n)
  double omega = 0.0;
  bool refined = false;
};

// Per-thread scratch for the extract / dechirp / band-peak pipeline.
class Kernel {
 public:
  explicit Kernel(const EchoMatrix& echo) : echo_(echo) {}

  // Nearest-cell samples along r0 + v tau + a tau^2 for the pulses of span.
  // Returns true if any pulse fell outside the range window.
  bool extract(WindowSpan span, double r0, double v, double a);
  void multiply(std::span<const cdouble> chirp);
  std::span<const cdouble> samples() const { return y_; }

  // Peak of |DTFT| inside [center - width/2, center + width/2); width >= 2 pi
  // means the whole circle. Refinement is skipped when even the best possible
  // peak stays under skip_below.
  BandPeak band_peak(double center, double width, double skip_below);

 private:
  double dtft_abs(double omega) const;

  const EchoMatrix& echo_;
  std::vector<cdouble> y_;
  std::vector<cdouble> pad_;
};

}  // namespace wrfrft::detail
