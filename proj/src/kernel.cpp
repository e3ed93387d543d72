#include "kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wrfrft/fft.hpp"

namespace wrfrft::detail {
namespace {

constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * pi;
// Max of a degree-(n-1) trigonometric polynomial over its 2n-point samples is
// at most 1/cos(pi/4) times the largest sample.
constexpr double kPadBound = 0.70;
constexpr double kGolden = 0.6180339887498949;

double wrap_pm_pi(double w) {
  w = std::fmod(w + pi, two_pi);
  if (w < 0.0) w += two_pi;
  return w - pi;
}

}  // namespace

std::vector<cdouble> dechirp_vector(std::size_t n, double cot) {
  std::vector<cdouble> out(n);
  const double c = 0.5 * static_cast<double>(n - 1);
  for (std::size_t m = 0; m < n; ++m) {
    const double d = static_cast<double>(m) - c;
    out[m] = std::polar(1.0, pi * cot * d * d / static_cast<double>(n));
  }
  return out;
}

double band_center(double v, double cot, std::size_t n, const RadarParams& radar) {
  const double c = 0.5 * static_cast<double>(n - 1);
  return -4.0 * pi * v / (radar.wavelength_m() * radar.prf_hz) -
         two_pi * cot * c / static_cast<double>(n);
}

double band_width(double dv, const RadarParams& radar) {
  return 4.0 * pi * dv / (radar.wavelength_m() * radar.prf_hz);
}

double cot_of(Angle alpha) { return std::cos(alpha.alpha) / std::sin(alpha.alpha); }

double omega_to_bin(double omega, std::size_t n) {
  const double c = 0.5 * static_cast<double>(n - 1);
  double w = wrap_pm_pi(omega);
  if (w <= -pi) w += two_pi;
  return c + static_cast<double>(n) * w / two_pi;
}

bool Kernel::extract(WindowSpan span, double r0, double v, double a) {
  y_.assign(span.count, 0.0);
  const double prt = echo_.radar().prt_s();
  const double inv_cell = 1.0 / echo_.cell_size_m();
  const auto cells = static_cast<long long>(echo_.num_cells());
  bool clipped = false;
  for (std::size_t m = 0; m < span.count; ++m) {
    const double tau = static_cast<double>(m) * prt;
    const long long k = std::llround((r0 + v * tau + a * tau * tau) * inv_cell);
    if (k < 0 || k >= cells) {
      clipped = true;
      continue;
    }
    y_[m] = echo_.at(static_cast<std::size_t>(k), span.first + m);
  }
  return clipped;
}

void Kernel::multiply(std::span<const cdouble> chirp) {
  for (std::size_t m = 0; m < y_.size(); ++m) y_[m] *= chirp[m];
}

double Kernel::dtft_abs(double omega) const {
  const cdouble step = std::polar(1.0, -omega);
  cdouble rot = 1.0;
  cdouble acc = 0.0;
  for (std::size_t m = 0; m < y_.size(); ++m) {
    acc += y_[m] * rot;
    rot *= step;
    if ((m & 63) == 63) rot = std::polar(1.0, -omega * static_cast<double>(m + 1));
  }
  return std::abs(acc);
}

BandPeak Kernel::band_peak(double center, double width, double skip_below) {
  const std::size_t n = y_.size();
  const std::size_t len = 2 * n;
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  pad_.assign(len, 0.0);
  std::copy(y_.begin(), y_.end(), pad_.begin());
  fft::transform(pad_, -1);
  const double bin = pi / static_cast<double>(n);  // padded bin spacing

  double global = 0.0;
  for (const auto& p : pad_) global = std::max(global, std::abs(p));

  const bool full = width >= two_pi;
  double best = -1.0;
  double best_w = 0.0;
  double lo = 0.0, hi = 0.0;  // band edges as offsets from center
  if (full) {
    for (std::size_t j = 0; j < len; ++j) {
      const double mag = std::abs(pad_[j]);
      if (mag > best) best = mag, best_w = static_cast<double>(j) * bin;
    }
  } else {
    lo = -0.5 * width;
    hi = 0.5 * width;
    const double c = wrap_pm_pi(center);
    const auto j0 = static_cast<long long>(std::ceil((c + lo) / bin));
    const auto j1 = static_cast<long long>(std::ceil((c + hi) / bin)) - 1;
    for (long long j = j0; j <= j1; ++j) {
      const long long jj = ((j % static_cast<long long>(len)) + static_cast<long long>(len)) %
                           static_cast<long long>(len);
      const double mag = std::abs(pad_[static_cast<std::size_t>(jj)]);
      if (mag > best) best = mag, best_w = static_cast<double>(j) * bin;
    }
    const double mid = dtft_abs(c);
    if (mid > best) best = mid, best_w = c;
    center = c;
  }

  if (global / kPadBound * norm < skip_below) return {best * norm, best_w, false};

  // golden-section search within one padded bin of the best sample
  double a = best_w - bin;
  double b = best_w + bin;
  if (!full) {
    a = std::max(a, center + lo);
    b = std::min(b, center + hi);
  }
  double x1 = b - kGolden * (b - a);
  double x2 = a + kGolden * (b - a);
  double f1 = dtft_abs(x1);
  double f2 = dtft_abs(x2);
  for (int it = 0; it < 40 && (b - a) > 1e-7 * bin; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = dtft_abs(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = dtft_abs(x1);
    }
  }
  const double xm = f1 > f2 ? x1 : x2;
  const double fm = std::max(f1, f2);
  if (fm > best) best = fm, best_w = xm;
  return {best * norm, best_w, true};
}

}  // namespace wrfrft::detail
