#include "wrfrft/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "kernel.hpp"
#include "wrfrft/errors.hpp"
#include "wrfrft/fft.hpp"

namespace wrfrft {
namespace {

constexpr double pi = std::numbers::pi;

WindowSpan full_span(const EchoMatrix& echo) { return {0, echo.num_pulses()}; }

double last_pulse_time(const EchoMatrix& echo) { return echo.pulse_time(echo.num_pulses() - 1); }

PeakRecord full_window_record(const EchoMatrix& echo) {
  PeakRecord rec;
  rec.hyp.eta0 = echo.radar().t0_s;
  rec.hyp.eta1 = last_pulse_time(echo);
  rec.amplitude = -1.0;
  rec.rank = std::numeric_limits<std::uint64_t>::max();
  return rec;
}

bool better(double amp, std::uint64_t rank, const PeakRecord& best) {
  return amp > best.amplitude || (amp == best.amplitude && rank < best.rank);
}

}  // namespace

double doppler_bin_velocity(double bin, std::size_t n, const RadarParams& radar) {
  const double c = 0.5 * static_cast<double>(n - 1);
  const double omega = 2.0 * pi * (bin - c) / static_cast<double>(n);
  return -omega * radar.wavelength_m() * radar.prf_hz / (4.0 * pi);
}

BaselineMap mtd(const EchoMatrix& echo) {
  const std::size_t cells = echo.num_cells();
  const std::size_t n = echo.num_pulses();
  BaselineMap map;
  map.method = "mtd";
  map.axes = {"cell", "doppler_bin"};
  map.shape = {cells, n};
  map.amplitude.assign(cells * n, 0.0);
  map.peak = full_window_record(echo);
#pragma omp parallel for schedule(static)
  for (long long k = 0; k < static_cast<long long>(cells); ++k) {
    CVector slow(n);
    for (std::size_t m = 0; m < n; ++m) slow[m] = echo.at(static_cast<std::size_t>(k), m);
    fft::centered_dft(slow, -1);
    for (std::size_t b = 0; b < n; ++b) map.amplitude[static_cast<std::size_t>(k) * n + b] = std::abs(slow[b]);
  }
  for (std::size_t i = 0; i < map.amplitude.size(); ++i) {
    if (map.amplitude[i] > map.peak.amplitude) {
      map.peak.amplitude = map.amplitude[i];
      map.peak.rank = i;
      map.peak.u_bin = i % n;
      map.peak.hyp.r0 = static_cast<double>(i / n) * echo.cell_size_m();
      map.peak.hyp.v = doppler_bin_velocity(static_cast<double>(i % n), n, echo.radar());
    }
  }
  return map;
}

CVector rft_spectrum(const EchoMatrix& echo, double r0, double v) {
  detail::Kernel kernel(echo);
  kernel.extract(full_span(echo), r0, v, 0.0);
  CVector out(kernel.samples().begin(), kernel.samples().end());
  fft::centered_dft(out, -1);
  return out;
}

CVector rfrft_spectrum(const EchoMatrix& echo, double r0, double v, double a, Angle alpha, FrftMode mode) {
  detail::Kernel kernel(echo);
  kernel.extract(full_span(echo), r0, v, a);
  return frft(kernel.samples(), alpha, mode);
}

namespace {

CVector compensated(const EchoMatrix& echo, double r0, double v, double a) {
  detail::Kernel kernel(echo);
  kernel.extract(full_span(echo), r0, v, a);
  CVector y(kernel.samples().begin(), kernel.samples().end());
  const double k = 4.0 * pi / echo.radar().wavelength_m();
  const double prt = echo.radar().prt_s();
  for (std::size_t m = 0; m < y.size(); ++m) {
    const double tau = static_cast<double>(m) * prt;
    y[m] *= std::polar(1.0, k * (r0 + v * tau + a * tau * tau));
  }
  return y;
}

}  // namespace

cdouble grft_value(const EchoMatrix& echo, double r0, double v, double a) {
  const CVector y = compensated(echo, r0, v, a);
  cdouble acc = 0.0;
  for (auto s : y) acc += s;
  return acc / std::sqrt(static_cast<double>(y.size()));
}

CVector grft_velocity_fan(const EchoMatrix& echo, double r0, double v, double a) {
  CVector y = compensated(echo, r0, v, a);
  fft::transform(y, -1);
  const double norm = 1.0 / std::sqrt(static_cast<double>(y.size()));
  for (auto& s : y) s *= norm;
  return y;
}

BaselineMap rft(const EchoMatrix& echo, const SearchGrid& grid, const SearchOptions& opts) {
  const GridAxis& axr = grid[AxisId::r0];
  const GridAxis& axv = grid[AxisId::v];
  const RadarParams& radar = echo.radar();
  const WindowSpan span = full_span(echo);
  const double width = opts.velocity_bands ? detail::band_width(axv.step, radar) : 2.0 * pi;
  BaselineMap map;
  map.method = "rft";
  map.axes = {"r0", "v"};
  map.shape = {axr.count, axv.count};
  map.amplitude.assign(axr.count * axv.count, 0.0);
  std::vector<double> omegas(map.amplitude.size(), 0.0);
#pragma omp parallel
  {
    detail::Kernel kernel(echo);
#pragma omp for schedule(static)
    for (long long ir = 0; ir < static_cast<long long>(axr.count); ++ir)
      for (std::size_t iv = 0; iv < axv.count; ++iv) {
        kernel.extract(span, axr.value(static_cast<std::size_t>(ir)), axv.value(iv), 0.0);
        const auto bp = kernel.band_peak(detail::band_center(axv.value(iv), 0.0, span.count, radar), width, 0.0);
        const std::size_t i = static_cast<std::size_t>(ir) * axv.count + iv;
        map.amplitude[i] = bp.amplitude;
        omegas[i] = bp.omega;
      }
  }
  map.peak = full_window_record(echo);
  map.peak.hyp.alpha = {pi / 2};
  for (std::size_t i = 0; i < map.amplitude.size(); ++i) {
    if (!better(map.amplitude[i], i, map.peak)) continue;
    map.peak.amplitude = map.amplitude[i];
    map.peak.rank = i;
    map.peak.index = {0, 0, i / axv.count, i % axv.count, 0};
    map.peak.hyp.r0 = axr.value(i / axv.count);
    map.peak.hyp.v = axv.value(i % axv.count);
    map.peak.u_bin = static_cast<std::size_t>(std::llround(detail::omega_to_bin(omegas[i], span.count))) % span.count;
  }
  return map;
}

double implied_acceleration(Angle alpha, std::size_t n, const RadarParams& radar) {
  return detail::cot_of(alpha) * radar.wavelength_m() * radar.prf_hz * radar.prf_hz / (4.0 * static_cast<double>(n));
}

std::vector<double> rfrft_alpha_grid(const RadarParams& radar, const SearchGrid& grid, const RfrftOptions& ropts) {
  if (ropts.alpha_count == 0) throw ValidationError("RFRFT needs at least one alpha order");
  double lo = ropts.alpha_min;
  double hi = ropts.alpha_max;
  if (!(hi > lo)) {
    const GridAxis& axa = grid[AxisId::a];
    const double t_last = radar.pulse_time(radar.num_pulses() - 1);
    lo = alpha_for(axa.value(axa.count - 1), radar.t0_s, t_last, radar).alpha;
    hi = alpha_for(axa.value(0), radar.t0_s, t_last, radar).alpha;
  }
  if (ropts.alpha_count == 1 || hi == lo) return {0.5 * (lo + hi)};
  std::vector<double> out(ropts.alpha_count);
  for (std::size_t p = 0; p < out.size(); ++p)
    out[p] = lo + (hi - lo) * static_cast<double>(p) / static_cast<double>(out.size() - 1);
  return out;
}

BaselineMap rfrft(const EchoMatrix& echo, const SearchGrid& grid, const RfrftOptions& ropts,
                  const SearchOptions& opts) {
  const RadarParams& radar = echo.radar();
  const GridAxis& axr = grid[AxisId::r0];
  const GridAxis& axv = grid[AxisId::v];
  const GridAxis& axa = grid[AxisId::a];
  const WindowSpan span = full_span(echo);
  const auto alphas = rfrft_alpha_grid(radar, grid, ropts);
  std::vector<std::vector<cdouble>> chirps;
  std::vector<double> cots;
  for (double a : alphas) {
    cots.push_back(detail::cot_of({a}));
    chirps.push_back(detail::dechirp_vector(span.count, cots.back()));
  }
  const double width = opts.velocity_bands ? detail::band_width(axv.step, radar) : 2.0 * pi;

  BaselineMap map;
  map.method = "rfrft";
  map.axes = {"r0", "v", "a"};
  map.shape = {axr.count, axv.count, axa.count};
  const std::size_t total = axr.count * axv.count * axa.count;
  map.amplitude.assign(total, 0.0);
  std::vector<std::size_t> best_alpha(total, 0);
  std::vector<double> omegas(total, 0.0);

#pragma omp parallel
  {
    detail::Kernel kernel(echo);
#pragma omp for schedule(dynamic, 1)
    for (long long i = 0; i < static_cast<long long>(total); ++i) {
      const std::size_t ir = static_cast<std::size_t>(i) / (axv.count * axa.count);
      const std::size_t iv = (static_cast<std::size_t>(i) / axa.count) % axv.count;
      const std::size_t ia = static_cast<std::size_t>(i) % axa.count;
      const double v = axv.value(iv);
      double best = -1.0;
      for (std::size_t p = 0; p < alphas.size(); ++p) {
        kernel.extract(span, axr.value(ir), v, axa.value(ia));
        kernel.multiply(chirps[p]);
        const auto bp = kernel.band_peak(detail::band_center(v, cots[p], span.count, radar), width,
                                         opts.prune ? best : 0.0);
        if (bp.amplitude > best) {
          best = bp.amplitude;
          best_alpha[static_cast<std::size_t>(i)] = p;
          omegas[static_cast<std::size_t>(i)] = bp.omega;
        }
      }
      map.amplitude[static_cast<std::size_t>(i)] = best;
    }
  }

  map.peak = full_window_record(echo);
  for (std::size_t i = 0; i < total; ++i) {
    if (!better(map.amplitude[i], i, map.peak)) continue;
    const std::size_t ir = i / (axv.count * axa.count);
    const std::size_t iv = (i / axa.count) % axv.count;
    const std::size_t ia = i % axa.count;
    map.peak.amplitude = map.amplitude[i];
    map.peak.rank = i;
    map.peak.index = {0, 0, ir, iv, ia};
    map.peak.hyp.r0 = axr.value(ir);
    map.peak.hyp.v = axv.value(iv);
    map.peak.hyp.alpha = {alphas[best_alpha[i]]};
    map.peak.hyp.a = implied_acceleration(map.peak.hyp.alpha, span.count, radar);
    map.peak.u_bin = static_cast<std::size_t>(std::llround(detail::omega_to_bin(omegas[i], span.count))) % span.count;
  }
  return map;
}

BaselineMap grft(const EchoMatrix& echo, const SearchGrid& grid) {
  const GridAxis& axr = grid[AxisId::r0];
  const GridAxis& axv = grid[AxisId::v];
  const GridAxis& axa = grid[AxisId::a];
  const std::size_t total = axr.count * axv.count * axa.count;
  BaselineMap map;
  map.method = "grft";
  map.axes = {"r0", "v", "a"};
  map.shape = {axr.count, axv.count, axa.count};
  map.amplitude.assign(total, 0.0);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < static_cast<long long>(total); ++i) {
    const std::size_t ir = static_cast<std::size_t>(i) / (axv.count * axa.count);
    const std::size_t iv = (static_cast<std::size_t>(i) / axa.count) % axv.count;
    const std::size_t ia = static_cast<std::size_t>(i) % axa.count;
    map.amplitude[static_cast<std::size_t>(i)] = std::abs(grft_value(echo, axr.value(ir), axv.value(iv), axa.value(ia)));
  }
  map.peak = full_window_record(echo);
  for (std::size_t i = 0; i < total; ++i) {
    if (!better(map.amplitude[i], i, map.peak)) continue;
    const std::size_t ir = i / (axv.count * axa.count);
    const std::size_t iv = (i / axa.count) % axv.count;
    const std::size_t ia = i % axa.count;
    map.peak.amplitude = map.amplitude[i];
    map.peak.rank = i;
    map.peak.index = {0, 0, ir, iv, ia};
    map.peak.hyp.r0 = axr.value(ir);
    map.peak.hyp.v = axv.value(iv);
    map.peak.hyp.a = axa.value(ia);
  }
  return map;
}

bool is_method(const std::string& name) {
  return name == "wrfrft" || name == "rfrft" || name == "grft" || name == "rft" || name == "mtd";
}

}  // namespace wrfrft
