#include "wrfrft/wrfrft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <numbers>
#include <sstream>

#include "kernel.hpp"
#include "wrfrft/errors.hpp"

namespace wrfrft {
namespace {

constexpr double pi = std::numbers::pi;

double min_dwell(const RadarParams& radar, double requested) {
  return requested > 0.0 ? requested : 10.0 * radar.prt_s();
}

bool better(double amp, std::uint64_t rank, double best_amp, std::uint64_t best_rank) {
  return amp > best_amp || (amp == best_amp && rank < best_rank);
}

struct WindowKey {
  std::size_t i0, i1, ia;
};

}  // namespace

AlphaMapping alpha_mapping_from_string(const std::string& name) {
  if (name == "calibrated") return AlphaMapping::calibrated;
  if (name == "literal") return AlphaMapping::literal;
  throw ValidationError("unknown alpha mapping '" + name + "' (calibrated | literal)");
}

const char* to_string(AlphaMapping m) { return m == AlphaMapping::calibrated ? "calibrated" : "literal"; }

Angle alpha_for(double a, double eta0, double eta1, const RadarParams& radar, AlphaMapping mapping) {
  const double t_eta = eta1 - eta0 + radar.prt_s();
  const double x = a * t_eta / (radar.wavelength_m() * radar.prf_hz);
  const double cot = mapping == AlphaMapping::calibrated ? 4.0 * x : -2.0 * x;
  return {std::atan2(1.0, cot)};
}

AxisId axis_from_string(const std::string& name) {
  for (int i = 0; i < 5; ++i)
    if (name == kAxisNames[i]) return static_cast<AxisId>(i);
  throw ValidationError("unknown axis '" + name + "'");
}

std::size_t GridAxis::nearest(double x) const {
  const double i = std::round((x - min) / step);
  return static_cast<std::size_t>(std::clamp(i, 0.0, static_cast<double>(count - 1)));
}

AxisBounds centered_bounds(double center, int half, double step) {
  return {center - half * step, center + (half + 1) * step};
}

std::array<double, 5> base_steps(const RadarParams& radar) {
  const double span = radar.t1_s - radar.t0_s;
  const double lambda = radar.wavelength_m();
  return {radar.prt_s(), radar.prt_s(), kSpeedOfLight / (2.0 * radar.bandwidth_hz),
          lambda / (2.0 * span), lambda / (2.0 * span * span)};
}

std::uint64_t SearchGrid::size() const {
  std::uint64_t total = 1;
  for (const auto& ax : axes) total *= ax.count;
  return total;
}

SearchGrid build_grid(const std::array<AxisBounds, 5>& bounds, const RadarParams& radar,
                      const std::array<double, 5>& coarsen, std::uint64_t budget) {
  const auto steps = base_steps(radar);
  SearchGrid grid;
  long double total = 1.0L;
  for (int i = 0; i < 5; ++i) {
    const auto& b = bounds[i];
    if (!(b.max >= b.min) || !std::isfinite(b.min) || !std::isfinite(b.max))
      throw ValidationError(std::string("empty or unordered bounds on axis ") + kAxisNames[i]);
    if (!(coarsen[i] > 0.0))
      throw ValidationError(std::string("coarsen factor must be > 0 on axis ") + kAxisNames[i]);
    GridAxis& ax = grid.axes[i];
    ax.min = b.min;
    ax.max = b.max;
    ax.step = steps[i] * coarsen[i];
    const double n = std::round((b.max - b.min) / ax.step);
    ax.count = static_cast<std::size_t>(std::max(1.0, n));
    total *= static_cast<long double>(ax.count);
  }
  if (total > static_cast<long double>(budget)) {
    std::ostringstream msg;
    msg << "search grid holds " << static_cast<double>(total) << " hypotheses (";
    for (int i = 0; i < 5; ++i) msg << (i ? " x " : "") << kAxisNames[i] << "=" << grid.axes[i].count;
    msg << "), budget is " << budget << "; raise the coarsen factors or narrow the bounds";
    throw BudgetError(msg.str(), static_cast<long long>(std::min<long double>(total, 9e18L)),
                      static_cast<long long>(budget));
  }
  return grid;
}

WindowSpan window_span(const RadarParams& radar, double eta0, double eta1, double min_dwell_s) {
  const double eps = 1e-9;
  if (!(eta1 > eta0)) throw ValidationError("window needs eta1 > eta0");
  if (eta0 < radar.t0_s - eps || eta1 > radar.t1_s + eps)
    throw ValidationError("window must lie inside [T0, T1]");
  if (eta1 - eta0 < min_dwell(radar, min_dwell_s) - eps)
    throw ValidationError("window shorter than the minimum dwell");
  const auto b = snap_to_pulse(radar, eta0);
  const auto e = snap_to_pulse(radar, eta1);
  return {b.index, e.index - b.index + 1};
}

Extraction extract_windowed_trajectory(const EchoMatrix& echo, const Hypothesis& hyp, double min_dwell_s) {
  Extraction out;
  out.span = window_span(echo.radar(), hyp.eta0, hyp.eta1, min_dwell_s);
  detail::Kernel kernel(echo);
  out.clipped = kernel.extract(out.span, hyp.r0, hyp.v, hyp.a);
  out.samples.assign(kernel.samples().begin(), kernel.samples().end());
  return out;
}

SingleResult wrfrft_single(const EchoMatrix& echo, Hypothesis hyp, const SearchOptions& opts) {
  const RadarParams& radar = echo.radar();
  const WindowSpan span = window_span(radar, hyp.eta0, hyp.eta1, opts.min_dwell_s);
  const double t_first = radar.pulse_time(span.first);
  const double t_last = radar.pulse_time(span.first + span.count - 1);
  hyp.alpha = alpha_for(hyp.a, t_first, t_last, radar, opts.mapping);

  SingleResult res;
  res.alpha = hyp.alpha;
  detail::Kernel kernel(echo);
  res.clipped = kernel.extract(span, hyp.r0, hyp.v, hyp.a);
  res.spectrum = frft(kernel.samples(), hyp.alpha, opts.mode);
  for (std::size_t k = 0; k < res.spectrum.size(); ++k) {
    const double mag = std::abs(res.spectrum[k]);
    if (mag > res.peak) res.peak = mag, res.u_bin = k;
  }

  const double cot = detail::cot_of(hyp.alpha);
  kernel.multiply(detail::dechirp_vector(span.count, cot));
  const double dv = opts.band_velocity_step > 0.0 ? opts.band_velocity_step : base_steps(radar)[3];
  const double width = opts.velocity_bands ? detail::band_width(dv, radar) : 2.0 * pi;
  const auto bp = kernel.band_peak(detail::band_center(hyp.v, cot, span.count, radar), width, 0.0);
  res.band_peak = bp.amplitude;
  res.u_fine = detail::omega_to_bin(bp.omega, span.count);
  return res;
}

Hypothesis reanchor(const Hypothesis& hyp, double new_eta0) {
  const double d = new_eta0 - hyp.eta0;
  Hypothesis out = hyp;
  out.eta0 = new_eta0;
  out.r0 = hyp.r0 + hyp.v * d + hyp.a * d * d;
  out.v = hyp.v + 2.0 * hyp.a * d;
  return out;
}

std::vector<double> peak_profile(const EchoMatrix& echo, const Hypothesis& base, AxisId axis,
                                 const std::vector<double>& sweep, const SearchOptions& opts) {
  if (axis != AxisId::eta0 && axis != AxisId::eta1)
    throw ValidationError("peak_profile sweeps eta0 or eta1 only");
  const RadarParams& radar = echo.radar();
  const double dv = opts.band_velocity_step > 0.0 ? opts.band_velocity_step : base_steps(radar)[3];
  detail::Kernel kernel(echo);
  std::vector<double> out;
  out.reserve(sweep.size());
  for (double s : sweep) {
    Hypothesis h = axis == AxisId::eta0 ? reanchor(base, s) : base;
    if (axis == AxisId::eta1) h.eta1 = s;
    const WindowSpan span = window_span(radar, h.eta0, h.eta1, opts.min_dwell_s);
    const Angle alpha = alpha_for(h.a, radar.pulse_time(span.first),
                                  radar.pulse_time(span.first + span.count - 1), radar, opts.mapping);
    const double cot = detail::cot_of(alpha);
    kernel.extract(span, h.r0, h.v, h.a);
    kernel.multiply(detail::dechirp_vector(span.count, cot));
    const double width = opts.velocity_bands ? detail::band_width(dv, radar) : 2.0 * pi;
    out.push_back(kernel.band_peak(detail::band_center(h.v, cot, span.count, radar), width, 0.0).amplitude);
  }
  return out;
}

SearchResult wrfrft_search(const EchoMatrix& echo, const SearchGrid& grid, const SearchOptions& opts) {
  const RadarParams& radar = echo.radar();
  if (grid.size() > opts.budget) {
    std::ostringstream msg;
    msg << "search grid holds " << grid.size() << " hypotheses, budget is " << opts.budget;
    throw BudgetError(msg.str(), static_cast<long long>(grid.size()), static_cast<long long>(opts.budget));
  }
  const GridAxis& ax0 = grid[AxisId::eta0];
  const GridAxis& ax1 = grid[AxisId::eta1];
  const GridAxis& axr = grid[AxisId::r0];
  const GridAxis& axv = grid[AxisId::v];
  const GridAxis& axa = grid[AxisId::a];
  const double dwell = min_dwell(radar, opts.min_dwell_s);

  std::vector<WindowKey> jobs;
  for (std::size_t i0 = 0; i0 < ax0.count; ++i0)
    for (std::size_t i1 = 0; i1 < ax1.count; ++i1) {
      const double e0 = ax0.value(i0), e1 = ax1.value(i1);
      if (!(e1 > e0) || e1 - e0 < dwell - 1e-9 || e0 < radar.t0_s - 1e-9 || e1 > radar.t1_s + 1e-9) continue;
      for (std::size_t ia = 0; ia < axa.count; ++ia) jobs.push_back({i0, i1, ia});
    }
  if (jobs.empty()) throw ValidationError("search grid contains no valid window");

  // slice cell lookup: fixed-axis indices, resolved once
  std::vector<std::array<long long, 5>> slice_fixed;
  std::vector<Slice> slices;
  for (const auto& spec : opts.slices) {
    if (spec.x == spec.y) throw ValidationError("slice '" + spec.name + "' repeats an axis");
    std::array<long long, 5> fixed;
    for (int i = 0; i < 5; ++i)
      fixed[i] = spec.fixed[i] && i != static_cast<int>(spec.x) && i != static_cast<int>(spec.y)
                     ? static_cast<long long>(grid.axes[i].nearest(*spec.fixed[i]))
                     : -1;
    slice_fixed.push_back(fixed);
    Slice s;
    s.spec = spec;
    s.cols = grid[spec.x].count;
    s.rows = grid[spec.y].count;
    s.amplitude.assign(s.rows * s.cols, 0.0);
    slices.push_back(std::move(s));
  }
  const bool prune = opts.prune && slices.empty();
  const double width = opts.velocity_bands ? detail::band_width(axv.step, radar) : 2.0 * pi;

  auto rank_of = [&](const std::array<std::size_t, 5>& idx) {
    std::uint64_t r = 0;
    for (int i = 0; i < 5; ++i) r = r * grid.axes[i].count + idx[i];
    return r;
  };

  PeakRecord best;
  best.amplitude = -1.0;
  best.rank = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t evaluated = 0;

#pragma omp parallel
  {
    detail::Kernel kernel(echo);
    PeakRecord local;
    local.amplitude = -1.0;
    local.rank = std::numeric_limits<std::uint64_t>::max();
    std::vector<Slice> local_slices = slices;
    std::uint64_t local_count = 0;

#pragma omp for schedule(dynamic, 1) nowait
    for (long long j = 0; j < static_cast<long long>(jobs.size()); ++j) {
      const WindowKey key = jobs[static_cast<std::size_t>(j)];
      Hypothesis h;
      h.eta0 = ax0.value(key.i0);
      h.eta1 = ax1.value(key.i1);
      h.a = axa.value(key.ia);
      const WindowSpan span = window_span(radar, h.eta0, h.eta1, opts.min_dwell_s);
      h.alpha = alpha_for(h.a, radar.pulse_time(span.first), radar.pulse_time(span.first + span.count - 1),
                          radar, opts.mapping);
      const double cot = detail::cot_of(h.alpha);
      const auto chirp = detail::dechirp_vector(span.count, cot);

      for (std::size_t ir = 0; ir < axr.count; ++ir) {
        h.r0 = axr.value(ir);
        for (std::size_t iv = 0; iv < axv.count; ++iv) {
          h.v = axv.value(iv);
          const std::array<std::size_t, 5> idx{key.i0, key.i1, ir, iv, key.ia};
          const bool clipped = kernel.extract(span, h.r0, h.v, h.a);
          double amp;
          double omega = 0.0;
          if (opts.mode == FrftMode::closed_form) {
            kernel.multiply(chirp);
            const auto bp = kernel.band_peak(detail::band_center(h.v, cot, span.count, radar), width,
                                             prune ? local.amplitude : 0.0);
            amp = bp.amplitude;
            omega = bp.omega;
          } else {
            const CVector spec = frft(kernel.samples(), h.alpha, opts.mode);
            amp = 0.0;
            for (std::size_t k = 0; k < spec.size(); ++k)
              if (std::abs(spec[k]) > amp) amp = std::abs(spec[k]), omega = 2.0 * pi * (k - 0.5 * (spec.size() - 1.0)) / spec.size();
          }
          ++local_count;
          const std::uint64_t rank = rank_of(idx);
          if (better(amp, rank, local.amplitude, local.rank)) {
            local.hyp = h;
            local.amplitude = amp;
            local.index = idx;
            local.rank = rank;
            local.clipped = clipped;
            const double bin = detail::omega_to_bin(omega, span.count);
            local.u_bin = static_cast<std::size_t>(std::llround(bin)) % span.count;
          }
          for (std::size_t s = 0; s < local_slices.size(); ++s) {
            bool hit = true;
            for (int i = 0; i < 5 && hit; ++i)
              if (slice_fixed[s][i] >= 0 && static_cast<long long>(idx[i]) != slice_fixed[s][i]) hit = false;
            if (!hit) continue;
            Slice& sl = local_slices[s];
            double& cell = sl.amplitude[idx[static_cast<int>(sl.spec.y)] * sl.cols + idx[static_cast<int>(sl.spec.x)]];
            cell = std::max(cell, amp);
          }
        }
      }
    }

#pragma omp critical
    {
      if (better(local.amplitude, local.rank, best.amplitude, best.rank)) best = local;
      for (std::size_t s = 0; s < slices.size(); ++s)
        for (std::size_t i = 0; i < slices[s].amplitude.size(); ++i)
          slices[s].amplitude[i] = std::max(slices[s].amplitude[i], local_slices[s].amplitude[i]);
      evaluated += local_count;
    }
  }

  return {best, std::move(slices), evaluated};
}

std::string to_text(const PeakRecord& rec) {
  nlohmann::ordered_json j;
  j["eta0_s"] = rec.hyp.eta0;
  j["eta1_s"] = rec.hyp.eta1;
  j["r0_m"] = rec.hyp.r0;
  j["v_mps"] = rec.hyp.v;
  j["a_mps2"] = rec.hyp.a;
  j["amplitude"] = rec.amplitude;
  j["u_bin"] = rec.u_bin;
  j["threshold"] = rec.threshold;
  j["detected"] = rec.detected;
  j["clipped"] = rec.clipped;
  return j.dump(2);
}

}  // namespace wrfrft
