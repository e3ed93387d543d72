#include "wrfrft/detection.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

#include "wrfrft/errors.hpp"
#include "wrfrft/fft.hpp"
#include "wrfrft/rng.hpp"
#include "wrfrft/signal_model.hpp"

namespace wrfrft {

double rayleigh_threshold(double sigma_hat, double pfa) {
  if (!(pfa > 0.0) || pfa > 1.0) throw ValidationError("pfa must lie in (0, 1]");
  return sigma_hat * std::sqrt(-2.0 * std::log(pfa));
}

DetectionReport threshold_from_reference(std::span<const double> amplitudes, std::size_t cut, double pfa,
                                         std::size_t guard) {
  const std::size_t n = amplitudes.size();
  if (cut >= n) throw ValidationError("cell under test outside the spectrum");
  double sum_sq = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t d = k > cut ? k - cut : cut - k;
    if (std::min(d, n - d) <= guard) continue;
    sum_sq += amplitudes[k] * amplitudes[k];
    ++count;
  }
  if (count < kMinReferenceCells) {
    std::ostringstream msg;
    msg << "only " << count << " reference cells after guarding; need " << kMinReferenceCells;
    throw ValidationError(msg.str());
  }
  DetectionReport rep;
  rep.amplitude = amplitudes[cut];
  rep.pfa = pfa;
  rep.reference_cells = count;
  rep.sigma_hat = std::sqrt(sum_sq / static_cast<double>(count)) / std::sqrt(2.0);
  rep.threshold = rayleigh_threshold(rep.sigma_hat, pfa);
  rep.decision = detect(rep.amplitude, rep.threshold);
  return rep;
}

DetectionReport threshold_from_reference(std::span<const cdouble> spectrum, std::size_t cut, double pfa,
                                         std::size_t guard) {
  std::vector<double> mags(spectrum.size());
  for (std::size_t k = 0; k < mags.size(); ++k) mags[k] = std::abs(spectrum[k]);
  return threshold_from_reference(std::span<const double>(mags), cut, pfa, guard);
}

double wilson_halfwidth(std::size_t k, std::size_t n, double z) {
  if (n == 0) return 0.0;
  const double p = static_cast<double>(k) / static_cast<double>(n);
  const double nn = static_cast<double>(n);
  const double denom = 1.0 + z * z / nn;
  return z * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn)) / denom;
}

double snr_at_level(const std::vector<CurvePoint>& points, const std::string& method, const std::string& metric,
                    double level) {
  std::vector<std::pair<double, double>> curve;
  for (const auto& p : points)
    if (p.method == method && p.metric == metric) curve.emplace_back(p.snr_db, p.value);
  std::sort(curve.begin(), curve.end());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (curve[i].second < level) continue;
    if (i == 0) return curve[0].first;
    const auto [s0, v0] = curve[i - 1];
    const auto [s1, v1] = curve[i];
    return s0 + (level - v0) * (s1 - s0) / (v1 - v0);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

void write_curve_csv(const std::string& path, const std::vector<CurvePoint>& points) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "method,snr_db,metric,value,ci_halfwidth,trials,seed0\n" << std::setprecision(10);
  for (const auto& p : points)
    out << p.method << ',' << p.snr_db << ',' << p.metric << ',' << p.value << ',' << p.ci_halfwidth << ','
        << p.trials << ',' << p.seed0 << '\n';
  if (!out) throw IoError("write failed for " + path);
}

std::vector<CurvePoint> read_curve_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::string line;
  std::getline(in, line);
  if (line != "method,snr_db,metric,value,ci_halfwidth,trials,seed0")
    throw MalformedHeaderError(path + ": unexpected CSV header");
  std::vector<CurvePoint> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    CurvePoint p;
    std::string field;
    std::getline(ss, p.method, ',');
    std::getline(ss, field, ',');
    p.snr_db = std::stod(field);
    std::getline(ss, p.metric, ',');
    std::getline(ss, field, ',');
    p.value = std::stod(field);
    std::getline(ss, field, ',');
    p.ci_halfwidth = std::stod(field);
    std::getline(ss, field, ',');
    p.trials = std::stoull(field);
    std::getline(ss, field, ',');
    p.seed0 = std::stoull(field);
    out.push_back(p);
  }
  return out;
}

std::uint64_t trial_seed(std::uint64_t seed0, std::size_t snr_index, std::size_t trial) {
  return derive_seed(derive_seed(seed0, snr_index), trial);
}

TargetTruth reanchored_truth(const TargetTruth& t, double new_start) {
  const double d = new_start - t.tb_s;
  TargetTruth out = t;
  out.r0_m = t.r0_m + t.v_mps * d + t.a_mps2 * d * d;
  out.v_mps = t.v_mps + 2.0 * t.a_mps2 * d;
  out.tb_s = new_start;
  return out;
}

namespace {

struct ErrorAccumulator {
  std::array<std::vector<double>, 5> errors;
  std::size_t within = 0;
  std::size_t trials = 0;
};

// RMSE and a delta-method 95% half-width from the spread of squared errors.
std::pair<double, double> rmse_with_ci(const std::vector<double>& e) {
  if (e.empty()) return {0.0, 0.0};
  const double n = static_cast<double>(e.size());
  double mean = 0.0;
  for (double x : e) mean += x * x;
  mean /= n;
  double var = 0.0;
  for (double x : e) var += (x * x - mean) * (x * x - mean);
  var /= std::max(1.0, n - 1.0);
  const double rmse = std::sqrt(mean);
  const double half = rmse > 0.0 ? 1.96 * std::sqrt(var / n) / (2.0 * rmse) : 0.0;
  return {rmse, half};
}

}  // namespace

std::vector<CurvePoint> monte_carlo_rmse(const Scenario& scenario, const std::vector<double>& snr_db,
                                         std::size_t trials, const std::vector<std::string>& methods,
                                         std::uint64_t seed0, const RmseConfig& cfg) {
  if (trials == 0) throw ValidationError("trials must be >= 1");
  if (scenario.targets.empty()) throw ValidationError("RMSE needs a target");
  for (const auto& m : methods)
    if (m != "wrfrft" && m != "rfrft") throw ValidationError("RMSE supports wrfrft and rfrft, not " + m);
  const RadarParams& radar = scenario.radar;
  const TargetTruth& truth = scenario.targets.front();
  const auto base = base_steps(radar);
  std::array<double, 5> step;
  for (int i = 0; i < 5; ++i) step[i] = base[i] * cfg.coarsen[i];

  const std::array<double, 5> centers{truth.tb_s, truth.te_s, truth.r0_m, truth.v_mps, truth.a_mps2};
  std::array<AxisBounds, 5> wb;
  for (int i = 0; i < 5; ++i) wb[i] = centered_bounds(centers[i], cfg.half_nodes, step[i]);
  const SearchGrid wgrid = build_grid(wb, radar, cfg.coarsen, cfg.search.budget);

  const TargetTruth full = reanchored_truth(truth, radar.t0_s);
  const std::array<double, 5> fcenters{radar.t0_s, radar.pulse_time(radar.num_pulses() - 1), full.r0_m,
                                       full.v_mps, full.a_mps2};
  std::array<AxisBounds, 5> fb;
  for (int i = 0; i < 5; ++i)
    fb[i] = i < 2 ? AxisBounds{fcenters[i], fcenters[i]} : centered_bounds(fcenters[i], cfg.half_nodes, step[i]);
  const SearchGrid fgrid = build_grid(fb, radar, cfg.coarsen, cfg.search.budget);

  std::vector<CurvePoint> out;
  for (std::size_t si = 0; si < snr_db.size(); ++si) {
    std::map<std::string, ErrorAccumulator> acc;
    for (std::size_t t = 0; t < trials; ++t) {
      NoiseSpec noise{snr_db[si], trial_seed(seed0, si, t), true};
      const EchoMatrix echo = synthesize_compressed_echo(radar, scenario.targets, noise);
      for (const auto& m : methods) {
        ErrorAccumulator& a = acc[m];
        std::array<double, 5> est{};
        std::array<double, 5> ref{};
        int first_axis = 0;
        if (m == "wrfrft") {
          const auto res = wrfrft_search(echo, wgrid, cfg.search);
          const auto& h = res.peak.hyp;
          est = {h.eta0, h.eta1, h.r0, h.v, h.a};
          ref = centers;
        } else {
          const auto map = rfrft(echo, fgrid, cfg.rfrft, cfg.search);
          const auto& h = map.peak.hyp;
          est = {0, 0, h.r0, h.v, h.a};
          ref = {0, 0, fcenters[2], fcenters[3], fcenters[4]};
          first_axis = 2;
        }
        bool ok = true;
        for (int i = first_axis; i < 5; ++i) {
          const double e = est[i] - ref[i];
          a.errors[i].push_back(e);
          if (std::abs(e) > step[i] * (1.0 + 1e-9)) ok = false;
        }
        a.within += ok ? 1 : 0;
        a.trials += 1;
      }
    }
    for (const auto& m : methods) {
      const ErrorAccumulator& a = acc[m];
      for (int i = 0; i < 5; ++i) {
        if (a.errors[i].empty()) continue;
        const auto [rmse, half] = rmse_with_ci(a.errors[i]);
        out.push_back({m, snr_db[si], std::string("rmse_") + kAxisNames[i], rmse, half, a.trials, seed0});
      }
      out.push_back({m, snr_db[si], "frac_within_step", static_cast<double>(a.within) / a.trials,
                     wilson_halfwidth(a.within, a.trials), a.trials, seed0});
    }
  }
  return out;
}

namespace {


struct MatchedSetup {
  std::string method;
  Hypothesis hyp;  // wrfrft / rfrft / rft use wrfrft_single at hyp
  std::size_t mtd_cell = 0;
  std::size_t cut = 0;
};

// Spectrum of one method at its matched hypothesis; the statistic is |spectrum[cut]|.
CVector evaluate(const EchoMatrix& echo, const MatchedSetup& s, const SearchOptions& opts) {
  if (s.method == "grft") return grft_velocity_fan(echo, s.hyp.r0, s.hyp.v, s.hyp.a);
  if (s.method == "mtd") {
    CVector spec(echo.num_pulses());
    for (std::size_t m = 0; m < echo.num_pulses(); ++m) spec[m] = echo.at(s.mtd_cell, m);
    fft::centered_dft(spec, -1);
    return spec;
  }
  return wrfrft_single(echo, s.hyp, opts).spectrum;
}

MatchedSetup matched_setup(const std::string& method, const EchoMatrix& clean, const TargetTruth& t,
                           const SearchOptions& opts) {
  const RadarParams& radar = clean.radar();
  const double t_last = radar.pulse_time(radar.num_pulses() - 1);
  MatchedSetup s;
  s.method = method;
  if (method == "wrfrft") {
    s.hyp = {t.tb_s, t.te_s, t.r0_m, t.v_mps, t.a_mps2};
  } else if (method == "rfrft" || method == "grft") {
    const TargetTruth f = reanchored_truth(t, radar.t0_s);
    s.hyp = {radar.t0_s, t_last, f.r0_m, f.v_mps, f.a_mps2};
  } else if (method == "rft") {
    // best constant-velocity fit: the chord through entry and departure
    const double rb = t.r0_m;
    const double re = t.r0_m + t.v_mps * (t.te_s - t.tb_s) + t.a_mps2 * (t.te_s - t.tb_s) * (t.te_s - t.tb_s);
    const double v = (re - rb) / (t.te_s - t.tb_s);
    s.hyp = {radar.t0_s, t_last, rb - v * (t.tb_s - radar.t0_s), v, 0.0};
  } else if (method == "mtd") {
    const BaselineMap map = mtd(clean);
    s.mtd_cell = static_cast<std::size_t>(map.peak.rank / clean.num_pulses());
    s.cut = map.peak.u_bin;
    return s;
  } else {
    throw ValidationError("unknown method '" + method + "'");
  }
  if (method == "grft") {
    s.cut = 0;
  } else {
    const auto r = wrfrft_single(clean, s.hyp, opts);
    s.cut = static_cast<std::size_t>(std::llround(r.u_fine)) % r.spectrum.size();
  }
  return s;
}

}  // namespace

std::vector<CurvePoint> detection_curve(const Scenario& scenario, const std::vector<double>& snr_db,
                                        std::size_t trials, const std::vector<std::string>& methods,
                                        std::uint64_t seed0, const DetectionConfig& cfg) {
  if (trials == 0) throw ValidationError("trials must be >= 1");
  if (scenario.targets.empty()) throw ValidationError("detection needs a nominal target");
  for (const auto& m : methods)
    if (!is_method(m)) throw ValidationError("unknown method '" + m + "'");
  const RadarParams& radar = scenario.radar;
  const TargetTruth nominal = scenario.targets.front();
  NoiseSpec quiet;
  quiet.enabled = false;
  const EchoMatrix clean = synthesize_compressed_echo(radar, std::vector<TargetTruth>{nominal}, quiet);
  std::vector<MatchedSetup> setups;
  for (const auto& m : methods) setups.push_back(matched_setup(m, clean, nominal, cfg.search));

  const auto base = base_steps(radar);
  std::vector<CurvePoint> out;
  for (std::size_t si = 0; si < snr_db.size(); ++si) {
    std::vector<std::vector<char>> hits(methods.size(), std::vector<char>(trials, 0));
    for (std::size_t t = 0; t < trials; ++t) {
      const std::uint64_t seed = trial_seed(seed0, si, t);
      TargetTruth truth = nominal;
      if (cfg.jitter) {
        CounterRng rng(seed, 0xfeedULL);
        truth.v_mps += (rng.uniform() - 0.5) * base[3];
        truth.a_mps2 += (rng.uniform() - 0.5) * base[4];
      }
      const double sigma = std::abs(nominal.sigma0) * std::pow(10.0, -snr_db[si] / 20.0);
      EchoMatrix echo = cfg.target
                            ? synthesize_compressed_echo(radar, std::vector<TargetTruth>{truth}, quiet)
                            : EchoMatrix(radar);
      add_noise(echo, sigma, seed);
      for (std::size_t mi = 0; mi < setups.size(); ++mi) {
        const CVector spec = evaluate(echo, setups[mi], cfg.search);
        const auto rep = threshold_from_reference(std::span<const cdouble>(spec), setups[mi].cut, cfg.pfa, cfg.guard);
        hits[mi][t] = rep.decision ? 1 : 0;
      }
    }
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
      const std::size_t k = static_cast<std::size_t>(std::count(hits[mi].begin(), hits[mi].end(), 1));
      out.push_back({methods[mi], snr_db[si], "pd", static_cast<double>(k) / trials, wilson_halfwidth(k, trials),
                     trials, seed0});
    }
  }
  return out;
}

}  // namespace wrfrft
