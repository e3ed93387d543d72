#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "wrfrft/detection.hpp"
#include "wrfrft/errors.hpp"
#include "wrfrft/rng.hpp"

using namespace wrfrft;

TEST_CASE("rayleigh threshold matches the exceedance law") {
  for (double pfa : {1e-1, 1e-3, 1e-6}) {
    const double sigma = 1.7;
    const double g = rayleigh_threshold(sigma, pfa);
    CHECK(std::exp(-g * g / (2.0 * sigma * sigma)) == doctest::Approx(pfa));
  }
  CHECK(rayleigh_threshold(1.0, 1.0) == 0.0);
  CHECK_THROWS_AS(rayleigh_threshold(1.0, 0.0), ValidationError);
  CHECK_THROWS_AS(rayleigh_threshold(1.0, 1.5), ValidationError);
}

TEST_CASE("reference window excludes guard cells circularly") {
  std::vector<double> amp(100, 2.0);
  for (int d = -5; d <= 5; ++d) amp[(100 + 2 + d) % 100] = 1000.0;
  const auto rep = threshold_from_reference(std::span<const double>(amp), 2, 1e-2, 5);
  CHECK(rep.reference_cells == 89);
  CHECK(rep.sigma_hat == doctest::Approx(2.0 / std::sqrt(2.0)));
  CHECK(rep.amplitude == 1000.0);
  CHECK(rep.decision);
  CHECK(rep.threshold == doctest::Approx(rayleigh_threshold(std::sqrt(2.0), 1e-2)));

  std::vector<double> small(40, 1.0);
  CHECK_THROWS_AS(threshold_from_reference(std::span<const double>(small), 0, 1e-2, 5), ValidationError);
  CHECK_FALSE(detect(1.0, 1.0));
  CHECK(detect(1.0 + 1e-12, 1.0));
}

TEST_CASE("CA-CFAR false alarm rate on Gaussian noise") {
  const double pfa = 0.02;
  std::size_t alarms = 0;
  const std::size_t trials = 20000;
  for (std::size_t t = 0; t < trials; ++t) {
    CounterRng rng(99, t);
    CVector x(256);
    for (auto& v : x) v = rng.complex_normal(3.0);
    alarms += threshold_from_reference(std::span<const cdouble>(x), t % 256, pfa).decision;
  }
  const double rate = static_cast<double>(alarms) / trials;
  CHECK(rate > 0.8 * pfa);
  CHECK(rate < 1.25 * pfa);
}

TEST_CASE("wilson interval and level crossing") {
  CHECK(wilson_halfwidth(8, 10) == doctest::Approx(0.22658).epsilon(1e-4));
  CHECK(wilson_halfwidth(0, 50) > 0.0);
  CHECK(wilson_halfwidth(0, 0) == 0.0);

  std::vector<CurvePoint> pts{{"a", -10, "pd", 0.1}, {"a", -8, "pd", 0.6}, {"a", -6, "pd", 1.0},
                              {"b", -10, "pd", 0.0}, {"a", -8, "rmse_v", 9.0}};
  CHECK(snr_at_level(pts, "a", "pd", 0.8) == doctest::Approx(-7.0));
  CHECK(snr_at_level(pts, "a", "pd", 0.05) == doctest::Approx(-10.0));
  CHECK(std::isnan(snr_at_level(pts, "b", "pd", 0.8)));
}

TEST_CASE("curve csv round trip") {
  const auto path = (std::filesystem::temp_directory_path() / "wrfrft_curve_test.csv").string();
  std::vector<CurvePoint> pts{{"wrfrft", -6.5, "pd", 0.875, 0.04, 200, 17}, {"grft", 0, "rmse_v", 1e-3, 2e-4, 10, 3}};
  write_curve_csv(path, pts);
  const auto back = read_curve_csv(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].method == "wrfrft");
  CHECK(back[0].snr_db == -6.5);
  CHECK(back[0].value == 0.875);
  CHECK(back[1].metric == "rmse_v");
  CHECK(back[1].trials == 10);
  CHECK(back[1].seed0 == 3);
  {
    std::ofstream bad(path);
    bad << "snr,pd\n1,0.5\n";
  }
  CHECK_THROWS_AS(read_curve_csv(path), MalformedHeaderError);
  std::filesystem::remove(path);
}

TEST_CASE("trial seeds are distinct") {
  std::set<std::uint64_t> seen;
  for (std::size_t s = 0; s < 20; ++s)
    for (std::size_t t = 0; t < 200; ++t) seen.insert(trial_seed(1, s, t));
  CHECK(seen.size() == 4000);
  CHECK(trial_seed(1, 2, 3) == trial_seed(1, 2, 3));
}

TEST_CASE("re-anchored truth describes the same track") {
  const TargetTruth t{860.0, 90.0, 26.0, 0.755, 3.0, 1.0};
  const TargetTruth f = reanchored_truth(t, 0.0);
  for (double time : {0.755, 1.5, 3.0}) {
    const double d0 = time - t.tb_s;
    const double d1 = time - f.tb_s;
    CHECK(f.r0_m + f.v_mps * d1 + f.a_mps2 * d1 * d1 == doctest::Approx(t.r0_m + t.v_mps * d0 + t.a_mps2 * d0 * d0));
  }
}

TEST_CASE("high-SNR detection is certain for the focusing methods") {
  const Scenario s = preset("table2");
  const std::vector<std::string> methods{"wrfrft", "rfrft", "grft"};
  const auto pts = detection_curve(s, {20.0}, 50, methods, 5);
  REQUIRE(pts.size() == methods.size());
  for (const auto& p : pts) {
    INFO(p.method);
    CHECK(p.value == 1.0);
    CHECK(p.trials == 50);
  }
  CHECK_THROWS_AS(detection_curve(s, {0.0}, 5, {"kt"}, 1), ValidationError);
}

TEST_CASE("defocused energy masks the u-bin reference window") {
  // RFT and MTD spread the accelerating target over their spectra, so the
  // reference cells carry signal and the threshold scales with it.
  const Scenario s = preset("table2");
  const auto pts = detection_curve(s, {20.0, 40.0}, 20, {"rft", "mtd"}, 5);
  for (const auto& p : pts) {
    INFO(p.method << " " << p.snr_db);
    CHECK(p.value < 0.5);
  }
}

TEST_CASE("decisions are invariant to echo scaling") {
  CVector x(128);
  CounterRng rng(4, 4);
  for (auto& v : x) v = rng.complex_normal(1.0);
  x[40] = 6.0;
  const auto a = threshold_from_reference(std::span<const cdouble>(x), 40, 1e-3);
  for (auto& v : x) v *= 37.5;
  const auto b = threshold_from_reference(std::span<const cdouble>(x), 40, 1e-3);
  CHECK(a.decision == b.decision);
  CHECK(b.threshold == doctest::Approx(37.5 * a.threshold));
}

TEST_CASE("detection curves are reproducible") {
  const Scenario s = preset("table2");
  const auto a = detection_curve(s, {-16.0}, 12, {"wrfrft", "grft"}, 21);
  const auto b = detection_curve(s, {-16.0}, 12, {"wrfrft", "grft"}, 21);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].value == b[i].value);
}

TEST_CASE("high-SNR RMSE stays within half a step") {
  const Scenario s = preset("table2");
  RmseConfig cfg;
  cfg.coarsen = {2, 2, 1, 2, 2};
  const auto pts = monte_carlo_rmse(s, {20.0}, 10, {"wrfrft", "rfrft"}, 8, cfg);
  const auto steps = base_steps(s.radar);
  for (const auto& p : pts) {
    INFO(p.method << " " << p.metric);
    if (p.metric == "frac_within_step") {
      CHECK(p.value == 1.0);
      continue;
    }
    int axis = 0;
    while (std::string("rmse_") + kAxisNames[axis] != p.metric) ++axis;
    CHECK(p.value <= 0.5 * steps[axis] * cfg.coarsen[axis]);
  }
}
