#include "wrfrft/presets.hpp"

#include "wrfrft/errors.hpp"

namespace wrfrft {
namespace {

TargetTruth target_at_cell(const RadarParams& radar, double cell, double v, double a, double tb, double te) {
  TargetTruth t;
  t.r0_m = cell * radar.cell_size_m();
  t.v_mps = v;
  t.a_mps2 = a;
  t.tb_s = tb;
  t.te_s = te;
  return t;
}

}  // namespace

RadarParams simulation_radar() {
  RadarParams r;
  r.carrier_hz = 6e9;
  r.bandwidth_hz = 10e6;
  r.sample_rate_hz = 50e6;
  r.prf_hz = 200.0;
  r.pulse_width_s = 10e-6;
  r.t0_s = 0.0;
  r.t1_s = 4.0;
  r.num_cells = 512;
  return r;
}

RadarParams uav_radar() {
  RadarParams r;
  r.carrier_hz = 5.6e9;  // C band; the exact carrier is not published
  r.bandwidth_hz = 20e6;
  r.sample_rate_hz = 60e6;
  r.prf_hz = 500.0;
  r.pulse_width_s = 18e-6;
  r.t0_s = 0.0;
  r.t1_s = 4.0;
  r.num_cells = 256;
  return r;
}

Scenario preset(const std::string& name) {
  Scenario s;
  if (name == "table1" || name == "table2" || name == "table2-single") {
    s.name = name;
    s.radar = simulation_radar();
    s.targets = {target_at_cell(s.radar, 287, 90.0, 26.0, 0.755, 3.0)};
    s.snr_db = 4.0;
  } else if (name == "table3" || name == "table3-multi") {
    s.name = name;
    s.radar = simulation_radar();
    s.targets = {target_at_cell(s.radar, 287, 90.0, 25.0, 0.705, 3.0),
                 target_at_cell(s.radar, 323, 70.0, 25.0, 0.705, 3.0),
                 target_at_cell(s.radar, 269, 75.0, 17.0, 0.905, 3.4),
                 target_at_cell(s.radar, 305, 95.0, 13.0, 1.005, 3.2)};
    s.snr_db = 6.0;
  } else if (name == "table4-uav" || name == "uav-c-band") {
    s.name = name;
    s.radar = uav_radar();
    s.targets = {target_at_cell(s.radar, 68, 29.0, 4.0, 0.602, 3.406)};
    s.snr_db = 6.0;
  } else {
    throw ValidationError("unknown preset '" + name + "'");
  }
  return s;
}

std::vector<std::string> preset_names() {
  return {"table1", "table2", "table2-single", "table3", "table3-multi", "table4-uav", "uav-c-band"};
}

}  // namespace wrfrft
