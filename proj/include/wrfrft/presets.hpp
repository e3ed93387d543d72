#pragma once

#include <string>
#include <vector>

#include "wrfrft/radar.hpp"

namespace wrfrft {

struct Scenario {
  std::string name;
  RadarParams radar;
  std::vector<TargetTruth> targets;
  double snr_db = 0.0;
};

/// table1 / table2 (alias table2-single), table3 (alias table3-multi),
/// table4-uav (alias uav-c-band). Throws ValidationError for other names.
Scenario preset(const std::string& name);
std::vector<std::string> preset_names();

/// X-band simulation radar: 6 GHz, 10 MHz, 50 MHz sampling, 200 Hz PRF, 10 us, [0, 4] s, 512 cells.
RadarParams simulation_radar();
/// C-band radar of the UAV look-alike: 20 MHz, 60 MHz sampling, 500 Hz PRF, 18 us, 2000 pulses.
RadarParams uav_radar();

}  // namespace wrfrft
