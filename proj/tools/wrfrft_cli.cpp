// wrfrft command line: synth, search, rmse, pd, profile, ingest.
#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>

#include "wrfrft/config.hpp"
#include "wrfrft/echo_io.hpp"
#include "wrfrft/errors.hpp"
#include "wrfrft/signal_model.hpp"

using namespace wrfrft;

namespace {

struct Common {
  std::string config;
  std::string preset = "table2";
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> snr;
  std::string snr_list;  // "a:b:step" or "a,b,c"
  std::optional<std::size_t> trials;
  std::string methods;
  std::string coarsen;  // "eta0,eta1,r0,v,a"
  std::optional<double> pfa;
  std::optional<std::uint64_t> budget;
  std::string mapping;
  std::string mode;
  bool dump = false;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

double to_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("not a number: '" + s + "'");
  }
}

std::vector<double> parse_snr_list(const std::string& s) {
  std::vector<double> out;
  if (s.find(':') != std::string::npos) {
    const auto p = split(s, ':');
    if (p.size() != 3) throw ValidationError("--snr-list range must be start:stop:step");
    const double a = to_double(p[0]), b = to_double(p[1]), step = to_double(p[2]);
    if (!(step > 0.0) || b < a) throw ValidationError("--snr-list range needs step > 0 and stop >= start");
    for (int k = 0; a + k * step <= b + 1e-9; ++k) out.push_back(a + k * step);
  } else {
    for (const auto& x : split(s, ',')) out.push_back(to_double(x));
  }
  return out;
}

void add_common(CLI::App* cmd, Common& c, bool sweep) {
  cmd->add_option("--config", c.config, "JSON scenario config");
  cmd->add_option("--preset", c.preset, "Scenario preset (table1, table2, table3, table4-uav, ...)");
  cmd->add_option("--out", c.out, "Output directory");
  cmd->add_option("--seed", c.seed, "Noise / trial seed");
  cmd->add_option("--snr", c.snr, "SNR in dB after pulse compression");
  cmd->add_option("--methods", c.methods, "Comma list of wrfrft,rfrft,grft,rft,mtd");
  cmd->add_option("--coarsen", c.coarsen, "Per-axis coarsen factors eta0,eta1,r0,v,a");
  cmd->add_option("--budget", c.budget, "Maximum number of hypotheses");
  cmd->add_option("--mapping", c.mapping, "Alpha mapping: calibrated or literal");
  cmd->add_option("--mode", c.mode, "FRFT realization: closed_form, exact or fast");
  cmd->add_option("--pfa", c.pfa, "False-alarm probability");
  cmd->add_flag("--dump-config", c.dump, "Print the canonical config and exit");
  if (sweep) {
    cmd->add_option("--snr-list", c.snr_list, "SNRs as start:stop:step or a,b,c");
    cmd->add_option("--trials", c.trials, "Monte-Carlo trials per point");
  }
}

ScenarioConfig build_config(const Common& c, Plan plan) {
  ScenarioConfig cfg = c.config.empty() ? config_from_preset(c.preset) : load_config(c.config);
  if (c.config.empty()) cfg.plan = plan;
  if (plan != Plan::single_run) cfg.plan = plan;
  if (!c.out.empty()) cfg.output_dir = c.out;
  if (c.seed) {
    cfg.seed = *c.seed;
    cfg.noise.seed = *c.seed;
  }
  if (c.snr) cfg.noise.snr_db = *c.snr;
  if (!c.snr_list.empty()) cfg.snr_list = parse_snr_list(c.snr_list);
  if (c.trials) cfg.trials = *c.trials;
  if (!c.methods.empty()) cfg.methods = split(c.methods, ',');
  if (c.pfa) cfg.pfa = *c.pfa;
  if (c.budget) cfg.budget = *c.budget;
  if (!c.mapping.empty()) cfg.search.mapping = alpha_mapping_from_string(c.mapping);
  if (!c.mode.empty()) cfg.search.mode = frft_mode_from_string(c.mode);
  if (!c.coarsen.empty()) {
    const auto parts = split(c.coarsen, ',');
    if (parts.size() != 5) throw ValidationError("--coarsen needs five factors eta0,eta1,r0,v,a");
    for (int i = 0; i < 5; ++i) cfg.coarsen[i] = to_double(parts[i]);
    // keep the default truth-centered bounds consistent with the new steps
    if (c.config.empty() && !cfg.targets.empty()) {
      const auto base = base_steps(cfg.radar);
      const auto& t = cfg.targets.front();
      const std::array<double, 5> ctr{t.tb_s, t.te_s, t.r0_m, t.v_mps, t.a_mps2};
      for (int i = 0; i < 5; ++i) cfg.bounds[i] = centered_bounds(ctr[i], 3, base[i] * cfg.coarsen[i]);
    }
  }
  return cfg;
}

int run_plan(const Common& c, Plan plan, const std::string& echo_file = {}) {
  ScenarioConfig cfg = build_config(c, plan);
  if (!echo_file.empty()) cfg.echo_file = echo_file;
  if (c.dump) {
    std::cout << dump_config(cfg);
    return 0;
  }
  const RunReport rep = run_scenario(cfg);
  std::cout << rep.summary << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Windowed RFRFT coherent integration toolkit"};
  app.require_subcommand(1);

  Common c;
  std::string echo_out = "echo.wre";
  std::string dtype = "complex64";
  bool raw = false;
  auto* synth = app.add_subcommand("synth", "Synthesize an echo file");
  add_common(synth, c, false);
  synth->add_option("--echo", echo_out, "Echo file to write");
  synth->add_option("--dtype", dtype, "complex64 or complex128")->check(CLI::IsMember({"complex64", "complex128"}));
  synth->add_flag("--raw", raw, "Go through raw LFM returns and matched filtering");

  std::string echo_in;
  auto* search = app.add_subcommand("search", "WRFRFT search (plus baselines) on a scenario or echo file");
  add_common(search, c, false);
  search->add_option("--echo", echo_in, "Echo file to search instead of synthesizing");

  auto* rmse = app.add_subcommand("rmse", "Monte-Carlo RMSE vs SNR");
  add_common(rmse, c, true);
  auto* pd = app.add_subcommand("pd", "Monte-Carlo detection probability vs SNR");
  add_common(pd, c, true);
  auto* profile = app.add_subcommand("profile", "Matched-window eta0 / eta1 peak profiles");
  add_common(profile, c, true);

  std::string ingest_in;
  auto* ingest = app.add_subcommand("ingest", "Load an echo file, report it and optionally search it");
  add_common(ingest, c, false);
  ingest->add_option("echo", ingest_in, "Echo file")->required();
  bool ingest_search = false;
  ingest->add_flag("--search", ingest_search, "Run the configured search on the file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ExitCode::validation);
  }

  try {
    if (*synth) {
      ScenarioConfig cfg = build_config(c, Plan::single_run);
      cfg.validate();
      if (c.dump) {
        std::cout << dump_config(cfg);
        return 0;
      }
      EchoMatrix echo = raw ? pulse_compress(synthesize_raw_echo(cfg.radar, cfg.targets, cfg.noise), cfg.radar)
                            : synthesize_compressed_echo(cfg.radar, cfg.targets, cfg.noise);
      save_echo_file(echo, echo_out, dtype == "complex64" ? EchoDtype::complex64 : EchoDtype::complex128);
      std::cout << "wrote " << echo_out << ": " << echo.num_cells() << " cells x " << echo.num_pulses()
                << " pulses, " << cfg.targets.size() << " target(s), SNR " << cfg.noise.snr_db << " dB\n";
      return 0;
    }
    if (*search) return run_plan(c, Plan::single_run, echo_in);
    if (*rmse) return run_plan(c, Plan::rmse);
    if (*pd) return run_plan(c, Plan::pd);
    if (*profile) return run_plan(c, Plan::profile);
    if (*ingest) {
      const EchoMatrix echo = load_echo_file(ingest_in);
      const RadarParams& r = echo.radar();
      double power = 0.0;
      for (const auto& v : echo.data()) power += std::norm(v);
      std::cout << ingest_in << ": " << echo.num_cells() << " cells x " << echo.num_pulses() << " pulses, fc "
                << r.carrier_hz / 1e9 << " GHz, B " << r.bandwidth_hz / 1e6 << " MHz, PRF " << r.prf_hz
                << " Hz, mean power " << power / static_cast<double>(echo.data().size()) << '\n';
      if (ingest_search) return run_plan(c, Plan::single_run, ingest_in);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::failure);
  }
  return 0;
}
