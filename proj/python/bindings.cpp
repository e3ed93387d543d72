#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wrfrft/config.hpp"
#include "wrfrft/echo_io.hpp"
#include "wrfrft/errors.hpp"
#include "wrfrft/frft.hpp"
#include "wrfrft/signal_model.hpp"

namespace py = pybind11;
using namespace wrfrft;

namespace {

using CArray = py::array_t<cdouble, py::array::c_style | py::array::forcecast>;

// pulses x cells, copied out of the pulse-major echo
CArray to_numpy(const EchoMatrix& e) {
  CArray out({e.num_pulses(), e.num_cells()});
  std::copy(e.data().begin(), e.data().end(), out.mutable_data());
  return out;
}

EchoMatrix from_numpy(const CArray& a, const RadarParams& radar) {
  if (a.ndim() != 2) throw ValidationError("echo array must be 2-D (pulses, cells)");
  RadarParams r = radar;
  r.num_cells = static_cast<std::size_t>(a.shape(1));
  EchoMatrix e(r);
  if (e.num_pulses() != static_cast<std::size_t>(a.shape(0)))
    throw ValidationError("array has " + std::to_string(a.shape(0)) + " pulses, radar window implies " +
                          std::to_string(e.num_pulses()));
  std::copy(a.data(), a.data() + a.size(), e.data().begin());
  return e;
}

py::dict peak_dict(const PeakRecord& p) {
  py::dict d;
  d["eta0_s"] = p.hyp.eta0;
  d["eta1_s"] = p.hyp.eta1;
  d["r0_m"] = p.hyp.r0;
  d["v_mps"] = p.hyp.v;
  d["a_mps2"] = p.hyp.a;
  d["amplitude"] = p.amplitude;
  d["u_bin"] = p.u_bin;
  d["threshold"] = p.threshold;
  d["detected"] = p.detected;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Windowed RFRFT coherent integration";
  py::register_exception<Error>(m, "WrfrftError", PyExc_RuntimeError);

  m.def(
      "frft",
      [](const CArray& x, double alpha, const std::string& mode) {
        if (x.ndim() != 1) throw ValidationError("frft expects a 1-D array");
        const CVector y = frft(std::span<const cdouble>(x.data(), x.size()), {alpha}, frft_mode_from_string(mode));
        CArray out(y.size());
        std::copy(y.begin(), y.end(), out.mutable_data());
        return out;
      },
      py::arg("x"), py::arg("alpha"), py::arg("mode") = "closed_form");

  m.def(
      "alpha_for",
      [](double a, double eta0, double eta1, const std::string& preset_name, const std::string& mapping) {
        return alpha_for(a, eta0, eta1, preset(preset_name).radar, alpha_mapping_from_string(mapping)).alpha;
      },
      py::arg("a"), py::arg("eta0"), py::arg("eta1"), py::arg("preset") = "table2",
      py::arg("mapping") = "calibrated");

  m.def("preset_names", &preset_names);

  m.def(
      "synthesize",
      [](const std::string& name, std::optional<double> snr_db, std::uint64_t seed, bool noise) {
        const Scenario s = preset(name);
        NoiseSpec ns{snr_db.value_or(s.snr_db), seed, noise};
        return to_numpy(synthesize_compressed_echo(s.radar, s.targets, ns));
      },
      py::arg("preset") = "table2", py::arg("snr_db") = py::none(), py::arg("seed") = 1, py::arg("noise") = true,
      "Pulse-compressed echo as a (pulses, cells) complex array.");

  m.def(
      "save_echo",
      [](const CArray& a, const std::string& path, const std::string& preset_name, const std::string& dtype) {
        save_echo_file(from_numpy(a, preset(preset_name).radar), path,
                       dtype == "complex128" ? EchoDtype::complex128 : EchoDtype::complex64);
      },
      py::arg("echo"), py::arg("path"), py::arg("preset") = "table2", py::arg("dtype") = "complex64");

  m.def(
      "load_echo", [](const std::string& path) { return to_numpy(load_echo_file(path)); }, py::arg("path"));

  m.def(
      "search",
      [](const std::string& name, std::optional<double> snr_db, std::uint64_t seed, std::vector<double> coarsen) {
        ScenarioConfig cfg = config_from_preset(name);
        if (snr_db) cfg.noise.snr_db = *snr_db;
        cfg.noise.seed = seed;
        if (!coarsen.empty()) {
          if (coarsen.size() != 5) throw ValidationError("coarsen needs five factors");
          const auto base = base_steps(cfg.radar);
          const auto& t = cfg.targets.front();
          const std::array<double, 5> ctr{t.tb_s, t.te_s, t.r0_m, t.v_mps, t.a_mps2};
          for (int i = 0; i < 5; ++i) {
            cfg.coarsen[i] = coarsen[i];
            cfg.bounds[i] = centered_bounds(ctr[i], 3, base[i] * coarsen[i]);
          }
        }
        cfg.validate();
        const EchoMatrix echo = synthesize_compressed_echo(cfg.radar, cfg.targets, cfg.noise);
        SearchResult res;
        {
          py::gil_scoped_release release;
          res = wrfrft_search(echo, cfg.grid(), cfg.search);
        }
        return peak_dict(res.peak);
      },
      py::arg("preset") = "table2", py::arg("snr_db") = py::none(), py::arg("seed") = 1,
      py::arg("coarsen") = std::vector<double>{}, "Truth-centered WRFRFT search on a preset scenario.");

  m.def(
      "run_config",
      [](const std::string& json) {
        const RunReport rep = run_scenario(parse_config(json));
        py::dict d;
        d["summary"] = rep.summary;
        d["files"] = rep.files;
        d["peak"] = peak_dict(rep.peak);
        return d;
      },
      py::arg("config_json"), "Run a JSON scenario config; writes its artifacts.");
}
