// Python bindings for the core operations.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "diffmac/analysis.hpp"
#include "diffmac/lattice.hpp"
#include "diffmac/manifest.hpp"
#include "diffmac/schemes.hpp"
#include "diffmac/simulate.hpp"
#include "diffmac/sources.hpp"

namespace py = pybind11;
using namespace diffmac;

namespace {

ExperimentConfig make_config(const std::string& scheme, double sigma2, double rho,
                             double power, double noise,
                             const std::optional<std::string>& lattice,
                             int lattice_dim, std::size_t blocks, std::uint64_t seed,
                             std::optional<std::size_t> n, bool no_noise) {
  ExperimentConfig cfg{SourceModel(sigma2, rho), ChannelModel(power, noise)};
  cfg.scheme = scheme_from_name(scheme);
  if (lattice) cfg.lattice_kind = lattice_kind_from_name(*lattice);
  cfg.lattice_dim = lattice_dim;
  cfg.blocks = blocks;
  cfg.seed = seed;
  cfg.n_override = n;
  cfg.no_noise = no_noise;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Distortion bounds, lattice schemes and Monte Carlo simulation for "
            "communicating the difference of correlated Gaussian sources over a "
            "Gaussian MAC";

  py::register_exception<SnrThresholdError>(m, "SnrThresholdError",
                                            PyExc_ValueError);

  py::class_<SourceModel>(m, "SourceModel")
      .def(py::init<double, double>(), py::arg("sigma2"), py::arg("rho"))
      .def_readonly("sigma2", &SourceModel::sigma2)
      .def_readonly("rho", &SourceModel::rho)
      .def("__repr__", [](const SourceModel& s) {
        std::ostringstream os;
        os << "SourceModel(sigma2=" << s.sigma2 << ", rho=" << s.rho << ")";
        return os.str();
      });

  py::class_<ChannelModel>(m, "ChannelModel")
      .def(py::init<double, double>(), py::arg("power"), py::arg("noise"))
      .def_readonly("power", &ChannelModel::power)
      .def_readonly("noise", &ChannelModel::noise)
      .def("snr", &ChannelModel::snr);

  py::class_<Rng>(m, "Rng")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("uniform01", &Rng::uniform01)
      .def("normal", &Rng::normal);

  py::class_<Lattice>(m, "Lattice")
      .def_readonly("name", &Lattice::name)
      .def_readonly("dim", &Lattice::dim)
      .def_readonly("scale", &Lattice::scale)
      .def_readonly("second_moment", &Lattice::second_moment)
      .def_readonly("nsm", &Lattice::nsm)
      .def_readonly("generator", &Lattice::generator)
      .def("__repr__", [](const Lattice& l) {
        std::ostringstream os;
        os << "Lattice(" << l.name << ", dim=" << l.dim << ", scale=" << l.scale
           << ")";
        return os.str();
      });

  m.def("make_lattice",
        py::overload_cast<const std::string&, int, double>(&make_lattice),
        py::arg("kind"), py::arg("dim"), py::arg("scale") = 1.0);
  m.def("cvp_quantize",
        [](const Lattice& lat, const std::vector<double>& x) {
          return cvp_quantize(lat, x).coords;
        },
        py::arg("lattice"), py::arg("x"));
  m.def("mod_lattice",
        [](const Lattice& lat, const std::vector<double>& x) {
          return mod_lattice(lat, x);
        },
        py::arg("lattice"), py::arg("x"));
  m.def("sample_dither",
        [](const Lattice& lat, Rng& rng) { return sample_dither(lat, rng); },
        py::arg("lattice"), py::arg("rng"));
  m.def("calibrate_second_moment",
        [](const Lattice& lat, std::size_t samples, Rng& rng) {
          const SecondMomentEstimate e = calibrate_second_moment(lat, samples, rng);
          return py::make_tuple(e.estimate, e.std_error);
        },
        py::arg("lattice"), py::arg("samples"), py::arg("rng"));
  m.def("scale_to_power", &scale_to_power, py::arg("lattice"), py::arg("power"));

  m.def("distortion_lower_bound", &distortion_lower_bound);
  m.def("uncoded_distortion", &uncoded_distortion);
  m.def("lattice_gamma", &lattice_gamma);
  m.def("lattice_alpha", &lattice_alpha);
  m.def("lattice_k", &lattice_k);
  m.def("lattice_distortion", &lattice_distortion);
  m.def("gap_bits", &gap_bits);
  m.def("common_dither_alpha", &common_dither_alpha);
  m.def("common_dither_k", &common_dither_k);
  m.def("common_dither_distortion", &common_dither_distortion);
  m.def("common_dither_feasible", &common_dither_feasible);
  m.def("scheme_crossover", [](const SourceModel& src, const ChannelModel& ch) {
    return std::string(to_string(scheme_crossover(src, ch)));
  });
  m.def("uncoded_mmse_coefficient", &uncoded_mmse_coefficient);

  py::class_<SimulationReport>(m, "SimulationReport")
      .def_readonly("empirical_distortion", &SimulationReport::empirical_distortion)
      .def_readonly("std_error", &SimulationReport::std_error)
      .def_readonly("conditional_distortion",
                    &SimulationReport::conditional_distortion)
      .def_readonly("wrap_rate", &SimulationReport::wrap_rate)
      .def_readonly("rho_prime_hat", &SimulationReport::rho_prime_hat)
      .def_readonly("analytic_distortion", &SimulationReport::analytic_distortion)
      .def_readonly("analytic_bound", &SimulationReport::analytic_bound)
      .def_readonly("samples", &SimulationReport::samples)
      .def_readonly("blocks", &SimulationReport::blocks)
      .def_readonly("feasible", &SimulationReport::feasible)
      .def("__repr__", [](const SimulationReport& r) {
        std::ostringstream os;
        os << "SimulationReport(D_emp=" << r.empirical_distortion
           << ", stderr=" << r.std_error << ", D_cond=" << r.conditional_distortion
           << ", wrap_rate=" << r.wrap_rate << ")";
        return os.str();
      });

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init(&make_config), py::arg("scheme"), py::arg("sigma2"),
           py::arg("rho"), py::arg("power"), py::arg("noise"),
           py::arg("lattice") = std::nullopt, py::arg("lattice_dim") = 0,
           py::arg("blocks") = 10000, py::arg("seed") = 0,
           py::arg("n") = std::nullopt, py::arg("no_noise") = false)
      .def_readonly("blocks", &ExperimentConfig::blocks)
      .def_readonly("seed", &ExperimentConfig::seed);

  m.def("run_experiment", &run_experiment, py::arg("config"), py::arg("threads") = 0,
        py::call_guard<py::gil_scoped_release>());
  m.def("estimate_rho_prime",
        [](const ExperimentConfig& cfg, unsigned threads) {
          RhoPrimeEstimate e;
          {
            py::gil_scoped_release release;
            e = estimate_rho_prime(cfg, threads);
          }
          return py::make_tuple(e.rho_prime_hat, e.std_error);
        },
        py::arg("config"), py::arg("threads") = 0);
  m.def("sweep",
        [](const std::vector<ExperimentConfig>& grid, unsigned threads) {
          py::list out;
          for (const SweepEntry& e : sweep(grid, threads)) {
            if (e.report) out.append(py::cast(*e.report));
            else out.append(py::str(e.error));
          }
          return out;
        },
        py::arg("grid"), py::arg("threads") = 0);

#ifdef VERSION_INFO
  m.attr("__version__") = VERSION_INFO;
#else
  m.attr("__version__") = "dev";
#endif
}
