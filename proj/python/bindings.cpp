#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <stdexcept>
#include <string>

#include "giantatom/config.hpp"
#include "giantatom/design.hpp"
#include "giantatom/dynamics.hpp"
#include "giantatom/runner.hpp"
#include "giantatom/slh.hpp"
#include "giantatom/spectral.hpp"

namespace py = pybind11;
using namespace giantatom;

namespace {

Environment make_environment(const std::string& dos_type, double dos_value,
                             double temperature, double cutoff) {
  Environment env;
  if (dos_type == "constant") {
    env.dos.model = DensityOfStates::Model::constant;
  } else if (dos_type == "ohmic") {
    env.dos.model = DensityOfStates::Model::ohmic;
  } else {
    throw std::invalid_argument("dos_type must be 'constant' or 'ohmic'");
  }
  env.dos.value = dos_value;
  env.temperature = temperature;
  env.cutoff = cutoff;
  env.validate();
  return env;
}

spectral::ShiftMode parse_mode(const std::string& mode) {
  if (mode == "auto") return spectral::ShiftMode::automatic;
  if (mode == "hilbert") return spectral::ShiftMode::hilbert;
  if (mode == "renormalized") return spectral::ShiftMode::renormalized;
  throw std::invalid_argument("shift mode must be 'auto', 'hilbert' or 'renormalized'");
}

std::string mode_name(spectral::ShiftMode mode) {
  switch (mode) {
    case spectral::ShiftMode::hilbert: return "hilbert";
    case spectral::ShiftMode::renormalized: return "renormalized";
    default: return "auto";
  }
}

py::dict sweep_dict(const spectral::SpectralResponse& sweep) {
  py::dict out;
  out["grid"] = sweep.grid;
  out["rates"] = sweep.rates;
  out["shifts"] = sweep.shifts;
  out["shift_mode"] = mode_name(sweep.meta.shift_mode);
  out["shift_error_bound"] = sweep.meta.shift_error_bound;
  return out;
}

py::dict table_dict(const cli::Table& table) {
  py::dict out;
  out["columns"] = table.columns;
  out["data"] = table.rows;
  out["notes"] = table.notes;
  return out;
}

}  // namespace

PYBIND11_MODULE(_giantatom, m) {
  m.doc() = "multipoint-emitter spectral response, network checks, and dynamics";

  py::class_<AtomSpec>(m, "AtomSpec")
      .def(py::init([](int levels, double omega10, double anharmonicity) {
             AtomSpec atom;
             atom.levels = levels;
             atom.omega10 = omega10;
             atom.anharmonicity = anharmonicity;
             atom.validate();
             return atom;
           }),
           py::arg("levels") = 2, py::arg("omega10") = 1.0,
           py::arg("anharmonicity") = 0.0)
      .def_readonly("levels", &AtomSpec::levels)
      .def_readonly("omega10", &AtomSpec::omega10)
      .def_readonly("anharmonicity", &AtomSpec::anharmonicity);

  py::class_<CouplingLayout>(m, "CouplingLayout")
      .def(py::init([](std::vector<double> positions, std::vector<double> weights,
                       double mode_coupling, double velocity) {
             CouplingLayout layout;
             layout.positions = std::move(positions);
             layout.weights = std::move(weights);
             layout.mode_coupling = mode_coupling;
             layout.velocity = velocity;
             layout.validate();
             return layout;
           }),
           py::arg("positions"), py::arg("weights"), py::arg("mode_coupling") = 1.0,
           py::arg("velocity") = 1.0)
      .def_readonly("positions", &CouplingLayout::positions)
      .def_readonly("weights", &CouplingLayout::weights)
      .def_readonly("mode_coupling", &CouplingLayout::mode_coupling)
      .def_readonly("velocity", &CouplingLayout::velocity)
      .def("natural_scale", &CouplingLayout::natural_scale);

  py::class_<Environment>(m, "Environment")
      .def(py::init(&make_environment), py::arg("dos_type") = "constant",
           py::arg("dos_value") = 1.0, py::arg("temperature") = 0.0,
           py::arg("cutoff") = 0.0)
      .def_readonly("temperature", &Environment::temperature)
      .def_readonly("cutoff", &Environment::cutoff);

  py::class_<MirrorSpec>(m, "MirrorSpec")
      .def(py::init([](double phase, bool enabled) {
             return MirrorSpec{phase, enabled};
           }),
           py::arg("phase") = 0.0, py::arg("enabled") = true)
      .def_readonly("phase", &MirrorSpec::phase)
      .def_readonly("enabled", &MirrorSpec::enabled);

  py::class_<dynamics::DriveSpec>(m, "DriveSpec")
      .def(py::init([](double amplitude, int lower, int upper, double detuning) {
             return dynamics::DriveSpec{amplitude, lower, upper, detuning};
           }),
           py::arg("amplitude"), py::arg("lower") = 0, py::arg("upper") = 1,
           py::arg("detuning") = 0.0);

  m.def("coupling_factor", &spectral::coupling_factor, py::arg("omega"),
        py::arg("layout"));
  m.def("relaxation_rate", &spectral::relaxation_rate, py::arg("omega"), py::arg("m"),
        py::arg("layout"), py::arg("env"));
  m.def("symmetric_rate", &spectral::symmetric_rate, py::arg("gamma"), py::arg("n"),
        py::arg("phi"));
  m.def("symmetric_lamb", &spectral::symmetric_lamb, py::arg("gamma"), py::arg("n"),
        py::arg("phi"));
  m.def("symmetric_mirror_rate", &spectral::symmetric_mirror_rate, py::arg("gamma"),
        py::arg("n"), py::arg("phi"));
  m.def("symmetric_mirror_lamb", &spectral::symmetric_mirror_lamb, py::arg("gamma"),
        py::arg("n"), py::arg("phi"));
  m.def("mirror_rate", &spectral::mirror_rate, py::arg("omega"), py::arg("layout"),
        py::arg("mirror"), py::arg("env"));
  m.def("mirror_lamb_correction", &spectral::mirror_lamb_correction, py::arg("omega"),
        py::arg("layout"), py::arg("mirror"), py::arg("env"));

  m.def(
      "lamb_shift_hilbert",
      [](double omega10, const CouplingLayout& layout, const Environment& env) {
        return spectral::lamb_shift_hilbert(omega10, layout, env);
      },
      py::arg("omega10"), py::arg("layout"), py::arg("env"));
  m.def(
      "lamb_stark_shift_full",
      [](int m_, const AtomSpec& atom, const CouplingLayout& layout,
         const Environment& env) {
        return spectral::lamb_stark_shift_full(m_, atom, layout, env);
      },
      py::arg("m"), py::arg("atom"), py::arg("layout"), py::arg("env"));
  m.def(
      "lamb_shift_renormalized",
      [](int m_, const AtomSpec& atom, const CouplingLayout& layout,
         const Environment& env) {
        return spectral::lamb_shift_renormalized(m_, atom, layout, env);
      },
      py::arg("m"), py::arg("atom"), py::arg("layout"), py::arg("env"));
  m.def(
      "level_shift",
      [](int m_, const AtomSpec& atom, const CouplingLayout& layout,
         const Environment& env, const std::optional<MirrorSpec>& mirror,
         const std::string& mode) {
        return spectral::level_shift(m_, atom, layout, env, mirror, parse_mode(mode));
      },
      py::arg("m"), py::arg("atom"), py::arg("layout"), py::arg("env"),
      py::arg("mirror") = std::nullopt, py::arg("mode") = "auto");

  m.def(
      "spectrum_sweep",
      [](const CouplingLayout& layout, const AtomSpec& atom, const Environment& env,
         const std::optional<MirrorSpec>& mirror, double grid_min, double grid_max,
         int points, const std::string& mode) {
        spectral::GridSpec grid{grid_min, grid_max, points};
        return sweep_dict(
            spectral::spectrum_sweep(layout, atom, env, mirror, grid, parse_mode(mode)));
      },
      py::arg("layout"), py::arg("atom"), py::arg("env"),
      py::arg("mirror") = std::nullopt, py::arg("grid_min") = 0.8,
      py::arg("grid_max") = 1.2, py::arg("points") = 1001, py::arg("mode") = "auto");

  m.def(
      "network_rate_and_shift",
      [](const CouplingLayout& layout, const Environment& env, double omega) {
        const auto triplet = slh::build_giant_atom(chain_params(layout, env, omega));
        const auto rs = slh::rate_and_shift_from_triplet(triplet);
        return py::make_tuple(rs.rate, rs.shift);
      },
      py::arg("layout"), py::arg("env"), py::arg("omega"),
      "relaxation rate and level shift read off the cascaded two-level network");

  m.def(
      "evolve_populations",
      [](const AtomSpec& atom, const CouplingLayout& layout, const Environment& env,
         std::vector<double> times, const std::optional<MirrorSpec>& mirror,
         const std::optional<dynamics::DriveSpec>& drive,
         std::optional<int> initial_level, const std::string& mode) {
        const auto gen = dynamics::build_generator(atom, layout, env, mirror, drive,
                                                   parse_mode(mode));
        const int start = initial_level ? *initial_level : atom.levels - 1;
        const auto rho0 = dynamics::DensityMatrix::level(atom.levels, start);
        const auto traj = dynamics::evolve(gen, rho0, times);
        std::vector<std::vector<double>> pops(traj.states.size());
        for (std::size_t i = 0; i < traj.states.size(); ++i)
          pops[i] = dynamics::populations(traj.states[i]);
        return pops;
      },
      py::arg("atom"), py::arg("layout"), py::arg("env"), py::arg("times"),
      py::arg("mirror") = std::nullopt, py::arg("drive") = std::nullopt,
      py::arg("initial_level") = std::nullopt, py::arg("mode") = "auto");

  m.def(
      "steady_populations",
      [](const AtomSpec& atom, const CouplingLayout& layout, const Environment& env,
         const std::optional<MirrorSpec>& mirror,
         const std::optional<dynamics::DriveSpec>& drive, const std::string& mode) {
        const auto gen = dynamics::build_generator(atom, layout, env, mirror, drive,
                                                   parse_mode(mode));
        return dynamics::populations(dynamics::steady_state(gen));
      },
      py::arg("atom"), py::arg("layout"), py::arg("env"),
      py::arg("mirror") = std::nullopt, py::arg("drive") = std::nullopt,
      py::arg("mode") = "auto");

  m.def(
      "fit_layout",
      [](std::vector<double> omega, std::vector<double> rate,
         std::vector<double> weight, int n_points, const std::string& normalization,
         const Environment& env, std::uint64_t seed, int restarts) {
        design::DesignTarget target;
        target.omega = std::move(omega);
        target.rate = std::move(rate);
        target.weight = std::move(weight);
        target.normalization = normalization == "shape"
                                   ? design::DesignTarget::Normalization::shape
                                   : design::DesignTarget::Normalization::absolute;
        target.env = env;
        const auto result = design::fit_layout(target, n_points, {}, seed, restarts);
        py::dict out;
        out["positions"] = result.layout.positions;
        out["weights"] = result.layout.weights;
        out["residual"] = result.residual;
        out["iterations"] = result.iterations;
        out["restart"] = result.restart;
        out["stagnated"] = result.stagnated;
        return out;
      },
      py::arg("omega"), py::arg("rate"), py::arg("weight") = std::vector<double>{},
      py::arg("n_points") = 4, py::arg("normalization") = "absolute",
      py::arg("env") = make_environment("constant", 1.0, 0.0, 0.0),
      py::arg("seed") = 42, py::arg("restarts") = 16);

  m.def("preset_fig3", &design::preset_fig3, py::arg("name"));

  m.def(
      "scenario_inversion",
      [](int n) {
        const auto rep = design::scenario_inversion(n);
        py::dict out;
        out["n"] = rep.n;
        out["alpha"] = rep.alpha;
        out["omega_10"] = rep.omega_10;
        out["omega_21"] = rep.omega_21;
        out["gamma_10"] = rep.gamma_10;
        out["gamma_21"] = rep.gamma_21;
        out["drive"] = rep.drive;
        out["populations"] = rep.populations;
        out["inverted"] = rep.inverted;
        out["warnings"] = rep.warnings;
        return out;
      },
      py::arg("n") = 10);
  m.def(
      "scenario_multiphoton",
      [](int n) {
        const auto rep = design::scenario_multiphoton(n);
        py::dict out;
        out["n"] = rep.n;
        out["alpha"] = rep.alpha;
        out["gamma_10"] = rep.gamma_10;
        out["gamma_21"] = rep.gamma_21;
        out["coupling_half"] = rep.coupling_half;
        out["coupling_max"] = rep.coupling_max;
        out["at_maximum"] = rep.at_maximum;
        out["ideal"] = rep.ideal;
        return out;
      },
      py::arg("n") = 10);
  m.def(
      "scenario_anharmonicity",
      [](int n) {
        const auto rep = design::scenario_anharmonicity(n);
        py::dict out;
        out["n"] = rep.n;
        out["alpha"] = rep.alpha;
        out["shift_mode"] = rep.shift_mode;
        out["omega_10"] = rep.omega_10;
        out["delta_10"] = rep.delta_10;
        out["delta_21"] = rep.delta_21;
        out["change"] = rep.change;
        out["valid"] = rep.valid;
        out["sign_change"] = rep.sign_change;
        return out;
      },
      py::arg("n") = 10);

  m.def(
      "run_command",
      [](const std::string& command, const std::string& config_json) {
        const auto cfg = cli::parse_config(config_json);
        return table_dict(cli::run_command(command, cfg));
      },
      py::arg("command"), py::arg("config_json"),
      "execute a CLI subcommand against a JSON config string");
  m.def(
      "normalize_config",
      [](const std::string& config_json) {
        return cli::serialize(cli::parse_config(config_json));
      },
      py::arg("config_json"), "parse, validate, and re-serialize a JSON config");
}
