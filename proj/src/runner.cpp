#include "giantatom/runner.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "giantatom/design.hpp"
#include "giantatom/dynamics.hpp"
#include "giantatom/slh.hpp"
#include "giantatom/spectral.hpp"
#include "json.hpp"

namespace giantatom::cli {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double uniform01(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

// Frequency grid in angular units; natural-unit grids scale by 2*pi*v/(x2-x1).
std::vector<double> frequency_grid(const RunConfig& cfg, const GridConfig& grid) {
  if (grid.unit == "time")
    throw ConfigError("grid.unit", "a frequency sweep needs an angular or natural grid");
  const double scale = grid.unit == "natural" ? cfg.layout().natural_scale() : 1.0;
  spectral::GridSpec spec{grid.min * scale, grid.max * scale, grid.points};
  return spec.values();
}

GridConfig default_frequency_grid() { return {0.8, 1.2, 1001, "natural"}; }

// Per-transition rate/shift sweep; shared by spectrum and mirror.
Table spectrum_table(const RunConfig& cfg, bool with_corrections) {
  const AtomSpec atom = cfg.atom();
  const CouplingLayout layout = cfg.layout();
  const Environment env = cfg.environment();
  const MirrorSpec mirror = cfg.mirror();
  if (with_corrections && !mirror.enabled)
    throw ConfigError("mirror.enabled", "must be true for the mirror subcommand");
  const GridConfig grid = cfg.grid ? *cfg.grid : default_frequency_grid();
  const std::vector<double> omegas = frequency_grid(cfg, grid);
  spectral::GridSpec spec{omegas.front(), omegas.back(), int(omegas.size())};

  const auto mode = cfg.resolved_shift_mode();
  std::optional<MirrorSpec> mirror_opt;
  if (mirror.enabled) mirror_opt = mirror;
  const auto sweep = spectral::spectrum_sweep(layout, atom, env, mirror_opt, spec, mode);
  // Corrections are reported as the difference against the mirror-free shifts.
  std::optional<spectral::SpectralResponse> plain;
  if (with_corrections)
    plain = spectral::spectrum_sweep(layout, atom, env, std::nullopt, spec, mode);

  const int transitions = atom.levels - 1;
  Table table;
  table.columns = {"omega", "phi_over_2pi"};
  for (int m = 0; m < transitions; ++m) {
    table.columns.push_back("gamma_" + std::to_string(m + 1) + std::to_string(m));
    table.columns.push_back("delta_" + std::to_string(m + 1));
    if (with_corrections)
      table.columns.push_back("mirror_correction_" + std::to_string(m + 1));
  }

  const bool has_spacing = layout.positions.size() >= 2;
  const double spacing = has_spacing ? layout.positions[1] - layout.positions[0] : 0.0;
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    std::vector<double> row;
    row.push_back(omegas[i]);
    row.push_back(has_spacing ? omegas[i] * spacing / (two_pi * layout.velocity) : 0.0);
    for (int m = 0; m < transitions; ++m) {
      row.push_back(sweep.rates[m][i]);
      row.push_back(sweep.shifts[m][i]);
      if (with_corrections) row.push_back(sweep.shifts[m][i] - plain->shifts[m][i]);
    }
    table.rows.push_back(std::move(row));
  }

  if (cfg.normalization == "max") {
    double peak = 0.0;
    for (int m = 0; m < transitions; ++m)
      for (double v : sweep.rates[m]) peak = std::max(peak, v);
    if (peak > 0.0) {
      for (auto& row : table.rows)
        for (std::size_t c = 2; c < row.size(); ++c) row[c] /= peak;
      table.notes.push_back("columns normalized by the global rate maximum " + fmt(peak));
    }
  }
  table.notes.push_back("shift mode: " + std::string(sweep.meta.shift_mode ==
                                                             spectral::ShiftMode::hilbert
                                                         ? "hilbert"
                                                         : "renormalized"));
  return table;
}

// Closed forms for a uniform symmetric layout versus the inter-point phase.
Table symmetric_table(const RunConfig& cfg) {
  const CouplingLayout layout = cfg.layout();
  const Environment env = cfg.environment();
  const int n = layout.size();
  if (n < 2) throw ConfigError("layout.positions", "symmetric closed forms need n >= 2");
  const double w0 = layout.weights[0];
  for (std::size_t k = 0; k < layout.weights.size(); ++k)
    if (std::abs(layout.weights[k] - w0) > 1e-12 * std::max(1.0, std::abs(w0)))
      throw ConfigError("layout.weights[" + std::to_string(k) + "]",
                        "symmetric closed forms need equal weights");
  const double dx = layout.positions[1] - layout.positions[0];
  for (int k = 0; k + 1 < n; ++k)
    if (std::abs(layout.positions[k + 1] - layout.positions[k] - dx) > 1e-12 * dx)
      throw ConfigError("layout.positions[" + std::to_string(k + 1) + "]",
                        "symmetric closed forms need equal spacing");
  if (env.dos.vanishes_at_zero())
    throw ConfigError("environment.dos.type",
                      "symmetric closed forms assume a constant density of states");
  const double gamma = 2.0 * two_pi * layout.mode_coupling * layout.mode_coupling * w0 *
                       w0 * env.dos.value;

  const GridConfig grid = cfg.grid ? *cfg.grid : default_frequency_grid();
  if (grid.unit == "time")
    throw ConfigError("grid.unit", "a phase sweep needs an angular or natural grid");
  // natural grid: values are phi/2pi directly; angular: omega with phi = omega*dx/v.
  spectral::GridSpec spec{grid.min, grid.max, grid.points};
  const std::vector<double> us = spec.values();

  Table table;
  table.columns = {"phi_over_2pi", "gamma_10", "delta_1", "gamma_10_mirror",
                   "delta_1_mirror"};
  for (double u : us) {
    const double phi =
        grid.unit == "natural" ? two_pi * u : u * dx / layout.velocity;
    const double uu = phi / two_pi;
    table.rows.push_back({uu, spectral::symmetric_rate(gamma, n, phi),
                          spectral::symmetric_lamb(gamma, n, phi),
                          spectral::symmetric_mirror_rate(gamma, n, phi),
                          spectral::symmetric_mirror_lamb(gamma, n, phi)});
  }
  if (cfg.normalization == "max") {
    double peak = 0.0;
    for (const auto& row : table.rows) peak = std::max({peak, row[1], row[3]});
    if (peak > 0.0) {
      for (auto& row : table.rows)
        for (std::size_t c = 1; c < row.size(); ++c) row[c] /= peak;
      table.notes.push_back("columns normalized by the global rate maximum " + fmt(peak));
    }
  }
  table.notes.push_back("single-point rate gamma = " + fmt(gamma));
  return table;
}

// Random-layout equivalence suite: cascade-network extraction vs direct
// phasor formulas vs the principal-value route.
Table slh_check_table(const RunConfig& cfg) {
  const int count = cfg.grid ? cfg.grid->points : 200;
  std::mt19937_64 rng(cfg.seed);
  const double omega0 = 1.0;
  Environment env;
  env.dos = {DensityOfStates::Model::constant, 1.0 / (2.0 * two_pi)};
  env.cutoff = 20.0 * omega0;

  Table table;
  table.columns = {"index", "n_points", "err_rate", "err_shift", "err_hilbert_rel"};
  double max_rate_err = 0.0, max_shift_err = 0.0, max_hilbert_err = 0.0;
  for (int i = 0; i < count; ++i) {
    const int n = 1 + int(rng() % 6);
    CouplingLayout layout;
    layout.positions.resize(n);
    layout.weights.resize(n);
    double x = 0.0;
    for (int k = 0; k < n; ++k) {
      if (k > 0) x += (0.3 + 1.5 * uniform01(rng)) * two_pi / omega0;
      layout.positions[k] = x;
      layout.weights[k] = 0.2 + uniform01(rng);
    }

    const ChainParams chain = chain_params(layout, env, omega0);
    const auto triplet = slh::build_giant_atom(chain);
    const auto extracted = slh::rate_and_shift_from_triplet(triplet);
    const double rate_direct = spectral::relaxation_rate(omega0, 0, layout, env);
    const double shift_direct = spectral::lamb_shift_sum(chain);
    const double shift_pv = spectral::lamb_shift_hilbert(omega0, layout, env);

    const double err_rate = std::abs(extracted.rate - rate_direct);
    const double err_shift = std::abs(extracted.shift - shift_direct);
    // Relative to the sum value with a rate-scale floor for near-zero shifts.
    const double floor = 1e-6 * std::max(rate_direct, 1e-300);
    const double err_hilbert =
        std::abs(shift_pv - shift_direct) / std::max(std::abs(shift_direct), floor);
    max_rate_err = std::max(max_rate_err, err_rate);
    max_shift_err = std::max(max_shift_err, err_shift);
    max_hilbert_err = std::max(max_hilbert_err, err_hilbert);
    table.rows.push_back({double(i), double(n), err_rate, err_shift, err_hilbert});
  }
  table.notes.push_back(
      "max |Gamma_slh - Gamma_continuum| = " + fmt(max_rate_err) +
      (max_rate_err < 1e-12 ? " < 1e-12" : " (tolerance 1e-12 exceeded)"));
  table.notes.push_back(
      "max |Delta_slh - Delta_sum| = " + fmt(max_shift_err) +
      (max_shift_err < 1e-12 ? " < 1e-12" : " (tolerance 1e-12 exceeded)"));
  table.notes.push_back(
      "max relative |Delta_pv - Delta_sum| = " + fmt(max_hilbert_err) +
      (max_hilbert_err < 1e-5 ? " < 1e-5" : " (tolerance 1e-5 exceeded)"));
  return table;
}

Table simulate_table(const RunConfig& cfg) {
  const AtomSpec atom = cfg.atom();
  const CouplingLayout layout = cfg.layout();
  const Environment env = cfg.environment();
  const MirrorSpec mirror = cfg.mirror();
  std::optional<MirrorSpec> mirror_opt;
  if (mirror.enabled) mirror_opt = mirror;
  const auto gen = dynamics::build_generator(atom, layout, env, mirror_opt,
                                             cfg.drive_spec(), cfg.resolved_shift_mode());

  std::vector<double> times;
  if (cfg.grid) {
    if (cfg.grid->unit != "time")
      throw ConfigError("grid.unit", "simulate needs a time grid (unit \"time\")");
    spectral::GridSpec spec{cfg.grid->min, cfg.grid->max, cfg.grid->points};
    times = spec.values();
  } else {
    const double w10 = transition_frequency(atom, 0);
    const double rate = atom.g_squared(0) *
                        (mirror.enabled ? spectral::mirror_rate(w10, layout, mirror, env)
                                        : spectral::relaxation_rate(w10, 0, layout, env));
    if (!(rate > 0.0))
      throw ConfigError("grid",
                        "the default time grid needs a nonzero first-transition rate; "
                        "give an explicit time grid");
    spectral::GridSpec spec{0.0, 10.0 / rate, 201};
    times = spec.values();
  }

  const int start = cfg.initial_level ? *cfg.initial_level : atom.levels - 1;
  if (start < 0 || start >= atom.levels)
    throw ConfigError("initial.level", "must lie in [0, atom.levels)");
  const auto rho0 = dynamics::DensityMatrix::level(atom.levels, start);
  const auto traj = dynamics::evolve(gen, rho0, times);

  Table table;
  table.columns = {"t"};
  for (int j = 0; j < atom.levels; ++j) table.columns.push_back("p" + std::to_string(j));
  table.columns.push_back("trace");
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    std::vector<double> row{traj.times[i]};
    const auto pops = dynamics::populations(traj.states[i]);
    row.insert(row.end(), pops.begin(), pops.end());
    row.push_back(traj.states[i].rho.trace().real());
    table.rows.push_back(std::move(row));
  }
  for (const auto& w : gen.warnings) table.notes.push_back("warning: " + w);
  return table;
}

Table steady_table(const RunConfig& cfg) {
  const AtomSpec atom = cfg.atom();
  const MirrorSpec mirror = cfg.mirror();
  std::optional<MirrorSpec> mirror_opt;
  if (mirror.enabled) mirror_opt = mirror;
  const auto gen = dynamics::build_generator(atom, cfg.layout(), cfg.environment(),
                                             mirror_opt, cfg.drive_spec(),
                                             cfg.resolved_shift_mode());
  const auto steady = dynamics::steady_state(gen);
  const auto pops = dynamics::populations(steady);

  Table table;
  table.columns = {"level", "population"};
  for (int j = 0; j < atom.levels; ++j) table.rows.push_back({double(j), pops[j]});
  for (const auto& w : gen.warnings) table.notes.push_back("warning: " + w);
  return table;
}

Table design_table(const RunConfig& cfg) {
  if (!cfg.design)
    throw ConfigError("design", "required object is missing for the design subcommand");
  const DesignConfig& dc = *cfg.design;
  design::DesignTarget target;
  target.omega = dc.target_omega;
  target.rate = dc.target_rate;
  target.weight = dc.target_weight;
  target.normalization = dc.normalization == "shape"
                             ? design::DesignTarget::Normalization::shape
                             : design::DesignTarget::Normalization::absolute;
  target.env = cfg.environment();
  design::FitBounds bounds{dc.weight_max, dc.gap_min, dc.gap_max};
  const auto result = design::fit_layout(target, dc.points, bounds, cfg.seed, dc.restarts);

  Table table;
  table.columns = {"k",         "position",   "weight",  "residual",
                   "iterations", "restart",   "stagnated"};
  for (int k = 0; k < result.layout.size(); ++k) {
    table.rows.push_back({double(k), result.layout.positions[k],
                          result.layout.weights[k], result.residual,
                          double(result.iterations), double(result.restart),
                          result.stagnated ? 1.0 : 0.0});
  }
  table.notes.push_back("residual = " + fmt(result.residual));
  if (result.stagnated)
    table.notes.push_back("warning: no restart improved on its starting point");
  return table;
}

int scenario_points(const RunConfig& cfg) {
  return cfg.positions.empty() ? 10 : int(cfg.positions.size());
}

Table inversion_table(const RunConfig& cfg) {
  const auto rep = design::scenario_inversion(scenario_points(cfg));
  Table table;
  table.columns = {"omega_d", "p0", "p1", "p2", "inverted"};
  for (std::size_t i = 0; i < rep.drive.size(); ++i) {
    table.rows.push_back({rep.drive[i], rep.populations[i][0], rep.populations[i][1],
                          rep.populations[i][2], rep.inverted[i] ? 1.0 : 0.0});
  }
  table.notes.push_back("n = " + std::to_string(rep.n));
  table.notes.push_back("alpha = " + fmt(rep.alpha));
  table.notes.push_back("omega_10 = " + fmt(rep.omega_10) +
                        ", omega_21 = " + fmt(rep.omega_21));
  table.notes.push_back("gamma_10 = " + fmt(rep.gamma_10) +
                        ", gamma_21 = " + fmt(rep.gamma_21) +
                        " (single-point rate " + fmt(rep.gamma_single) + ")");
  for (const auto& w : rep.warnings) table.notes.push_back("warning: " + w);
  return table;
}

Table multiphoton_table(const RunConfig& cfg) {
  const auto rep = design::scenario_multiphoton(scenario_points(cfg));
  Table table;
  table.columns = {"n",        "alpha",        "omega_10",     "omega_21",
                   "gamma_10", "gamma_21",     "coupling_half", "coupling_max",
                   "at_maximum", "ideal"};
  table.rows.push_back({double(rep.n), rep.alpha, rep.omega_10, rep.omega_21,
                        rep.gamma_10, rep.gamma_21, rep.coupling_half, rep.coupling_max,
                        rep.at_maximum ? 1.0 : 0.0, rep.ideal ? 1.0 : 0.0});
  if (!rep.ideal)
    table.notes.push_back(
        "warning: transition phases are not at interference zeros for this n");
  return table;
}

Table anharmonicity_table(const RunConfig& cfg) {
  const auto rep = design::scenario_anharmonicity(scenario_points(cfg));
  Table table;
  table.columns = {"omega_10", "phi_over_2pi", "delta_10", "delta_21", "change", "valid"};
  for (std::size_t i = 0; i < rep.omega_10.size(); ++i) {
    table.rows.push_back({rep.omega_10[i], rep.phi_over_2pi[i], rep.delta_10[i],
                          rep.delta_21[i], rep.change[i], rep.valid[i] ? 1.0 : 0.0});
  }
  table.notes.push_back("shift mode: " + rep.shift_mode);
  table.notes.push_back(rep.sign_change
                            ? "shift difference changes sign across resonance"
                            : "warning: no sign change found across the sweep");
  return table;
}

Table preset_table(const std::string& name) {
  std::string canonical = name;
  if (name == "fig3-a") canonical = "two-maxima";
  if (name == "fig3-b") canonical = "flat-maximum";
  if (name == "fig3-c") canonical = "shallow-minima";
  const auto layout = design::preset_fig3(canonical);
  Table table;
  table.columns = {"k", "position", "weight"};
  for (int k = 0; k < layout.size(); ++k)
    table.rows.push_back({double(k), layout.positions[k], layout.weights[k]});
  table.notes.push_back("preset: " + canonical);
  return table;
}

}  // namespace

Table run_command(const std::string& command, const RunConfig& cfg) {
  if (command == "spectrum") return spectrum_table(cfg, false);
  if (command == "mirror") return spectrum_table(cfg, true);
  if (command == "symmetric") return symmetric_table(cfg);
  if (command == "slh-check") return slh_check_table(cfg);
  if (command == "simulate") return simulate_table(cfg);
  if (command == "steady") return steady_table(cfg);
  if (command == "design") return design_table(cfg);
  if (command == "scenario:inversion") return inversion_table(cfg);
  if (command == "scenario:multiphoton") return multiphoton_table(cfg);
  if (command == "scenario:anharmonicity") return anharmonicity_table(cfg);
  if (command.rfind("preset:", 0) == 0) return preset_table(command.substr(7));
  throw ConfigError("", "unknown command '" + command + "'");
}

std::string to_csv(const Table& table) {
  std::ostringstream out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out << ',';
    out << table.columns[c];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      out << fmt(row[c]);
    }
    out << '\n';
  }
  return out.str();
}

std::string to_json(const Table& table) {
  nlohmann::json doc;
  doc["columns"] = table.columns;
  doc["data"] = table.rows;
  doc["notes"] = table.notes;
  return doc.dump(2) + "\n";
}

int run(const std::string& command, const RunConfig& cfg, std::ostream& fallback_out,
        std::ostream& log) {
  const Table table = run_command(command, cfg);
  const std::string body = cfg.format == Format::json ? to_json(table) : to_csv(table);
  if (cfg.output.empty()) {
    fallback_out << body;
  } else {
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out) throw ConfigError("output", "cannot open '" + cfg.output + "' for writing");
    out << body;
    if (!out) throw ConfigError("output", "failed while writing '" + cfg.output + "'");
  }
  for (const auto& note : table.notes) log << note << '\n';
  return 0;
}

}  // namespace giantatom::cli
