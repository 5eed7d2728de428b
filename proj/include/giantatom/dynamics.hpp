#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "giantatom/core.hpp"
#include "giantatom/quadrature.hpp"
#include "giantatom/spectral.hpp"

// Lindblad master equation for the multipoint emitter: generator assembly
// (rates, shifts, thermal channels, optional drive), adaptive time evolution,
// and steady states.

namespace giantatom::dynamics {

using Operator = Eigen::MatrixXcd;

struct DensityMatrix {
  Eigen::MatrixXcd rho;

  int dim() const { return int(rho.rows()); }
  // |m><m| in an M-level space.
  static DensityMatrix level(int levels, int m);
  // Hermitian to herm_tol, unit trace to trace_tol, eigenvalues >= -eig_tol.
  void validate(double herm_tol = 1e-10, double trace_tol = 1e-10,
                double eig_tol = 1e-8) const;
};

// d(rho)/dt = -i[H, rho] + sum_c r_c (L rho L^+ - {L^+L, rho}/2).
struct LindbladGenerator {
  Operator hamiltonian;
  std::vector<std::pair<double, Operator>> channels;  // (rate, jump operator)
  std::vector<std::string> warnings;

  int dim() const { return int(hamiltonian.rows()); }
  void validate() const;
  Operator apply(const Operator& rho) const;
  // Matrix of the generator acting on column-major vec(rho).
  Eigen::MatrixXcd liouvillian() const;
};

// Coherent drive between a level pair in the rotating frame of the drive:
// adds (amplitude/2)(|lower><upper| + h.c.) and shifts level energies to
// eps_j = E_j - nu_j with nu_j = E_lower + (j - lower)*omega_d and
// omega_d = (E_upper - E_lower - detuning)/(upper - lower) per quantum.
struct DriveSpec {
  double amplitude = 0.0;
  int lower = 0;
  int upper = 1;
  double detuning = 0.0;

  void validate(int levels) const;
};

// Assemble the generator: per-transition decay channels at the frequency-
// dependent rates (mirror-aware), thermal excitation channels when T > 0,
// level shifts in the resolved mode, optional drive. Emits a warning when
// the secular assumption is strained (levels > 2 and some total rate is not
// small against the anharmonicity).
LindbladGenerator build_generator(const AtomSpec& atom, const CouplingLayout& layout,
                                  const Environment& env,
                                  const std::optional<MirrorSpec>& mirror = {},
                                  const std::optional<DriveSpec>& drive = {},
                                  spectral::ShiftMode mode = spectral::ShiftMode::automatic,
                                  const PVQuadratureConfig& quad = {});

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
};

struct EvolveOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_steps = 10'000'000;
};

// Integrate rho through the requested times (strictly increasing, times[0] is
// the initial time) with an embedded Dormand-Prince 5(4) pair; outputs are
// cubic-Hermite dense samples, re-symmetrized. Throws std::runtime_error on
// step underflow.
Trajectory evolve(const LindbladGenerator& gen, const DensityMatrix& rho0,
                  const std::vector<double>& times, const EvolveOptions& opts = {});

// Unique stationary state. Checks the Liouvillian kernel is one-dimensional
// (throws std::runtime_error otherwise), then solves with the trace condition
// replacing one row.
DensityMatrix steady_state(const LindbladGenerator& gen);

// Real diagonal of rho.
std::vector<double> populations(const DensityMatrix& state);

}  // namespace giantatom::dynamics
