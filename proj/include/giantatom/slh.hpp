#pragma once

#include <Eigen/Dense>
#include <vector>

#include "giantatom/core.hpp"
#include "giantatom/dynamics.hpp"

// Cascaded-network (SLH) algebra with scalar scattering matrices, and the
// construction of the multipoint emitter as a two-directional cascade of
// small coupling points joined by propagation phases.

namespace giantatom::slh {

using Operator = Eigen::MatrixXcd;

// (S, L, H): S is an n x n complex scattering matrix of scalars, L holds n
// coupling operators on the system space, H is the system Hamiltonian.
struct SLHTriplet {
  Eigen::MatrixXcd S;
  std::vector<Operator> L;
  Operator H;

  int channels() const { return int(S.rows()); }
  int dim() const { return int(H.rows()); }
  // S unitary and H Hermitian to tol, shapes consistent.
  void validate(double tol = 1e-12) const;
};

// Pure propagation phase: S = [e^{i phi}], L = 0, H = 0 on a dim-state system.
SLHTriplet phase_triplet(double phi, int dim = 2);
// Passive identity with the given channel count.
SLHTriplet identity_triplet(int channels = 1, int dim = 2);

// Series product: the output of g1 feeds the input of g2 (channel counts and
// system dimensions must match).
SLHTriplet series(const SLHTriplet& g2, const SLHTriplet& g1);
// Concatenation on a shared system space; g2's channels come first.
SLHTriplet concat(const SLHTriplet& g2, const SLHTriplet& g1);
// Feedback of output port k into input port l (1-based). Throws
// std::runtime_error when the loop 1 - S_{kl} is singular.
SLHTriplet feedback(const SLHTriplet& g, int out_port, int in_port);

// Two-level emitter coupled at N points with per-point rates gamma_k and
// inter-point phases phi_k, cascaded in both propagation directions; output
// channel 1 is the right-moving field, channel 2 the left-moving one.
// detuning enters as (detuning/2)*sigma_z; H is reported traceless.
SLHTriplet build_giant_atom(const ChainParams& chain, double detuning = 0.0);

// Multilevel version: one right/left cascade pair per ladder transition,
// channel pairs ordered by transition. The frame rotates at
// omega_p = omega10 - detuning per excitation; detuning = omega10 gives the
// lab frame.
SLHTriplet build_giant_atom(const AtomSpec& atom, const CouplingLayout& layout,
                            const Environment& env, double detuning = 0.0);

// Close the line on one side: route channel 2 (left-moving) through a phase
// phi_M back into channel 1's input. Requires exactly 2 channels.
SLHTriplet attach_mirror(const SLHTriplet& g, double phase);

// Interpret the triplet as a master-equation generator (unit-rate channels).
dynamics::LindbladGenerator to_master_equation(const SLHTriplet& g);

struct RateShift {
  double rate = 0.0;
  double shift = 0.0;
};

// Total emission rate sum_i |c_i|^2 and level splitting shift from a triplet
// whose L are all proportional to sigma_- on a two-level system; throws
// std::invalid_argument otherwise.
RateShift rate_and_shift_from_triplet(const SLHTriplet& g, double detuning = 0.0);

}  // namespace giantatom::slh
