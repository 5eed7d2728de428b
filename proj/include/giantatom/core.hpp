#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

// Core types for a multilevel emitter coupled to a 1D bosonic line at several
// points, plus the elementary frequency/occupation helpers everything else
// builds on. Units: hbar = k_B = 1, frequencies in rad/time.

namespace giantatom {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Anharmonic ladder: omega_{m+1,m} = omega10 + m*alpha. The coupling operator
// scales as g_m between levels m and m+1; the default ladder is bosonic-like,
// g_m = sqrt(m+1), so squared factors are exact integers.
struct AtomSpec {
  int levels = 2;              // M >= 2
  double omega10 = 1.0;        // first transition frequency, > 0
  double anharmonicity = 0.0;  // alpha
  std::function<double(int)> ladder{};  // optional override of g_m

  void validate() const;
  double g(int m) const { return ladder ? ladder(m) : std::sqrt(double(m + 1)); }
  double g_squared(int m) const { return ladder ? ladder(m) * ladder(m) : double(m + 1); }
};

// omega_{m+1,m}; throws std::out_of_range unless 0 <= m < levels-1.
double transition_frequency(const AtomSpec& atom, int m);

// Level energy relative to the ground state: m*omega10 + alpha*m*(m-1)/2.
double level_energy(const AtomSpec& atom, int m);

// Default ladder factor g_m = sqrt(m+1).
double ladder_coupling(int m);

// Connection points along the line. Positions strictly increasing, weights
// g_k >= 0, one overall mode coupling g_j, propagation speed v > 0.
struct CouplingLayout {
  std::vector<double> positions;
  std::vector<double> weights;
  double mode_coupling = 1.0;
  double velocity = 1.0;

  int size() const { return int(positions.size()); }
  void validate() const;
  // 2*pi*v/(x2-x1); needs at least two points.
  double natural_scale() const;
};

// Bath spectral density J(omega).
struct DensityOfStates {
  enum class Model { constant, ohmic };
  Model model = Model::constant;
  double value = 1.0;  // J0 for constant, slope c for ohmic (J = c*omega)

  double operator()(double omega) const {
    return model == Model::constant ? value : value * omega;
  }
  bool vanishes_at_zero() const { return model == Model::ohmic; }
};

struct Environment {
  DensityOfStates dos{};
  double temperature = 0.0;  // >= 0
  double cutoff = 0.0;       // omega_c for shift integrals, > 0 where used

  void validate() const;
};

// Semi-infinite line: mirror at the far end, phase phi_M picked up between
// the mirror and the first connection point.
struct MirrorSpec {
  double phase = 0.0;  // phi_M, stored mod 2*pi
  bool enabled = false;
};

// Bose occupation e^{-w/T}/(1-e^{-w/T}); exact 0 at T = 0. Throws
// std::domain_error for omega <= 0.
double thermal_occupation(double omega, double temperature);

// Per-point decay parameters of the equivalent cascaded chain at frequency
// omega: gamma_k = 4*pi*gj^2*gk^2*J(omega) and the inter-point phases
// phi_k = omega*(x_{k+1}-x_k)/v. Bridge between layout language and the
// cascaded-network (and closed-form) language.
struct ChainParams {
  std::vector<double> gamma;  // size N
  std::vector<double> phi;    // size N-1
};

ChainParams chain_params(const CouplingLayout& layout, const Environment& env,
                         double omega);

}  // namespace giantatom
