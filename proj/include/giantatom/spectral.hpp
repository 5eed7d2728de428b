#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "giantatom/core.hpp"
#include "giantatom/quadrature.hpp"

// Frequency-dependent relaxation rates and level shifts of the multipoint
// emitter: phasor sums, symmetric-case closed forms, mirror variants, and the
// principal-value shift integrals (full thermal, renormalized, pole-term).

namespace giantatom::spectral {

// A(omega) = gj * sum_k g_k e^{i omega x_k / v}.
std::complex<double> coupling_factor(double omega, const CouplingLayout& layout);

// Gamma_{m+1,m}(omega) = 4*pi*(m+1)*J(omega)*|A(omega)|^2 (default ladder).
double relaxation_rate(double omega, int m, const CouplingLayout& layout,
                       const Environment& env);

// Closed forms for n equal-weight points with uniform phase phi between
// neighbours; gamma is the single-point rate. Exact rational design points
// snap to their exact values (rate 0 at phi = 2*pi*k/n with k not divisible
// by n, n^2*gamma at phi = 2*pi*k; shifts 0 at every multiple of pi): inputs
// within a few ulps of those points are indistinguishable from them in
// double precision.
double symmetric_rate(double gamma, int n, double phi);
double symmetric_lamb(double gamma, int n, double phi);
// Same layout backed by a mirror with phi_M = phi.
double symmetric_mirror_rate(double gamma, int n, double phi);
double symmetric_mirror_lamb(double gamma, int n, double phi);

// Chain amplitudes: A_L = sum_k sqrt(gamma_k/2) e^{i sum_{j<k} phi_j},
// A_R = sum_k sqrt(gamma_k/2) e^{i sum_{j>=k} phi_j}.
std::complex<double> left_amplitude(const ChainParams& chain);
std::complex<double> right_amplitude(const ChainParams& chain);
// phi_Sigma = sum of the n-1 inter-point phases.
double chain_total_phase(const ChainParams& chain);
// |A_L|^2 + |A_R|^2; equals the relaxation rate of the layout the chain came from.
double chain_rate(const ChainParams& chain);
// Sum form of the shift: B = sum_{k<l} sqrt(gamma_k gamma_l) sin(P_l - P_k).
double lamb_shift_sum(const ChainParams& chain);

// Rate with a mirror: |A_L + e^{i(phi_Sigma + phi_M)} A_R|^2. Falls back to
// relaxation_rate(omega, 0) when the mirror is disabled.
double mirror_rate(double omega, const CouplingLayout& layout,
                   const MirrorSpec& mirror, const Environment& env);
// Additive shift correction Im(A_R^2 e^{i phi_M}); 0 when disabled.
double mirror_lamb_correction(double omega, const CouplingLayout& layout,
                              const MirrorSpec& mirror, const Environment& env);

// Full level shift of level m (vacuum Lamb + thermal Stark), the four-term
// principal-value integral over [0, omega_c]. Requires J(0) = 0 when T > 0
// (the thermal part is infrared divergent for a constant density of states).
double lamb_stark_shift_full(int m, const AtomSpec& atom, const CouplingLayout& layout,
                             const Environment& env, const PVQuadratureConfig& quad = {});

// Renormalized level shift with J(omega)/omega weighting; requires J(0) = 0.
double lamb_shift_renormalized(int m, const AtomSpec& atom, const CouplingLayout& layout,
                               const Environment& env, const PVQuadratureConfig& quad = {});

// Dominant-pole shift: -2 PV integral of J*|A(w)|^2/(w - omega10) over the
// whole line, evaluated numerically on [-W, W] (W = quad.hilbert_window *
// omega10) with the |A|^2 Fourier components' tails corrected analytically
// via Si/Ci. Constant J only. error_estimate, when given, receives the
// quadrature error bound.
double lamb_shift_hilbert(double omega10, const CouplingLayout& layout,
                          const Environment& env, const PVQuadratureConfig& quad = {},
                          double* error_estimate = nullptr);

enum class ShiftMode { automatic, hilbert, renormalized };

// Per-level shift in the resolved mode: hilbert attributes g_{m-1}^2 * B(W_{m-1})
// to level m (the down-transition pole dominates); renormalized evaluates the
// two-term integral per level. Level 0 is unshifted in hilbert mode.
double level_shift(int m, const AtomSpec& atom, const CouplingLayout& layout,
                   const Environment& env, const std::optional<MirrorSpec>& mirror,
                   ShiftMode mode, const PVQuadratureConfig& quad = {});

struct GridSpec {
  double min = 0.0;
  double max = 0.0;
  int points = 0;
  void validate() const;
  std::vector<double> values() const;
};

struct SpectralResponse {
  std::vector<double> grid;                 // omega10 values
  std::vector<std::vector<double>> rates;   // [transition][grid point]
  std::vector<std::vector<double>> shifts;  // [transition][grid point]
  struct Meta {
    std::string digest;
    ShiftMode shift_mode = ShiftMode::automatic;
    bool mirror = false;
    double hilbert_window = 0.0;
    double shift_error_bound = 0.0;
  } meta;
};

// Rates and transition shifts versus omega10. Shift mode automatic resolves
// to hilbert for constant J and renormalized for ohmic J.
SpectralResponse spectrum_sweep(const CouplingLayout& layout, const AtomSpec& atom,
                                const Environment& env,
                                const std::optional<MirrorSpec>& mirror,
                                const GridSpec& grid,
                                ShiftMode mode = ShiftMode::automatic,
                                const PVQuadratureConfig& quad = {});

}  // namespace giantatom::spectral
