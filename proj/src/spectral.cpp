#include "giantatom/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace giantatom::spectral {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// True when x lies within a few ulps (at the magnitude of `scale`) of an
// integer; that integer is returned through k. Used to snap phase arguments
// that are FP-indistinguishable from exact rational design points.
bool near_integer(double x, double scale, long long& k) {
  const double r = std::round(x);
  if (std::abs(x - r) <= 64.0 * kEps * std::max(1.0, std::abs(scale))) {
    k = static_cast<long long>(r);
    return true;
  }
  return false;
}

void check_symmetric_args(double gamma, int n) {
  if (n < 1) throw std::invalid_argument("symmetric closed forms require n >= 1");
  if (!(gamma >= 0.0)) throw std::invalid_argument("single-point rate gamma must be >= 0");
}

}  // namespace

std::complex<double> coupling_factor(double omega, const CouplingLayout& layout) {
  layout.validate();
  std::complex<double> sum = 0.0;
  for (std::size_t k = 0; k < layout.positions.size(); ++k) {
    const double arg = omega * layout.positions[k] / layout.velocity;
    sum += layout.weights[k] * std::complex<double>(std::cos(arg), std::sin(arg));
  }
  return layout.mode_coupling * sum;
}

double relaxation_rate(double omega, int m, const CouplingLayout& layout,
                       const Environment& env) {
  if (!(omega > 0.0)) throw std::domain_error("relaxation rate defined for omega > 0");
  if (m < 0) throw std::out_of_range("transition index must be >= 0");
  env.validate();
  const double a2 = std::norm(coupling_factor(omega, layout));
  return 2.0 * two_pi * (m + 1.0) * env.dos(omega) * a2;
}

double symmetric_rate(double gamma, int n, double phi) {
  check_symmetric_args(gamma, n);
  if (n == 1) return gamma;
  long long k = 0;
  const double u = phi / two_pi;
  if (near_integer(u, u, k)) return gamma * static_cast<double>(n) * n;
  const double d = std::remainder(phi, two_pi);
  if (near_integer(n * d / two_pi, n * u, k) && k != 0) return 0.0;
  const double s = std::sin(0.5 * d);
  const double sn = std::sin(0.5 * n * d);
  return gamma * (sn * sn) / (s * s);
}

double symmetric_lamb(double gamma, int n, double phi) {
  check_symmetric_args(gamma, n);
  if (n == 1) return 0.0;
  long long k = 0;
  const double half = phi / pi;
  if (near_integer(half, half, k)) return 0.0;  // exact zero at every pi*k
  const double d = std::remainder(phi, two_pi);
  const double s = std::sin(0.5 * d);
  return gamma * (n * std::sin(d) - std::sin(n * d)) / (4.0 * s * s);
}

double symmetric_mirror_rate(double gamma, int n, double phi) {
  check_symmetric_args(gamma, n);
  long long k = 0;
  const double u = phi / two_pi;
  if (near_integer(u, u, k)) return 2.0 * gamma * static_cast<double>(n) * n;
  const double d = std::remainder(phi, two_pi);
  if (near_integer(n * d / pi, 2.0 * n * u, k) && k != 0) return 0.0;
  const double s = std::sin(0.5 * d);
  const double sn = std::sin(static_cast<double>(n) * d);
  return gamma * (sn * sn) / (2.0 * s * s);
}

double symmetric_mirror_lamb(double gamma, int n, double phi) {
  check_symmetric_args(gamma, n);
  long long k = 0;
  const double half = phi / pi;
  if (near_integer(half, half, k)) return 0.0;  // exact zero at every pi*k
  const double d = std::remainder(phi, two_pi);
  const double s = std::sin(0.5 * d);
  return gamma * (2.0 * n * std::sin(d) - std::sin(2.0 * n * d)) / (8.0 * s * s);
}

std::complex<double> left_amplitude(const ChainParams& chain) {
  std::complex<double> sum = 0.0;
  double acc = 0.0;  // phase accumulated before point k
  for (std::size_t k = 0; k < chain.gamma.size(); ++k) {
    if (k > 0) acc += chain.phi[k - 1];
    sum += std::sqrt(0.5 * chain.gamma[k]) * std::complex<double>(std::cos(acc), std::sin(acc));
  }
  return sum;
}

std::complex<double> right_amplitude(const ChainParams& chain) {
  const double total = chain_total_phase(chain);
  std::complex<double> sum = 0.0;
  double acc = 0.0;
  for (std::size_t k = 0; k < chain.gamma.size(); ++k) {
    if (k > 0) acc += chain.phi[k - 1];
    const double p = total - acc;  // phase accumulated from point k to the end
    sum += std::sqrt(0.5 * chain.gamma[k]) * std::complex<double>(std::cos(p), std::sin(p));
  }
  return sum;
}

double chain_total_phase(const ChainParams& chain) {
  double total = 0.0;
  for (double p : chain.phi) total += p;
  return total;
}

double chain_rate(const ChainParams& chain) {
  return std::norm(left_amplitude(chain)) + std::norm(right_amplitude(chain));
}

double lamb_shift_sum(const ChainParams& chain) {
  const std::size_t n = chain.gamma.size();
  std::vector<double> prefix(n, 0.0);  // P_k = sum_{j<k} phi_j
  for (std::size_t k = 1; k < n; ++k) prefix[k] = prefix[k - 1] + chain.phi[k - 1];
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = k + 1; l < n; ++l) {
      sum += std::sqrt(chain.gamma[k] * chain.gamma[l]) * std::sin(prefix[l] - prefix[k]);
    }
  }
  return sum;
}

double mirror_rate(double omega, const CouplingLayout& layout,
                   const MirrorSpec& mirror, const Environment& env) {
  if (!mirror.enabled) return relaxation_rate(omega, 0, layout, env);
  if (!(omega > 0.0)) throw std::domain_error("relaxation rate defined for omega > 0");
  env.validate();
  const ChainParams chain = chain_params(layout, env, omega);
  const std::complex<double> al = left_amplitude(chain);
  const std::complex<double> ar = right_amplitude(chain);
  const double theta = chain_total_phase(chain) + mirror.phase;
  const std::complex<double> z =
      al + std::complex<double>(std::cos(theta), std::sin(theta)) * ar;
  // Perfect destructive interference leaves |z| at rounding-noise level;
  // snap it to the exact zero it represents.
  const double scale = std::abs(al) + std::abs(ar);
  if (std::abs(z) <= 8.0 * kEps * scale) return 0.0;
  return std::norm(z);
}

double mirror_lamb_correction(double omega, const CouplingLayout& layout,
                              const MirrorSpec& mirror, const Environment& env) {
  if (!mirror.enabled) return 0.0;
  if (!(omega > 0.0)) throw std::domain_error("shift correction defined for omega > 0");
  env.validate();
  const ChainParams chain = chain_params(layout, env, omega);
  const std::complex<double> ar = right_amplitude(chain);
  const std::complex<double> rot(std::cos(mirror.phase), std::sin(mirror.phase));
  return (ar * ar * rot).imag();
}

namespace {

// Shared validation for the shift integrals: the environment must have a
// positive cutoff and each transition pole must sit strictly inside (0, wc).
void check_shift_setup(const AtomSpec& atom, const CouplingLayout& layout,
                       const Environment& env, int m) {
  atom.validate();
  layout.validate();
  env.validate();
  if (m < 0 || m >= atom.levels) throw std::out_of_range("level index outside the ladder");
  if (!(env.cutoff > 0.0))
    throw std::invalid_argument("environment.cutoff must be > 0 for shift integrals");
  if (m >= 1) {
    const double wd = transition_frequency(atom, m - 1);
    if (!(wd > 0.0 && wd < env.cutoff))
      throw std::invalid_argument("transition frequency below level must lie in (0, cutoff)");
  }
  if (m <= atom.levels - 2) {
    const double wu = transition_frequency(atom, m);
    if (!(wu > 0.0))
      throw std::invalid_argument("transition frequency above level must be > 0");
    if (env.temperature > 0.0 && !(wu < env.cutoff))
      throw std::invalid_argument("transition frequency above level must lie below cutoff");
  }
}

}  // namespace

double lamb_stark_shift_full(int m, const AtomSpec& atom, const CouplingLayout& layout,
                             const Environment& env, const PVQuadratureConfig& quad) {
  check_shift_setup(atom, layout, env, m);
  const double T = env.temperature;
  if (T > 0.0 && !env.dos.vanishes_at_zero())
    throw std::domain_error(
        "thermal shift diverges at omega = 0 unless the density of states vanishes there");

  const bool has_up = m <= atom.levels - 2;
  const bool has_dn = m >= 1;
  const double wu = has_up ? transition_frequency(atom, m) : 0.0;
  const double wd = has_dn ? transition_frequency(atom, m - 1) : 0.0;
  const double gu = has_up ? atom.g_squared(m) : 0.0;
  const double gd = has_dn ? atom.g_squared(m - 1) : 0.0;

  const auto weight = [&](double w) { return env.dos(w) * std::norm(coupling_factor(w, layout)); };
  const auto nbar = [T](double w) { return T > 0.0 ? 1.0 / std::expm1(w / T) : 0.0; };

  // Principal-value poles on (0, wc): up-term at wu (thermal only), down-term
  // at wd. Degenerate transition frequencies merge into one pole.
  std::vector<PoleTerm> poles;
  const bool thermal_up = has_up && T > 0.0;
  const bool merged = thermal_up && has_dn && std::abs(wu - wd) <= 1e-12 * std::max(wu, wd);
  if (merged) {
    poles.push_back({wd, [=](double w) {
                       return weight(w) * (gu * nbar(w) - gd * (1.0 + nbar(w)));
                     }});
  } else {
    if (thermal_up)
      poles.push_back({wu, [=](double w) { return gu * weight(w) * nbar(w); }});
    if (has_dn)
      poles.push_back({wd, [=](double w) { return -gd * weight(w) * (1.0 + nbar(w)); }});
  }

  const auto regular = [=](double w) {
    double v = 0.0;
    if (has_up) v -= gu * weight(w) * (1.0 + nbar(w)) / (w + wu);
    if (has_dn) v += gd * weight(w) * nbar(w) / (w + wd);
    return v;
  };

  return 2.0 * principal_value(regular, poles, 0.0, env.cutoff, quad).value;
}

double lamb_shift_renormalized(int m, const AtomSpec& atom, const CouplingLayout& layout,
                               const Environment& env, const PVQuadratureConfig& quad) {
  check_shift_setup(atom, layout, env, m);
  if (!env.dos.vanishes_at_zero())
    throw std::domain_error(
        "renormalized shift requires a density of states vanishing at omega = 0");

  const bool has_up = m <= atom.levels - 2;
  const bool has_dn = m >= 1;
  const double wu = has_up ? transition_frequency(atom, m) : 0.0;
  const double wd = has_dn ? transition_frequency(atom, m - 1) : 0.0;
  const double gu = has_up ? atom.g_squared(m) : 0.0;
  const double gd = has_dn ? atom.g_squared(m - 1) : 0.0;
  const double slope = env.dos.value;  // J(w)/w for the ohmic model

  const auto a2 = [&](double w) { return std::norm(coupling_factor(w, layout)); };
  std::vector<PoleTerm> poles;
  if (has_dn)
    poles.push_back({wd, [=](double w) { return -2.0 * slope * a2(w) * gd * wd; }});
  const auto regular = [=](double w) {
    return has_up ? 2.0 * slope * a2(w) * gu * wu / (w + wu) : 0.0;
  };
  return principal_value(regular, poles, 0.0, env.cutoff, quad).value;
}

double lamb_shift_hilbert(double omega10, const CouplingLayout& layout,
                          const Environment& env, const PVQuadratureConfig& quad,
                          double* error_estimate) {
  layout.validate();
  env.validate();
  if (!(omega10 > 0.0)) throw std::domain_error("pole frequency must be > 0");
  if (env.dos.vanishes_at_zero())
    throw std::domain_error("dominant-pole shift assumes a constant density of states");
  if (!(quad.hilbert_window > 1.0))
    throw std::invalid_argument("hilbert_window must exceed 1 so the window contains the pole");

  const double w0 = omega10;
  const double windowed = quad.hilbert_window * w0;
  const double j0 = env.dos.value;
  const double gj = layout.mode_coupling;

  const auto numerator = [&](double w) { return j0 * std::norm(coupling_factor(w, layout)); };
  const QuadResult head =
      principal_value([](double) { return 0.0; }, {{w0, numerator}}, -windowed, windowed, quad);

  // Tails of PV int J0|A|^2/(w - w0) outside [-W, W]. |A|^2 splits into a
  // constant plus cosines; the constant integrates to a log and each cosine
  // pair to Si/Ci combinations.
  const double x = windowed - w0;
  const double y = windowed + w0;
  double const_part = 0.0;
  for (double g : layout.weights) const_part += g * g;
  double tail = j0 * gj * gj * const_part * std::log(y / x);
  const std::size_t n = layout.positions.size();
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = k + 1; l < n; ++l) {
      const double a = std::abs(layout.positions[l] - layout.positions[k]) / layout.velocity;
      const double c = 2.0 * j0 * gj * gj * layout.weights[k] * layout.weights[l];
      if (a == 0.0) {
        tail += c * std::log(y / x);
        continue;
      }
      const double osc =
          std::cos(a * w0) * (cosine_integral(a * y) - cosine_integral(a * x)) -
          std::sin(a * w0) * (pi - sine_integral(a * x) - sine_integral(a * y));
      tail += c * osc;
    }
  }

  if (error_estimate) *error_estimate = 2.0 * head.error;
  return -2.0 * (head.value + tail);
}

double level_shift(int m, const AtomSpec& atom, const CouplingLayout& layout,
                   const Environment& env, const std::optional<MirrorSpec>& mirror,
                   ShiftMode mode, const PVQuadratureConfig& quad) {
  if (mode == ShiftMode::automatic)
    mode = env.dos.vanishes_at_zero() ? ShiftMode::renormalized : ShiftMode::hilbert;
  const bool mirrored = mirror && mirror->enabled;
  if (mode == ShiftMode::hilbert) {
    if (m < 0 || m >= atom.levels) throw std::out_of_range("level index outside the ladder");
    if (m == 0) return 0.0;
    const double wd = transition_frequency(atom, m - 1);
    if (!(wd > 0.0))
      throw std::invalid_argument("transition frequency below level must be > 0");
    const ChainParams chain = chain_params(layout, env, wd);
    double b = lamb_shift_sum(chain);
    if (mirrored) b += mirror_lamb_correction(wd, layout, *mirror, env);
    return atom.g_squared(m - 1) * b;
  }
  double v = lamb_shift_renormalized(m, atom, layout, env, quad);
  if (mirrored && m >= 1) {
    const double wd = transition_frequency(atom, m - 1);
    v += atom.g_squared(m - 1) * mirror_lamb_correction(wd, layout, *mirror, env);
  }
  return v;
}

void GridSpec::validate() const {
  if (points < 1) throw std::invalid_argument("grid.points must be >= 1");
  if (!(std::isfinite(min) && std::isfinite(max)))
    throw std::invalid_argument("grid bounds must be finite");
  if (points == 1) {
    if (min > max) throw std::invalid_argument("grid.min must be <= grid.max");
  } else if (!(min < max)) {
    throw std::invalid_argument("grid.min must be < grid.max when points > 1");
  }
}

std::vector<double> GridSpec::values() const {
  validate();
  std::vector<double> v(points);
  if (points == 1) {
    v[0] = min;
    return v;
  }
  const double step = (max - min) / (points - 1);
  for (int i = 0; i < points; ++i) v[i] = min + i * step;
  v.back() = max;  // land exactly on the endpoint
  return v;
}

SpectralResponse spectrum_sweep(const CouplingLayout& layout, const AtomSpec& atom,
                                const Environment& env,
                                const std::optional<MirrorSpec>& mirror,
                                const GridSpec& grid, ShiftMode mode,
                                const PVQuadratureConfig& quad) {
  atom.validate();
  layout.validate();
  env.validate();
  grid.validate();
  if (mode == ShiftMode::automatic)
    mode = env.dos.vanishes_at_zero() ? ShiftMode::renormalized : ShiftMode::hilbert;
  if (mode == ShiftMode::hilbert && env.dos.vanishes_at_zero())
    throw std::invalid_argument("hilbert shift mode requires a constant density of states");
  if (mode == ShiftMode::renormalized && !env.dos.vanishes_at_zero())
    throw std::invalid_argument(
        "renormalized shift mode requires a density of states vanishing at omega = 0");

  const bool mirrored = mirror && mirror->enabled;
  const int transitions = atom.levels - 1;
  SpectralResponse out;
  out.grid = grid.values();
  out.rates.assign(transitions, std::vector<double>(out.grid.size()));
  out.shifts.assign(transitions, std::vector<double>(out.grid.size()));
  out.meta.shift_mode = mode;
  out.meta.mirror = mirrored;
  out.meta.hilbert_window = quad.hilbert_window;

  for (std::size_t i = 0; i < out.grid.size(); ++i) {
    const double w10 = out.grid[i];
    AtomSpec local = atom;
    local.omega10 = w10;
    // Every transition frequency must stay positive across the sweep.
    for (int m = 0; m < transitions; ++m) {
      if (!(transition_frequency(local, m) > 0.0)) {
        std::ostringstream msg;
        msg << "grid point " << i << " (omega10 = " << w10 << "): transition " << m + 1 << "->"
            << m << " frequency is not positive";
        throw std::domain_error(msg.str());
      }
    }
    for (int m = 0; m < transitions; ++m) {
      const double wm = transition_frequency(local, m);
      const double base = mirrored ? mirror_rate(wm, layout, *mirror, env)
                                   : 2.0 * two_pi * env.dos(wm) *
                                         std::norm(coupling_factor(wm, layout));
      out.rates[m][i] = local.g_squared(m) * base;
    }
    try {
      double prev = level_shift(0, local, layout, env, mirror, mode, quad);
      for (int m = 0; m < transitions; ++m) {
        const double next = level_shift(m + 1, local, layout, env, mirror, mode, quad);
        out.shifts[m][i] = next - prev;
        prev = next;
      }
    } catch (const QuadratureError& e) {
      std::ostringstream msg;
      msg << "shift integral failed at grid point " << i << " (omega10 = " << w10
          << "): " << e.what();
      throw QuadratureError(msg.str(), e.achieved, e.requested);
    }
  }

  std::ostringstream digest;
  digest << "sweep[" << out.grid.size() << "] mode="
         << (mode == ShiftMode::hilbert ? "hilbert" : "renormalized")
         << (mirrored ? " mirror" : "");
  out.meta.digest = digest.str();
  return out;
}

}  // namespace giantatom::spectral
