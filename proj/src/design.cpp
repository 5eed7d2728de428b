#include "giantatom/design.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "giantatom/dynamics.hpp"
#include "giantatom/spectral.hpp"

namespace giantatom::design {

namespace {

// Uniform double in [0, 1) straight from the generator's bits so restart
// jitter is identical across standard libraries.
double uniform01(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

// theta = [w_0..w_{N-1}, gap_1..gap_{N-1}]; reflection keeps the landscape
// continuous at the w = 0 boundary, gaps clamp into their box.
CouplingLayout decode(const std::vector<double>& theta, int n, const FitBounds& bounds) {
  CouplingLayout layout;
  layout.weights.resize(n);
  layout.positions.resize(n);
  for (int i = 0; i < n; ++i)
    layout.weights[i] = std::min(std::abs(theta[i]), bounds.weight_max);
  double x = 0.0;
  layout.positions[0] = 0.0;
  for (int i = 1; i < n; ++i) {
    const double gap = std::clamp(std::abs(theta[n + i - 1]), bounds.gap_min, bounds.gap_max);
    x += gap;
    layout.positions[i] = x;
  }
  return layout;
}

struct SimplexResult {
  std::vector<double> x;
  double f = 0.0;
  int iterations = 0;
};

// Standard Nelder-Mead (reflect 1, expand 2, contract 1/2, shrink 1/2).
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> x0, int max_iter) {
  const int d = int(x0.size());
  std::vector<std::vector<double>> xs(d + 1, x0);
  for (int i = 0; i < d; ++i) xs[i + 1][i] += 0.15 * std::max(std::abs(x0[i]), 0.1);
  std::vector<double> fs(d + 1);
  for (int i = 0; i <= d; ++i) fs[i] = f(xs[i]);

  std::vector<int> order(d + 1);
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fs[a] < fs[b]; });
    const int best = order[0], worst = order[d], second = order[d - 1];
    if (fs[worst] - fs[best] <= 1e-14 * (std::abs(fs[best]) + 1e-14)) break;

    std::vector<double> centroid(d, 0.0);
    for (int i = 0; i <= d; ++i) {
      if (i == worst) continue;
      for (int j = 0; j < d; ++j) centroid[j] += xs[i][j];
    }
    for (double& c : centroid) c /= d;

    const auto blend = [&](double t) {  // centroid + t*(centroid - worst)
      std::vector<double> p(d);
      for (int j = 0; j < d; ++j) p[j] = centroid[j] + t * (centroid[j] - xs[worst][j]);
      return p;
    };

    std::vector<double> xr = blend(1.0);
    const double fr = f(xr);
    if (fr < fs[order[0]]) {
      std::vector<double> xe = blend(2.0);
      const double fe = f(xe);
      if (fe < fr) {
        xs[worst] = std::move(xe);
        fs[worst] = fe;
      } else {
        xs[worst] = std::move(xr);
        fs[worst] = fr;
      }
      continue;
    }
    if (fr < fs[second]) {
      xs[worst] = std::move(xr);
      fs[worst] = fr;
      continue;
    }
    std::vector<double> xc = fr < fs[worst] ? blend(0.5) : blend(-0.5);
    const double fc = f(xc);
    if (fc < std::min(fr, fs[worst])) {
      xs[worst] = std::move(xc);
      fs[worst] = fc;
      continue;
    }
    for (int i = 0; i <= d; ++i) {  // shrink toward the best vertex
      if (i == best) continue;
      for (int j = 0; j < d; ++j) xs[i][j] = xs[best][j] + 0.5 * (xs[i][j] - xs[best][j]);
      fs[i] = f(xs[i]);
    }
  }
  const int best = int(std::min_element(fs.begin(), fs.end()) - fs.begin());
  return {xs[best], fs[best], iter};
}

CouplingLayout symmetric_layout(int n, double mode_coupling) {
  CouplingLayout layout;
  layout.positions.resize(n);
  layout.weights.assign(n, 1.0);
  for (int i = 0; i < n; ++i) layout.positions[i] = double(i);
  layout.velocity = 1.0;
  layout.mode_coupling = mode_coupling;
  return layout;
}

// Weak coupling so the secular picture holds: single-point rate 1e-4 in the
// natural unit 2*pi.
constexpr double kScenarioModeCoupling = 0.01;

Environment scenario_environment(double omega10) {
  Environment env;
  env.dos = {DensityOfStates::Model::constant, 1.0 / (2.0 * two_pi)};
  env.temperature = 0.0;
  env.cutoff = 20.0 * omega10;
  return env;
}

double scenario_gamma_single(const CouplingLayout& layout, const Environment& env) {
  const double gj = layout.mode_coupling;
  return 2.0 * two_pi * gj * gj * env.dos.value;
}

}  // namespace

void DesignTarget::validate() const {
  if (omega.empty()) throw std::invalid_argument("target.omega must be nonempty");
  if (omega.size() != rate.size())
    throw std::invalid_argument("target.rate must match target.omega in length");
  if (!weight.empty() && weight.size() != omega.size())
    throw std::invalid_argument("target.weight must match target.omega in length");
  for (std::size_t i = 1; i < omega.size(); ++i)
    if (!(omega[i] > omega[i - 1]))
      throw std::invalid_argument("target.omega must be strictly increasing");
  for (double w : omega)
    if (!(w > 0.0)) throw std::invalid_argument("target.omega must be > 0");
  for (double r : rate)
    if (!(r >= 0.0)) throw std::invalid_argument("target.rate must be >= 0");
  for (double w : weight)
    if (!(w >= 0.0)) throw std::invalid_argument("target.weight must be >= 0");
}

double evaluate_objective(const CouplingLayout& layout, const DesignTarget& target) {
  layout.validate();
  target.validate();
  const std::size_t n = target.omega.size();
  std::vector<double> gamma(n);
  for (std::size_t i = 0; i < n; ++i)
    gamma[i] = spectral::relaxation_rate(target.omega[i], 0, layout, target.env);

  const auto wt = [&](std::size_t i) { return target.weight.empty() ? 1.0 : target.weight[i]; };
  double scale = 1.0;
  if (target.normalization == DesignTarget::Normalization::shape) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      num += wt(i) * gamma[i] * target.rate[i];
      den += wt(i) * target.rate[i] * target.rate[i];
    }
    scale = den > 0.0 ? num / den : 0.0;
  }
  double residual = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = gamma[i] - scale * target.rate[i];
    residual += wt(i) * d * d;
  }
  return residual;
}

DesignResult fit_layout(const DesignTarget& target, int n_points, const FitBounds& bounds,
                        std::uint64_t seed, int restarts) {
  target.validate();
  if (n_points < 1) throw std::invalid_argument("fit needs at least one point");
  if (restarts < 1) throw std::invalid_argument("fit needs at least one restart");
  if (!(bounds.weight_max > 0.0) || !(bounds.gap_min > 0.0) ||
      !(bounds.gap_max >= bounds.gap_min))
    throw std::invalid_argument("fit bounds must satisfy 0 < gap_min <= gap_max, weight_max > 0");

  // Symmetric start matched to the target: spacing resonant at mid-grid,
  // weights sized so the aligned maximum meets the target peak.
  const double w_mid = target.omega[target.omega.size() / 2];
  const double gap0 = std::clamp(two_pi / w_mid, bounds.gap_min, bounds.gap_max);
  const double peak = *std::max_element(target.rate.begin(), target.rate.end());
  const double j_mid = std::max(target.env.dos(w_mid), 1e-300);
  const double w0 = std::clamp(
      std::sqrt(std::max(peak, 1e-12) / (2.0 * two_pi * j_mid)) / n_points,
      1e-3, bounds.weight_max);

  const int dim = 2 * n_points - 1;
  const auto objective = [&](const std::vector<double>& theta) {
    return evaluate_objective(decode(theta, n_points, bounds), target);
  };

  DesignResult best;
  double best_f = std::numeric_limits<double>::infinity();
  int total_iter = 0;
  bool any_improved = false;
  for (int r = 0; r < restarts; ++r) {
    std::vector<double> theta(dim);
    for (int i = 0; i < n_points; ++i) theta[i] = w0;
    for (int i = n_points; i < dim; ++i) theta[i] = gap0;
    if (r > 0) {
      std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * std::uint64_t(r));
      for (int i = 0; i < n_points; ++i) theta[i] *= 0.5 + 1.5 * uniform01(rng);
      for (int i = n_points; i < dim; ++i) theta[i] *= 0.6 + 0.8 * uniform01(rng);
    }
    const double f_start = objective(theta);
    SimplexResult res = nelder_mead(objective, theta, 400 * dim);
    total_iter += res.iterations;
    if (res.f < 0.99 * f_start || res.f == 0.0) any_improved = true;
    if (res.f < best_f) {
      best_f = res.f;
      best.layout = decode(res.x, n_points, bounds);
      best.restart = r;
    }
  }
  best.residual = best_f;
  best.iterations = total_iter;
  // Stagnation means nothing moved and the fit is genuinely bad, not that the
  // start was already optimal.
  double target_norm = 0.0;
  for (std::size_t i = 0; i < target.rate.size(); ++i) {
    const double w = target.weight.empty() ? 1.0 : target.weight[i];
    target_norm += w * target.rate[i] * target.rate[i];
  }
  best.stagnated = !any_improved && best_f > 1e-12 * std::max(target_norm, 1e-300);
  return best;
}

CouplingLayout preset_fig3(const std::string& name) {
  CouplingLayout layout;
  layout.velocity = 1.0;
  layout.mode_coupling = 1.0;
  if (name == "two-maxima") {
    layout.positions = {0.0, 1.0, 1.5, 3.0};
    layout.weights = {1.0, 1.0, 1.0, 1.0};
  } else if (name == "flat-maximum") {
    layout.positions = {0.0, 1.0, 2.0, 3.5};
    layout.weights = {1.0, 3.0, 3.0, 1.0};
  } else if (name == "shallow-minima") {
    layout.positions = {0.0, 1.0, 2.0, 3.0};
    layout.weights = {1.0, 4.0, 4.0, 1.0};
  } else {
    throw std::invalid_argument(
        "unknown preset '" + name + "'; expected two-maxima, flat-maximum or shallow-minima");
  }
  return layout;
}

InversionReport scenario_inversion(int n) {
  if (n < 2) throw std::invalid_argument("scenario needs a symmetric layout with n >= 2");
  InversionReport rep;
  rep.n = n;
  const CouplingLayout layout = symmetric_layout(n, kScenarioModeCoupling);
  rep.natural_unit = layout.natural_scale();
  rep.alpha = -0.1 * rep.natural_unit;

  AtomSpec atom;
  atom.levels = 3;
  atom.omega10 = 1.1 * rep.natural_unit;
  atom.anharmonicity = rep.alpha;
  rep.omega_10 = transition_frequency(atom, 0);
  rep.omega_21 = transition_frequency(atom, 1);

  const Environment env = scenario_environment(atom.omega10);
  rep.gamma_single = scenario_gamma_single(layout, env);
  rep.gamma_10 = spectral::symmetric_rate(rep.gamma_single, n, rep.omega_10);
  rep.gamma_21 = 2.0 * spectral::symmetric_rate(rep.gamma_single, n, rep.omega_21);

  // Undriven row: the ground state is stationary by inspection (nothing pumps
  // upward at T = 0); the solver is not asked to separate it from the
  // metastable level-1 state behind the interference-suppressed 1->0 rate.
  const auto gen0 = dynamics::build_generator(atom, layout, env);
  rep.warnings = gen0.warnings;
  const auto ground = dynamics::DensityMatrix::level(3, 0);
  if (gen0.apply(ground.rho).cwiseAbs().maxCoeff() > 1e-12)
    throw std::logic_error("undriven ground state failed the stationarity check");
  rep.drive.push_back(0.0);
  rep.populations.push_back({1.0, 0.0, 0.0});
  rep.inverted.push_back(false);

  for (int k = 0; k < 9; ++k) {
    const double amp = rep.gamma_21 * std::pow(10.0, -2.0 + 0.5 * k);
    dynamics::DriveSpec drive;
    drive.amplitude = amp;
    drive.lower = 0;
    drive.upper = 2;
    const auto gen = dynamics::build_generator(atom, layout, env, {}, drive);
    const auto steady = dynamics::steady_state(gen);
    const auto pops = dynamics::populations(steady);
    rep.drive.push_back(amp);
    rep.populations.push_back({pops[0], pops[1], pops[2]});
    rep.inverted.push_back(pops[1] > pops[0]);
  }
  return rep;
}

MultiphotonReport scenario_multiphoton(int n) {
  if (n < 2) throw std::invalid_argument("scenario needs a symmetric layout with n >= 2");
  MultiphotonReport rep;
  rep.n = n;
  const CouplingLayout layout = symmetric_layout(n, kScenarioModeCoupling);
  rep.natural_unit = layout.natural_scale();
  rep.alpha = -0.2 * rep.natural_unit;

  AtomSpec atom;
  atom.levels = 3;
  atom.omega10 = 1.1 * rep.natural_unit;
  atom.anharmonicity = rep.alpha;
  rep.omega_10 = transition_frequency(atom, 0);
  rep.omega_21 = transition_frequency(atom, 1);

  const Environment env = scenario_environment(atom.omega10);
  rep.gamma_single = scenario_gamma_single(layout, env);
  rep.gamma_10 = spectral::symmetric_rate(rep.gamma_single, n, rep.omega_10);
  rep.gamma_21 = 2.0 * spectral::symmetric_rate(rep.gamma_single, n, rep.omega_21);

  const double half = 0.5 * level_energy(atom, 2);  // two-photon frequency
  rep.coupling_half = std::norm(spectral::coupling_factor(half, layout));
  const double gj = layout.mode_coupling;
  double weight_sum = 0.0;
  for (double g : layout.weights) weight_sum += g;
  rep.coupling_max = gj * gj * weight_sum * weight_sum;
  rep.at_maximum = rep.coupling_half >= (1.0 - 1e-12) * rep.coupling_max;
  rep.ideal = rep.gamma_10 == 0.0 && rep.gamma_21 == 0.0;
  return rep;
}

AnharmonicityReport scenario_anharmonicity(int n) {
  if (n < 2) throw std::invalid_argument("scenario needs a symmetric layout with n >= 2");
  AnharmonicityReport rep;
  rep.n = n;
  const CouplingLayout layout = symmetric_layout(n, kScenarioModeCoupling);
  rep.natural_unit = layout.natural_scale();
  rep.alpha = -0.1 * rep.natural_unit;
  const Environment env = scenario_environment(rep.natural_unit);
  rep.gamma_single = scenario_gamma_single(layout, env);
  rep.shift_mode = "hilbert";  // dominant-pole sum form, per level, g_m^2 weighted

  const int points = 201;
  const double lo = 0.9 * rep.natural_unit;
  const double hi = 1.1 * rep.natural_unit;
  bool seen_pos = false, seen_neg = false;
  for (int i = 0; i < points; ++i) {
    const double w10 = lo + (hi - lo) * i / (points - 1);
    const double w21 = w10 + rep.alpha;
    // phi = omega * dx / v with unit spacing.
    const double d1 = spectral::symmetric_lamb(rep.gamma_single, n, w10);
    const double d2 = 2.0 * spectral::symmetric_lamb(rep.gamma_single, n, w21) - d1;
    const double change = d2 - d1;
    rep.omega_10.push_back(w10);
    rep.phi_over_2pi.push_back(w10 / rep.natural_unit);
    rep.delta_10.push_back(d1);
    rep.delta_21.push_back(d2);
    rep.change.push_back(change);
    rep.valid.push_back(std::abs(change) <= 0.1 * std::abs(rep.alpha));
    if (change > 0.0) seen_pos = true;
    if (change < 0.0) seen_neg = true;
  }
  rep.sign_change = seen_pos && seen_neg;
  return rep;
}

}  // namespace giantatom::design
