#include "giantatom/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace giantatom::dynamics {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Weighted RMS over matrix entries with per-entry scale atol + rtol*|y|.
double error_norm(const Operator& err, const Operator& y0, const Operator& y1,
                  double atol, double rtol) {
  double acc = 0.0;
  const auto n = err.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sc = atol + rtol * std::max(std::abs(y0(i)), std::abs(y1(i)));
    const double e = std::abs(err(i)) / sc;
    acc += e * e;
  }
  return std::sqrt(acc / double(n));
}

}  // namespace

DensityMatrix DensityMatrix::level(int levels, int m) {
  if (levels < 1) throw std::invalid_argument("state space needs at least one level");
  if (m < 0 || m >= levels) throw std::out_of_range("level index outside the ladder");
  DensityMatrix st;
  st.rho = Eigen::MatrixXcd::Zero(levels, levels);
  st.rho(m, m) = 1.0;
  return st;
}

void DensityMatrix::validate(double herm_tol, double trace_tol, double eig_tol) const {
  if (rho.rows() != rho.cols() || rho.rows() < 1)
    throw std::invalid_argument("density matrix must be square and nonempty");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > herm_tol)
    throw std::invalid_argument("density matrix must be Hermitian");
  if (std::abs(rho.trace() - std::complex<double>(1.0)) > trace_tol)
    throw std::invalid_argument("density matrix must have unit trace");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (rho + rho.adjoint()));
  if (es.eigenvalues().minCoeff() < -eig_tol)
    throw std::invalid_argument("density matrix must be positive semidefinite");
}

void LindbladGenerator::validate() const {
  if (hamiltonian.rows() != hamiltonian.cols() || hamiltonian.rows() < 1)
    throw std::invalid_argument("Hamiltonian must be square and nonempty");
  const double scale = std::max(1.0, hamiltonian.cwiseAbs().maxCoeff());
  if ((hamiltonian - hamiltonian.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("Hamiltonian must be Hermitian");
  for (const auto& [rate, op] : channels) {
    if (!(rate >= 0.0)) throw std::invalid_argument("channel rates must be >= 0");
    if (op.rows() != hamiltonian.rows() || op.cols() != hamiltonian.cols())
      throw std::invalid_argument("jump operators must act on the system space");
  }
}

Operator LindbladGenerator::apply(const Operator& rho) const {
  const std::complex<double> mi(0.0, -1.0);
  Operator out = mi * (hamiltonian * rho - rho * hamiltonian);
  for (const auto& [rate, op] : channels) {
    if (rate == 0.0) continue;
    const Operator m = op.adjoint() * op;
    out += rate * (op * rho * op.adjoint() - 0.5 * (m * rho + rho * m));
  }
  return out;
}

Eigen::MatrixXcd LindbladGenerator::liouvillian() const {
  const int d = dim();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
  const std::complex<double> mi(0.0, -1.0);
  Eigen::MatrixXcd out =
      mi * (kron(id, hamiltonian) - kron(hamiltonian.transpose(), id));
  for (const auto& [rate, op] : channels) {
    if (rate == 0.0) continue;
    const Eigen::MatrixXcd m = op.adjoint() * op;
    out += rate * (kron(op.conjugate(), op) - 0.5 * kron(id, m) -
                   0.5 * kron(m.transpose(), id));
  }
  return out;
}

void DriveSpec::validate(int levels) const {
  if (!(amplitude >= 0.0)) throw std::invalid_argument("drive.amplitude must be >= 0");
  if (lower < 0 || upper >= levels || lower >= upper)
    throw std::invalid_argument("drive pair must satisfy 0 <= lower < upper < levels");
}

LindbladGenerator build_generator(const AtomSpec& atom, const CouplingLayout& layout,
                                  const Environment& env,
                                  const std::optional<MirrorSpec>& mirror,
                                  const std::optional<DriveSpec>& drive,
                                  spectral::ShiftMode mode,
                                  const PVQuadratureConfig& quad) {
  atom.validate();
  layout.validate();
  env.validate();
  const int levels = atom.levels;
  const bool mirrored = mirror && mirror->enabled;
  const double temp = env.temperature;

  LindbladGenerator gen;
  gen.hamiltonian = Eigen::MatrixXcd::Zero(levels, levels);

  std::vector<double> total_rate(levels - 1, 0.0);
  for (int m = 0; m < levels - 1; ++m) {
    const double wm = transition_frequency(atom, m);
    if (!(wm > 0.0))
      throw std::invalid_argument("all transition frequencies must be positive");
    const double base = mirrored ? spectral::mirror_rate(wm, layout, *mirror, env)
                                 : spectral::relaxation_rate(wm, 0, layout, env);
    const double rate = atom.g_squared(m) * base;
    const double nbar = temp > 0.0 ? thermal_occupation(wm, temp) : 0.0;
    total_rate[m] = rate * (1.0 + 2.0 * nbar);

    Operator down = Eigen::MatrixXcd::Zero(levels, levels);
    down(m, m + 1) = 1.0;
    if (rate * (1.0 + nbar) > 0.0) gen.channels.emplace_back(rate * (1.0 + nbar), down);
    if (rate * nbar > 0.0)
      gen.channels.emplace_back(rate * nbar, Operator(down.adjoint()));
  }

  // Level energies with shifts; drive moves to its rotating frame.
  std::vector<double> energy(levels);
  for (int j = 0; j < levels; ++j)
    energy[j] = level_energy(atom, j) +
                spectral::level_shift(j, atom, layout, env, mirror, mode, quad);
  if (drive) {
    drive->validate(levels);
    const int p = drive->lower;
    const int q = drive->upper;
    const double per_quantum = (energy[q] - energy[p] - drive->detuning) / (q - p);
    for (int j = 0; j < levels; ++j)
      gen.hamiltonian(j, j) = energy[j] - (energy[p] + (j - p) * per_quantum);
    gen.hamiltonian(p, q) += 0.5 * drive->amplitude;
    gen.hamiltonian(q, p) += 0.5 * drive->amplitude;
  } else {
    for (int j = 0; j < levels; ++j) gen.hamiltonian(j, j) = energy[j];
  }

  if (levels > 2) {
    const double alpha = std::abs(atom.anharmonicity);
    for (int m = 0; m < levels - 1; ++m) {
      if (total_rate[m] >= alpha) {
        std::ostringstream msg;
        msg << "secular approximation strained: total rate " << total_rate[m]
            << " for transition " << m + 1 << "->" << m
            << " is not small against the anharmonicity " << alpha;
        gen.warnings.push_back(msg.str());
        break;
      }
    }
  }
  return gen;
}

Trajectory evolve(const LindbladGenerator& gen, const DensityMatrix& rho0,
                  const std::vector<double>& times, const EvolveOptions& opts) {
  gen.validate();
  rho0.validate();
  if (rho0.dim() != gen.dim())
    throw std::invalid_argument("initial state dimension must match the generator");
  if (times.empty()) throw std::invalid_argument("output times must be nonempty");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw std::invalid_argument("output times must be strictly increasing");

  Trajectory traj;
  traj.times = times;
  traj.states.reserve(times.size());
  const auto emit = [&traj](const Operator& rho) {
    DensityMatrix st;
    st.rho = 0.5 * (rho + rho.adjoint());
    traj.states.push_back(std::move(st));
  };
  emit(rho0.rho);
  if (times.size() == 1) return traj;

  // Dormand-Prince 5(4) coefficients (autonomous system, no c abscissae needed).
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                      a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                      a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1905,
                      e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  double t = times.front();
  const double t_end = times.back();
  Operator y = rho0.rho;
  Operator f = gen.apply(y);

  // Initial step from the scaled sizes of the state and its derivative.
  double h;
  {
    const double d0 = error_norm(y, y, y, opts.abs_tol, opts.rel_tol);
    const double d1 = error_norm(f, y, y, opts.abs_tol, opts.rel_tol);
    h = (d1 > 1e-30) ? 0.01 * d0 / d1 : 1e-6 * (t_end - t);
    h = std::min(h, t_end - t);
    if (!(h > 0.0)) h = 1e-6 * (t_end - t);
  }

  std::size_t next_out = 1;
  for (int step = 0; step < opts.max_steps; ++step) {
    if (next_out >= times.size()) break;
    h = std::min(h, t_end - t);
    if (h <= 16.0 * kEps * std::max(std::abs(t), 1.0)) {
      std::ostringstream msg;
      msg << "step size underflow at t = " << t << " (h = " << h
          << "); the generator is too stiff for the requested tolerance";
      throw std::runtime_error(msg.str());
    }

    const Operator k1 = f;
    const Operator k2 = gen.apply(y + h * (a21 * k1));
    const Operator k3 = gen.apply(y + h * (a31 * k1 + a32 * k2));
    const Operator k4 = gen.apply(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Operator k5 = gen.apply(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Operator k6 =
        gen.apply(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Operator y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Operator k7 = gen.apply(y_new);
    const Operator err_mat =
        h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double err = error_norm(err_mat, y, y_new, opts.abs_tol, opts.rel_tol);

    if (err <= 1.0) {
      const double t_new = t + h;
      // Cubic Hermite dense output for every requested time inside the step.
      while (next_out < times.size() && times[next_out] <= t_new + 1e-12 * std::abs(t_new)) {
        const double th = (times[next_out] - t) / h;
        const double h00 = (1.0 + 2.0 * th) * (1.0 - th) * (1.0 - th);
        const double h10 = th * (1.0 - th) * (1.0 - th);
        const double h01 = th * th * (3.0 - 2.0 * th);
        const double h11 = th * th * (th - 1.0);
        emit(h00 * y + (h10 * h) * k1 + h01 * y_new + (h11 * h) * k7);
        ++next_out;
      }
      t = t_new;
      y = y_new;
      f = k7;  // first-same-as-last
      const double grow = err > 1e-30 ? 0.9 * std::pow(err, -0.2) : 5.0;
      h *= std::clamp(grow, 0.2, 5.0);
    } else {
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
    }
  }
  if (next_out < times.size())
    throw std::runtime_error("time evolution exceeded the step budget");
  return traj;
}

DensityMatrix steady_state(const LindbladGenerator& gen) {
  gen.validate();
  const int d = gen.dim();
  const Eigen::MatrixXcd liou = gen.liouvillian();

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(liou);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double tol = 1e-10 * std::max(smax, 1e-300);
  int nullity = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) <= tol) ++nullity;
  if (nullity != 1) {
    std::ostringstream msg;
    msg << "stationary state is not unique: Liouvillian kernel dimension is " << nullity;
    throw std::runtime_error(msg.str());
  }

  // Solve L x = 0 with the trace condition replacing the first row.
  Eigen::MatrixXcd a = liou;
  a.row(0).setZero();
  for (int i = 0; i < d; ++i) a(0, i * (d + 1)) = 1.0;
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(d * d);
  b(0) = 1.0;
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(a);
  if (!lu.isInvertible())
    throw std::runtime_error("stationary system is singular after adding the trace row");
  const Eigen::VectorXcd x = lu.solve(b);

  DensityMatrix st;
  st.rho = Eigen::Map<const Eigen::MatrixXcd>(x.data(), d, d);
  st.rho = 0.5 * (st.rho + st.rho.adjoint().eval());
  const double residual = gen.apply(st.rho).cwiseAbs().maxCoeff();
  if (residual > 1e-10 * std::max(1.0, smax))
    throw std::runtime_error("stationary solve did not converge");
  st.validate();
  return st;
}

std::vector<double> populations(const DensityMatrix& state) {
  std::vector<double> p(state.dim());
  for (int i = 0; i < state.dim(); ++i) p[i] = state.rho(i, i).real();
  return p;
}

}  // namespace giantatom::dynamics
