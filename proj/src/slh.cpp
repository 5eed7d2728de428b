#include "giantatom/slh.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace giantatom::slh {

namespace {

using Complex = std::complex<double>;
constexpr Complex kHalfI{0.0, 0.5};

Operator zero_op(int dim) { return Operator::Zero(dim, dim); }

// One coupling point: unit scattering, L = sqrt(gamma/2) * lower.
SLHTriplet element(double gamma, const Operator& lower, const Operator& h) {
  SLHTriplet g;
  g.S = Eigen::MatrixXcd::Identity(1, 1);
  g.L = {std::sqrt(0.5 * gamma) * lower};
  g.H = h;
  return g;
}

// Cascade the points left to right: the running network passes through the
// inter-point phase, is laid next to the new point, and its output is fed
// into the new point's input.
SLHTriplet cascade(const std::vector<double>& gamma, const std::vector<double>& phi,
                   const Operator& lower, const Operator& h_first) {
  const int dim = int(lower.rows());
  SLHTriplet g = element(gamma[0], lower, h_first);
  for (std::size_t k = 1; k < gamma.size(); ++k) {
    const SLHTriplet moved = series(phase_triplet(phi[k - 1], dim), g);
    const SLHTriplet side = concat(moved, element(gamma[k], lower, zero_op(dim)));
    g = feedback(side, 1, 2);
  }
  return g;
}

void strip_trace(Operator& h) {
  const Complex mean = h.trace() / double(h.rows());
  h -= mean * Operator::Identity(h.rows(), h.cols());
}

}  // namespace

void SLHTriplet::validate(double tol) const {
  if (S.rows() != S.cols()) throw std::invalid_argument("scattering matrix must be square");
  if (int(L.size()) != channels())
    throw std::invalid_argument("coupling vector length must match channel count");
  if (H.rows() != H.cols()) throw std::invalid_argument("Hamiltonian must be square");
  for (const Operator& l : L) {
    if (l.rows() != H.rows() || l.cols() != H.cols())
      throw std::invalid_argument("coupling operators must act on the system space");
  }
  const Eigen::MatrixXcd gram = S.adjoint() * S;
  const double unitary_defect =
      (gram - Eigen::MatrixXcd::Identity(S.rows(), S.cols())).cwiseAbs().maxCoeff();
  if (unitary_defect > tol)
    throw std::invalid_argument("scattering matrix must be unitary");
  const double herm_defect = (H - H.adjoint()).cwiseAbs().maxCoeff();
  if (herm_defect > tol * std::max(1.0, H.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("Hamiltonian must be Hermitian");
}

SLHTriplet phase_triplet(double phi, int dim) {
  SLHTriplet g;
  g.S = Eigen::MatrixXcd::Constant(1, 1, Complex(std::cos(phi), std::sin(phi)));
  g.L = {zero_op(dim)};
  g.H = zero_op(dim);
  return g;
}

SLHTriplet identity_triplet(int channels, int dim) {
  if (channels < 1) throw std::invalid_argument("channel count must be >= 1");
  SLHTriplet g;
  g.S = Eigen::MatrixXcd::Identity(channels, channels);
  g.L.assign(channels, zero_op(dim));
  g.H = zero_op(dim);
  return g;
}

SLHTriplet series(const SLHTriplet& g2, const SLHTriplet& g1) {
  if (g1.channels() != g2.channels())
    throw std::invalid_argument("series requires equal channel counts");
  if (g1.dim() != g2.dim())
    throw std::invalid_argument("series requires a shared system space");
  const int n = g1.channels();
  SLHTriplet out;
  out.S = g2.S * g1.S;
  out.L.reserve(n);
  for (int i = 0; i < n; ++i) {
    Operator li = g2.L[i];
    for (int j = 0; j < n; ++j) li += g2.S(i, j) * g1.L[j];
    out.L.push_back(std::move(li));
  }
  Operator k = zero_op(g1.dim());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) k += g2.S(i, j) * (g2.L[i].adjoint() * g1.L[j]);
  out.H = g1.H + g2.H - kHalfI * (k - k.adjoint());
  return out;
}

SLHTriplet concat(const SLHTriplet& g2, const SLHTriplet& g1) {
  if (g1.dim() != g2.dim())
    throw std::invalid_argument("concatenation requires a shared system space");
  const int n2 = g2.channels();
  const int n1 = g1.channels();
  SLHTriplet out;
  out.S = Eigen::MatrixXcd::Zero(n1 + n2, n1 + n2);
  out.S.topLeftCorner(n2, n2) = g2.S;
  out.S.bottomRightCorner(n1, n1) = g1.S;
  out.L = g2.L;
  out.L.insert(out.L.end(), g1.L.begin(), g1.L.end());
  out.H = g1.H + g2.H;
  return out;
}

SLHTriplet feedback(const SLHTriplet& g, int out_port, int in_port) {
  const int n = g.channels();
  if (out_port < 1 || out_port > n || in_port < 1 || in_port > n)
    throw std::invalid_argument("feedback ports must lie in 1..channels");
  if (n < 2) throw std::invalid_argument("feedback requires at least 2 channels");
  const int k = out_port - 1;
  const int l = in_port - 1;
  const Complex loop = Complex(1.0, 0.0) - g.S(k, l);
  if (std::abs(loop) < 1e-12)
    throw std::runtime_error("feedback loop is singular: 1 - S_kl is not invertible");
  const Complex inv = 1.0 / loop;

  std::vector<int> rows, cols;
  for (int i = 0; i < n; ++i)
    if (i != k) rows.push_back(i);
  for (int j = 0; j < n; ++j)
    if (j != l) cols.push_back(j);

  SLHTriplet out;
  out.S = Eigen::MatrixXcd::Zero(n - 1, n - 1);
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b)
      out.S(a, b) = g.S(rows[a], cols[b]) + g.S(rows[a], l) * inv * g.S(k, cols[b]);
  out.L.reserve(rows.size());
  for (int i : rows) out.L.push_back(g.L[i] + g.S(i, l) * inv * g.L[k]);
  Operator kk = zero_op(g.dim());
  for (int j = 0; j < n; ++j) kk += (g.S(j, l) * inv) * (g.L[j].adjoint() * g.L[k]);
  out.H = g.H - kHalfI * (kk - kk.adjoint());
  return out;
}

SLHTriplet build_giant_atom(const ChainParams& chain, double detuning) {
  const std::size_t n = chain.gamma.size();
  if (n == 0) throw std::invalid_argument("chain must have at least one point");
  if (chain.phi.size() + 1 != n)
    throw std::invalid_argument("chain needs one phase per adjacent point pair");
  for (double g : chain.gamma)
    if (!(g >= 0.0)) throw std::invalid_argument("chain rates must be >= 0");

  Operator lower = zero_op(2);
  lower(0, 1) = 1.0;
  Operator hz = zero_op(2);
  hz(0, 0) = -0.5 * detuning;
  hz(1, 1) = 0.5 * detuning;

  const SLHTriplet right = cascade(chain.gamma, chain.phi, lower, hz);
  std::vector<double> rg(chain.gamma.rbegin(), chain.gamma.rend());
  std::vector<double> rp(chain.phi.rbegin(), chain.phi.rend());
  const SLHTriplet left = cascade(rg, rp, lower, zero_op(2));

  SLHTriplet out = concat(right, left);
  strip_trace(out.H);
  return out;
}

SLHTriplet build_giant_atom(const AtomSpec& atom, const CouplingLayout& layout,
                            const Environment& env, double detuning) {
  atom.validate();
  layout.validate();
  env.validate();
  const int levels = atom.levels;
  const double pump = atom.omega10 - detuning;  // frame frequency per excitation

  Operator h_atom = zero_op(levels);
  for (int j = 0; j < levels; ++j) h_atom(j, j) = level_energy(atom, j) - j * pump;

  SLHTriplet out;
  bool first = true;
  for (int m = 0; m < levels - 1; ++m) {
    const double wm = transition_frequency(atom, m);
    if (!(wm > 0.0))
      throw std::invalid_argument("all transition frequencies must be positive");
    ChainParams chain = chain_params(layout, env, wm);
    const double scale = atom.g_squared(m);
    for (double& g : chain.gamma) g *= scale;

    Operator lower = zero_op(levels);
    lower(m, m + 1) = 1.0;
    const SLHTriplet right =
        cascade(chain.gamma, chain.phi, lower, first ? h_atom : zero_op(levels));
    std::vector<double> rg(chain.gamma.rbegin(), chain.gamma.rend());
    std::vector<double> rp(chain.phi.rbegin(), chain.phi.rend());
    const SLHTriplet left = cascade(rg, rp, lower, zero_op(levels));
    const SLHTriplet pair = concat(right, left);
    out = first ? pair : concat(out, pair);
    first = false;
  }
  strip_trace(out.H);
  return out;
}

SLHTriplet attach_mirror(const SLHTriplet& g, double phase) {
  if (g.channels() != 2)
    throw std::invalid_argument("mirror attachment requires exactly 2 channels");
  const SLHTriplet closure = concat(phase_triplet(phase, g.dim()), identity_triplet(1, g.dim()));
  return feedback(series(closure, g), 1, 2);
}

dynamics::LindbladGenerator to_master_equation(const SLHTriplet& g) {
  g.validate();
  dynamics::LindbladGenerator gen;
  gen.hamiltonian = g.H;
  gen.channels.reserve(g.L.size());
  for (const Operator& l : g.L) gen.channels.emplace_back(1.0, l);
  return gen;
}

RateShift rate_and_shift_from_triplet(const SLHTriplet& g, double detuning) {
  if (g.dim() != 2)
    throw std::invalid_argument("rate extraction requires a two-level system");
  double rate = 0.0;
  for (const Operator& l : g.L) {
    const double scale = l.cwiseAbs().maxCoeff();
    const double tol = 1e-12 * std::max(1.0, scale);
    if (std::abs(l(0, 0)) > tol || std::abs(l(1, 0)) > tol || std::abs(l(1, 1)) > tol)
      throw std::invalid_argument("coupling operators must be proportional to sigma_minus");
    rate += std::norm(l(0, 1));
  }
  const double hscale = g.H.cwiseAbs().maxCoeff();
  if (std::abs(g.H(0, 1)) > 1e-12 * std::max(1.0, hscale))
    throw std::invalid_argument("Hamiltonian must be diagonal to read off a level splitting");
  const double shift = (g.H(1, 1) - g.H(0, 0)).real() - detuning;
  return {rate, shift};
}

}  // namespace giantatom::slh
