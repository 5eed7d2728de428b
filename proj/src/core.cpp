#include "giantatom/core.hpp"

#include <cmath>
#include <stdexcept>

namespace giantatom {

void AtomSpec::validate() const {
  if (levels < 2) throw std::invalid_argument("atom.levels must be >= 2");
  if (!(omega10 > 0.0)) throw std::invalid_argument("atom.omega10 must be > 0");
  if (!std::isfinite(anharmonicity))
    throw std::invalid_argument("atom.anharmonicity must be finite");
}

double transition_frequency(const AtomSpec& atom, int m) {
  if (m < 0 || m >= atom.levels - 1)
    throw std::out_of_range("transition index m out of range [0, levels-2]");
  return atom.omega10 + m * atom.anharmonicity;
}

double level_energy(const AtomSpec& atom, int m) {
  if (m < 0 || m >= atom.levels)
    throw std::out_of_range("level index out of range");
  return m * atom.omega10 + 0.5 * m * (m - 1) * atom.anharmonicity;
}

double ladder_coupling(int m) {
  if (m < 0) throw std::out_of_range("ladder index must be >= 0");
  return std::sqrt(double(m + 1));
}

void CouplingLayout::validate() const {
  if (positions.empty()) throw std::invalid_argument("layout.positions must be nonempty");
  if (positions.size() != weights.size())
    throw std::invalid_argument("layout.positions and layout.weights must have equal length");
  for (std::size_t k = 0; k + 1 < positions.size(); ++k)
    if (!(positions[k] < positions[k + 1]))
      throw std::invalid_argument("layout.positions must be strictly increasing");
  for (double w : weights)
    if (!(w >= 0.0)) throw std::invalid_argument("layout.weights must be >= 0");
  if (!(velocity > 0.0)) throw std::invalid_argument("layout.velocity must be > 0");
  if (!std::isfinite(mode_coupling))
    throw std::invalid_argument("layout.mode_coupling must be finite");
}

double CouplingLayout::natural_scale() const {
  if (positions.size() < 2)
    throw std::invalid_argument("natural frequency scale needs at least two connection points");
  return two_pi * velocity / (positions[1] - positions[0]);
}

void Environment::validate() const {
  if (!(temperature >= 0.0))
    throw std::invalid_argument("environment.temperature must be >= 0");
  if (!(dos.value >= 0.0))
    throw std::invalid_argument("environment.dos.value must be >= 0");
}

double thermal_occupation(double omega, double temperature) {
  if (!(omega > 0.0)) throw std::domain_error("thermal occupation needs omega > 0");
  if (temperature < 0.0) throw std::domain_error("temperature must be >= 0");
  if (temperature == 0.0) return 0.0;
  return 1.0 / std::expm1(omega / temperature);
}

ChainParams chain_params(const CouplingLayout& layout, const Environment& env,
                         double omega) {
  layout.validate();
  const int n = layout.size();
  ChainParams out;
  out.gamma.resize(n);
  out.phi.resize(n > 0 ? n - 1 : 0);
  const double gj2 = layout.mode_coupling * layout.mode_coupling;
  const double base = 2.0 * two_pi * gj2 * env.dos(omega);  // 4*pi*gj^2*J
  for (int k = 0; k < n; ++k)
    out.gamma[k] = base * layout.weights[k] * layout.weights[k];
  for (int k = 0; k + 1 < n; ++k)
    out.phi[k] = omega * (layout.positions[k + 1] - layout.positions[k]) / layout.velocity;
  return out;
}

}  // namespace giantatom
