#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "giantatom/core.hpp"

using namespace giantatom;

TEST_CASE("thermal occupation matches the geometric-series mean") {
  // Independent oracle: mean of n over p_n = (1-q) q^n with q = e^{-w/T}.
  const double omega = 1.3, temperature = 1.0;
  const double q = std::exp(-omega / temperature);
  double mean = 0.0;
  for (int n = 1; n < 400; ++n) mean += n * (1.0 - q) * std::pow(q, n);
  CHECK(thermal_occupation(omega, temperature) == doctest::Approx(mean).epsilon(1e-14));
  CHECK(thermal_occupation(5.0, 0.0) == 0.0);
  CHECK(thermal_occupation(1e-6, 1.0) == doctest::Approx(1e6).epsilon(1e-5));
}

TEST_CASE("thermal occupation rejects non-positive frequencies") {
  CHECK_THROWS_AS(thermal_occupation(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(thermal_occupation(-2.0, 1.0), std::domain_error);
}

TEST_CASE("ladder energies and transition frequencies") {
  AtomSpec atom;
  atom.levels = 4;
  atom.omega10 = 1.3;
  atom.anharmonicity = -0.21;
  atom.validate();
  CHECK(level_energy(atom, 0) == 0.0);
  CHECK(level_energy(atom, 1) == doctest::Approx(1.3).epsilon(1e-15));
  CHECK(level_energy(atom, 2) == doctest::Approx(2.6 - 0.21).epsilon(1e-15));
  CHECK(level_energy(atom, 3) == doctest::Approx(3.9 - 3 * 0.21).epsilon(1e-15));
  CHECK(transition_frequency(atom, 0) == doctest::Approx(1.3));
  CHECK(transition_frequency(atom, 1) == doctest::Approx(1.09));
  CHECK(transition_frequency(atom, 2) == doctest::Approx(0.88));
  CHECK_THROWS_AS(transition_frequency(atom, 3), std::out_of_range);
  CHECK_THROWS_AS(transition_frequency(atom, -1), std::out_of_range);
}

TEST_CASE("default ladder squares are exact integers") {
  AtomSpec atom;
  for (int m = 0; m < 8; ++m) {
    CHECK(atom.g_squared(m) == double(m + 1));
    CHECK(atom.g(m) == doctest::Approx(std::sqrt(double(m + 1))).epsilon(1e-16));
    CHECK(ladder_coupling(m) == atom.g(m));
  }
  atom.ladder = [](int) { return 2.0; };
  CHECK(atom.g_squared(3) == 4.0);
}

TEST_CASE("atom validation") {
  AtomSpec atom;
  atom.levels = 1;
  CHECK_THROWS_AS(atom.validate(), std::invalid_argument);
  atom.levels = 2;
  atom.omega10 = 0.0;
  CHECK_THROWS_AS(atom.validate(), std::invalid_argument);
}

TEST_CASE("layout validation names the offending field") {
  CouplingLayout layout;
  CHECK_THROWS_WITH_AS(layout.validate(),
                       doctest::Contains("layout.positions"), std::invalid_argument);
  layout.positions = {0.0, 1.0};
  layout.weights = {1.0};
  CHECK_THROWS_WITH_AS(layout.validate(), doctest::Contains("layout.weights"),
                       std::invalid_argument);
  layout.weights = {1.0, -0.5};
  CHECK_THROWS_WITH_AS(layout.validate(), doctest::Contains("layout.weights"),
                       std::invalid_argument);
  layout.weights = {1.0, 1.0};
  layout.positions = {1.0, 1.0};
  CHECK_THROWS_WITH_AS(layout.validate(), doctest::Contains("layout.positions"),
                       std::invalid_argument);
  layout.positions = {0.0, 1.0};
  layout.velocity = 0.0;
  CHECK_THROWS_WITH_AS(layout.validate(), doctest::Contains("layout.velocity"),
                       std::invalid_argument);
}

TEST_CASE("natural frequency scale comes from the first gap") {
  CouplingLayout layout;
  layout.positions = {0.0, 0.7, 1.8};
  layout.weights = {1.0, 1.0, 1.0};
  layout.velocity = 2.0;
  CHECK(layout.natural_scale() == doctest::Approx(two_pi * 2.0 / 0.7).epsilon(1e-15));
}

TEST_CASE("chain parameters reproduce per-point rates and inter-point phases") {
  CouplingLayout layout;
  layout.positions = {0.0, 0.7, 1.8};
  layout.weights = {0.5, 1.25, 2.0};
  layout.mode_coupling = 0.3;
  layout.velocity = 2.0;
  Environment env;
  env.dos.value = 0.8;
  const double omega = 1.7;
  const ChainParams chain = chain_params(layout, env, omega);
  REQUIRE(chain.gamma.size() == 3);
  REQUIRE(chain.phi.size() == 2);
  for (int k = 0; k < 3; ++k) {
    const double expected =
        2.0 * two_pi * 0.3 * 0.3 * 0.8 * layout.weights[k] * layout.weights[k];
    CHECK(chain.gamma[k] == doctest::Approx(expected).epsilon(1e-15));
  }
  CHECK(chain.phi[0] == doctest::Approx(1.7 * 0.7 / 2.0).epsilon(1e-15));
  CHECK(chain.phi[1] == doctest::Approx(1.7 * 1.1 / 2.0).epsilon(1e-15));
}

TEST_CASE("ohmic density of states vanishes at zero frequency") {
  DensityOfStates dos;
  dos.model = DensityOfStates::Model::ohmic;
  dos.value = 0.25;
  CHECK(dos(2.0) == 0.5);
  CHECK(dos.vanishes_at_zero());
  DensityOfStates flat;
  CHECK(flat(2.0) == 1.0);
  CHECK_FALSE(flat.vanishes_at_zero());
}
