#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "giantatom/design.hpp"
#include "giantatom/spectral.hpp"

using namespace giantatom;

namespace {

design::DesignTarget target_from_layout(const CouplingLayout& layout,
                                        const std::vector<double>& omegas) {
  design::DesignTarget target;
  target.env.dos.value = 1.0 / (2.0 * two_pi);
  target.omega = omegas;
  for (double w : omegas)
    target.rate.push_back(spectral::relaxation_rate(w, 0, layout, target.env));
  return target;
}

}  // namespace

TEST_CASE("objective is exactly zero when the candidate reproduces the target") {
  CouplingLayout layout;
  layout.positions = {0.0, 2.2, 5.1};
  layout.weights = {0.8, 1.4, 0.6};
  std::vector<double> omegas;
  for (int i = 0; i < 9; ++i) omegas.push_back(0.6 + 0.1 * i);
  const design::DesignTarget target = target_from_layout(layout, omegas);
  CHECK(design::evaluate_objective(layout, target) == 0.0);

  CouplingLayout other = layout;
  other.weights[1] = 1.5;
  CHECK(design::evaluate_objective(other, target) > 0.0);
}

TEST_CASE("shape normalization forgives a global amplitude factor") {
  CouplingLayout layout;
  layout.positions = {0.0, 2.2, 5.1};
  layout.weights = {0.8, 1.4, 0.6};
  std::vector<double> omegas{0.7, 0.9, 1.1, 1.3};
  design::DesignTarget target = target_from_layout(layout, omegas);
  for (double& r : target.rate) r *= 7.3;  // rescaled target, same shape
  CHECK(design::evaluate_objective(layout, target) > 1e-3);
  target.normalization = design::DesignTarget::Normalization::shape;
  CHECK(design::evaluate_objective(layout, target) <= 1e-22);
}

TEST_CASE("target validation") {
  design::DesignTarget target;
  target.omega = {1.0, 0.9};
  target.rate = {1.0, 1.0};
  CHECK_THROWS_AS(target.validate(), std::invalid_argument);
  target.omega = {0.9, 1.0};
  target.rate = {1.0};
  CHECK_THROWS_AS(target.validate(), std::invalid_argument);
  target.rate = {1.0, -1.0};
  CHECK_THROWS_AS(target.validate(), std::invalid_argument);
}

TEST_CASE("fit recovers a realizable response") {
  CouplingLayout truth;
  truth.positions = {0.0, 1.0, 2.0};
  truth.weights = {1.0, 1.0, 1.0};
  std::vector<double> omegas;
  for (int i = 0; i < 12; ++i) omegas.push_back(4.0 + 0.35 * i);
  const design::DesignTarget target = target_from_layout(truth, omegas);
  double norm = 0.0;
  for (double r : target.rate) norm += r * r;

  const design::DesignResult result = design::fit_layout(target, 3, {}, 42, 8);
  CHECK(result.residual <= 1e-8 * norm);
  CHECK_FALSE(result.stagnated);
  CHECK(result.layout.size() == 3);

  // Deterministic: the same seed reproduces the result bit for bit.
  const design::DesignResult again = design::fit_layout(target, 3, {}, 42, 8);
  CHECK(again.residual == result.residual);
  for (int k = 0; k < 3; ++k) {
    CHECK(again.layout.positions[k] == result.layout.positions[k]);
    CHECK(again.layout.weights[k] == result.layout.weights[k]);
  }
}

TEST_CASE("fit respects the weight bound") {
  design::DesignTarget target;
  target.env.dos.value = 1.0 / (2.0 * two_pi);
  target.omega = {0.9, 1.0, 1.1};
  target.rate = {400.0, 500.0, 400.0};  // unreachable with small weights
  design::FitBounds bounds;
  bounds.weight_max = 1.5;
  const design::DesignResult result = design::fit_layout(target, 2, bounds, 1, 4);
  for (double w : result.layout.weights) CHECK(w <= 1.5 + 1e-12);
}

TEST_CASE("reference layouts carry the documented geometry") {
  const CouplingLayout a = design::preset_fig3("two-maxima");
  CHECK(a.positions == std::vector<double>{0.0, 1.0, 1.5, 3.0});
  CHECK(a.weights == std::vector<double>{1.0, 1.0, 1.0, 1.0});
  const CouplingLayout b = design::preset_fig3("flat-maximum");
  CHECK(b.positions == std::vector<double>{0.0, 1.0, 2.0, 3.5});
  CHECK(b.weights == std::vector<double>{1.0, 3.0, 3.0, 1.0});
  const CouplingLayout c = design::preset_fig3("shallow-minima");
  CHECK(c.positions == std::vector<double>{0.0, 1.0, 2.0, 3.0});
  CHECK(c.weights == std::vector<double>{1.0, 4.0, 4.0, 1.0});
  CHECK_THROWS_AS(design::preset_fig3("nope"), std::invalid_argument);
}

TEST_CASE("inversion scenario pumps the population into the dark level") {
  const auto rep = design::scenario_inversion(10);
  CHECK(rep.gamma_10 == 0.0);  // interference zero, snapped exactly
  CHECK(rep.gamma_21 == 2.0 * (rep.gamma_single * 10.0 * 10.0));
  REQUIRE(rep.drive.size() == rep.populations.size());
  REQUIRE(rep.drive.front() == 0.0);
  CHECK(rep.populations.front()[0] == 1.0);
  CHECK_FALSE(rep.inverted.front());
  bool any_inverted = false;
  for (std::size_t i = 0; i < rep.drive.size(); ++i) {
    const auto& p = rep.populations[i];
    CHECK(p[0] + p[1] + p[2] == doctest::Approx(1.0).epsilon(1e-9));
    if (rep.inverted[i]) {
      any_inverted = true;
      CHECK(p[1] > p[0]);
    }
  }
  CHECK(any_inverted);
  CHECK_THROWS_AS(design::scenario_inversion(1), std::invalid_argument);
}

TEST_CASE("multiphoton scenario silences both transitions but not the two-photon line") {
  const auto rep = design::scenario_multiphoton(10);
  CHECK(rep.gamma_10 == 0.0);
  CHECK(rep.gamma_21 == 0.0);
  CHECK(rep.ideal);
  CHECK(rep.at_maximum);
  CHECK(rep.coupling_half >= (1.0 - 1e-12) * rep.coupling_max);
  CHECK(rep.coupling_max > 0.0);
}

TEST_CASE("anharmonicity scenario sees the shift difference change sign on resonance") {
  const auto rep = design::scenario_anharmonicity(10);
  REQUIRE(rep.omega_10.size() == 201);
  CHECK(rep.sign_change);
  bool any_valid = false;
  for (bool v : rep.valid) any_valid |= v;
  CHECK(any_valid);
  // The shift columns are antisymmetric partners at the window edges.
  CHECK(rep.change.front() > 0.0);
  CHECK(rep.change.back() < 0.0);
}
