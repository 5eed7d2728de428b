#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

// Adaptive Gauss-Kronrod 7/15 quadrature with principal-value support and the
// sine/cosine integrals needed for analytic tail corrections.

namespace giantatom {

// Tolerances for the shift integrals. pole_window = 0 picks the automatic
// rule min(0.1*|pole|, half distance to nearest pole or endpoint).
struct PVQuadratureConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  double pole_window = 0.0;
  int max_subdivisions = 5000;
  double hilbert_window = 50.0;  // half-width of the numeric head, units of omega10
};

struct QuadratureError : std::runtime_error {
  QuadratureError(const std::string& what, double achieved_, double requested_)
      : std::runtime_error(what), achieved(achieved_), requested(requested_) {}
  double achieved;
  double requested;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;          // error estimate
  std::size_t evaluations = 0;
};

// Globally adaptive integral of f over [a, b] (worst-interval bisection).
// Throws QuadratureError when the budget runs out before reaching
// max(abs_tol, rel_tol*|I|).
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol = 1e-10, double rel_tol = 1e-8,
                     int max_subdivisions = 5000);

// One simple pole of an integrand written as regular(w) + sum_t num_t(w)/(w - pole_t).
struct PoleTerm {
  double pole = 0.0;
  std::function<double(double)> numerator;
};

// Cauchy principal value of regular(w) + sum_t num_t(w)/(w - pole_t) over
// [a, b]. Poles must be interior and separated. Each pole gets a symmetric
// window: the singular term is folded to [0, h] as (num(p+u)-num(p-u))/u, the
// remaining terms integrate normally, so no cancellation is left behind.
QuadResult principal_value(const std::function<double(double)>& regular,
                           const std::vector<PoleTerm>& poles, double a, double b,
                           const PVQuadratureConfig& cfg = {});

// Sine and cosine integrals, x > 0 for cosine_integral.
double sine_integral(double x);
double cosine_integral(double x);

}  // namespace giantatom
