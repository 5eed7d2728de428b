#include "giantatom/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <queue>

namespace giantatom {
namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1]. Odd-index nodes are the
// Gauss-7 points. Exactness: Gauss degree 13, Kronrod degree 22 (checked by
// the polynomial tests).
constexpr double kXgk[8] = {
    0.99145537112081263920685469752632852,
    0.94910791234275852452618968404785126,
    0.86486442335976907278971278864092620,
    0.74153118559939443986386477328078841,
    0.58608723546769113029414483825872960,
    0.40584515137739716690660641207696146,
    0.20778495500789846760068940377324491,
    0.0};
constexpr double kWgk[8] = {
    0.02293532201052922496373200805896959,
    0.06309209262997855329070066318920429,
    0.10479001032225018383987632254151801,
    0.14065325971552591874518959051023792,
    0.16900472663926790282658342659855028,
    0.19035057806478540991325640242101368,
    0.20443294007529889241416199923464908,
    0.20948214108472782801299917489171426};
constexpr double kWg[4] = {
    0.12948496616886969327061143267908202,
    0.27970539148927666790146777142377959,
    0.38183005050511894495036977548897513,
    0.41795918367346938775510204081632653};

struct PanelResult {
  double kronrod = 0.0;
  double error = 0.0;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  // fv layout: index 7 is the center, pairs (c - h*x, c + h*x) elsewhere.
  const double fc = f(c);
  double kron = kWgk[7] * fc;
  double gauss = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kXgk[i];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    fv[i] = f1;
    fv[14 - i] = f2;
    kron += kWgk[i] * (f1 + f2);
    if (i % 2 == 1) gauss += kWg[i / 2] * (f1 + f2);
  }
  // QUADPACK-style rescaled error estimate.
  const double mean = kron * 0.5;
  double asc = kWgk[7] * std::abs(fc - mean);
  for (int i = 0; i < 7; ++i)
    asc += kWgk[i] * (std::abs(fv[i] - mean) + std::abs(fv[14 - i] - mean));
  asc *= h;
  double err = std::abs(kron - gauss) * h;
  if (asc != 0.0 && err != 0.0)
    err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  return {kron * h, err};
}

struct Interval {
  double a, b, value, error;
  bool operator<(const Interval& o) const { return error < o.error; }
};

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, double rel_tol, int max_subdivisions) {
  if (!(a < b)) {
    if (a == b) return {0.0, 0.0, 0};
    QuadResult r = integrate(f, b, a, abs_tol, rel_tol, max_subdivisions);
    r.value = -r.value;
    return r;
  }
  std::priority_queue<Interval> heap;
  PanelResult first = gk15(f, a, b);
  heap.push({a, b, first.kronrod, first.error});
  double total = first.kronrod;
  double toterr = first.error;
  std::size_t evals = 15;
  int splits = 0;
  while (toterr > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (splits >= max_subdivisions)
      throw QuadratureError(
          "quadrature failed to converge: error " + std::to_string(toterr) +
              " after " + std::to_string(splits) + " subdivisions",
          toterr, std::max(abs_tol, rel_tol * std::abs(total)));
    Interval worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b))
      throw QuadratureError("quadrature interval underflow", toterr,
                            std::max(abs_tol, rel_tol * std::abs(total)));
    PanelResult left = gk15(f, worst.a, mid);
    PanelResult right = gk15(f, mid, worst.b);
    total += left.kronrod + right.kronrod - worst.value;
    toterr += left.error + right.error - worst.error;
    heap.push({worst.a, mid, left.kronrod, left.error});
    heap.push({mid, worst.b, right.kronrod, right.error});
    evals += 30;
    ++splits;
  }
  return {total, toterr, evals};
}

QuadResult principal_value(const std::function<double(double)>& regular,
                           const std::vector<PoleTerm>& poles, double a, double b,
                           const PVQuadratureConfig& cfg) {
  if (!(a < b)) throw std::invalid_argument("principal_value needs a < b");
  std::vector<PoleTerm> ps = poles;
  std::sort(ps.begin(), ps.end(),
            [](const PoleTerm& l, const PoleTerm& r) { return l.pole < r.pole; });
  for (const auto& p : ps)
    if (!(a < p.pole && p.pole < b))
      throw std::invalid_argument("principal-value pole must lie inside (a, b)");
  for (std::size_t i = 0; i + 1 < ps.size(); ++i)
    if (!(ps[i].pole < ps[i + 1].pole))
      throw std::invalid_argument("principal-value poles must be distinct");

  // Full integrand away from any window.
  auto full = [&](double w) {
    double v = regular ? regular(w) : 0.0;
    for (const auto& p : ps) v += p.numerator(w) / (w - p.pole);
    return v;
  };

  QuadResult out;
  auto add = [&](const QuadResult& r) {
    out.value += r.value;
    out.error += r.error;
    out.evaluations += r.evaluations;
  };

  if (ps.empty()) {
    add(integrate(full, a, b, cfg.abs_tol, cfg.rel_tol, cfg.max_subdivisions));
    return out;
  }

  double lo = a;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const double p = ps[i].pole;
    const double hi = (i + 1 < ps.size()) ? 0.5 * (p + ps[i + 1].pole) : b;
    double h = std::min(0.5 * (p - lo), 0.5 * (hi - p));
    if (p != 0.0) h = std::min(h, 0.1 * std::abs(p));
    if (cfg.pole_window > 0.0) h = std::min(h, cfg.pole_window);
    if (!(h > 0.0))
      throw std::invalid_argument("principal-value pole window collapsed");

    if (lo < p - h)
      add(integrate(full, lo, p - h, cfg.abs_tol, cfg.rel_tol, cfg.max_subdivisions));
    // Singular term folded about the pole; everything else straight through.
    const auto& num = ps[i].numerator;
    auto folded = [&](double u) { return (num(p + u) - num(p - u)) / u; };
    add(integrate(folded, 0.0, h, cfg.abs_tol, cfg.rel_tol, cfg.max_subdivisions));
    auto rest = [&](double w) {
      double v = regular ? regular(w) : 0.0;
      for (std::size_t j = 0; j < ps.size(); ++j)
        if (j != i) v += ps[j].numerator(w) / (w - ps[j].pole);
      return v;
    };
    add(integrate(rest, p - h, p + h, cfg.abs_tol, cfg.rel_tol, cfg.max_subdivisions));
    if (p + h < hi)
      add(integrate(full, p + h, hi, cfg.abs_tol, cfg.rel_tol, cfg.max_subdivisions));
    lo = hi;
  }
  return out;
}

namespace {

// Si and Ci by power series below x = 4.
void sici_series(double x, double& si, double& ci) {
  double term = x;       // x^{2n+1}/(2n+1)!
  double si_sum = x;     // n = 0 term of Si
  double ci_sum = 0.0;
  double sign = -1.0;
  for (int n = 1; n < 40; ++n) {
    // term for Ci at order 2n: x^{2n}/(2n)!
    const double t_prev = term;            // x^{2n-1}/(2n-1)!
    const double ci_term = t_prev * x / (2 * n);
    ci_sum += sign * ci_term / (2 * n);
    term = ci_term * x / (2 * n + 1);      // x^{2n+1}/(2n+1)!
    si_sum += sign * term / (2 * n + 1);
    sign = -sign;
    if (term < 1e-19 * (std::abs(si_sum) + 1.0)) break;
  }
  si = si_sum;
  ci = std::numbers::egamma + std::log(x) + ci_sum;
}

// Lentz continued fraction for E1(i*x), x > 0:
//   E1(z) = e^{-z} / (z + 1 - 1^2/(z + 3 - 2^2/(z + 5 - ...))).
// Then Ci(x) = -Re E1(ix), Si(x) = pi/2 + Im E1(ix).
void sici_cfrac(double x, double& si, double& ci) {
  using cd = std::complex<double>;
  const cd z(0.0, x);
  const double tiny = 1e-300;
  cd b = z + 1.0;
  cd c = 1.0 / tiny;
  cd d = 1.0 / b;
  cd h = d;
  for (int i = 1; i <= 300; ++i) {
    const double ai = -double(i) * double(i);
    b += 2.0;
    d = 1.0 / (ai * d + b);
    c = b + ai / c;
    const cd del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  const cd e1 = std::exp(-z) * h;
  ci = -e1.real();
  si = 0.5 * std::numbers::pi + e1.imag();
}

}  // namespace

double sine_integral(double x) {
  if (x == 0.0) return 0.0;
  if (x < 0.0) return -sine_integral(-x);
  double si, ci;
  if (x <= 4.0)
    sici_series(x, si, ci);
  else
    sici_cfrac(x, si, ci);
  return si;
}

double cosine_integral(double x) {
  if (!(x > 0.0)) throw std::domain_error("cosine_integral needs x > 0");
  double si, ci;
  if (x <= 4.0)
    sici_series(x, si, ci);
  else
    sici_cfrac(x, si, ci);
  return ci;
}

}  // namespace giantatom
