#pragma once

// Globally adaptive Gauss-Kronrod (7/15) integration of complex-valued
// integrands over an interval with declared breakpoints. Panels are created
// between breakpoints and are only ever bisected, so no panel straddles a
// breakpoint.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "flatctl/errors.hpp"

namespace flatctl {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_subdivisions = 1 << 14;
};

struct QuadratureResult {
  std::complex<double> value;
  double err_estimate = 0.0;
  int panels = 0;
};

/// An integrand on [lower, upper] together with its known discontinuities.
template <class Integrand>
struct IntegrationProblem {
  Integrand integrand;
  std::vector<double> breakpoints;
  double lower = 0.0;
  double upper = 1.0;
  QuadratureOptions options{};

  void validate() const {
    if (!(lower < upper)) throw DomainError("integration interval is empty");
    if (!(options.abs_tol > 0.0) || !(options.rel_tol > 0.0)) {
      throw DomainError("quadrature tolerances must be positive");
    }
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
      const double b = breakpoints[i];
      if (b < lower || b > upper) throw DomainError("breakpoint outside the interval");
      if (i > 0 && !(breakpoints[i - 1] < b)) {
        throw DomainError("breakpoints must be strictly increasing");
      }
    }
  }
};

namespace detail {

// Kronrod abscissae (positive half) and weights; xgk[1], xgk[3], xgk[5] are
// the 7-point Gauss nodes with weights wg.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  std::complex<double> value;
  double error;
};

// QUADPACK qk15 error heuristic for one real component.
inline double qk_error(double kronrod, double gauss, double resabs, double resasc) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double err = std::abs(kronrod - gauss);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    err = std::max(50.0 * eps * resabs, err);
  }
  return err;
}

template <class Integrand>
Panel gauss_kronrod15(const Integrand& f, double a, double b) {
  using C = std::complex<double>;
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<C, 15> fv;
  fv[7] = f(center);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    fv[j] = f(center - dx);
    fv[14 - j] = f(center + dx);
  }
  C kron = fv[7] * kWgk[7];
  C gauss = fv[7] * kWg[3];
  double abs_re = std::abs(fv[7].real()) * kWgk[7];
  double abs_im = std::abs(fv[7].imag()) * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const C pair = fv[j] + fv[14 - j];
    kron += kWgk[j] * pair;
    abs_re += kWgk[j] * (std::abs(fv[j].real()) + std::abs(fv[14 - j].real()));
    abs_im += kWgk[j] * (std::abs(fv[j].imag()) + std::abs(fv[14 - j].imag()));
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  const C mean = kron * 0.5;
  double asc_re = kWgk[7] * std::abs(fv[7].real() - mean.real());
  double asc_im = kWgk[7] * std::abs(fv[7].imag() - mean.imag());
  for (int j = 0; j < 7; ++j) {
    asc_re += kWgk[j] * (std::abs(fv[j].real() - mean.real()) +
                         std::abs(fv[14 - j].real() - mean.real()));
    asc_im += kWgk[j] * (std::abs(fv[j].imag() - mean.imag()) +
                         std::abs(fv[14 - j].imag() - mean.imag()));
  }
  const double h = std::abs(half);
  const double er = qk_error(kron.real() * half, gauss.real() * half, abs_re * h, asc_re * h);
  const double ei = qk_error(kron.imag() * half, gauss.imag() * half, abs_im * h, asc_im * h);
  return Panel{a, b, kron * half, std::hypot(er, ei)};
}

struct ByError {
  bool operator()(const Panel& l, const Panel& r) const {
    if (l.error != r.error) return l.error < r.error;
    return l.a > r.a;
  }
};

}  // namespace detail

/// Integrates the problem's integrand over [lower, upper]. Throws
/// ConvergenceError (carrying the best value) if the subdivision budget runs
/// out first.
template <class Integrand>
QuadratureResult integrate(const IntegrationProblem<Integrand>& problem) {
  problem.validate();
  const auto& opt = problem.options;

  std::vector<double> edges{problem.lower};
  for (double b : problem.breakpoints) {
    if (b > problem.lower && b < problem.upper) edges.push_back(b);
  }
  edges.push_back(problem.upper);

  std::priority_queue<detail::Panel, std::vector<detail::Panel>, detail::ByError> work;
  std::vector<detail::Panel> done;
  std::complex<double> total{};
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    auto p = detail::gauss_kronrod15(problem.integrand, edges[i], edges[i + 1]);
    total += p.value;
    total_err += p.error;
    work.push(p);
  }

  const double min_width = 64.0 * std::numeric_limits<double>::epsilon() *
                           std::max(std::abs(problem.lower), std::abs(problem.upper));
  int subdivisions = 0;
  auto target = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::abs(total)); };

  while (!work.empty() && total_err > target()) {
    if (subdivisions >= opt.max_subdivisions) {
      // Assemble the best value in a fixed order before reporting.
      while (!work.empty()) {
        done.push_back(work.top());
        work.pop();
      }
      std::sort(done.begin(), done.end(),
                [](const auto& l, const auto& r) { return l.a < r.a; });
      std::complex<double> best{};
      double err = 0.0;
      for (const auto& p : done) {
        best += p.value;
        err += p.error;
      }
      throw ConvergenceError("adaptive quadrature exhausted " +
                                 std::to_string(opt.max_subdivisions) +
                                 " subdivisions (error estimate " + std::to_string(err) + ")",
                             best.real(), best.imag(), err);
    }
    const detail::Panel worst = work.top();
    work.pop();
    if (worst.b - worst.a <= min_width) {
      // Unsplittable; keep its contribution and estimate as they are.
      done.push_back(worst);
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    auto left = detail::gauss_kronrod15(problem.integrand, worst.a, mid);
    auto right = detail::gauss_kronrod15(problem.integrand, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    work.push(left);
    work.push(right);
    ++subdivisions;
  }

  while (!work.empty()) {
    done.push_back(work.top());
    work.pop();
  }
  std::sort(done.begin(), done.end(), [](const auto& l, const auto& r) { return l.a < r.a; });
  QuadratureResult result;
  for (const auto& p : done) {
    result.value += p.value;
    result.err_estimate += p.error;
  }
  result.panels = static_cast<int>(done.size());
  return result;
}

/// Convenience overload for an integrand over [0, 1].
template <class Integrand>
QuadratureResult integrate(Integrand f, std::vector<double> breakpoints = {},
                           QuadratureOptions options = {}) {
  return integrate(IntegrationProblem<Integrand>{std::move(f), std::move(breakpoints), 0.0,
                                                 1.0, options});
}

}  // namespace flatctl
