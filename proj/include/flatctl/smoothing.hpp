#pragma once

// Smoothing phase: free evolution v = E(t,.) * v0 of the odd extension of the
// datum, its trace at x = 1, and the coefficients y_k of the odd Taylor
// expansion of v(tau, .) at x = 0.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "flatctl/datum.hpp"
#include "flatctl/errors.hpp"
#include "flatctl/kernel.hpp"
#include "flatctl/parallel.hpp"
#include "flatctl/quadrature.hpp"

namespace flatctl {

inline constexpr int kDefaultSeedOrder = 15;
inline constexpr int kMaxSeedOrder = 30;

/// Seed of the flat output: v(tau,x) = sum_k y_k (-i)^k x^{2k+1}/(2k+1)!.
struct FlatSeed {
  double tau = 0.0;
  int K = 0;
  std::vector<cplx> y;
  /// Quadrature error estimate of each y_k.
  std::vector<double> y_err;
  /// max_k |y_k| tau^k / (2^k k!).
  double bound_constant = 0.0;
};

namespace detail {

template <OddDatum D>
std::vector<double> datum_breakpoints(const D& datum) {
  return datum.interior_breakpoints();
}

// (-i)^k z, exactly.
inline cplx rotate_minus_i(cplx z, int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return z;
    case 1: return {z.imag(), -z.real()};
    case 2: return -z;
    default: return {-z.imag(), z.real()};
  }
}

}  // namespace detail

/// d^m/dx^m v(t,x) = int_0^L d^m/dx^m F(t,x,y) theta0(y) dy with L the
/// support end of the datum.
template <OddDatum D>
QuadratureResult free_evolution_derivative(const D& datum, double t, double x, int m,
                                           const QuadratureOptions& opt = {}) {
  if (!(t > 0.0)) throw DomainError("free evolution needs t > 0");
  const KernelDerivTable table(t, m);
  auto integrand = [&](double y) { return table.odd_derivative(x, y, m) * datum(y); };
  IntegrationProblem<decltype(integrand)> problem{integrand, detail::datum_breakpoints(datum),
                                                  0.0, datum.support_end(), opt};
  return integrate(problem);
}

/// v(t,x) for the odd extension of the datum.
template <OddDatum D>
QuadratureResult free_evolution(const D& datum, double t, double x,
                                const QuadratureOptions& opt = {}) {
  return free_evolution_derivative(datum, t, x, 0, opt);
}

struct TraceSample {
  double t = 0.0;
  cplx u;
  /// u'(t) = i v_xx(t,1).
  cplx du;
  double u_err = 0.0;
  double du_err = 0.0;
};

/// u(t) = v(t,1) and u'(t) on an increasing grid of positive times.
namespace detail {

// Absolute accuracy attainable for v_xx(t,1) in double precision. Near t = 0
// the integrand has amplitude ~ 1/(4 t^2 sqrt(4 pi t)) while the result stays
// O(1), and the Gauss-Kronrod estimate carries a 50 eps int|f| term that no
// amount of bisection removes.
template <OddDatum D>
QuadratureOptions trace_derivative_options(const D& datum, double t, const QuadratureOptions& opt) {
  const double L = datum.support_end();
  double sup = 0.0;
  constexpr int kSamples = 1024;
  for (int j = 0; j <= kSamples; ++j) sup = std::max(sup, std::abs(datum(L * j / kSamples)));
  const double z = std::max(1.0, L - 1.0);
  const double kernel_sup = (z * z / (4.0 * t * t) + 1.0 / (2.0 * t)) / std::sqrt(4.0 * std::numbers::pi * t);
  const double floor = 1e3 * std::numeric_limits<double>::epsilon() * L * kernel_sup * sup;
  QuadratureOptions out = opt;
  out.abs_tol = std::max(opt.abs_tol, floor);
  return out;
}

}  // namespace detail

template <OddDatum D>
std::vector<TraceSample> boundary_trace(const D& datum, std::span<const double> times,
                                        const QuadratureOptions& opt = {},
                                        bool with_derivative = true) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0)) throw DomainError("trace times must be positive");
    if (i > 0 && !(times[i - 1] < times[i])) throw DomainError("trace times must increase");
  }
  std::vector<TraceSample> out(times.size());
  parallel_for(times.size(), [&](std::size_t i) {
    const double t = times[i];
    const auto v = free_evolution(datum, t, 1.0, opt);
    TraceSample s{t, v.value, {}, v.err_estimate, 0.0};
    if (with_derivative) {
      const auto vxx =
          free_evolution_derivative(datum, t, 1.0, 2, detail::trace_derivative_options(datum, t, opt));
      s.du = cplx{0.0, 1.0} * vxx.value;
      s.du_err = vxx.err_estimate;
    }
    out[i] = s;
  });
  return out;
}

/// y_k = i^k int_0^L d^{2k+1}/dx^{2k+1} F(tau,0,y) theta0(y) dy
///     = i^k int_0^L -2 d^{2k+1}/dx^{2k+1} E(tau,y) theta0(y) dy.
template <OddDatum D>
FlatSeed flat_coefficients(const D& datum, double tau, int K = kDefaultSeedOrder,
                           const QuadratureOptions& opt = {}) {
  if (!(tau > 0.0)) throw DomainError("tau must be positive");
  if (K < 0 || K > kMaxSeedOrder || 2 * K + 1 > kDefaultMaxKernelOrder) {
    throw CapabilityError("seed order K = " + std::to_string(K) + " outside [0, " +
                          std::to_string(kMaxSeedOrder) + "]");
  }
  const KernelDerivTable table(tau, 2 * K + 1);
  FlatSeed seed;
  seed.tau = tau;
  seed.K = K;
  seed.y.assign(K + 1, cplx{});
  seed.y_err.assign(K + 1, 0.0);
  parallel_for(static_cast<std::size_t>(K + 1), [&](std::size_t kk) {
    const int k = static_cast<int>(kk);
    const int m = 2 * k + 1;
    auto integrand = [&](double y) { return -2.0 * table.derivative(y, m) * datum(y); };
    IntegrationProblem<decltype(integrand)> problem{
        integrand, detail::datum_breakpoints(datum), 0.0, datum.support_end(), opt};
    QuadratureResult r;
    try {
      r = integrate(problem);
    } catch (const ConvergenceError& e) {
      throw ConvergenceError("flat coefficient y_" + std::to_string(k) + ": " + e.what(),
                             e.best_real(), e.best_imag(), e.error_estimate());
    }
    // i^k = (-i)^{-k} = (-i)^{3k}.
    seed.y[k] = detail::rotate_minus_i(r.value, 3 * k);
    seed.y_err[k] = r.err_estimate;
  });
  double lf = 0.0;
  for (int k = 0; k <= K; ++k) {
    if (k > 0) lf += std::log(static_cast<double>(k));
    const double mag = std::abs(seed.y[k]);
    if (mag == 0.0) continue;
    seed.bound_constant = std::max(
        seed.bound_constant, std::exp(std::log(mag) + k * std::log(tau / 2.0) - lf));
  }
  return seed;
}

/// sum_{k<=K} y_k (-i)^k x^{2k+1}/(2k+1)!, and the magnitude of the k = K term.
struct SeedSeriesValue {
  cplx value;
  double last_term = 0.0;
};

inline SeedSeriesValue seed_series(const FlatSeed& seed, double x) {
  SeedSeriesValue out;
  double xp = x;       // x^{2k+1}
  double fact = 1.0;   // (2k+1)!
  for (int k = 0; k <= seed.K; ++k) {
    if (k > 0) {
      xp *= x * x;
      fact *= (2.0 * k) * (2.0 * k + 1.0);
    }
    const cplx term = xp * (detail::rotate_minus_i(seed.y[k], k) / fact);
    out.value += term;
    if (k == seed.K) out.last_term = std::abs(term);
  }
  return out;
}

}  // namespace flatctl
