#pragma once

// Flat output y(t) = phi_s((t - tau)/(T - tau)) * ybar(t) on [tau, T], with
// ybar(t) = sum_k y_k (t - tau)^k / k!, and the series
//   theta(t,x) = sum_k x^{2k+1}/(2k+1)! (-i)^k y^{(k)}(t),
//   u(t)       = theta(t,1).
// All derivative work happens in derivative form (y^{(k)}, not y^{(k)}/k!) so
// the endpoint identities y^{(k)}(tau) = y_k and y^{(k)}(T) = 0 hold to the
// bit.

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "flatctl/errors.hpp"
#include "flatctl/gevrey.hpp"
#include "flatctl/jet.hpp"
#include "flatctl/smoothing.hpp"

namespace flatctl {

inline constexpr int kDefaultSeriesOrder = 15;

struct FlatOutput {
  FlatSeed seed;
  double T = 0.0;
  double s = 1.9;
  int jet_order = kDefaultSeriesOrder + 6;

  double tau() const { return seed.tau; }

  void validate() const {
    const double tau = seed.tau;
    if (!(tau > 0.0 && tau < T)) throw DomainError("flat output needs 0 < tau < T");
    if (!(s > 1.0 && s < 2.0)) throw DomainError("Gevrey order s must lie in (1,2)");
    if (!(2.0 * (T - tau) / tau < 1.0)) {
      throw DomainError("tau must exceed 2T/3 for the analytic part to converge");
    }
    if (jet_order < 0 || jet_order > kDefaultMaxStepJetOrder) {
      throw CapabilityError("jet order " + std::to_string(jet_order) + " out of range");
    }
    if (static_cast<int>(seed.y.size()) != seed.K + 1) throw DomainError("seed size mismatch");
  }
};

namespace detail {
inline void require_in_window(const FlatOutput& fo, double t) {
  if (!(t >= fo.tau() && t <= fo.T)) {
    throw DomainError("time " + std::to_string(t) + " outside [tau, T]");
  }
}

inline std::vector<double> binomial_row(int n) {
  std::vector<double> row(n + 1, 1.0);
  for (int j = 1; j <= n; ++j) row[j] = row[j - 1] * (n - j + 1) / j;
  return row;
}
}  // namespace detail

/// ybar^{(m)}(t) for m = 0..n, each sum truncated at the seed's K.
inline std::vector<cplx> analytic_part_derivatives(const FlatOutput& fo, double t, int n) {
  detail::require_in_window(fo, t);
  const double h = t - fo.tau();
  const int K = fo.seed.K;
  std::vector<cplx> d(n + 1, cplx{});
  for (int m = 0; m <= std::min(n, K); ++m) {
    // Horner on sum_{k=0}^{K-m} y_{k+m} h^k / k!.
    cplx acc = fo.seed.y[K];
    for (int k = K - m; k >= 1; --k) acc = acc * (h / k) + fo.seed.y[m + k - 1];
    d[m] = acc;
  }
  return d;
}

/// Jet of ybar at t (coefficients ybar^{(m)}(t)/m!).
inline ComplexJet analytic_part_jet(const FlatOutput& fo, double t) {
  auto d = analytic_part_derivatives(fo, t, fo.jet_order);
  double f = 1.0;
  for (int m = 0; m <= fo.jet_order; ++m) {
    if (m > 1) f *= m;
    d[m] /= f;
  }
  return ComplexJet(t, std::move(d));
}

/// d^j/dt^j phi_s((t - tau)/(T - tau)) for j = 0..n.
inline std::vector<double> step_factor_derivatives(const FlatOutput& fo, double t, int n) {
  const double width = fo.T - fo.tau();
  const RealJet phi = step_jet((t - fo.tau()) / width, fo.s, n);
  std::vector<double> d(n + 1);
  double scale = 1.0;  // j! / width^j
  for (int j = 0; j <= n; ++j) {
    if (j > 0) scale *= j / width;
    d[j] = phi[j] * scale;
  }
  return d;
}

/// y^{(k)}(t) for k = 0..n by the Leibniz rule.
inline std::vector<cplx> flat_output_derivatives(const FlatOutput& fo, double t, int n) {
  detail::require_in_window(fo, t);
  const auto phi = step_factor_derivatives(fo, t, n);
  const auto ybar = analytic_part_derivatives(fo, t, n);
  std::vector<cplx> y(n + 1, cplx{});
  for (int k = 0; k <= n; ++k) {
    const auto binom = detail::binomial_row(k);
    cplx acc{};
    for (int j = 0; j <= k; ++j) acc += (binom[j] * phi[j]) * ybar[k - j];
    y[k] = acc;
  }
  return y;
}

inline ComplexJet flat_output_jet(const FlatOutput& fo, double t) {
  auto d = flat_output_derivatives(fo, t, fo.jet_order);
  double f = 1.0;
  for (int m = 0; m <= fo.jet_order; ++m) {
    if (m > 1) f *= m;
    d[m] /= f;
  }
  return ComplexJet(t, std::move(d));
}

struct SeriesValue {
  cplx value;
  /// Time derivative of the same truncated series.
  cplx dt_value;
  /// |last retained term|.
  double tail = 0.0;
};

namespace detail {
inline void require_series_order(const FlatOutput& fo, int K_u, int time_derivs) {
  if (K_u < 0) throw DomainError("series order must be nonnegative");
  if (K_u + time_derivs > fo.jet_order) {
    throw CapabilityError("series order " + std::to_string(K_u) + " with " +
                          std::to_string(time_derivs) + " time derivatives exceeds jet order " +
                          std::to_string(fo.jet_order));
  }
}
}  // namespace detail

/// Coefficients a_k = (-i)^k y^{(k+m)}(t) / (2k+1)! of the state series in
/// odd powers of x, for m time derivatives, plus the same for m + 1.
struct SeriesCoefficients {
  std::vector<cplx> value;
  std::vector<cplx> dt_value;

  /// sum_k x^{2k+1} a_k, with |last term| reported through `tail`.
  SeriesValue at(double x) const {
    SeriesValue out;
    double xp = x;
    for (std::size_t k = 0; k < value.size(); ++k) {
      if (k > 0) xp *= x * x;
      const cplx term = xp * value[k];
      out.value += term;
      out.dt_value += xp * dt_value[k];
      if (k + 1 == value.size()) out.tail = std::abs(term);
    }
    return out;
  }
};

inline SeriesCoefficients series_coefficients(const FlatOutput& fo, double t,
                                              int K_u = kDefaultSeriesOrder,
                                              int time_derivs = 0) {
  detail::require_series_order(fo, K_u, time_derivs + 1);
  const auto y = flat_output_derivatives(fo, t, K_u + time_derivs + 1);
  SeriesCoefficients c;
  c.value.resize(K_u + 1);
  c.dt_value.resize(K_u + 1);
  double fact = 1.0;
  for (int k = 0; k <= K_u; ++k) {
    if (k > 0) fact *= (2.0 * k) * (2.0 * k + 1.0);
    c.value[k] = detail::rotate_minus_i(y[k + time_derivs], k) / fact;
    c.dt_value[k] = detail::rotate_minus_i(y[k + time_derivs + 1], k) / fact;
  }
  return c;
}

/// theta(t,x) = sum_{k<=K_u} x^{2k+1}/(2k+1)! (-i)^k y^{(k+m)}(t), where m is
/// the number of time derivatives. `dt_value` carries the same series with one
/// more time derivative.
inline SeriesValue state_series(const FlatOutput& fo, double t, double x,
                                int K_u = kDefaultSeriesOrder, int time_derivs = 0) {
  return series_coefficients(fo, t, K_u, time_derivs).at(x);
}

/// u(t) = theta(t,1) on (tau, T], with u'(t) and the last-term magnitude.
inline SeriesValue control_series(const FlatOutput& fo, double t,
                                  int K_u = kDefaultSeriesOrder) {
  return state_series(fo, t, 1.0, K_u, 0);
}

}  // namespace flatctl
