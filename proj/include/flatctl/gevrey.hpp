#pragma once

// Gevrey-class step function phi_s (equal to 1 for t <= 0, 0 for t >= 1,
// flat at both ends) and the bound checks used to validate derivative growth.

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>

#include "flatctl/errors.hpp"
#include "flatctl/jet.hpp"

namespace flatctl {

inline constexpr int kDefaultMaxStepJetOrder = 40;

namespace detail {
inline double step_kappa(double s) {
  if (!(s > 1.0 && s < 2.0)) {
    throw DomainError("Gevrey order s must lie in (1,2), got " + std::to_string(s));
  }
  return 1.0 / (s - 1.0);
}
}  // namespace detail

/// phi_s(t) = e^{-(1-t)^{-k}} / (e^{-(1-t)^{-k}} + e^{-t^{-k}}) on (0,1),
/// k = 1/(s-1).
inline double step_function(double t, double s) {
  const double kappa = detail::step_kappa(s);
  if (t <= 0.0) return 1.0;
  if (t >= 1.0) return 0.0;
  const double u = std::pow(t, -kappa);
  const double w = std::pow(1.0 - t, -kappa);
  // Divide through by the larger exponential.
  if (w <= u) return 1.0 / (1.0 + std::exp(w - u));
  const double e = std::exp(u - w);
  return e / (e + 1.0);
}

/// Taylor jet of phi_s at t. Outside (0,1), and wherever the ratio of the two
/// exponentials underflows the normal range, the exact limit jet is returned.
inline RealJet step_jet(double t, double s, int order,
                        int max_order = kDefaultMaxStepJetOrder) {
  const double kappa = detail::step_kappa(s);
  if (order < 0 || order > max_order) {
    throw CapabilityError("step jet order " + std::to_string(order) +
                          " outside [0, " + std::to_string(max_order) + "]");
  }
  if (t <= 0.0) return RealJet::constant(t, order, 1.0);
  if (t >= 1.0) return RealJet::constant(t, order, 0.0);

  const double u0 = std::pow(t, -kappa);
  const double w0 = std::pow(1.0 - t, -kappa);
  // phi = 1 / (1 + e^{w-u}); snap once the smaller exponential, measured
  // against the larger one, underflows.
  constexpr double tiny = std::numeric_limits<double>::min();
  if (std::exp(w0 - u0) < tiny) return RealJet::constant(t, order, 1.0);
  if (std::exp(u0 - w0) < tiny) return RealJet::constant(t, order, 0.0);

  const RealJet x = RealJet::variable(t, order);
  const RealJet u = pow(x, -kappa);
  const RealJet w = pow(1.0 - x, -kappa);
  const double shift = std::min(u0, w0);
  const RealJet a = exp(-(w + (-shift)));
  const RealJet b = exp(-(u + (-shift)));
  RealJet phi = a / (a + b);
  if (!phi.all_finite()) {
    throw NumericalError("step jet overflow at t = " + std::to_string(t) + ", order " +
                         std::to_string(order));
  }
  return phi;
}

/// Claim |f^{(p)}(t)| <= M (p!)^s / R^p.
struct GevreyBound {
  double M = 1.0;
  double R = 1.0;
  double s = 1.0;
};

struct GevreyViolation {
  std::size_t sample = 0;
  double point = 0.0;
  int order = 0;
};

struct GevreyCheck {
  bool holds = true;
  std::optional<GevreyViolation> first_violation;
};

namespace detail {
// log of M (p!)^s / R^p minus log |f^{(p)}|, with f^{(p)} = p! c_p.
template <class T>
double gevrey_log_margin(const Jet<T>& jet, int p, const GevreyBound& b) {
  const double lf = std::lgamma(p + 1.0);
  const double mag = std::abs(jet[p]);
  if (mag == 0.0) return std::numeric_limits<double>::infinity();
  return std::log(b.M) + b.s * lf - p * std::log(b.R) - (std::log(mag) + lf);
}
}  // namespace detail

template <class T>
GevreyCheck verify_gevrey_bound(std::span<const Jet<T>> samples, const GevreyBound& bound) {
  if (samples.empty()) return {};
  const int order = samples.front().order();
  for (const auto& j : samples) {
    if (j.order() != order) throw DomainError("jets passed to verify_gevrey_bound differ in order");
  }
  // A relative slack of a few ulps keeps fitted constants from failing on
  // their own maximiser.
  constexpr double slack = 1e-12;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (int p = 0; p <= order; ++p) {
      if (detail::gevrey_log_margin(samples[i], p, bound) < -slack) {
        return {false, GevreyViolation{i, samples[i].center(), p}};
      }
    }
  }
  return {};
}

/// Smallest M making the bound hold for the given R and s over orders
/// [0, max_order] of every sample.
template <class T>
double fit_gevrey_constant(std::span<const Jet<T>> samples, double R, double s,
                           int max_order) {
  double log_m = -std::numeric_limits<double>::infinity();
  for (const auto& jet : samples) {
    for (int p = 0; p <= std::min(max_order, jet.order()); ++p) {
      const double mag = std::abs(jet[p]);
      if (mag == 0.0) continue;
      const double lf = std::lgamma(p + 1.0);
      log_m = std::max(log_m, std::log(mag) + lf - s * lf + p * std::log(R));
    }
  }
  return std::isfinite(log_m) ? std::exp(log_m) : 0.0;
}

}  // namespace flatctl
