#pragma once

// Two-phase boundary control: u(t) = v(t,1) on (0, tau] from the free
// evolution, then the flat-output series on (tau, T].

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include "flatctl/datum.hpp"
#include "flatctl/flatness.hpp"
#include "flatctl/smoothing.hpp"

namespace flatctl {

enum class Phase { smoothing, flatness };

inline std::string_view to_string(Phase p) {
  return p == Phase::smoothing ? "smoothing" : "flatness";
}

struct ControlSample {
  double t = 0.0;
  cplx u;
  cplx du;
  Phase phase = Phase::smoothing;
};

/// Sampled control on (0, T] plus the boundary value used at t = 0.
class ControlTrace {
 public:
  ControlTrace() = default;
  ControlTrace(cplx initial, std::vector<ControlSample> samples)
      : initial_(initial), samples_(std::move(samples)) {
    for (std::size_t i = 1; i < samples_.size(); ++i) {
      if (!(samples_[i - 1].t < samples_[i].t)) throw DomainError("control samples must increase in t");
    }
  }

  /// Identically zero control sampled on the given times.
  static ControlTrace zero(const std::vector<double>& times) {
    std::vector<ControlSample> s;
    for (double t : times) s.push_back({t, {}, {}, Phase::smoothing});
    return {cplx{}, std::move(s)};
  }

  cplx initial() const { return initial_; }
  const std::vector<ControlSample>& samples() const { return samples_; }
  bool empty() const { return samples_.empty(); }

  /// Linear interpolation in t; t = 0 (and anything before the first
  /// sample) interpolates from the initial boundary value.
  cplx value_at(double t) const { return interp(t, &ControlSample::u, initial_); }
  cplx derivative_at(double t) const {
    const cplx d0 = samples_.empty() ? cplx{} : samples_.front().du;
    return interp(t, &ControlSample::du, d0);
  }

 private:
  cplx interp(double t, cplx ControlSample::*field, cplx at_zero) const {
    if (samples_.empty()) return at_zero;
    if (t >= samples_.back().t) return samples_.back().*field;
    auto it = std::lower_bound(samples_.begin(), samples_.end(), t,
                               [](const ControlSample& s, double v) { return s.t < v; });
    if (it->t == t) return (*it).*field;
    double t0 = 0.0;
    cplx v0 = at_zero;
    if (it != samples_.begin()) {
      t0 = std::prev(it)->t;
      v0 = (*std::prev(it)).*field;
    }
    if (t <= t0) return v0;
    const double w = (t - t0) / (it->t - t0);
    return v0 + w * ((*it).*field - v0);
  }

  cplx initial_{};
  std::vector<ControlSample> samples_;
};

struct SynthesisParams {
  double tau = 0.35;
  double T = 0.5;
  double s = 1.9;
  int K = kDefaultSeedOrder;
  int K_u = kDefaultSeriesOrder;
  /// Negative selects K_u + 6.
  int jet_order = -1;
  QuadratureOptions quadrature{};
};

struct Synthesis {
  FlatOutput flat;
  ControlTrace trace;
  /// u(tau-) = v(tau,1) from the free evolution.
  cplx u_before;
  /// u(tau+) from the series.
  cplx u_after;
  double continuity_gap = 0.0;
  /// |k = K_u term| of the series at tau.
  double tail_at_tau = 0.0;
  /// Quadrature error of v(tau,1) plus the propagated errors of the y_k.
  double quadrature_error_at_tau = 0.0;
  /// Largest last-term magnitude over the flatness samples, and max |u| there.
  double max_tail = 0.0;
  double max_abs_u = 0.0;
};

inline void validate(const SynthesisParams& p) {
  if (!(p.T > 0.0)) throw ValidationError("T", "must be positive");
  if (!(p.tau > 2.0 * p.T / 3.0 && p.tau < p.T)) {
    throw ValidationError("tau", "must lie in (2T/3, T)");
  }
  if (!(p.s > 1.0 && p.s < 2.0)) throw ValidationError("s", "must lie in (1,2)");
  if (p.K < 1 || p.K > kMaxSeedOrder) throw ValidationError("K", "must lie in [1, 30]");
  if (p.K_u < 1) throw ValidationError("K_u", "must be at least 1");
  const int jo = p.jet_order < 0 ? p.K_u + 6 : p.jet_order;
  if (jo < p.K_u + 1 || jo > kDefaultMaxStepJetOrder) {
    throw ValidationError("jet_order", "must lie in [K_u + 1, 40]");
  }
}

/// Boundary value at t = 0: mean of the extended datum's limits at x = 1.
template <OddDatum D>
cplx initial_boundary_value(const D& datum) {
  return 0.5 * (datum(std::nextafter(1.0, 0.0)) + datum(std::nextafter(1.0, 2.0)));
}

/// Full control on the given increasing grid of positive times <= T.
template <OddDatum D>
Synthesis synthesize_control(const D& datum, const SynthesisParams& p,
                             const std::vector<double>& times) {
  validate(p);
  Synthesis out;
  out.flat.seed = flat_coefficients(datum, p.tau, p.K, p.quadrature);
  out.flat.T = p.T;
  out.flat.s = p.s;
  out.flat.jet_order = p.jet_order < 0 ? p.K_u + 6 : p.jet_order;
  out.flat.validate();

  std::vector<double> early;
  for (double t : times) {
    if (t > p.T) throw DomainError("control time beyond T");
    if (t <= p.tau) early.push_back(t);
  }
  const auto trace = boundary_trace(datum, early, p.quadrature);

  std::vector<ControlSample> samples;
  samples.reserve(times.size());
  for (const auto& s : trace) samples.push_back({s.t, s.u, s.du, Phase::smoothing});
  const std::size_t late_begin = samples.size();
  samples.resize(times.size());
  std::vector<double> tails(times.size(), 0.0);
  parallel_for(times.size() - late_begin, [&](std::size_t i) {
    const std::size_t n = late_begin + i;
    const auto v = control_series(out.flat, times[n], p.K_u);
    samples[n] = {times[n], v.value, v.dt_value, Phase::flatness};
    tails[n] = v.tail;
  });
  for (std::size_t n = late_begin; n < times.size(); ++n) {
    out.max_tail = std::max(out.max_tail, tails[n]);
    out.max_abs_u = std::max(out.max_abs_u, std::abs(samples[n].u));
  }
  out.trace = ControlTrace(initial_boundary_value(datum), std::move(samples));

  const auto before = free_evolution(datum, p.tau, 1.0, p.quadrature);
  const auto after = control_series(out.flat, p.tau, p.K_u);
  out.u_before = before.value;
  out.u_after = after.value;
  out.continuity_gap = std::abs(after.value - before.value);
  out.tail_at_tau = after.tail;
  double propagated = 0.0;
  double fact = 1.0;
  for (int k = 0; k <= std::min(p.K, p.K_u); ++k) {
    if (k > 0) fact *= (2.0 * k) * (2.0 * k + 1.0);
    propagated += out.flat.seed.y_err[k] / fact;
  }
  out.quadrature_error_at_tau = before.err_estimate + propagated;
  return out;
}

/// t_n = T n / Nt for n = 1..Nt.
inline std::vector<double> uniform_times(double T, int Nt) {
  std::vector<double> t(Nt);
  for (int n = 1; n <= Nt; ++n) t[n - 1] = T * n / Nt;
  return t;
}

}  // namespace flatctl
