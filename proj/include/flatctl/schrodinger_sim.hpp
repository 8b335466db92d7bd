#pragma once

// Crank-Nicolson solver for i theta_t + theta_xx = 0 on (0,1) with
// theta(t,0) = 0 and theta(t,1) = u(t).

#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "flatctl/control.hpp"
#include "flatctl/datum.hpp"
#include "flatctl/errors.hpp"
#include "flatctl/tridiagonal.hpp"

namespace flatctl {

struct SimConfig {
  int Nx = 200;
  int Nt = 4000;
  double T = 0.5;
  /// Number of evenly spaced snapshots besides t = 0; t = T is always kept.
  int snapshots = 10;

  void validate() const {
    if (Nx < 16) throw ValidationError("Nx", "must be at least 16");
    if (Nt < 16) throw ValidationError("Nt", "must be at least 16");
    if (!(T > 0.0)) throw ValidationError("T", "must be positive");
    if (snapshots < 1) throw ValidationError("snapshots", "must be at least 1");
  }
  double dx() const { return 1.0 / Nx; }
  double dt() const { return T / Nt; }
};

/// Trapezoidal L^2(0,1) norm of values on a uniform grid.
inline double trapezoid_l2(std::span<const cplx> v, double dx) {
  double s = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double w = (j == 0 || j + 1 == v.size()) ? 0.5 : 1.0;
    s += w * std::norm(v[j]);
  }
  return std::sqrt(s * dx);
}

struct FieldSnapshot {
  double t = 0.0;
  std::vector<cplx> values;  // x_j = j / Nx
  double l2_norm = 0.0;
};

struct SimResult {
  std::vector<FieldSnapshot> snapshots;
  /// (t, l2) after every step, starting at t = 0.
  std::vector<std::pair<double, double>> history;
};

using FieldObserver = std::function<void(int step, double t, std::span<const cplx> values)>;

namespace detail {
inline bool is_snapshot_step(int n, const SimConfig& cfg) {
  if (n == 0 || n == cfg.Nt) return true;
  const long long num = static_cast<long long>(n) * cfg.snapshots;
  // step n is kept when it is the first step at or after k Nt / snapshots.
  const long long prev = static_cast<long long>(n - 1) * cfg.snapshots;
  return num / cfg.Nt != prev / cfg.Nt;
}
}  // namespace detail

template <OddDatum D>
SimResult simulate(const D& theta0, const ControlTrace& control, const SimConfig& cfg,
                   const FieldObserver& observer = {}) {
  cfg.validate();
  const int N = cfg.Nx;
  const double dx = cfg.dx();
  const double dt = cfg.dt();
  const cplx r{0.0, dt / (2.0 * dx * dx)};  // i dt / (2 dx^2)

  std::vector<cplx> theta(N + 1);
  theta[0] = 0.0;
  for (int j = 1; j < N; ++j) theta[j] = theta0.sample(static_cast<double>(j) / N);
  theta[N] = control.initial();

  // (I - r L) theta^{n+1} = (I + r L) theta^n + r (u^n + u^{n+1}) e_last
  const auto lu = TridiagonalLU::constant(N - 1, -r, 1.0 + 2.0 * r, -r);

  SimResult out;
  out.history.reserve(cfg.Nt + 1);
  auto record = [&](int n, double t) {
    const double l2 = trapezoid_l2(theta, dx);
    out.history.emplace_back(t, l2);
    if (detail::is_snapshot_step(n, cfg)) out.snapshots.push_back({t, theta, l2});
    if (observer) observer(n, t, theta);
  };
  record(0, 0.0);

  std::vector<cplx> rhs(N - 1);
  for (int n = 1; n <= cfg.Nt; ++n) {
    const double t = cfg.T * n / cfg.Nt;
    const cplx u_old = theta[N];
    const cplx u_new = control.value_at(t);
    // Increment form keeps rounding relative to the step, not the field:
    // (I - r L) delta = 2 r L theta^n + r (u^{n+1} - u^n) e_last.
    for (int j = 1; j < N; ++j) {
      rhs[j - 1] = 2.0 * r * (theta[j - 1] - 2.0 * theta[j] + theta[j + 1]);
    }
    rhs[N - 2] += r * (u_new - u_old);
    lu.solve(rhs);
    for (int j = 1; j < N; ++j) theta[j] += rhs[j - 1];
    theta[N] = u_new;
    record(n, t);
  }
  return out;
}

struct TerminalReport {
  double initial_l2 = 0.0;
  double terminal_l2 = 0.0;
  double relative = 0.0;
  std::vector<std::pair<double, double>> history;
};

inline TerminalReport terminal_report(const std::vector<FieldSnapshot>& snapshots) {
  if (snapshots.empty()) throw DomainError("terminal report needs at least one snapshot");
  TerminalReport rep;
  rep.initial_l2 = snapshots.front().l2_norm;
  rep.terminal_l2 = snapshots.back().l2_norm;
  rep.relative = rep.initial_l2 > 0.0 ? rep.terminal_l2 / rep.initial_l2 : 0.0;
  for (const auto& s : snapshots) rep.history.emplace_back(s.t, s.l2_norm);
  return rep;
}

}  // namespace flatctl
