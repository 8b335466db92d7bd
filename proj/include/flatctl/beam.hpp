#pragma once

// Hinged Euler-Bernoulli beam eta_tt + eta_xxxx = 0 driven through
// (eta, eta_xx)(t,1) = (u1, u2). Beam data are lifted to a Schrödinger datum
// theta0 = eta0 + i psi with -psi'' = eta1, extended past x = 1 by a damped
// reflection, and steered with u1 = Re u, u2 = Im u'.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <set>
#include <span>
#include <vector>

#include "flatctl/control.hpp"
#include "flatctl/datum.hpp"
#include "flatctl/gevrey.hpp"
#include "flatctl/profile.hpp"
#include "flatctl/schrodinger_sim.hpp"
#include "flatctl/tridiagonal.hpp"

namespace flatctl {

struct BeamData {
  Profile eta0;
  Profile eta1;

  void validate() const {
    constexpr double tol = 1e-12;
    if (std::abs(eta0.sample(0.0)) > tol || std::abs(eta0.sample(1.0)) > tol) {
      throw ValidationError("eta0", "must vanish at x = 0 and x = 1");
    }
  }
};

namespace detail {

// Restate a piecewise polynomial on a finer breakpoint set.
inline PiecewiseProfile refine(const PiecewiseProfile& p, const std::vector<double>& bps) {
  std::vector<std::vector<cplx>> pieces;
  for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
    pieces.push_back(p.pieces()[p.piece_index(0.5 * (bps[i] + bps[i + 1]))]);
  }
  return {bps, std::move(pieces)};
}

inline std::vector<double> merge_breakpoints(const std::vector<double>& a,
                                             const std::vector<double>& b) {
  std::set<double> all(a.begin(), a.end());
  all.insert(b.begin(), b.end());
  return {all.begin(), all.end()};
}

// Continuous antiderivative vanishing at x = 0.
inline PiecewiseProfile antiderivative(const PiecewiseProfile& p) {
  const auto& bps = p.breakpoints();
  std::vector<std::vector<cplx>> pieces;
  cplx left_value{};
  for (std::size_t i = 0; i < p.pieces().size(); ++i) {
    const auto& c = p.pieces()[i];
    std::vector<cplx> q(c.size() + 1, cplx{});
    for (std::size_t j = 0; j < c.size(); ++j) q[j + 1] = c[j] / static_cast<double>(j + 1);
    PiecewiseProfile tmp({0.0, 1.0}, {q});
    q[0] = left_value - tmp.eval_piece(0, bps[i]);
    tmp = PiecewiseProfile({0.0, 1.0}, {q});
    left_value = tmp.eval_piece(0, bps[i + 1]);
    pieces.push_back(std::move(q));
  }
  return {bps, std::move(pieces)};
}

}  // namespace detail

/// psi with -psi'' = eta1, psi(0) = psi(1) = 0, by exact double integration.
inline PiecewiseProfile solve_lift_closed_form(const PiecewiseProfile& eta1) {
  const auto twice = detail::antiderivative(detail::antiderivative(eta1));
  const cplx end = twice.eval_piece(twice.pieces().size() - 1, 1.0);
  std::vector<std::vector<cplx>> pieces;
  for (auto q : twice.pieces()) {
    for (auto& c : q) c = -c;
    if (q.size() < 2) q.resize(2, cplx{});
    q[1] += end;
    pieces.push_back(std::move(q));
  }
  return {twice.breakpoints(), std::move(pieces)};
}

/// psi on the grid x_j = j/n from the second-order finite-difference
/// Dirichlet problem.
template <class Fn>
std::vector<double> solve_lift_grid(const Fn& eta1, int n) {
  if (n < 2) throw DomainError("lift grid needs at least two intervals");
  const double h = 1.0 / n;
  std::vector<cplx> rhs(n - 1);
  for (int j = 1; j < n; ++j) rhs[j - 1] = h * h * std::real(eta1(static_cast<double>(j) / n));
  TridiagonalLU::constant(n - 1, -1.0, 2.0, -1.0).solve(rhs);
  std::vector<double> psi(n + 1, 0.0);
  for (int j = 1; j < n; ++j) psi[j] = rhs[j - 1].real();
  return psi;
}

inline constexpr int kLiftGridIntervals = 4096;

/// theta0 = eta0 + i psi. Stays piecewise polynomial when both data are.
inline Profile lift_initial_data(const BeamData& data) {
  data.validate();
  const auto& p0 = data.eta0.polynomial();
  const auto& p1 = data.eta1.polynomial();
  if (p0 && p1) {
    const auto psi = solve_lift_closed_form(*p1);
    const auto bps = detail::merge_breakpoints(p0->breakpoints(), psi.breakpoints());
    const auto a = detail::refine(*p0, bps);
    const auto b = detail::refine(psi, bps);
    std::vector<std::vector<cplx>> pieces;
    for (std::size_t i = 0; i < a.pieces().size(); ++i) {
      auto q = a.pieces()[i];
      const auto& r = b.pieces()[i];
      q.resize(std::max(q.size(), r.size()), cplx{});
      for (std::size_t j = 0; j < r.size(); ++j) q[j] += cplx{0.0, 1.0} * r[j];
      pieces.push_back(std::move(q));
    }
    return Profile(PiecewiseProfile(bps, std::move(pieces)));
  }

  std::function<double(double)> psi;
  std::vector<double> bps = data.eta0.interior_breakpoints();
  if (p1) {
    const auto poly = solve_lift_closed_form(*p1);
    psi = [poly](double x) { return poly(x).real(); };
    const auto more = poly.interior_breakpoints();
    bps = detail::merge_breakpoints(bps, more);
  } else {
    auto grid = std::make_shared<std::vector<double>>(
        solve_lift_grid(data.eta1, kLiftGridIntervals));
    psi = [grid](double x) {
      const int n = static_cast<int>(grid->size()) - 1;
      const double s = std::clamp(x, 0.0, 1.0) * n;
      const int j = std::min(static_cast<int>(s), n - 1);
      const double w = s - j;
      return (1.0 - w) * (*grid)[j] + w * (*grid)[j + 1];
    };
  }
  auto eta0 = data.eta0;
  return Profile([eta0, psi](double x) { return cplx{eta0(x).real(), psi(x)}; }, bps, 1.0);
}

/// v0 on (0, 7/4]: theta0 on (0,1), -theta0(2-x) zeta(x) on (1,2), with zeta
/// the Gevrey step rescaled to fall from 1 to 0 across [5/4, 7/4].
class ExtendedDatum {
 public:
  static constexpr double kPlateauEnd = 1.25;
  static constexpr double kSupportEnd = 1.75;

  explicit ExtendedDatum(Profile theta0, double s = 1.9) : theta0_(std::move(theta0)), s_(s) {
    detail::step_kappa(s);
    std::set<double> b{1.0, kPlateauEnd};
    for (double x : theta0_.interior_breakpoints()) {
      b.insert(x);
      if (2.0 - x < kSupportEnd) b.insert(2.0 - x);
    }
    breakpoints_.assign(b.begin(), b.end());
  }

  double cutoff(double x) const {
    return step_function((x - kPlateauEnd) / (kSupportEnd - kPlateauEnd), s_);
  }

  /// v0 on the positive half-line.
  cplx operator()(double x) const {
    if (x <= 0.0 || x >= 2.0) return {};
    if (x <= 1.0) return theta0_(x);
    const double z = cutoff(x);
    return z == 0.0 ? cplx{} : -theta0_(2.0 - x) * z;
  }
  cplx sample(double x) const { return (*this)(x); }

  /// v0 on the whole line, odd.
  cplx value(double x) const { return x < 0.0 ? -(*this)(-x) : (*this)(x); }

  std::vector<double> interior_breakpoints() const { return breakpoints_; }
  double support_end() const { return kSupportEnd; }
  const Profile& theta0() const { return theta0_; }

 private:
  Profile theta0_;
  double s_;
  std::vector<double> breakpoints_;
};

static_assert(OddDatum<ExtendedDatum>);

inline ExtendedDatum extend_odd_smooth(Profile theta0, double s = 1.9) {
  return ExtendedDatum(std::move(theta0), s);
}

struct BeamControls {
  Profile theta0;
  Synthesis synthesis;
  std::vector<double> times;
  std::vector<double> u1;
  std::vector<double> u2;

  double u1_at(double t) const { return synthesis.trace.value_at(t).real(); }
  double u2_at(double t) const { return synthesis.trace.derivative_at(t).imag(); }
};

/// Lift, extend, synthesize; u1 = Re u and u2 = Im u' on the given times.
inline BeamControls beam_controls(const BeamData& data, const SynthesisParams& p,
                                  const std::vector<double>& times) {
  BeamControls out;
  out.theta0 = lift_initial_data(data);
  const auto v0 = extend_odd_smooth(out.theta0, p.s);
  out.synthesis = synthesize_control(v0, p, times);
  out.times = times;
  for (const auto& s : out.synthesis.trace.samples()) {
    out.u1.push_back(s.u.real());
    out.u2.push_back(s.du.imag());
  }
  return out;
}

struct BeamSnapshot {
  double t = 0.0;
  std::vector<double> eta;    // x_j = j / Nx, boundary values included
  std::vector<double> eta_t;
  double energy = 0.0;
};

struct BeamResult {
  std::vector<BeamSnapshot> snapshots;
  std::vector<std::pair<double, double>> energy_history;
  double terminal_eta_l2 = 0.0;
  double terminal_eta_t_l2 = 0.0;
};

using BeamObserver =
    std::function<void(int step, double t, std::span<const double> eta, std::span<const double> eta_t)>;

/// Implicit trapezoidal rule on (eta, eta_t) with the hinged fourth
/// difference A^2, A the Dirichlet second difference. The boundary rows carry
/// eta(1) = u1 and eta_xx(1) = u2; eta = eta_xx = 0 at x = 0.
template <class U1, class U2>
BeamResult beam_simulate(const BeamData& data, const U1& u1, const U2& u2, const SimConfig& cfg,
                         const BeamObserver& observer = {}) {
  cfg.validate();
  const int N = cfg.Nx;
  const int M = N - 1;
  const double h = cfg.dx();
  const double dt = cfg.dt();
  const double h2 = h * h;
  const double c = dt * dt / 4.0;

  std::vector<double> eta(M), w(M);
  for (int j = 1; j < N; ++j) {
    const double x = static_cast<double>(j) / N;
    eta[j - 1] = data.eta0.sample(x).real();
    w[j - 1] = data.eta1.sample(x).real();
  }

  auto apply_a = [&](std::span<const double> v, std::span<double> out) {
    for (int j = 0; j < M; ++j) {
      const double l = j > 0 ? v[j - 1] : 0.0;
      const double r = j + 1 < M ? v[j + 1] : 0.0;
      out[j] = (l - 2.0 * v[j] + r) / h2;
    }
  };
  // Boundary forcing g with A^2 eta + g the full fourth difference.
  auto forcing = [&](double a, double b, std::span<double> g) {
    std::fill(g.begin(), g.end(), 0.0);
    g[M - 1] += -2.0 * a / (h2 * h2) + b / h2;
    if (M >= 2) g[M - 2] += a / (h2 * h2);
  };

  const cplx a_off{0.0, std::sqrt(c) / h2};
  const auto plus = TridiagonalLU::constant(M, a_off, 1.0 - 2.0 * a_off, a_off);
  const auto minus = TridiagonalLU::constant(M, -a_off, 1.0 + 2.0 * a_off, -a_off);

  BeamResult out;
  std::vector<double> full_eta(N + 1), full_w(N + 1), tmp(M), tmp2(M), g_old(M), g_new(M);
  double u1_prev = u1(0.0);
  double u2_prev = u2(0.0);
  double w_end_prev = data.eta1.sample(1.0).real();

  auto record = [&](int n, double t, double bu1, double bu2, double w_end) {
    full_eta[0] = 0.0;
    full_w[0] = 0.0;
    for (int j = 0; j < M; ++j) {
      full_eta[j + 1] = eta[j];
      full_w[j + 1] = w[j];
    }
    full_eta[N] = bu1;
    full_w[N] = w_end;
    double e = 0.0;
    for (int j = 0; j <= N; ++j) {
      double curv = 0.0;
      if (j == N) curv = bu2;
      else if (j > 0) curv = (full_eta[j - 1] - 2.0 * full_eta[j] + full_eta[j + 1]) / h2;
      const double wt = (j == 0 || j == N) ? 0.5 : 1.0;
      e += wt * (full_w[j] * full_w[j] + curv * curv);
    }
    e *= 0.5 * h;
    out.energy_history.emplace_back(t, e);
    if (detail::is_snapshot_step(n, cfg)) out.snapshots.push_back({t, full_eta, full_w, e});
    if (observer) observer(n, t, full_eta, full_w);
  };
  record(0, 0.0, u1_prev, u2_prev, w_end_prev);

  std::vector<cplx> rhs(M);
  for (int n = 1; n <= cfg.Nt; ++n) {
    const double t = cfg.T * n / cfg.Nt;
    const double a_new = u1(t);
    const double b_new = u2(t);
    forcing(u1_prev, u2_prev, g_old);
    forcing(a_new, b_new, g_new);
    apply_a(eta, tmp);
    apply_a(tmp, tmp2);
    // Increment form: (I + c A^2) delta = dt w - 2c A^2 eta - c (g_old + g_new).
    for (int j = 0; j < M; ++j) {
      rhs[j] = dt * w[j] - 2.0 * c * tmp2[j] - c * (g_old[j] + g_new[j]);
    }
    plus.solve(rhs);
    minus.solve(rhs);
    for (int j = 0; j < M; ++j) {
      const double delta = rhs[j].real();
      w[j] = 2.0 * delta / dt - w[j];
      eta[j] += delta;
    }
    const double w_end = (a_new - u1_prev) / dt;
    u1_prev = a_new;
    u2_prev = b_new;
    w_end_prev = w_end;
    record(n, t, a_new, b_new, w_end);
  }

  const auto& last = out.snapshots.back();
  double se = 0.0, sw = 0.0;
  for (int j = 0; j <= N; ++j) {
    const double wt = (j == 0 || j == N) ? 0.5 : 1.0;
    se += wt * last.eta[j] * last.eta[j];
    sw += wt * last.eta_t[j] * last.eta_t[j];
  }
  out.terminal_eta_l2 = std::sqrt(se * h);
  out.terminal_eta_t_l2 = std::sqrt(sw * h);
  return out;
}

}  // namespace flatctl
