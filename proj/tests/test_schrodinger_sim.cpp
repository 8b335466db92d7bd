#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "flatctl/schrodinger_sim.hpp"

using namespace flatctl;

namespace {

Profile sine_mode() {
  return Profile([](double x) { return cplx{std::sin(std::numbers::pi * x), 0.0}; });
}

double eigenmode_error(int Nx, int Nt) {
  const SimConfig cfg{Nx, Nt, 0.5, 4};
  double err = 0.0;
  simulate(sine_mode(), ControlTrace::zero(uniform_times(cfg.T, Nt)), cfg,
           [&](int, double t, std::span<const cplx> v) {
             const cplx phase = std::polar(1.0, -std::numbers::pi * std::numbers::pi * t);
             for (int j = 0; j <= Nx; ++j) {
               const double x = static_cast<double>(j) / Nx;
               err = std::max(err, std::abs(phase * std::sin(std::numbers::pi * x) - v[j]));
             }
           });
  return err;
}

}  // namespace

TEST(TridiagonalLU, MatchesDenseProduct) {
  const std::size_t n = 7;
  std::vector<cplx> lo(n), di(n), up(n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = {0.3 * i, -0.1};
    di[i] = {4.0 + i, 1.0};
    up[i] = {-0.5, 0.2 * i};
  }
  const TridiagonalLU lu(lo, di, up);
  std::vector<cplx> x(n), b(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = {1.0 + i, -0.5 * i};
  for (std::size_t i = 0; i < n; ++i) {
    b[i] = di[i] * x[i];
    if (i > 0) b[i] += lo[i] * x[i - 1];
    if (i + 1 < n) b[i] += up[i] * x[i + 1];
  }
  lu.solve(b);
  for (std::size_t i = 0; i < n; ++i) EXPECT_LT(std::abs(b[i] - x[i]), 1e-14);
}

TEST(TridiagonalLU, BreakdownIsANumericalError) {
  EXPECT_THROW(TridiagonalLU::constant(3, 1.0, 0.0, 1.0), NumericalError);
  EXPECT_THROW(TridiagonalLU({}, {}, {}), DomainError);
  const auto lu = TridiagonalLU::constant(3, 0.0, 1.0, 0.0);
  std::vector<cplx> wrong(2);
  EXPECT_THROW(lu.solve(wrong), DomainError);
}

TEST(SimConfig, Validation) {
  EXPECT_THROW((SimConfig{15, 100, 0.5, 4}.validate()), ValidationError);
  EXPECT_THROW((SimConfig{100, 15, 0.5, 4}.validate()), ValidationError);
  EXPECT_THROW((SimConfig{100, 100, 0.0, 4}.validate()), ValidationError);
  try {
    SimConfig{8, 100, 0.5, 4}.validate();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "Nx");
  }
}

TEST(Simulate, ZeroDataStayZero) {
  const SimConfig cfg{32, 64, 0.5, 4};
  const auto r = simulate(PiecewiseProfile::zero(), ControlTrace::zero(uniform_times(cfg.T, cfg.Nt)), cfg);
  for (const auto& s : r.snapshots) {
    for (const auto& v : s.values) EXPECT_EQ(v, cplx{});
  }
  const auto rep = terminal_report(r.snapshots);
  EXPECT_EQ(rep.terminal_l2, 0.0);
  EXPECT_EQ(rep.relative, 0.0);
  for (const auto& [t, l2] : rep.history) EXPECT_EQ(l2, 0.0);
}

TEST(Simulate, SnapshotsIncludeEndpointsAndBoundaryValues) {
  const SimConfig cfg{32, 100, 0.5, 4};
  const auto times = uniform_times(cfg.T, cfg.Nt);
  std::vector<ControlSample> samples;
  for (double t : times) samples.push_back({t, {std::sin(t), t}, {}, Phase::smoothing});
  const ControlTrace trace(cplx{}, samples);
  const auto r = simulate(sine_mode(), trace, cfg);
  ASSERT_EQ(r.snapshots.size(), 5u);
  EXPECT_EQ(r.snapshots.front().t, 0.0);
  EXPECT_EQ(r.snapshots.back().t, cfg.T);
  for (const auto& s : r.snapshots) {
    EXPECT_EQ(s.values.front(), cplx{});
    EXPECT_EQ(s.values.back(), trace.value_at(s.t));
  }
  EXPECT_EQ(r.history.size(), static_cast<std::size_t>(cfg.Nt + 1));
}

TEST(Simulate, UnitaryWithoutControl) {
  const SimConfig cfg{200, 4000, 0.5, 10};
  for (const Profile& p : {sine_mode(), Profile(PiecewiseProfile::reference_step_datum())}) {
    const auto r = simulate(p, ControlTrace::zero(uniform_times(cfg.T, cfg.Nt)), cfg);
    const double n0 = r.history.front().second;
    for (const auto& [t, l2] : r.history) EXPECT_LE(std::abs(l2 - n0) / n0, 1e-12) << "t=" << t;
  }
}

TEST(Simulate, EigenmodeConvergesAtSecondOrder) {
  std::vector<double> errs;
  for (int l = 0; l < 4; ++l) errs.push_back(eigenmode_error(20 << l, 50 << l));
  for (std::size_t i = 1; i < errs.size(); ++i) {
    const double rate = std::log2(errs[i - 1] / errs[i]);
    EXPECT_NEAR(rate, 2.0, 0.2) << "level " << i;
  }
}

TEST(TerminalReport, NeedsSnapshots) {
  EXPECT_THROW(terminal_report({}), DomainError);
}

TEST(ControlTrace, LinearInterpolation) {
  const ControlTrace tr(cplx{1.0, 0.0}, {{0.1, {2.0, 0.0}, {0.0, 1.0}, Phase::smoothing},
                                         {0.3, {0.0, 2.0}, {0.0, 3.0}, Phase::flatness}});
  EXPECT_EQ(tr.value_at(0.0), cplx(1.0, 0.0));
  EXPECT_EQ(tr.value_at(0.1), cplx(2.0, 0.0));
  EXPECT_NEAR(std::abs(tr.value_at(0.2) - cplx(1.0, 1.0)), 0.0, 1e-15);
  EXPECT_EQ(tr.value_at(0.3), cplx(0.0, 2.0));
  EXPECT_NEAR(std::abs(tr.derivative_at(0.2) - cplx(0.0, 2.0)), 0.0, 1e-15);
}
