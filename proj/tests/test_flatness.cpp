#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "flatctl/flatness.hpp"
#include "flatctl/gevrey.hpp"
#include "oracles.hpp"

using namespace flatctl;

namespace {

const FlatSeed& seed_for(double tau, int K) {
  static std::map<std::pair<double, int>, FlatSeed> cache;
  auto key = std::make_pair(tau, K);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, flat_coefficients(PiecewiseProfile::reference_step_datum(), tau, K)).first;
  }
  return it->second;
}

FlatOutput reference_output() { return {seed_for(0.35, 15), 0.5, 1.9, 21}; }
// Long horizon where the control series converges at moderate order.
FlatOutput long_output(int K = 15, int jet_order = 21) { return {seed_for(1.4, K), 2.0, 1.9, jet_order}; }

double factorial(int n) { return std::tgamma(n + 1.0); }

}  // namespace

TEST(FlatOutput, Validation) {
  auto fo = reference_output();
  EXPECT_NO_THROW(fo.validate());
  fo.T = 0.6;  // tau < 2T/3
  EXPECT_THROW(fo.validate(), DomainError);
  fo = reference_output();
  fo.s = 2.0;
  EXPECT_THROW(fo.validate(), DomainError);
  fo = reference_output();
  fo.jet_order = 41;
  EXPECT_THROW(fo.validate(), CapabilityError);
}

TEST(AnalyticPart, CoefficientsAtTau) {
  const auto fo = reference_output();
  const auto j = analytic_part_jet(fo, fo.tau());
  for (int m = 0; m <= fo.seed.K; ++m) {
    EXPECT_LE(std::abs(j[m] - fo.seed.y[m] / factorial(m)), 1e-15 * std::abs(fo.seed.y[m]) / factorial(m));
  }
  for (int m = fo.seed.K + 1; m <= fo.jet_order; ++m) EXPECT_EQ(j[m], cplx{});
}

TEST(AnalyticPart, SingleCoefficientSeedIsConstant) {
  FlatSeed seed{0.35, 15, std::vector<cplx>(16), std::vector<double>(16), 0.0};
  seed.y[0] = {0.3, -1.2};
  const FlatOutput fo{seed, 0.5, 1.9, 21};
  for (double t : {0.35, 0.42, 0.5}) {
    const auto j = analytic_part_jet(fo, t);
    EXPECT_EQ(j[0], seed.y[0]);
    for (int m = 1; m <= fo.jet_order; ++m) EXPECT_EQ(j[m], cplx{});
  }
}

TEST(AnalyticPart, MatchesExtendedPrecisionSum) {
  const auto fo = reference_output();
  const double t = 0.5 * (fo.tau() + fo.T);
  const oracle::mp h = oracle::mp(t) - oracle::mp(fo.tau());
  oracle::mp re = 0, im = 0, term = 1;
  for (int k = 0; k <= fo.seed.K; ++k) {
    if (k > 0) term = term * h / k;
    re += term * fo.seed.y[k].real();
    im += term * fo.seed.y[k].imag();
  }
  const cplx want{static_cast<double>(re), static_cast<double>(im)};
  EXPECT_LE(std::abs(analytic_part_jet(fo, t)[0] - want), 1e-12 * std::abs(want));
}

TEST(FlatOutputJet, VanishesExactlyAtFinalTime) {
  for (const auto& fo : {reference_output(), long_output()}) {
    const auto j = flat_output_jet(fo, fo.T);
    for (int k = 0; k <= fo.jet_order; ++k) EXPECT_EQ(j[k], cplx{}) << "k=" << k;
  }
}

TEST(FlatOutputJet, EqualsAnalyticPartAtTau) {
  const auto fo = reference_output();
  const auto a = flat_output_jet(fo, fo.tau());
  const auto b = analytic_part_jet(fo, fo.tau());
  for (int k = 0; k <= fo.jet_order; ++k) EXPECT_EQ(a[k], b[k]) << "k=" << k;
  const auto y = flat_output_derivatives(fo, fo.tau(), fo.seed.K);
  for (int k = 0; k <= fo.seed.K; ++k) EXPECT_EQ(y[k], fo.seed.y[k]) << "k=" << k;
}

TEST(FlatOutputJet, OutsideWindowIsADomainError) {
  const auto fo = reference_output();
  EXPECT_THROW(flat_output_jet(fo, 0.3), DomainError);
  EXPECT_THROW(flat_output_jet(fo, 0.51), DomainError);
}

TEST(FlatOutputJet, LeibnizMatchesJetProduct) {
  const auto fo = reference_output();
  const double t = 0.41;
  const double width = fo.T - fo.tau();
  const auto phi = to_complex(step_jet((t - fo.tau()) / width, fo.s, fo.jet_order).scaled(1.0 / width, t));
  const auto prod = phi * analytic_part_jet(fo, t);
  const auto direct = flat_output_jet(fo, t);
  for (int k = 0; k <= fo.jet_order; ++k) {
    EXPECT_LE(std::abs(prod[k] - direct[k]), 1e-12 * std::abs(direct[k]) + 1e-300) << "k=" << k;
  }
}

TEST(FlatOutputJet, GevreyGrowthWithFittedConstants) {
  const auto fo = reference_output();
  std::vector<ComplexJet> lo, hi;
  for (int i = 0; i <= 30; ++i) {
    const double t = fo.tau() + (fo.T - fo.tau()) * i / 30.0;
    const auto j = flat_output_jet(fo, t);
    lo.push_back(j.truncated(10));
    hi.push_back(j);
  }
  const double R = 0.05;
  const double C = fit_gevrey_constant(std::span<const ComplexJet>(lo), R, fo.s, 10);
  ASSERT_GT(C, 0.0);
  const auto check = verify_gevrey_bound(std::span<const ComplexJet>(hi), {C, R, fo.s});
  EXPECT_TRUE(check.holds) << "violated at t=" << (check.first_violation ? check.first_violation->point : 0.0)
                           << " order " << (check.first_violation ? check.first_violation->order : -1);
}

TEST(ControlSeries, ZeroSeed) {
  FlatSeed seed{0.35, 15, std::vector<cplx>(16), std::vector<double>(16), 0.0};
  const FlatOutput fo{seed, 0.5, 1.9, 21};
  for (int i = 0; i <= 10; ++i) {
    const auto v = control_series(fo, 0.35 + 0.015 * i);
    EXPECT_EQ(v.value, cplx{});
    EXPECT_EQ(v.dt_value, cplx{});
  }
}

TEST(ControlSeries, VanishesAtFinalTime) {
  const auto v = control_series(reference_output(), 0.5);
  EXPECT_EQ(v.value, cplx{});
  EXPECT_EQ(v.dt_value, cplx{});
}

TEST(ControlSeries, MatchesSeedSeriesAndTraceAtTau) {
  const auto fo = reference_output();
  const auto v = control_series(fo, fo.tau());
  const auto s = seed_series(fo.seed, 1.0);
  EXPECT_EQ(v.value, s.value);
  const auto u = free_evolution(PiecewiseProfile::reference_step_datum(), fo.tau(), 1.0);
  double y_err = 0.0;
  for (double e : fo.seed.y_err) y_err += e;
  EXPECT_LE(std::abs(v.value - u.value), v.tail + u.err_estimate + y_err);
}

TEST(ControlSeries, OrderBeyondJetIsACapabilityError) {
  EXPECT_THROW(control_series(reference_output(), 0.4, 21), CapabilityError);
}

TEST(StateSeries, ZeroAtOriginAndControlAtOne) {
  const auto fo = reference_output();
  for (int i = 0; i <= 10; ++i) {
    const double t = fo.tau() + (fo.T - fo.tau()) * i / 10.0;
    EXPECT_EQ(state_series(fo, t, 0.0).value, cplx{});
    const auto a = state_series(fo, t, 1.0);
    const auto b = control_series(fo, t);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.dt_value, b.dt_value);
    EXPECT_EQ(a.tail, b.tail);
  }
}

TEST(StateSeries, ResidualIsTheDroppedTerm) {
  // i theta_t + theta_xx on the truncated series leaves
  // -x^{2K+1}/(2K+1)! (-i)^{K+1} y^{(K+1)}.
  for (const auto& fo : {reference_output(), long_output()}) {
    const int K = 15;
    for (int i = 1; i < 8; ++i) {
      const double t = fo.tau() + (fo.T - fo.tau()) * i / 8.0;
      const auto c = series_coefficients(fo, t, K);
      const auto y = flat_output_derivatives(fo, t, K + 1);
      for (double x : {0.25, 0.7, 1.0}) {
        const auto v = c.at(x);
        cplx theta_xx{};
        double scale = 0.0;
        for (int k = 1; k <= K; ++k) {
          const cplx term = c.value[k] * ((2.0 * k + 1.0) * (2.0 * k) * std::pow(x, 2 * k - 1));
          theta_xx += term;
          scale += std::abs(term);
        }
        const cplx residual = cplx(0.0, 1.0) * v.dt_value + theta_xx;
        const cplx dropped =
            -std::pow(x, 2 * K + 1) / factorial(2 * K + 1) * detail::rotate_minus_i(y[K + 1], K + 1);
        scale += std::abs(v.dt_value);
        EXPECT_LE(std::abs(residual - dropped), 1e-12 * scale) << "t=" << t << " x=" << x;
      }
    }
  }
}

TEST(StateSeries, TailSmallOnConvergentHorizon) {
  const int Ku = 25;
  const auto fo = long_output(25, 31);
  double max_u = 0.0, max_tail = 0.0;
  for (int i = 1; i <= 200; ++i) {
    const double t = fo.tau() + (fo.T - fo.tau()) * i / 200.0;
    const auto v = control_series(fo, t, Ku);
    max_u = std::max(max_u, std::abs(v.value));
    max_tail = std::max(max_tail, v.tail);
  }
  EXPECT_LT(max_tail, 1e-6 * max_u);
}

TEST(StateSeries, TermsEventuallyDecay) {
  const auto fo = long_output(25, 31);
  const double t = 1.7;
  const auto y = flat_output_derivatives(fo, t, 30);
  std::vector<double> terms;
  double f = 1.0;
  for (int k = 0; k <= 30; ++k) {
    if (k > 0) f *= (2.0 * k) * (2.0 * k + 1.0);
    terms.push_back(std::abs(y[k]) / f);
  }
  // Individual terms oscillate; compare the envelope over blocks of four.
  auto block_max = [&](int b) { return *std::max_element(terms.begin() + b, terms.begin() + b + 4); };
  for (int b = 11; b + 8 <= 31; b += 4) EXPECT_LT(block_max(b + 4), 1e-2 * block_max(b)) << "block " << b;
}

TEST(StateSeries, SmoothAcrossTau) {
  const auto d = PiecewiseProfile::reference_step_datum();
  const FlatOutput fo{seed_for(0.35, 20), 0.5, 1.9, 21};
  for (int m = 0; m <= 5; ++m) {
    for (double x : {0.3, 0.6, 1.0}) {
      const cplx series = detail::rotate_minus_i(state_series(fo, fo.tau(), x, 15, m).value, m);
      const cplx field = free_evolution_derivative(d, fo.tau(), x, 2 * m).value;
      EXPECT_LE(std::abs(series - field), 1e-4 * std::abs(field)) << "m=" << m << " x=" << x;
    }
  }
}
