#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "flatctl/kernel.hpp"
#include "flatctl/quadrature.hpp"
#include "oracles.hpp"

using namespace flatctl;

TEST(Integrate, Constant) {
  const auto r = integrate([](double) { return cplx{1.0, 0.0}; });
  EXPECT_NEAR(r.value.real(), 1.0, 1e-15);
  EXPECT_EQ(r.value.imag(), 0.0);
}

TEST(Integrate, ComplexExponential) {
  const auto r = integrate([](double y) { return std::polar(1.0, y); });
  EXPECT_NEAR(r.value.real(), std::sin(1.0), 1e-14);
  EXPECT_NEAR(r.value.imag(), 1.0 - std::cos(1.0), 1e-14);
}

TEST(Integrate, OddKernelMatchesDenseSimpson) {
  const std::vector<double> bps{0.2, 0.5, 0.7};
  auto f = [](double y) { return odd_kernel(0.35, 1.0, y, 0); };
  const cplx want = oracle::simpson(f, {0.0, 1.0}, 1000000);
  EXPECT_LT(std::abs(integrate(f, bps).value - want), 1e-8);

  auto g = [](double y) { return odd_kernel(0.35, 1.0, y, 0) * oracle::reference_datum(y); };
  const cplx want_g = oracle::simpson(g, {0.0, 0.2, 0.5, 0.7, 1.0}, 1000000);
  EXPECT_LT(std::abs(integrate(g, bps).value - want_g), 1e-8);
}

TEST(Integrate, Linearity) {
  auto f = [](double y) { return std::polar(1.0, 7.0 * y * y); };
  auto g = [](double y) { return cplx{std::exp(-y), y * y * y}; };
  const cplx a{2.0, -1.0};
  const cplx b{-0.5, 3.0};
  const auto rf = integrate(f);
  const auto rg = integrate(g);
  const auto rs = integrate([&](double y) { return a * f(y) + b * g(y); });
  const double tol = std::abs(a) * rf.err_estimate + std::abs(b) * rg.err_estimate + rs.err_estimate + 1e-14;
  EXPECT_LE(std::abs(rs.value - (a * rf.value + b * rg.value)), tol);
}

TEST(Integrate, StepWithDeclaredBreakpointIsExact) {
  auto step = [](double y) { return y < 0.3 ? cplx{1.0, 0.0} : cplx{0.0, 2.0}; };
  const auto r = integrate(step, {0.3});
  EXPECT_NEAR(r.value.real(), 0.3, 4e-16);
  EXPECT_NEAR(r.value.imag(), 1.4, 4e-16);
  EXPECT_EQ(r.panels, 2);
}

TEST(Integrate, GeneralInterval) {
  auto f = [](double y) { return cplx{y, 0.0}; };
  IntegrationProblem<decltype(f)> p{f, {1.0}, 0.0, 1.75, {}};
  EXPECT_NEAR(integrate(p).value.real(), 1.75 * 1.75 / 2.0, 1e-15);
}

TEST(Integrate, ErrorEstimateIsConservative) {
  // Closed-form oscillatory integrands: int_0^1 y^n e^{i a y} dy via the
  // recurrence I_n = (e^{ia} - n I_{n-1}) / (i a).
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> freq(1.0, 60.0);
  std::uniform_int_distribution<int> power(0, 4);
  int covered = 0;
  constexpr int kCases = 200;
  for (int c = 0; c < kCases; ++c) {
    const double a = freq(rng);
    const int n = power(rng);
    const cplx ia{0.0, a};
    const cplx ea = std::polar(1.0, a);
    cplx exact = (ea - 1.0) / ia;
    for (int k = 1; k <= n; ++k) exact = (ea - static_cast<double>(k) * exact) / ia;
    const auto r = integrate([&](double y) { return std::pow(y, n) * std::polar(1.0, a * y); });
    if (std::abs(r.value - exact) <= r.err_estimate) ++covered;
  }
  EXPECT_GE(covered, static_cast<int>(0.95 * kCases));
}

TEST(Integrate, ExhaustedBudgetCarriesBestValue) {
  auto f = [](double y) { return std::polar(1.0, 400.0 * y * y); };
  const auto ref = integrate(f);
  try {
    integrate(f, {}, QuadratureOptions{1e-14, 1e-14, 4});
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_GT(e.error_estimate(), 0.0);
    EXPECT_TRUE(std::isfinite(e.best_real()));
    EXPECT_TRUE(std::isfinite(e.best_imag()));
    EXPECT_LT(std::abs(cplx(e.best_real(), e.best_imag()) - ref.value), 1.0);
  }
}

TEST(Integrate, Deterministic) {
  auto f = [](double y) { return odd_kernel(0.1, 1.0, y, 3) * oracle::reference_datum(y); };
  const auto a = integrate(f, {0.2, 0.5, 0.7});
  const auto b = integrate(f, {0.2, 0.5, 0.7});
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.err_estimate, b.err_estimate);
  EXPECT_EQ(a.panels, b.panels);
}

TEST(IntegrationProblem, Validation) {
  auto f = [](double) { return cplx{}; };
  EXPECT_THROW(integrate(f, {0.5, 0.2}), DomainError);
  EXPECT_THROW(integrate(f, {0.5, 0.5}), DomainError);
  EXPECT_THROW(integrate(f, {1.5}), DomainError);
  EXPECT_THROW(integrate(f, {}, QuadratureOptions{0.0, 1e-8, 16}), DomainError);
  EXPECT_THROW(integrate(f, {}, QuadratureOptions{1e-10, -1.0, 16}), DomainError);
}
