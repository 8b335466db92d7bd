// Library walkthrough: plan a boundary control for a two-mode datum, then
// check it with the Crank-Nicolson simulator.

#include <cmath>
#include <cstdio>
#include <numbers>

#include "flatctl/control.hpp"
#include "flatctl/schrodinger_sim.hpp"

using namespace flatctl;

int main() {
  const double pi = std::numbers::pi;
  const Profile theta0([pi](double x) {
    return cplx{std::sin(pi * x), 0.5 * std::sin(3.0 * pi * x)};
  });

  SynthesisParams p;
  p.tau = 1.4;
  p.T = 2.0;
  p.K = p.K_u = 25;

  const SimConfig cfg{200, 8000, p.T, 8};
  const auto syn = synthesize_control(theta0, p, uniform_times(p.T, cfg.Nt));
  std::printf("continuity gap at tau: %.2e\n", syn.continuity_gap);

  std::printf("%8s %12s %12s\n", "t", "re u", "im u");
  for (int i = 0; i <= 10; ++i) {
    const double t = p.T * i / 10.0;
    const cplx u = syn.trace.value_at(t);
    std::printf("%8.3f %12.4e %12.4e\n", t, u.real(), u.imag());
  }

  const auto result = simulate(theta0, syn.trace, cfg);
  const auto rep = terminal_report(result.snapshots);
  std::printf("||theta(T)|| / ||theta0|| = %.3e\n", rep.relative);
  return 0;
}
