// Command line front end: run a scenario, run a refinement study, or a quick
// self test.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "flatctl/scenario.hpp"

namespace {

enum ExitCode { kOk = 0, kOther = 1, kValidation = 2, kNumerical = 3, kIo = 4 };

void print_summary(const flatctl::Summary& s) {
  for (const auto& [k, v] : s) std::cout << k << '=' << v << '\n';
}

int selftest() {
  using namespace flatctl;
  int failures = 0;
  auto check = [&](const char* name, bool ok, double value) {
    std::cout << (ok ? "ok   " : "FAIL ") << name << " (" << format_number(value) << ")\n";
    if (!ok) ++failures;
  };

  auto zero = builtin_scenario("zero");
  zero.sim.Nx = 64;
  zero.sim.Nt = 256;
  const auto z = run_scenario(zero, false);
  check("zero datum gives zero terminal norm", z.terminal_l2 == 0.0 && z.max_abs_u == 0.0, z.terminal_l2);

  auto eig = builtin_scenario("eigenmode-check");
  eig.sim.Nx = 128;
  eig.sim.Nt = 512;
  const auto e = run_scenario(eig, false);
  check("free run conserves the discrete norm", e.norm_drift <= 1e-12, e.norm_drift);
  check("free run tracks the eigenmode", e.reference_error <= 1e-3, e.reference_error);

  const double e035 = std::abs(fundamental_solution(0.35, 1.0));
  check("kernel modulus at t=0.35", std::abs(e035 - 1.0 / std::sqrt(4.0 * std::numbers::pi * 0.35)) < 1e-15, e035);

  std::cout << (failures == 0 ? "selftest passed\n" : "selftest failed\n");
  return failures == 0 ? kOk : kNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flatness-based boundary control of the Schrödinger and beam equations"};
  app.require_subcommand(1);

  std::string scenario = "paper-fig1";
  std::string out_dir;
  int levels = 3;

  auto* run = app.add_subcommand("run", "Synthesize a control and verify it by simulation");
  run->add_option("--scenario", scenario, "Builtin name or JSON file")->capture_default_str();
  run->add_option("--out-dir", out_dir, "Artifact directory (overrides the scenario)");

  auto* study = app.add_subcommand("study", "Rerun a scenario with doubled resolution per level");
  study->add_option("--scenario", scenario, "Builtin name or JSON file")->capture_default_str();
  study->add_option("--out-dir", out_dir, "Artifact directory (overrides the scenario)");
  study->add_option("--levels", levels, "Number of refinement levels (>= 3)")->capture_default_str();

  auto* self = app.add_subcommand("selftest", "Quick consistency checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kValidation;
  }

  try {
    if (*self) return selftest();
    auto sc = flatctl::load_scenario(scenario);
    if (!out_dir.empty()) sc.out_dir = out_dir;
    if (*run) {
      const auto outcome = flatctl::run_scenario(sc);
      print_summary(outcome.summary);
    } else {
      const auto res = flatctl::convergence_study(sc, levels);
      std::cout << "level,Nx,Nt,terminal_relative_norm,series_tail,max_error,rate\n";
      for (const auto& r : res.rows) {
        std::cout << r.level << ',' << r.Nx << ',' << r.Nt << ',' << flatctl::format_number(r.terminal_relative)
                  << ',' << flatctl::format_number(r.series_tail) << ',' << flatctl::format_number(r.max_error)
                  << ',' << flatctl::format_number(r.rate) << '\n';
      }
      std::cout << "terminal_decay_slope_log2_per_level=" << flatctl::format_number(res.terminal_decay_slope)
                << '\n';
    }
    return kOk;
  } catch (const flatctl::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kValidation;
  } catch (const flatctl::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kIo;
  } catch (const flatctl::ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << " (best estimate error " << e.error_estimate() << ")\n";
    return kNumerical;
  } catch (const flatctl::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOther;
  }
}
