// nlwe: figures, verification runs, certificate bundles and the UPB report.
//
// Exit codes: 0 success, 1 verification or I/O failure, 2 usage or domain error.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nlwe/commands.hpp"
#include "nlwe/errors.hpp"

namespace {

double default_tol() {
  if (const char* env = std::getenv("NLWE_TOL")) {
    try {
      std::size_t used = 0;
      const double v = std::stod(env, &used);
      if (used == std::string(env).size() && v > 0.0) return v;
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring invalid NLWE_TOL='" << env << "'\n";
  }
  return nlwe::kDefaultTol;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlocality without entanglement under post-measurement information"};
  app.require_subcommand(1);

  double tol = default_tol();
  std::uint64_t seed = 0x5eed;
  app.add_option("--tol", tol, "Numerical tolerance (env NLWE_TOL)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--seed", seed, "Seed for randomized checks")->capture_default_str();

  int example = 1;
  int points = 100;
  std::string out;
  auto* figure = app.add_subcommand("figure", "Write the success-probability curves as CSV");
  figure->add_option("--example", example)->required()->check(CLI::IsMember({1, 2}));
  figure->add_option("--points", points)->capture_default_str()->check(CLI::Range(2, 1000000));
  figure->add_option("--out", out, "Output CSV path")->required();

  std::vector<double> gammas;
  std::uint64_t mc_trials = 0;
  auto* verify = app.add_subcommand("verify", "Check the NLWE pattern at each gamma");
  verify->add_option("--example", example)->required()->check(CLI::IsMember({1, 2}));
  verify->add_option("--gamma", gammas, "Gamma values (default 2 2.5 3 5 10 50)");
  verify->add_option("--mc-trials", mc_trials, "Monte Carlo trials per protocol (0: skip)")
      ->capture_default_str();

  double gamma = 2.0;
  auto* certify = app.add_subcommand("certify", "Write and re-verify the dual certificates");
  certify->add_option("--example", example)->required()->check(CLI::IsMember({1, 2}));
  certify->add_option("--gamma", gamma)->required();
  certify->add_option("--out", out, "Output JSON path")->required();

  auto* upb = app.add_subcommand("upb", "Report on the two-qutrit UPB ensemble");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (figure->parsed()) {
      nlwe::write_figure(example, points, out, tol);
      std::cout << "wrote " << points << " rows to " << out << "\n";
      return 0;
    }
    if (verify->parsed()) {
      if (gammas.empty()) gammas = nlwe::kDefaultGammaGrid;
      nlwe::VerifyOptions opts;
      opts.tol = tol;
      opts.seed = seed;
      opts.monte_carlo_trials = mc_trials;
      const auto report = nlwe::verify_report(example, gammas, opts);
      std::cout << report.dump(2) << "\n";
      if (!report.at("pass").get<bool>()) {
        for (const auto& r : report.at("results"))
          for (const auto& c : r.at("checks"))
            if (!c.at("pass").get<bool>())
              std::cerr << "FAILED at gamma=" << r.at("gamma").get<double>() << ": "
                        << c.at("name").get<std::string>() << "\n";
        return 1;
      }
      return 0;
    }
    if (certify->parsed()) {
      const auto doc = nlwe::write_certificates(example, gamma, out, tol);
      std::cout << "wrote " << doc.at("certificates").size() << " certificates to " << out
                << " (all verified)\n";
      return 0;
    }
    if (upb->parsed()) {
      const auto report = nlwe::upb_report(tol);
      std::cout << report.dump(2) << "\n";
      return report.at("pass").get<bool>() ? 0 : 1;
    }
  } catch (const nlwe::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlwe::DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
