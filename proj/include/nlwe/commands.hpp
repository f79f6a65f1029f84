#pragma once

// The command implementations behind the `nlwe` executable. Each one
// recomputes every reported number operationally (POVM, protocol or
// certificate evaluation) and refuses to report closed forms that disagree.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "nlwe/linalg.hpp"

namespace nlwe {

/// A cross-check or inequality failed; the CLI maps this to exit code 1.
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FigureRow {
  double eta0 = 0.0;
  double gamma = 0.0;
  double p_g = 0.0;
  double p_l = 0.0;
  double p_g_pi = 0.0;
  double p_l_pi = 0.0;
};

inline constexpr double kFigureEta0Max = 0.499;
inline const std::vector<double> kDefaultGammaGrid = {2.0, 2.5, 3.0, 5.0, 10.0, 50.0};

/// Uniform eta0 grid on [1/3, 0.499].
std::vector<double> eta0_grid(int n_points);

/// One figure row at `gamma`, cross-checked to `tol`.
FigureRow figure_row(int example, double gamma, double tol = kDefaultTol);
std::vector<FigureRow> figure_rows(int example, int n_points, double tol = kDefaultTol);
/// Header `eta0,gamma,p_G,p_L,p_G_PI,p_L_PI`, 9-decimal fixed point, LF endings.
std::string figure_csv(const std::vector<FigureRow>& rows);
void write_figure(int example, int n_points, const std::filesystem::path& out,
                  double tol = kDefaultTol);

struct VerifyOptions {
  double tol = kDefaultTol;
  std::uint64_t seed = 0x5eed;
  std::uint64_t monte_carlo_trials = 0;  // 0 disables the sampling check
};

/// Runs the lower-bound / dual-bound / global-optimum sandwich at every gamma
/// and checks the annihilation (example 1) or creation (example 2) pattern.
/// The returned document has "pass": bool; failing checks are listed by name.
nlohmann::json verify_report(int example, const std::vector<double>& gammas,
                             const VerifyOptions& options = {});

/// All certificates for one example with verdicts, bounds and, for
/// example 2, the PT(K0) = K1 check.
nlohmann::json certificate_bundle(int example, double gamma, double tol = kDefaultTol);
/// Writes the bundle, reads it back, re-verifies every certificate and
/// checks the round trip to 1e-12. Returns the document as written.
nlohmann::json write_certificates(int example, double gamma, const std::filesystem::path& out,
                                  double tol = kDefaultTol);

/// Orthogonality, global perfect discrimination and PI-assisted LOCC
/// discrimination of the two-qutrit UPB ensemble.
nlohmann::json upb_report(double tol = kDefaultTol);

}  // namespace nlwe
