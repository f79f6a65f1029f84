// One PASS/FAIL line per acceptance criterion; exit status is the number of
// failures (capped at 1).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "nlwe/commands.hpp"
#include "nlwe/ensembles.hpp"
#include "nlwe/medisc.hpp"
#include "nlwe/pidisc.hpp"
#include "nlwe/protocols.hpp"
#include "nlwe/sepcert.hpp"

using namespace nlwe;

namespace {

constexpr double kValueTol = 1e-9;      // closed-form agreement
constexpr double kOptTol = 1e-9;        // optimality residual floor
constexpr double kPerfectTol = 1e-12;   // "success = 1"
constexpr double kGapFloor = 1e-3;      // minimum NLWE gap
constexpr double kStructTol = 1e-9;     // structural identities
constexpr double kReductionTol = 1e-10; // PI reduction identity
constexpr double kGramTol = 1e-12;
constexpr double kSigmas = 4.0;
constexpr double kMcBudgetSeconds = 60.0;
constexpr std::uint64_t kMcTrials = 1000000;

const std::vector<double> kGrid = {2.0, 2.5, 3.0, 5.0, 10.0, 50.0};

double pg(double g) { return 0.5 * (1 + std::sqrt(1 + g * g) / (1 + g)); }
double pl1(double g) { return 0.5 * (1 + g / (1 + g)); }
double plpi2(double g) { return 0.5 * (1 + std::sqrt(1 + g + g * g) / (1 + g)); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Detail {
 public:
  template <class T>
  Detail& operator<<(const T& v) {
    os_ << v;
    return *this;
  }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

Outcome criterion1() {
  Outcome o;
  double worst_value = 0, worst_res = 0;
  for (double g : kGrid) {
    const auto r = check_global_optimality(example1_ensemble(g), optimal_povm_example1(g));
    worst_value = std::max(worst_value, std::abs(r.success_probability - pg(g)));
    worst_res = std::min(worst_res, r.optimality_residual);
  }
  const double at2 = success_probability(example1_ensemble(2.0), optimal_povm_example1(2.0));
  o.pass = worst_value <= kValueTol && worst_res >= -kOptTol && std::abs(at2 - 0.8726780) < 5e-8;
  o.detail = (Detail() << "max |p - closed form| = " << worst_value << ", min residual = "
                       << worst_res << ", p(2) = " << at2)
                 .str();
  return o;
}

Outcome criterion2() {
  Outcome o;
  double worst = 0, min_gap = 1;
  bool certs_ok = true;
  Detail below;
  for (double g : kGrid) {
    const auto e = example1_ensemble(g);
    const double p = success_probability(e, induced_povm(named_protocol("ex1_me")));
    const auto c = example1_certificates(g);
    for (const auto& cert : c.certs) certs_ok = certs_ok && verify_certificate(cert);
    const double tr = c.h.trace();
    worst = std::max({worst, std::abs(p - tr), std::abs(tr - pl1(g))});
    const double gap = pg(g) - p;
    min_gap = std::min(min_gap, gap);
    if (!(gap > kGapFloor)) below << " gamma=" << g << " gap=" << gap;
    const double expected_gap = 0.5 * (std::sqrt(1 + g * g) - g) / (1 + g);
    worst = std::max(worst, std::abs(gap - expected_gap));
  }
  o.pass = worst <= kValueTol && certs_ok && min_gap > kGapFloor;
  o.detail = (Detail() << "max deviation = " << worst << ", certificates "
                       << (certs_ok ? "verified" : "FAILED") << ", min gap = " << min_gap
                       << (below.str().empty() ? "" : "; gap under floor at" + below.str()))
                 .str();
  return o;
}

Outcome criterion3() {
  Outcome o;
  double worst = 0;
  for (double g : kGrid) {
    const auto e = example1_ensemble(g);
    worst = std::max(worst, std::abs(pi_success_probability(e, pi_povm_example1()) - 1.0));
  }
  o.pass = worst <= kPerfectTol;
  o.detail = (Detail() << "max |p_PI - 1| = " << worst).str();
  return o;
}

Outcome criterion4() {
  Outcome o;
  double worst = 0, worst_res = 0, worst_match = 0;
  for (double g : kGrid) {
    const auto e = example2_ensemble(g);
    const auto target = optimal_povm_example2(g);
    const auto realised = induced_povm(named_protocol("ex2_me", g));
    for (const auto& l : target.outcomes)
      worst_match = std::max(worst_match, max_abs_diff(target.element(l).matrix(),
                                                       realised.element(l).matrix()));
    const auto r = check_global_optimality(e, realised);
    worst_res = std::min(worst_res, r.optimality_residual);
    worst = std::max(worst, std::abs(r.success_probability - pg(g)));
  }
  o.pass = worst_match <= kValueTol && worst_res >= -kOptTol && worst <= kValueTol;
  o.detail = (Detail() << "protocol vs POVM = " << worst_match << ", min residual = " << worst_res
                       << ", max |p_L - p_G| = " << worst)
                 .str();
  return o;
}

Outcome criterion5() {
  Outcome o;
  double bell = 0, proto = 0, bound = 0, min_gap = 1;
  bool certs_ok = true;
  for (double g : kGrid) {
    const auto e = example2_ensemble(g);
    bell = std::max(bell, std::abs(pi_success_probability(e, bell_povm()) - 1.0));
    const double p = pi_success_probability(e, induced_povm(named_protocol("ex2_pi", g)));
    proto = std::max(proto, std::abs(p - plpi2(g)));
    const auto c = example2_certificates(g);
    for (const auto& cert : c.certs) certs_ok = certs_ok && verify_certificate(cert);
    bound = std::max(bound, std::abs(2 * c.h_tilde.trace() - plpi2(g)));
    min_gap = std::min(min_gap, 1.0 - p);
  }
  const double at2 = pi_success_probability(example2_ensemble(2.0), pi_locc_povm_example2(2.0));
  o.pass = bell <= kPerfectTol && proto <= kValueTol && bound <= kValueTol && certs_ok &&
           min_gap > kGapFloor && std::abs(at2 - 0.9409586) < 5e-8;
  o.detail = (Detail() << "Bell |p-1| = " << bell << ", protocol dev = " << proto
                       << ", 2TrH~ dev = " << bound << ", certificates "
                       << (certs_ok ? "verified" : "FAILED") << ", min gap = " << min_gap
                       << ", p(2) = " << at2)
                 .str();
  return o;
}

Outcome criterion6() {
  Outcome o;
  double worst = 0;
  std::string worst_name;
  for (double g : kGrid) {
    for (const auto& c : symmetry_checks(g).checks)
      if (c.residual > worst) {
        worst = c.residual;
        worst_name = c.name;
      }
    const auto cert = example2_certificates(g);
    worst = std::max({worst, cert.pt_k0_residual, cert.pt_k1_residual});
  }
  o.pass = worst <= kStructTol;
  o.detail = (Detail() << "worst residual = " << worst
                       << (worst_name.empty() ? "" : " (" + worst_name + ")"))
                 .str();
  return o;
}

Outcome criterion7() {
  Outcome o;
  double worst = 0;
  int n = 0;
  for (const auto& e : {example1_ensemble(2.0), example2_ensemble(2.0)}) {
    const auto ae = average_ensemble(e);
    for (std::uint64_t s = 0; s < 200; ++s, ++n) {
      const auto m = random_povm(omega_strings(e), e.dims(), 0xacce55 + s);
      worst = std::max(worst, std::abs(pi_success_direct(e, m) - pi_success_via_average(ae, m)));
    }
  }
  o.pass = worst <= kReductionTol;
  o.detail = (Detail() << n << " random measurements, max |direct - 2 avg| = " << worst).str();
  return o;
}

Outcome criterion8() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  struct Case {
    PartitionedEnsemble e;
    LoccProtocol p;
    bool pi;
  };
  const std::vector<Case> cases = {
      {example1_ensemble(2.0), named_protocol("ex1_me"), false},
      {example1_ensemble(2.0), named_protocol("ex1_pi"), true},
      {example2_ensemble(2.0), named_protocol("ex2_me", 2.0), false},
      {example2_ensemble(2.0), named_protocol("ex2_pi", 2.0), true},
      {upb_ensemble(), named_protocol("upb_pi"), true},
  };
  Detail d;
  double worst_z = 0;
  for (const auto& c : cases) {
    const auto m = induced_povm(c.p);
    const double exact = c.pi ? pi_success_probability(c.e, m) : success_probability(c.e, m);
    const auto mc = monte_carlo_success(c.e, c.p, kMcTrials, 20240601);
    const double diff = std::abs(mc.estimate - exact);
    const bool ok = mc.standard_error > 0 ? diff <= kSigmas * mc.standard_error : diff <= 1e-12;
    if (mc.standard_error > 0) worst_z = std::max(worst_z, diff / mc.standard_error);
    o.pass = o.pass && ok;
    d << c.p.name << (ok ? " ok" : " FAIL") << "; ";
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.pass = o.pass && secs < kMcBudgetSeconds;
  d << "max z = " << worst_z << ", " << secs << " s";
  o.detail = d.str();
  return o;
}

Outcome criterion9() {
  Outcome o;
  const auto r = upb_report();
  const double gram = r.at("gram_max_deviation_from_identity").get<double>();
  const double pi = r.at("pi_locc_success").get<double>();
  const int rank = r.at("complement_projector").at("rank").get<int>();
  const double min_eig = r.at("complement_projector").at("min_eigenvalue").get<double>();
  o.pass = gram <= kGramTol && std::abs(pi - 1.0) <= kPerfectTol && rank == 4 &&
           min_eig >= -kStructTol;
  o.detail = (Detail() << "Gram dev = " << gram << ", PI success = " << pi
                       << ", complement rank = " << rank << ", min eig = " << min_eig)
                 .str();
  return o;
}

std::vector<std::vector<double>> read_csv(const std::filesystem::path& p, std::string& header) {
  std::ifstream in(p);
  std::getline(in, header);
  std::vector<std::vector<double>> rows;
  for (std::string line; std::getline(in, line);) {
    std::vector<double> row;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

Outcome criterion10() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path();
  const std::vector<std::vector<double>> expected = {{0.8726780, 0.8333333, 1, 1},
                                                     {0.8726780, 0.8726780, 1, 0.9409586}};
  Detail d;
  for (int ex = 1; ex <= 2; ++ex) {
    const auto path = dir / ("nlwe_acceptance_fig" + std::to_string(ex) + ".csv");
    write_figure(ex, 100, path);
    std::string header;
    const auto rows = read_csv(path, header);
    std::filesystem::remove(path);
    bool ok = header == "eta0,gamma,p_G,p_L,p_G_PI,p_L_PI" && rows.size() == 100;
    for (const auto& r : rows) ok = ok && r.size() == 6 && r[3] <= r[2] && r[5] <= r[4];
    ok = ok && std::abs(rows[0][0] - 1.0 / 3) < 1e-9;
    for (int k = 0; k < 4 && ok; ++k)
      ok = std::abs(rows[0][static_cast<std::size_t>(k + 2)] -
                    expected[static_cast<std::size_t>(ex - 1)][static_cast<std::size_t>(k)]) < 5e-8;
    o.pass = o.pass && ok;
    d << "figure " << ex << (ok ? " ok" : " FAIL") << "; ";
  }
  for (int ex = 1; ex <= 2; ++ex) {
    const bool ok = verify_report(ex, kDefaultGammaGrid).at("pass").get<bool>();
    o.pass = o.pass && ok;
    d << "verify " << ex << (ok ? " ok" : " FAIL") << (ex == 1 ? "; " : "");
  }
  o.detail = d.str();
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"Example 1 global optimum", criterion1},
      {"Example 1 LOCC sandwich and NLWE gap", criterion2},
      {"Example 1 PI annihilation", criterion3},
      {"Example 2 no NLWE without PI", criterion4},
      {"Example 2 PI creation", criterion5},
      {"Structural identities", criterion6},
      {"PI reduction to the average ensemble", criterion7},
      {"Monte Carlo concordance", criterion8},
      {"UPB example", criterion9},
      {"Figure reproduction and verify", criterion10},
  };
  int failures = 0;
  int index = 1;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] %2d. %s: %s\n", o.pass ? "PASS" : "FAIL", index++, name, o.detail.c_str());
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
