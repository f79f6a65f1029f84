#include "nlwe/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>

#include "nlwe/certificate_json.hpp"
#include "nlwe/ensembles.hpp"
#include "nlwe/errors.hpp"
#include "nlwe/medisc.hpp"
#include "nlwe/pidisc.hpp"
#include "nlwe/protocols.hpp"
#include "nlwe/sepcert.hpp"

namespace nlwe {

using nlohmann::json;

namespace {

void require_example(int example) {
  if (example != 1 && example != 2) {
    throw DomainError("example must be 1 or 2, got " + std::to_string(example));
  }
}

void agree(const char* what, double closed_form, double computed, double tol) {
  if (!(std::abs(closed_form - computed) <= tol)) {
    std::ostringstream os;
    os.precision(12);
    os << what << ": closed form " << closed_form << " vs computed " << computed;
    throw VerificationError(os.str());
  }
}

}  // namespace

std::vector<double> eta0_grid(int n_points) {
  if (n_points < 2) throw DomainError("figure: --points must be >= 2");
  std::vector<double> grid(static_cast<std::size_t>(n_points));
  const double lo = 1.0 / 3.0;
  const double step = (kFigureEta0Max - lo) / static_cast<double>(n_points - 1);
  for (int k = 0; k < n_points; ++k) grid[static_cast<std::size_t>(k)] = lo + k * step;
  grid.back() = kFigureEta0Max;
  return grid;
}

FigureRow figure_row(int example, double gamma, double tol) {
  require_example(example);
  FigureRow row;
  row.gamma = gamma;
  row.eta0 = eta0_from_gamma(gamma);
  if (example == 1) {
    const auto e = example1_ensemble(gamma);
    row.p_g = pg_closed_form(gamma);
    row.p_l = pl_closed_form_example1(gamma);
    row.p_g_pi = 1.0;
    row.p_l_pi = 1.0;

    const auto opt = check_global_optimality(e, optimal_povm_example1(gamma), tol);
    if (!opt.is_globally_optimal) throw VerificationError("example 1: POVM fails optimality");
    agree("p_G", row.p_g, opt.success_probability, tol);
    agree("p_L (protocol)", row.p_l,
          success_probability(e, induced_povm(named_protocol("ex1_me"))), tol);
    const auto certs = example1_certificates(gamma);
    agree("p_L (dual bound)", row.p_l, locc_upper_bound(certs.h, e, certs.certs, tol), tol);
    agree("p_L_PI", row.p_l_pi,
          pi_success_probability(e, induced_povm(named_protocol("ex1_pi"))), tol);
  } else {
    const auto e = example2_ensemble(gamma);
    row.p_g = pg_closed_form(gamma);
    row.p_l = row.p_g;
    row.p_g_pi = 1.0;
    row.p_l_pi = plpi_closed_form_example2(gamma);

    const auto opt = check_global_optimality(e, optimal_povm_example2(gamma), tol);
    if (!opt.is_globally_optimal) throw VerificationError("example 2: POVM fails optimality");
    agree("p_G", row.p_g, opt.success_probability, tol);
    agree("p_L (protocol)", row.p_l,
          success_probability(e, induced_povm(named_protocol("ex2_me", gamma))), tol);
    agree("p_G_PI", row.p_g_pi, pi_success_probability(e, bell_povm()), tol);
    agree("p_L_PI (protocol)", row.p_l_pi,
          pi_success_probability(e, induced_povm(named_protocol("ex2_pi", gamma))), tol);
    const auto certs = example2_certificates(gamma);
    agree("p_L_PI (dual bound)", row.p_l_pi,
          pi_locc_upper_bound(certs.h_tilde, average_ensemble(e), certs.certs, tol), tol);
  }
  if (!(row.p_l <= row.p_g + tol && row.p_l_pi <= row.p_g_pi + tol)) {
    throw VerificationError("figure row violates p_L <= p_G or p_L_PI <= p_G_PI");
  }
  return row;
}

std::vector<FigureRow> figure_rows(int example, int n_points, double tol) {
  require_example(example);
  const auto grid = eta0_grid(n_points);
  std::vector<std::future<FigureRow>> pending;
  pending.reserve(grid.size());
  for (double eta0 : grid) {
    pending.push_back(std::async(std::launch::async, [=] {
      FigureRow r = figure_row(example, gamma_from_eta0(eta0), tol);
      r.eta0 = eta0;
      return r;
    }));
  }
  std::vector<FigureRow> rows;
  rows.reserve(grid.size());
  for (auto& f : pending) rows.push_back(f.get());
  return rows;
}

std::string figure_csv(const std::vector<FigureRow>& rows) {
  std::string out = "eta0,gamma,p_G,p_L,p_G_PI,p_L_PI\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.9f,%.9f,%.9f,%.9f,%.9f,%.9f\n", r.eta0, r.gamma, r.p_g,
                  r.p_l, r.p_g_pi, r.p_l_pi);
    out += buf;
  }
  return out;
}

void write_figure(int example, int n_points, const std::filesystem::path& out, double tol) {
  const std::string csv = figure_csv(figure_rows(example, n_points, tol));
  std::ofstream f(out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + out.string() + "' for writing");
  f << csv;
  if (!f) throw std::runtime_error("failed writing '" + out.string() + "'");
}

// ---------------------------------------------------------------------------
// verify

namespace {

struct CheckList {
  json items = json::array();
  bool pass = true;

  void add(const std::string& name, bool ok, json detail = json::object()) {
    items.push_back({{"name", name}, {"pass", ok}, {"detail", std::move(detail)}});
    pass = pass && ok;
  }
};

json monte_carlo_check(const PartitionedEnsemble& e, const LoccProtocol& p, bool pi,
                       const VerifyOptions& o, CheckList& checks) {
  const Povm m = induced_povm(p);
  const double analytic = pi ? pi_success_probability(e, m) : success_probability(e, m);
  const auto mc = monte_carlo_success(e, p, o.monte_carlo_trials, o.seed);
  const double z = std::abs(mc.estimate - analytic);
  const bool ok = z <= 4.0 * mc.standard_error + 1e-12;
  json j = {{"protocol", p.name}, {"analytic", analytic}, {"estimate", mc.estimate},
            {"standard_error", mc.standard_error}, {"trials", mc.trials}, {"seed", mc.seed}};
  checks.add("monte carlo " + p.name + " within 4 standard errors", ok, j);
  return j;
}

json protocol_info(const LoccProtocol& p) {
  return {{"name", p.name}, {"assumed_locc_implementable", uses_assumed_locc_nodes(p)}};
}

json verify_example1(double gamma, const VerifyOptions& o) {
  const double tol = o.tol;
  const auto e = example1_ensemble(gamma);
  CheckList checks;

  const auto opt = check_global_optimality(e, optimal_povm_example1(gamma), tol);
  const auto oracle = fixed_point_me_oracle(e);
  const double p_g = opt.success_probability;
  checks.add("optimal POVM satisfies the ME optimality condition", opt.is_globally_optimal,
             {{"residual", opt.optimality_residual}});
  checks.add("p_G matches closed form", std::abs(p_g - pg_closed_form(gamma)) <= tol);
  checks.add("fixed-point oracle agrees with p_G",
             oracle.converged && std::abs(oracle.success_probability - p_g) <= 1e-6,
             {{"oracle", oracle.success_probability}, {"iterations", oracle.iterations}});

  const auto me = named_protocol("ex1_me");
  const double pl_lower = success_probability(e, induced_povm(me));
  const auto certs = example1_certificates(gamma);
  double pl_upper = std::numeric_limits<double>::quiet_NaN();
  try {
    pl_upper = locc_upper_bound(certs.h, e, certs.certs, tol);
    checks.add("SEP* certificates for H - eta_i rho_i verify", true);
  } catch (const CertificateError& ex) {
    checks.add("SEP* certificates for H - eta_i rho_i verify", false, {{"error", ex.what()}});
  }
  checks.add("LOCC lower bound = dual upper bound", std::abs(pl_lower - pl_upper) <= tol,
             {{"lower", pl_lower}, {"upper", pl_upper}});
  checks.add("p_L matches closed form",
             std::abs(pl_lower - pl_closed_form_example1(gamma)) <= tol);
  const double p_l = pl_lower;
  checks.add("p_L < p_G", p_g - p_l > tol, {{"gap", p_g - p_l}});

  const auto pi = named_protocol("ex1_pi");
  const double pl_pi = pi_success_probability(e, induced_povm(pi));
  const double pg_pi = 1.0;  // success probabilities never exceed 1
  checks.add("p_L_PI = p_G_PI = 1", std::abs(pl_pi - pg_pi) <= tol, {{"p_L_PI", pl_pi}});

  json mc = json::array();
  if (o.monte_carlo_trials > 0) {
    mc.push_back(monte_carlo_check(e, me, false, o, checks));
    mc.push_back(monte_carlo_check(e, pi, true, o, checks));
  }
  return {{"gamma", gamma},
          {"eta0", eta0_from_gamma(gamma)},
          {"p_G", p_g},
          {"p_L", {{"lower", pl_lower}, {"upper", pl_upper}}},
          {"p_G_PI", pg_pi},
          {"p_L_PI", {{"lower", pl_pi}, {"upper", 1.0}}},
          {"gap", p_g - p_l},
          {"pi_gap", pg_pi - pl_pi},
          {"protocols", {protocol_info(me), protocol_info(pi)}},
          {"monte_carlo", mc},
          {"checks", checks.items},
          {"pass", checks.pass}};
}

json verify_example2(double gamma, const VerifyOptions& o) {
  const double tol = o.tol;
  const auto e = example2_ensemble(gamma);
  CheckList checks;

  const auto opt = check_global_optimality(e, optimal_povm_example2(gamma), tol);
  const auto oracle = fixed_point_me_oracle(e);
  const double p_g = opt.success_probability;
  checks.add("optimal POVM satisfies the ME optimality condition", opt.is_globally_optimal,
             {{"residual", opt.optimality_residual}});
  checks.add("p_G matches closed form", std::abs(p_g - pg_closed_form(gamma)) <= tol);
  checks.add("fixed-point oracle agrees with p_G",
             oracle.converged && std::abs(oracle.success_probability - p_g) <= 1e-6,
             {{"oracle", oracle.success_probability}, {"iterations", oracle.iterations}});

  const auto me = named_protocol("ex2_me", gamma);
  const Povm me_povm = induced_povm(me);
  const double pl_lower = success_probability(e, me_povm);
  checks.add("protocol realises the optimal POVM",
             [&] {
               const Povm target = optimal_povm_example2(gamma);
               for (const auto& l : target.outcomes)
                 if (max_abs_diff(target.element(l).matrix(), me_povm.element(l).matrix()) > tol)
                   return false;
               return true;
             }());
  const double p_l = pl_lower;  // p_G is itself an upper bound on p_L
  checks.add("p_L = p_G", std::abs(p_g - p_l) <= tol, {{"p_L", p_l}});

  const double pg_pi = pi_success_probability(e, bell_povm());
  checks.add("p_G_PI = 1 via Bell measurement", std::abs(pg_pi - 1.0) <= tol);

  const auto pi = named_protocol("ex2_pi", gamma);
  const double plpi_lower = pi_success_probability(e, induced_povm(pi));
  const auto certs = example2_certificates(gamma);
  double plpi_upper = std::numeric_limits<double>::quiet_NaN();
  try {
    plpi_upper = pi_locc_upper_bound(certs.h_tilde, average_ensemble(e), certs.certs, tol);
    checks.add("SEP* certificates for H~ - eta~ rho~ verify", true);
  } catch (const CertificateError& ex) {
    checks.add("SEP* certificates for H~ - eta~ rho~ verify", false, {{"error", ex.what()}});
  }
  checks.add("PT(K0) = K1 and PT(K1) = K0",
             std::max(certs.pt_k0_residual, certs.pt_k1_residual) <= tol);
  checks.add("LOCC PI lower bound = dual upper bound", std::abs(plpi_lower - plpi_upper) <= tol,
             {{"lower", plpi_lower}, {"upper", plpi_upper}});
  checks.add("p_L_PI matches closed form",
             std::abs(plpi_lower - plpi_closed_form_example2(gamma)) <= tol);
  checks.add("p_L_PI < p_G_PI", pg_pi - plpi_lower > tol, {{"gap", pg_pi - plpi_lower}});

  json mc = json::array();
  if (o.monte_carlo_trials > 0) {
    mc.push_back(monte_carlo_check(e, me, false, o, checks));
    mc.push_back(monte_carlo_check(e, pi, true, o, checks));
  }
  return {{"gamma", gamma},
          {"eta0", eta0_from_gamma(gamma)},
          {"p_G", p_g},
          {"p_L", {{"lower", pl_lower}, {"upper", p_g}}},
          {"p_G_PI", pg_pi},
          {"p_L_PI", {{"lower", plpi_lower}, {"upper", plpi_upper}}},
          {"gap", p_g - p_l},
          {"pi_gap", pg_pi - plpi_lower},
          {"protocols", {protocol_info(me), protocol_info(pi)}},
          {"monte_carlo", mc},
          {"checks", checks.items},
          {"pass", checks.pass}};
}

}  // namespace

json verify_report(int example, const std::vector<double>& gammas, const VerifyOptions& options) {
  require_example(example);
  for (double g : gammas) require_gamma(g, "verify");
  json results = json::array();
  bool pass = true;
  for (double g : gammas) {
    json r = example == 1 ? verify_example1(g, options) : verify_example2(g, options);
    pass = pass && r.at("pass").get<bool>();
    results.push_back(std::move(r));
  }
  return {{"example", example},
          {"pattern", example == 1 ? "p_L < p_G and p_L_PI = p_G_PI (PI annihilates NLWE)"
                                   : "p_L = p_G and p_L_PI < p_G_PI (PI creates NLWE)"},
          {"tolerance", options.tol},
          {"results", std::move(results)},
          {"pass", pass}};
}

// ---------------------------------------------------------------------------
// certify

json certificate_bundle(int example, double gamma, double tol) {
  require_example(example);
  json doc = {{"format", "nlwe-sepstar-certificates"},
              {"version", 1},
              {"example", example},
              {"gamma", gamma},
              {"tolerance", tol}};
  std::vector<SepStarCertificate> certs;
  json checks = json::object();
  if (example == 1) {
    const auto c = example1_certificates(gamma);
    certs = c.certs;
    doc["operator"] = {{"name", "H"}, {"value", operator_to_json(c.h)}};
    doc["bound"] = {{"kind", "p_L <= Tr H"}, {"value", c.h.trace()}};
    checks["T0_psd"] = is_psd(c.t0, tol);
    checks["T1_psd"] = is_psd(c.t1, tol);
  } else {
    const auto c = example2_certificates(gamma);
    certs = c.certs;
    doc["operator"] = {{"name", "H~"}, {"value", operator_to_json(c.h_tilde)}};
    doc["bound"] = {{"kind", "p_L_PI <= 2 Tr H~"}, {"value", 2.0 * c.h_tilde.trace()}};
    checks["PT(K0)=K1"] = {{"residual", c.pt_k0_residual}, {"pass", c.pt_k0_residual <= tol}};
    checks["PT(K1)=K0"] = {{"residual", c.pt_k1_residual}, {"pass", c.pt_k1_residual <= tol}};
    checks["helstrom_margins"] = c.helstrom_margins;
  }
  json list = json::array();
  bool all_ok = true;
  for (const auto& c : certs) {
    const auto v = check_certificate(c, tol);
    json j = certificate_to_json(c);
    j["verdict"] = {{"verified", v.ok},
                    {"reconstruction_residual", v.reconstruction_residual},
                    {"min_part_eigenvalue", v.min_part_eigenvalue}};
    all_ok = all_ok && v.ok;
    list.push_back(std::move(j));
  }
  doc["certificates"] = std::move(list);
  doc["checks"] = std::move(checks);
  doc["all_verified"] = all_ok;
  return doc;
}

json write_certificates(int example, double gamma, const std::filesystem::path& out, double tol) {
  json doc = certificate_bundle(example, gamma, tol);
  {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + out.string() + "' for writing");
    f << doc.dump(2) << "\n";
    if (!f) throw std::runtime_error("failed writing '" + out.string() + "'");
  }
  std::ifstream in(out, std::ios::binary);
  const json loaded = json::parse(in);
  const auto& original = doc.at("certificates");
  const auto& reread = loaded.at("certificates");
  if (original.size() != reread.size()) throw VerificationError("certify: round trip lost entries");
  double worst = 0.0;
  bool reverified = true;
  for (std::size_t k = 0; k < original.size(); ++k) {
    const auto a = certificate_from_json(original[k]);
    const auto b = certificate_from_json(reread[k]);
    worst = std::max(worst, max_abs_diff(a.target.matrix(), b.target.matrix()));
    for (std::size_t p = 0; p < a.psd_parts.size(); ++p)
      worst = std::max(worst, max_abs_diff(a.psd_parts[p].matrix(), b.psd_parts[p].matrix()));
    for (std::size_t p = 0; p < a.ppt_source_parts.size(); ++p)
      worst = std::max(worst, max_abs_diff(a.ppt_source_parts[p].matrix(),
                                           b.ppt_source_parts[p].matrix()));
    reverified = reverified && verify_certificate(b, tol);
  }
  if (worst > 1e-12) throw VerificationError("certify: round trip changed an operator");
  if (!reverified) throw VerificationError("certify: a reloaded certificate fails verification");
  if (!doc.at("all_verified").get<bool>()) {
    throw VerificationError("certify: a certificate fails verification");
  }
  return doc;
}

// ---------------------------------------------------------------------------
// upb

json upb_report(double tol) {
  const auto e = upb_ensemble();
  const std::size_t n = e.size();

  double gram_dev = 0.0;
  json gram = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < n; ++j) {
      const double g = born_probability(e.states[i], e.states[j].op());
      row.push_back(g);
      gram_dev = std::max(gram_dev, std::abs(g - (i == j ? 1.0 : 0.0)));
    }
    gram.push_back(std::move(row));
  }

  HermitianOperator complement = identity_operator(e.dims());
  for (const auto& s : e.states) complement -= s.op();
  const double complement_min = min_eigenvalue(complement);
  const std::size_t complement_rank = rank(complement);

  std::vector<HermitianOperator> global;
  for (const auto& s : e.states) global.push_back(s.op());
  global.front() += complement;
  const double global_success = success_probability(e, Povm::checked(e.labels, global, tol));

  const auto protocol = named_protocol("upb_pi");
  const double pi_success = pi_success_probability(e, induced_povm(protocol));

  const bool pass = gram_dev <= 1e-12 && complement_min >= -tol && complement_rank == 4 &&
                    std::abs(global_success - 1.0) <= tol && std::abs(pi_success - 1.0) <= tol;
  return {{"states", e.labels},
          {"partition", {e.cell0, e.cell1}},
          {"gram", gram},
          {"gram_max_deviation_from_identity", gram_dev},
          {"complement_projector", {{"rank", complement_rank}, {"min_eigenvalue", complement_min}}},
          {"global_measurement_success", global_success},
          {"pi_locc_protocol", protocol.name},
          {"pi_locc_success", pi_success},
          {"locc_perfect_discrimination_without_pi",
           {{"possible", false}, {"imported_claim", true}}},
          {"pass", pass}};
}

}  // namespace nlwe
