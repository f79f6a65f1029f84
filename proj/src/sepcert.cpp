#include "nlwe/sepcert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlwe/errors.hpp"

namespace nlwe {

bool is_ppt(const HermitianOperator& a, double tol) { return is_psd(partial_transpose(a), tol); }

CertificateVerdict check_certificate(const SepStarCertificate& c, double tol) {
  CertificateVerdict v;
  HermitianOperator sum = c.target * 0.0;
  double min_eig = std::numeric_limits<double>::infinity();
  try {
    for (const auto& p : c.psd_parts) {
      sum += p;
      min_eig = std::min(min_eig, min_eigenvalue(p));
    }
    for (const auto& p : c.ppt_source_parts) {
      sum += partial_transpose(p);
      min_eig = std::min(min_eig, min_eigenvalue(p));
    }
  } catch (const DimensionError&) {
    v.reconstruction_residual = std::numeric_limits<double>::infinity();
    return v;
  }
  v.min_part_eigenvalue = min_eig;
  v.reconstruction_residual = max_abs_diff(sum.matrix(), c.target.matrix());
  v.ok = v.reconstruction_residual <= 1e-10 && min_eig >= -tol;
  return v;
}

bool verify_certificate(const SepStarCertificate& c, double tol) {
  return check_certificate(c, tol).ok;
}

namespace {

HermitianOperator basis_projector(std::size_t i, std::size_t j) {
  return projector_operator(kron(Ket::basis(2, i), Ket::basis(2, j)), {2, 2});
}

// gamma |a><a| + |a><b| + |b><a| + 1/2 |b><b| on product basis indices a, b.
HermitianOperator t_operator(double gamma, std::size_t a, std::size_t b) {
  ComplexMatrix m(4);
  m(a, a) = gamma;
  m(a, b) = 1.0;
  m(b, a) = 1.0;
  m(b, b) = 0.5;
  return HermitianOperator(std::move(m), {2, 2});
}

}  // namespace

Example1Certificates example1_certificates(double gamma) {
  require_gamma(gamma, "example1_certificates");
  const auto e = example1_ensemble(gamma);
  const double scale = 1.0 / (4.0 * (1.0 + gamma));
  const auto s0 = pauli(0);
  const auto s1 = pauli(1);
  const auto ket0 = projector_operator(kets::zero(), {2, 1});
  const auto ket1 = projector_operator(kets::one(), {2, 1});

  Example1Certificates out;
  out.h = scale * (2.0 * gamma * tensor(ket0, s0) + tensor(ket1, s0) + tensor(s1, s1));
  out.t0 = t_operator(gamma, 1, 2);  // |01>, |10>
  out.t1 = t_operator(gamma, 0, 3);  // |00>, |11>

  auto target = [&](const char* label) { return out.h - e.prior(label) * e.state(label).op(); };
  out.certs.push_back({"0", target("0"), {scale * out.t0, scale * basis_projector(1, 1)},
                       {scale * out.t0}});
  out.certs.push_back({"1", target("1"), {scale * out.t1, scale * basis_projector(1, 0)},
                       {scale * out.t1}});
  const double diag_weight = (2.0 * gamma - 1.0) / (4.0 * (1.0 + gamma));
  const double cross_weight = 1.0 / (2.0 * (1.0 + gamma));
  const auto heavy = diag_weight * (e.state("0").op() + e.state("1").op());
  out.certs.push_back({"+", target("+"), {heavy, cross_weight * e.state("-").op()}, {}});
  out.certs.push_back({"-", target("-"), {heavy, cross_weight * e.state("+").op()}, {}});
  return out;
}

Example2Certificates example2_certificates(double gamma) {
  require_gamma(gamma, "example2_certificates");
  const auto ae = average_ensemble(example2_ensemble(gamma));

  Example2Certificates out{identity_operator({2, 2}), k_operators_example2(gamma),
                           pi_projectors_example2(gamma), {}, {}, 0.0, 0.0};
  out.h_tilde = 0.25 * (out.k.k0 + out.k.k1);

  out.pt_k0_residual = max_abs_diff(partial_transpose(out.k.k0).matrix(), out.k.k1.matrix());
  out.pt_k1_residual = max_abs_diff(partial_transpose(out.k.k1).matrix(), out.k.k0.matrix());
  if (out.pt_k0_residual > kDefaultTol || out.pt_k1_residual > kDefaultTol) {
    throw ContractError("example2_certificates: PT(K0) != K1 (residual " +
                        std::to_string(std::max(out.pt_k0_residual, out.pt_k1_residual)) + ")");
  }

  // H~ - rho~/4 = A/4 + PT(A)/4 with A = K_b - rho~/2, since PT(K_b) = K_{1-b}
  // and every rho~ here is real symmetric in each block (PT-invariant).
  struct Pairing {
    OmegaLabel w;
    const HermitianOperator* k;
  };
  const Pairing pairings[] = {{{"0", "+"}, &out.k.k0},
                              {{"1", "-"}, &out.k.k0},
                              {{"1", "+"}, &out.k.k1},
                              {{"0", "-"}, &out.k.k1}};
  for (const auto& [w, k] : pairings) {
    const auto& rho = ae.state(w).op();
    const HermitianOperator margin = *k - 0.5 * rho;
    out.helstrom_margins.push_back(min_eigenvalue(margin));
    const HermitianOperator part = 0.25 * margin;
    out.certs.push_back({to_string(w), out.h_tilde - ae.prior(w) * rho, {part}, {part}});
  }
  return out;
}

double locc_upper_bound(const HermitianOperator& h, const PartitionedEnsemble& e,
                        const std::vector<SepStarCertificate>& certs, double tol) {
  for (std::size_t i = 0; i < e.size(); ++i) {
    const auto it = std::find_if(certs.begin(), certs.end(),
                                 [&](const auto& c) { return c.label == e.labels[i]; });
    if (it == certs.end()) {
      throw CertificateError("locc_upper_bound: no certificate for label '" + e.labels[i] + "'");
    }
    const HermitianOperator expected = h - e.priors[i] * e.states[i].op();
    if (max_abs_diff(expected.matrix(), it->target.matrix()) > 1e-10) {
      throw CertificateError("locc_upper_bound: certificate '" + it->label +
                             "' does not target H - eta rho");
    }
    if (!verify_certificate(*it, tol)) {
      throw CertificateError("locc_upper_bound: certificate '" + it->label + "' fails");
    }
  }
  return h.trace();
}

double pi_locc_upper_bound(const HermitianOperator& h_tilde, const AverageEnsemble& ae,
                           const std::vector<SepStarCertificate>& certs, double tol) {
  for (std::size_t k = 0; k < ae.omega.size(); ++k) {
    const std::string label = to_string(ae.omega[k]);
    const auto it = std::find_if(certs.begin(), certs.end(),
                                 [&](const auto& c) { return c.label == label; });
    if (it == certs.end()) {
      throw CertificateError("pi_locc_upper_bound: no certificate for " + label);
    }
    const HermitianOperator expected = h_tilde - ae.priors[k] * ae.states[k].op();
    if (max_abs_diff(expected.matrix(), it->target.matrix()) > 1e-10) {
      throw CertificateError("pi_locc_upper_bound: certificate " + label +
                             " does not target H~ - eta~ rho~");
    }
    if (!verify_certificate(*it, tol)) {
      throw CertificateError("pi_locc_upper_bound: certificate " + label + " fails");
    }
  }
  return 2.0 * h_tilde.trace();
}

}  // namespace nlwe
