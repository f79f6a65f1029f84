#pragma once

#include <string>
#include <vector>

#include "nlwe/ensembles.hpp"
#include "nlwe/linalg.hpp"
#include "nlwe/pidisc.hpp"

namespace nlwe {

/// PT(a) is PSD within tol.
bool is_ppt(const HermitianOperator& a, double tol = kDefaultTol);

/// Witness that `target` lies in the dual of the separable cone:
///   target = Sum psd_parts + Sum PT(ppt_source_parts)
/// with every part PSD. Both summands pair non-negatively with any PPT
/// operator, hence with every separable one.
struct SepStarCertificate {
  std::string label;
  HermitianOperator target;
  std::vector<HermitianOperator> psd_parts;
  std::vector<HermitianOperator> ppt_source_parts;
};

struct CertificateVerdict {
  double reconstruction_residual = 0.0;  // max-entry
  double min_part_eigenvalue = 0.0;      // over psd and ppt_source parts
  bool ok = false;
};

/// Reconstruction must hold to 1e-10; parts must be PSD to `tol`.
CertificateVerdict check_certificate(const SepStarCertificate& c, double tol = kDefaultTol);
bool verify_certificate(const SepStarCertificate& c, double tol = kDefaultTol);

struct Example1Certificates {
  HermitianOperator h;
  HermitianOperator t0;
  HermitianOperator t1;
  std::vector<SepStarCertificate> certs;  // labels 0, 1, +, -
};

/// H = (2g |0><0| (x) I + |1><1| (x) I + X (x) X) / (4 (1 + g)) with the
/// decompositions of H - eta_i rho_i into PSD and PT-of-PSD pieces.
Example1Certificates example1_certificates(double gamma);

struct Example2Certificates {
  HermitianOperator h_tilde;  // (K0 + K1) / 4
  KOperators k;
  PiProjectors pi;
  std::vector<SepStarCertificate> certs;  // labels (0,+), (1,-), (1,+), (0,-)
  /// min eigenvalues of K0 - rho~(0,+)/2, K0 - rho~(1,-)/2,
  /// K1 - rho~(1,+)/2, K1 - rho~(0,-)/2.
  std::vector<double> helstrom_margins;
  double pt_k0_residual = 0.0;  // ||PT(K0) - K1||_max
  double pt_k1_residual = 0.0;  // ||PT(K1) - K0||_max
};

/// Builds K0, K1 from numerically computed projectors and asserts
/// PT(K0) = K1, PT(K1) = K0 within kDefaultTol (ContractError otherwise).
Example2Certificates example2_certificates(double gamma);

/// Tr H, after checking that each certificate reconstructs H - eta_i rho_i
/// and verifies. Throws CertificateError otherwise.
double locc_upper_bound(const HermitianOperator& h, const PartitionedEnsemble& e,
                        const std::vector<SepStarCertificate>& certs, double tol = kDefaultTol);

/// 2 Tr H~, with certificates for H~ - eta~_w rho~_w over Omega.
double pi_locc_upper_bound(const HermitianOperator& h_tilde, const AverageEnsemble& ae,
                           const std::vector<SepStarCertificate>& certs,
                           double tol = kDefaultTol);

}  // namespace nlwe
