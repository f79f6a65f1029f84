#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nlwe/ensembles.hpp"
#include "nlwe/linalg.hpp"

namespace nlwe {

/// Labeled measurement. `checked` enforces positivity and completeness.
struct Povm {
  std::vector<std::string> outcomes;
  std::vector<HermitianOperator> elements;  // parallel to outcomes

  /// Throws ContractError unless every element is PSD within `tol` and the
  /// elements sum to the identity within 1e-10 max-entry.
  static Povm checked(std::vector<std::string> outcomes,
                      std::vector<HermitianOperator> elements, double tol = kDefaultTol);

  std::size_t size() const { return outcomes.size(); }
  const HermitianOperator& element(const std::string& label) const;
  /// Max-entry distance of the element sum from the identity.
  double completeness_residual() const;
};

/// Tr(rho M), real part.
double born_probability(const DensityMatrix& rho, const HermitianOperator& m);

/// Sum_i eta_i Tr(rho_i M_i). Outcomes must match the ensemble labels as a set.
double success_probability(const PartitionedEnsemble& e, const Povm& m);

struct DiscriminationReport {
  double success_probability = 0.0;
  /// Most negative eigenvalue over j of the Hermitian part of
  /// Sum_i eta_i rho_i M_i - eta_j rho_j.
  double optimality_residual = 0.0;
  /// Max-entry anti-Hermitian part of Sum_i eta_i rho_i M_i; zero at optimum.
  double hermiticity_residual = 0.0;
  bool is_globally_optimal = false;
  std::optional<Povm> povm;
  bool converged = true;
  int iterations = 0;
};

/// Global optimality test for minimum-error discrimination.
DiscriminationReport check_global_optimality(const PartitionedEnsemble& e, const Povm& m,
                                             double tol = kDefaultTol);

struct HelstromResult {
  double success_probability = 0.0;  // 1/2 (1 + ||q0 r0 - q1 r1||_1)
  double projector_success = 0.0;    // q0 Tr(r0 P+) + q1 Tr(r1 P-)
  Povm povm;                         // outcomes {"0", "1"}: P+ then P-
};

/// Optimal two-state discrimination. P+ projects onto the positive spectral
/// clusters of q0 r0 - q1 r1; the zero cluster goes to P- = I - P+.
HelstromResult helstrom_binary(double q0, const DensityMatrix& r0, double q1,
                               const DensityMatrix& r1);

/// Four rank-1 elements built from the entangled |Gamma_0>, |Gamma_1> and
/// the product |mu_+->|+->. Optimal for example1_ensemble(gamma).
Povm optimal_povm_example1(double gamma);
/// Product measurement |nu_-+><nu_-+| (x) {computational | diagonal}.
/// Optimal for example2_ensemble(gamma).
Povm optimal_povm_example2(double gamma);

/// Global optimum 1/2 (1 + sqrt(1 + g^2)/(1 + g)), shared by both examples.
double pg_closed_form(double gamma);
/// LOCC optimum for Example 1, 1/2 (1 + g/(1 + g)).
double pl_closed_form_example1(double gamma);

/// Iterative ME solver M_j <- G^-1/2 (eta_j^2 rho_j M_j rho_j) G^-1/2 with
/// G = Sum_j eta_j^2 rho_j M_j rho_j, seeded from the uniform POVM. Any null
/// space of G is folded into the first outcome. Stops when the max-entry POVM
/// change drops below 1e-12 or after `max_iters`; used as a cross-check only.
DiscriminationReport fixed_point_me_oracle(const PartitionedEnsemble& e, int max_iters = 10000,
                                           double tol = kDefaultTol);

/// Rank-1 random POVM: n Haar-like random kets |v_k>, S = Sum |v_k><v_k|,
/// M_k = S^-1/2 |v_k><v_k| S^-1/2. Deterministic in `seed`.
Povm random_povm(const std::vector<std::string>& outcomes, Dims dims, std::uint64_t seed);

}  // namespace nlwe
