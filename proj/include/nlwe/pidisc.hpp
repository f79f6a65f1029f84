#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nlwe/ensembles.hpp"
#include "nlwe/medisc.hpp"

namespace nlwe {

/// Outcome (w0, w1) in A0 x A1: guess w0 if told b = 0, w1 if told b = 1.
struct OmegaLabel {
  std::string first;
  std::string second;
  const std::string& component(int b) const { return b == 0 ? first : second; }
  friend bool operator==(const OmegaLabel&, const OmegaLabel&) = default;
};

/// "(w0,w1)", the string used as a POVM outcome label.
std::string to_string(const OmegaLabel& w);

/// Omega = A0 x A1 in row-major order over (A0, A1).
std::vector<OmegaLabel> omega(const PartitionedEnsemble& e);
std::vector<std::string> omega_strings(const PartitionedEnsemble& e);

/// Ensemble of pairwise averages: eta~ = (eta_w0 + eta_w1)/2 and
/// rho~ = (eta_w0 rho_w0 + eta_w1 rho_w1) / (eta_w0 + eta_w1).
struct AverageEnsemble {
  std::vector<OmegaLabel> omega;
  std::vector<double> priors;
  std::vector<DensityMatrix> states;

  std::size_t index_of(const OmegaLabel& w) const;
  double prior(const OmegaLabel& w) const { return priors[index_of(w)]; }
  const DensityMatrix& state(const OmegaLabel& w) const { return states[index_of(w)]; }
  Dims dims() const { return states.front().dims(); }
};

AverageEnsemble average_ensemble(const PartitionedEnsemble& e);

/// Direct PI success: Sum_b Sum_{i in A_b} eta_i Tr[rho_i Sum_{w : w_b = i} M_w].
/// Also evaluates pi_success_via_average and throws ContractError if the two
/// disagree by more than 1e-10.
double pi_success_probability(const PartitionedEnsemble& e, const Povm& m);
/// 2 Sum_w eta~_w Tr(rho~_w M_w).
double pi_success_via_average(const AverageEnsemble& ae, const Povm& m);
/// Direct evaluation only, without the consistency check.
double pi_success_direct(const PartitionedEnsemble& e, const Povm& m);

/// |+-><+-| (x) |0/1><0/1|, labelled (0,+), (1,+), (0,-), (1,-).
Povm pi_povm_example1();
/// Bell basis: (0,+) Phi+, (0,-) Phi-, (1,+) Psi+, (1,-) Psi-.
Povm bell_povm();

/// Helstrom projectors of the two equal-weight average-state pairs of
/// Example 2. plus_0 / minus_1 split rho~(0,+) - rho~(1,-); plus_1 / minus_0
/// split rho~(1,+) - rho~(0,-).
struct PiProjectors {
  HermitianOperator p0_plus;   // Pi(0,+)
  HermitianOperator p1_minus;  // Pi(1,-)
  HermitianOperator p1_plus;   // Pi(1,+)
  HermitianOperator p0_minus;  // Pi(0,-)

  const HermitianOperator& operator[](const OmegaLabel& w) const;
};

PiProjectors pi_projectors_example2(double gamma);

/// M_w = Pi_w / 2: the even mixture of the two binary projective measurements.
Povm pi_locc_povm_example2(double gamma);

/// 1/2 (1 + sqrt(1 + g + g^2)/(1 + g)).
double plpi_closed_form_example2(double gamma);

/// K0 = (rho~(0,+) Pi(0,+) + rho~(1,-) Pi(1,-)) / 2 and K1 likewise for the
/// other pair. Hermiticity is a postcondition: a ContractError here means the
/// projectors are not the Helstrom projectors.
struct KOperators {
  HermitianOperator k0;
  HermitianOperator k1;
};

KOperators k_operators_example2(double gamma);

struct SymmetryCheck {
  std::string name;
  double residual = 0.0;  // max-entry
};

struct SymmetryReport {
  std::vector<SymmetryCheck> checks;
  double worst() const;
  bool ok(double tol) const { return worst() <= tol; }
};

/// Sigma-conjugation symmetries of the Example 2 average states, projectors
/// and K operators, and the matrix-element identities they imply.
SymmetryReport symmetry_checks(double gamma);

/// Max-entry residual of <i0|A|j1> = <i1|A|j0> over i, j in {0,1}.
double cross_block_residual(const HermitianOperator& a);
/// Max residual of <i0|A|j0> = <i1|A|j1> and <i0|A|j1> = -<i1|A|j0>.
double y_invariant_block_residual(const HermitianOperator& a);

}  // namespace nlwe
