#pragma once

#include <string>
#include <vector>

#include "nlwe/linalg.hpp"

namespace nlwe {

/// Trace-one PSD operator.
class DensityMatrix {
 public:
  /// Checks PSD within kDefaultTol and unit trace within 1e-12.
  explicit DensityMatrix(HermitianOperator op);
  static DensityMatrix pure(const Ket& k, Dims dims);
  /// Skips validation; used to build deliberately broken ensembles for the
  /// validator.
  static DensityMatrix unchecked(HermitianOperator op);

  const HermitianOperator& op() const { return op_; }
  Dims dims() const { return op_.dims(); }
  std::size_t dim() const { return op_.dim(); }

 private:
  struct Unchecked {};
  DensityMatrix(HermitianOperator op, Unchecked) : op_(std::move(op)) {}
  HermitianOperator op_;
};

/// States with priors, split into two subensembles A0 and A1.
struct PartitionedEnsemble {
  std::vector<std::string> labels;
  std::vector<double> priors;          // parallel to labels
  std::vector<DensityMatrix> states;   // parallel to labels
  std::vector<std::string> cell0;      // A0
  std::vector<std::string> cell1;      // A1

  std::size_t size() const { return labels.size(); }
  /// Position of `label` in `labels`; throws DimensionError if absent.
  std::size_t index_of(const std::string& label) const;
  double prior(const std::string& label) const { return priors[index_of(label)]; }
  const DensityMatrix& state(const std::string& label) const { return states[index_of(label)]; }
  /// Probability that subensemble b (0 or 1) is prepared.
  double cell_probability(int b) const;
  const std::vector<std::string>& cell(int b) const { return b == 0 ? cell0 : cell1; }
  Dims dims() const { return states.front().dims(); }
};

namespace kets {
Ket zero();
Ket one();
Ket plus();
Ket minus();
}  // namespace kets

/// Example 1: {0,1} computational on the second qubit, {+,-} diagonal on both.
PartitionedEnsemble example1_ensemble(double gamma);
/// Example 2: as Example 1 but rho_- = |+><+| (x) |-><-|.
PartitionedEnsemble example2_ensemble(double gamma);
/// Five-state two-qutrit "Tiles" UPB with uniform priors; cells {1,2,3}, {4,5}.
PartitionedEnsemble upb_ensemble();

/// The three qutrit kets phi_1, phi_2, phi_3 used by the UPB.
std::vector<Ket> upb_phi_kets();

/// eta0 = gamma / (2 (1 + gamma)) on gamma in [2, inf).
double eta0_from_gamma(double gamma);
/// Inverse of eta0_from_gamma on eta0 in [1/3, 1/2).
double gamma_from_eta0(double eta0);
/// Throws DomainError unless gamma >= 2 (and finite).
void require_gamma(double gamma, const char* who);

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate(const PartitionedEnsemble& e);

}  // namespace nlwe
