#include "nlwe/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <utility>

#include "nlwe/errors.hpp"

namespace nlwe {

DensityMatrix::DensityMatrix(HermitianOperator op) : op_(std::move(op)) {
  if (!is_psd(op_)) throw ContractError("DensityMatrix: operator is not PSD");
  if (std::abs(op_.trace() - 1.0) > 1e-12) {
    throw ContractError("DensityMatrix: trace " + std::to_string(op_.trace()) + " != 1");
  }
}

DensityMatrix DensityMatrix::pure(const Ket& k, Dims dims) {
  return DensityMatrix(projector_operator(k, dims));
}

DensityMatrix DensityMatrix::unchecked(HermitianOperator op) {
  return DensityMatrix(std::move(op), Unchecked{});
}

std::size_t PartitionedEnsemble::index_of(const std::string& label) const {
  const auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw DimensionError("ensemble has no label '" + label + "'");
  return static_cast<std::size_t>(it - labels.begin());
}

double PartitionedEnsemble::cell_probability(int b) const {
  double s = 0.0;
  for (const auto& l : cell(b)) s += prior(l);
  return s;
}

namespace kets {
Ket zero() { return Ket::basis(2, 0); }
Ket one() { return Ket::basis(2, 1); }
Ket plus() { return Ket::normalized({1.0, 1.0}); }
Ket minus() { return Ket::normalized({1.0, -1.0}); }
}  // namespace kets

double eta0_from_gamma(double gamma) {
  require_gamma(gamma, "eta0_from_gamma");
  return gamma / (2.0 * (1.0 + gamma));
}

double gamma_from_eta0(double eta0) {
  if (!(eta0 >= 1.0 / 3.0 - 1e-15 && eta0 < 0.5)) {
    throw DomainError("gamma_from_eta0: eta0 must lie in [1/3, 1/2), got " +
                      std::to_string(eta0));
  }
  // The lower edge may sit a rounding step under 1/3; clamp so gamma >= 2.
  return std::max(2.0, 2.0 * eta0 / (1.0 - 2.0 * eta0));
}

void require_gamma(double gamma, const char* who) {
  if (!(gamma >= 2.0) || !std::isfinite(gamma)) {
    throw DomainError(std::string(who) + ": gamma must satisfy 2 <= gamma < inf, got " +
                      std::to_string(gamma));
  }
}

namespace {

PartitionedEnsemble two_qubit_ensemble(double gamma, const Ket& minus_first,
                                       const Ket& minus_second) {
  const Dims d{2, 2};
  const double heavy = gamma / (2.0 * (1.0 + gamma));
  const double light = 1.0 / (2.0 * (1.0 + gamma));
  PartitionedEnsemble e;
  e.labels = {"0", "1", "+", "-"};
  e.priors = {heavy, heavy, light, light};
  e.states = {
      DensityMatrix::pure(kron(kets::zero(), kets::zero()), d),
      DensityMatrix::pure(kron(kets::zero(), kets::one()), d),
      DensityMatrix::pure(kron(kets::plus(), kets::plus()), d),
      DensityMatrix::pure(kron(minus_first, minus_second), d),
  };
  e.cell0 = {"0", "1"};
  e.cell1 = {"+", "-"};
  return e;
}

}  // namespace

PartitionedEnsemble example1_ensemble(double gamma) {
  require_gamma(gamma, "example1_ensemble");
  return two_qubit_ensemble(gamma, kets::minus(), kets::minus());
}

PartitionedEnsemble example2_ensemble(double gamma) {
  require_gamma(gamma, "example2_ensemble");
  return two_qubit_ensemble(gamma, kets::plus(), kets::minus());
}

std::vector<Ket> upb_phi_kets() {
  return {Ket::normalized({1.0, -1.0, 0.0}), Ket::normalized({0.0, 1.0, -1.0}),
          Ket::normalized({1.0, 1.0, 1.0})};
}

PartitionedEnsemble upb_ensemble() {
  const Dims d{3, 3};
  const auto phi = upb_phi_kets();
  const Ket q0 = Ket::basis(3, 0);
  const Ket q2 = Ket::basis(3, 2);
  PartitionedEnsemble e;
  e.labels = {"1", "2", "3", "4", "5"};
  e.priors.assign(5, 0.2);
  e.states = {
      DensityMatrix::pure(kron(phi[0], q2), d),
      DensityMatrix::pure(kron(phi[1], q0), d),
      DensityMatrix::pure(kron(phi[2], phi[2]), d),
      DensityMatrix::pure(kron(q0, phi[0]), d),
      DensityMatrix::pure(kron(q2, phi[1]), d),
  };
  e.cell0 = {"1", "2", "3"};
  e.cell1 = {"4", "5"};
  return e;
}

ValidationReport validate(const PartitionedEnsemble& e) {
  ValidationReport r;
  auto fail = [&r](std::string msg) { r.violations.push_back(std::move(msg)); };

  if (e.labels.empty()) fail("ensemble is empty");
  if (e.priors.size() != e.labels.size() || e.states.size() != e.labels.size()) {
    fail("labels, priors and states have different lengths");
    return r;
  }
  const std::set<std::string> unique(e.labels.begin(), e.labels.end());
  if (unique.size() != e.labels.size()) fail("duplicate labels");

  double total = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (!(e.priors[i] > 0.0)) fail("prior of '" + e.labels[i] + "' is not positive");
    total += e.priors[i];
  }
  if (std::abs(total - 1.0) > 1e-12) fail("priors sum to " + std::to_string(total));

  for (std::size_t i = 0; i < e.size(); ++i) {
    const auto& op = e.states[i].op();
    if (!(op.dims() == e.states.front().dims())) {
      fail("state '" + e.labels[i] + "' has different dims");
      continue;
    }
    if (!is_psd(op)) fail("state '" + e.labels[i] + "' is not PSD");
    if (std::abs(op.trace() - 1.0) > 1e-12) fail("state '" + e.labels[i] + "' has trace != 1");
  }

  std::set<std::string> c0(e.cell0.begin(), e.cell0.end());
  std::set<std::string> c1(e.cell1.begin(), e.cell1.end());
  for (const auto& l : c0)
    if (c1.count(l)) fail("label '" + l + "' is in both cells");
  std::set<std::string> covered = c0;
  covered.insert(c1.begin(), c1.end());
  if (covered != unique) fail("cells do not cover the label set exactly");
  return r;
}

}  // namespace nlwe
