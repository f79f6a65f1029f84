#include <cmath>

#include "doctest.h"
#include "nlwe/ensembles.hpp"
#include "nlwe/errors.hpp"
#include "nlwe/sepcert.hpp"

using namespace nlwe;
using doctest::Approx;

namespace {

const double kGrid[] = {2.0, 2.5, 4.0, 10.0, 100.0};

void check_rank_one_product(const DensityMatrix& rho) {
  const auto eig = hermitian_eig(rho.op());
  CHECK(eig.eigenvalues.front() == Approx(1.0).epsilon(1e-12));
  for (std::size_t k = 1; k < eig.eigenvalues.size(); ++k)
    CHECK(std::abs(eig.eigenvalues[k]) < 1e-12);
  CHECK(is_ppt(rho.op()));
}

// <phi| Tr_2(rho) |phi> for qubit marginals.
ComplexMatrix first_marginal(const HermitianOperator& a) {
  const auto d = a.dims();
  ComplexMatrix out(d.first);
  for (std::size_t i = 0; i < d.first; ++i)
    for (std::size_t k = 0; k < d.first; ++k)
      for (std::size_t j = 0; j < d.second; ++j) out(i, k) += a(i * d.second + j, k * d.second + j);
  return out;
}

}  // namespace

TEST_CASE("example 1 priors and subensemble probabilities") {
  const auto e = example1_ensemble(2.0);
  CHECK(e.prior("0") == Approx(1.0 / 3));
  CHECK(e.prior("1") == Approx(1.0 / 3));
  CHECK(e.prior("+") == Approx(1.0 / 6));
  CHECK(e.prior("-") == Approx(1.0 / 6));
  CHECK(e.cell_probability(0) == Approx(2.0 / 3));
  CHECK(e.cell_probability(1) == Approx(1.0 / 3));

  for (double g : kGrid) {
    for (const auto& ens : {example1_ensemble(g), example2_ensemble(g)}) {
      double total = 0.0;
      for (double p : ens.priors) total += p;
      CHECK(total == Approx(1.0).epsilon(1e-12));
      CHECK(ens.prior("0") == Approx(g / (2 * (1 + g))).epsilon(1e-14));
      CHECK(ens.prior("+") == Approx(1 / (2 * (1 + g))).epsilon(1e-14));
      CHECK(ens.cell_probability(0) == Approx(g / (1 + g)).epsilon(1e-14));
      CHECK(validate(ens).ok());
      for (const auto& s : ens.states) check_rank_one_product(s);
    }
  }
}

TEST_CASE("example 2 states") {
  const auto e = example2_ensemble(2.0);
  const auto plus = projector(kets::plus());
  CHECK(max_abs_diff(first_marginal(e.state("-").op()), plus) < 1e-14);
  CHECK(std::abs((e.state("+").op().matrix() * e.state("-").op().matrix()).trace()) < 1e-14);
}

TEST_CASE("UPB ensemble") {
  const auto e = upb_ensemble();
  CHECK(e.size() == 5);
  CHECK(validate(e).ok());
  for (double p : e.priors) CHECK(p == Approx(0.2));
  for (std::size_t i = 0; i < e.size(); ++i) {
    check_rank_one_product(e.states[i]);
    CHECK(e.states[i].op().trace() == Approx(1.0).epsilon(1e-12));
    for (std::size_t j = 0; j < e.size(); ++j) {
      if (i == j) continue;
      const auto overlap = (e.states[i].op().matrix() * e.states[j].op().matrix()).trace();
      CHECK(std::abs(overlap) < 1e-12);
    }
  }
}

TEST_CASE("gamma and eta0 conversions") {
  CHECK(eta0_from_gamma(2.0) == Approx(1.0 / 3).epsilon(1e-15));
  CHECK(gamma_from_eta0(0.4) == Approx(4.0).epsilon(1e-12));
  CHECK(gamma_from_eta0(1.0 / 3) == Approx(2.0).epsilon(1e-12));
  for (int k = 0; k < 50; ++k) {
    const double eta = 1.0 / 3 + k * (0.499 - 1.0 / 3) / 49;
    CHECK(eta0_from_gamma(gamma_from_eta0(eta)) == Approx(eta).epsilon(1e-12));
  }
  CHECK_THROWS_AS(gamma_from_eta0(0.5), DomainError);
  CHECK_THROWS_AS(gamma_from_eta0(0.3), DomainError);
  CHECK_THROWS_AS(example1_ensemble(1.0), DomainError);
  CHECK_THROWS_AS(example2_ensemble(1.999), DomainError);
  CHECK_THROWS_AS(require_gamma(INFINITY, "test"), DomainError);
  CHECK_THROWS_AS(require_gamma(NAN, "test"), DomainError);
}

TEST_CASE("validate reports broken ensembles") {
  CHECK(validate(example1_ensemble(3.0)).ok());

  auto scaled = example1_ensemble(3.0);
  for (auto& p : scaled.priors) p *= 0.9;
  CHECK_FALSE(validate(scaled).ok());

  auto bad_state = example1_ensemble(3.0);
  ComplexMatrix m = ComplexMatrix::identity(4);
  m(0, 0) = -0.5;
  m(1, 1) = 1.5;
  bad_state.states[0] = DensityMatrix::unchecked(HermitianOperator(m, {2, 2}));
  CHECK_FALSE(validate(bad_state).ok());

  auto overlap = example1_ensemble(3.0);
  overlap.cell1.push_back("0");
  CHECK_FALSE(validate(overlap).ok());

  auto missing = example1_ensemble(3.0);
  missing.cell0.pop_back();
  CHECK_FALSE(validate(missing).ok());

  auto dup = example1_ensemble(3.0);
  dup.labels[1] = dup.labels[0];
  CHECK_FALSE(validate(dup).ok());

  CHECK_THROWS_AS(DensityMatrix(HermitianOperator(m, {2, 2})), ContractError);
  CHECK_THROWS_AS(example1_ensemble(3.0).index_of("x"), DimensionError);
}
