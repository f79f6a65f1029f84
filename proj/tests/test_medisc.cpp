#include <cmath>

#include "doctest.h"
#include "nlwe/ensembles.hpp"
#include "nlwe/errors.hpp"
#include "nlwe/medisc.hpp"
#include "nlwe/protocols.hpp"

using namespace nlwe;
using doctest::Approx;

namespace {

const double kGammaGrid[] = {2.0, 2.01, 2.5, 3.0, 5.0, 10.0, 50.0};

double pg(double g) { return 0.5 * (1.0 + std::sqrt(1.0 + g * g) / (1.0 + g)); }
double pl1(double g) { return 0.5 * (1.0 + g / (1.0 + g)); }

PartitionedEnsemble two_state(const Ket& a, const Ket& b, double qa) {
  PartitionedEnsemble e;
  e.labels = {"a", "b"};
  e.priors = {qa, 1.0 - qa};
  e.states = {DensityMatrix::pure(a, {2, 1}), DensityMatrix::pure(b, {2, 1})};
  e.cell0 = {"a"};
  e.cell1 = {"b"};
  return e;
}

}  // namespace

TEST_CASE("POVM contract") {
  const Dims d{2, 2};
  CHECK_NOTHROW(Povm::checked({"a"}, {identity_operator(d)}));
  CHECK_THROWS_AS(Povm::checked({"a", "b"}, {identity_operator(d), identity_operator(d)}),
                  ContractError);
  CHECK_THROWS_AS(Povm::checked({"a", "a"}, {0.5 * identity_operator(d), 0.5 * identity_operator(d)}),
                  ContractError);
  CHECK_THROWS_AS(Povm::checked({"a", "b"}, {2.0 * identity_operator(d), -1.0 * identity_operator(d)}),
                  ContractError);
}

TEST_CASE("success probability of the example 1 measurements at gamma = 2") {
  const auto e = example1_ensemble(2.0);
  CHECK(success_probability(e, optimal_povm_example1(2.0)) ==
        Approx(0.5 * (1 + std::sqrt(5.0) / 3)).epsilon(1e-12));
  CHECK(success_probability(e, optimal_povm_example1(2.0)) == Approx(0.8726780).epsilon(1e-7));
  const auto locc = induced_povm(named_protocol("ex1_me"));
  CHECK(success_probability(e, locc) == Approx(5.0 / 6).epsilon(1e-12));

  std::vector<HermitianOperator> uniform(4, 0.25 * identity_operator({2, 2}));
  CHECK(success_probability(e, Povm::checked(e.labels, uniform)) == Approx(0.25).epsilon(1e-14));

  CHECK_THROWS_AS(success_probability(e, Povm::checked({"x"}, {identity_operator({2, 2})})),
                  DimensionError);
}

TEST_CASE("optimality condition") {
  for (double g : kGammaGrid) {
    const auto r1 = check_global_optimality(example1_ensemble(g), optimal_povm_example1(g));
    CHECK(r1.is_globally_optimal);
    CHECK(r1.optimality_residual >= -1e-9);
    CHECK(r1.success_probability == Approx(pg(g)).epsilon(1e-12));
    const auto r2 = check_global_optimality(example2_ensemble(g), optimal_povm_example2(g));
    CHECK(r2.is_globally_optimal);
    CHECK(r2.optimality_residual >= -1e-9);
    CHECK(r2.success_probability == Approx(pg(g)).epsilon(1e-12));
  }
  const auto locc =
      check_global_optimality(example1_ensemble(2.0), induced_povm(named_protocol("ex1_me")));
  CHECK_FALSE(locc.is_globally_optimal);
  CHECK(locc.optimality_residual < -1e-3);
}

TEST_CASE("optimal POVMs: completeness and structure") {
  CHECK(optimal_povm_example1(3.0).completeness_residual() < 1e-10);
  CHECK(optimal_povm_example2(4.0).completeness_residual() < 1e-10);

  // The +/- elements are |mu+-><mu+-| (x) |+-><+-|; the first-party factor
  // is the marginal, and Tr(P+ P-) = |<mu+|mu->|^2.
  const double g = 2.0;
  const auto m = optimal_povm_example1(g);
  auto marginal = [](const HermitianOperator& a) {
    ComplexMatrix out(2);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t j = 0; j < 2; ++j) out(i, k) += a(2 * i + j, 2 * k + j);
    return out;
  };
  const auto pp = marginal(m.element("+"));
  const auto pm = marginal(m.element("-"));
  const double overlap2 = (pp * pm).trace().real();
  CHECK(std::sqrt(overlap2) == Approx(g / std::sqrt(1 + g * g)).epsilon(1e-12));
  CHECK(std::sqrt(overlap2) == Approx(2 / std::sqrt(5.0)).epsilon(1e-12));
  CHECK(rank(m.element("+")) == 1);
  CHECK(rank(m.element("-")) == 1);
}

TEST_CASE("closed forms") {
  CHECK(pg_closed_form(2.0) == Approx(0.8726780).epsilon(1e-7));
  CHECK(pl_closed_form_example1(2.0) == Approx(0.8333333).epsilon(1e-7));
  CHECK(1.0 - pg_closed_form(1000.0) < 5e-4);
  CHECK(1.0 - pl_closed_form_example1(1000.0) < 5e-4);
  for (double g : kGammaGrid) {
    CHECK(pg_closed_form(g) == Approx(pg(g)).epsilon(1e-15));
    CHECK(pl_closed_form_example1(g) == Approx(pl1(g)).epsilon(1e-15));
    const double gap = 0.5 * (std::sqrt(1 + g * g) - g) / (1 + g);
    CHECK(pg_closed_form(g) - pl_closed_form_example1(g) == Approx(gap).epsilon(1e-12));
    CHECK(gap > 0.0);
  }
  CHECK(pg_closed_form(2.0) - pl_closed_form_example1(2.0) ==
        Approx((std::sqrt(5.0) - 2) / 6).epsilon(1e-12));
}

TEST_CASE("Helstrom measurement") {
  const auto rho = DensityMatrix::pure(kets::plus(), {2, 1});
  const auto same = helstrom_binary(0.7, rho, 0.3, rho);
  CHECK(same.success_probability == Approx(0.7).epsilon(1e-12));
  CHECK(same.projector_success == Approx(0.7).epsilon(1e-12));

  const auto orth = helstrom_binary(0.5, DensityMatrix::pure(kets::zero(), {2, 1}), 0.5,
                                    DensityMatrix::pure(kets::one(), {2, 1}));
  CHECK(orth.success_probability == Approx(1.0).epsilon(1e-12));

  // non-orthogonal pure states: 1/2 (1 + sqrt(1 - 4 q0 q1 |<a|b>|^2))
  for (double q : {0.2, 0.5, 0.8}) {
    const auto h = helstrom_binary(q, DensityMatrix::pure(kets::zero(), {2, 1}), 1 - q,
                                   DensityMatrix::pure(kets::plus(), {2, 1}));
    const double expected = 0.5 * (1 + std::sqrt(1 - 4 * q * (1 - q) * 0.5));
    CHECK(h.success_probability == Approx(expected).epsilon(1e-12));
    CHECK(h.projector_success == Approx(h.success_probability).epsilon(1e-10));
    CHECK(h.povm.completeness_residual() < 1e-10);
  }
  CHECK_THROWS_AS(helstrom_binary(-0.1, rho, 1.1, rho), ContractError);
}

TEST_CASE("fixed-point oracle") {
  const auto r1 = fixed_point_me_oracle(example1_ensemble(2.0));
  CHECK(r1.converged);
  CHECK(r1.success_probability == Approx(0.8726780).epsilon(1e-6));
  const auto r2 = fixed_point_me_oracle(example2_ensemble(4.0));
  CHECK(r2.success_probability == Approx(pg_closed_form(4.0)).epsilon(1e-6));
  const auto orth = fixed_point_me_oracle(two_state(kets::zero(), kets::one(), 0.5));
  CHECK(orth.success_probability == Approx(1.0).epsilon(1e-9));
  // agrees with Helstrom on a non-orthogonal pair
  const auto pair = two_state(kets::zero(), kets::plus(), 0.6);
  const auto h = helstrom_binary(0.6, pair.states[0], 0.4, pair.states[1]);
  CHECK(fixed_point_me_oracle(pair).success_probability ==
        Approx(h.success_probability).epsilon(1e-6));
}

TEST_CASE("optimal POVMs dominate random POVMs") {
  for (double g : {2.0, 5.0}) {
    for (const auto& [e, m] :
         {std::pair{example1_ensemble(g), optimal_povm_example1(g)},
          std::pair{example2_ensemble(g), optimal_povm_example2(g)}}) {
      const double best = success_probability(e, m);
      for (std::uint64_t s = 0; s < 100; ++s) {
        const auto r = random_povm(e.labels, e.dims(), s);
        CHECK(r.completeness_residual() < 1e-10);
        const double p = success_probability(e, r);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        CHECK(p <= best + 1e-12);
      }
    }
  }
}
