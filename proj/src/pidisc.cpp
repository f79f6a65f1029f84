#include "nlwe/pidisc.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "nlwe/errors.hpp"

namespace nlwe {

std::string to_string(const OmegaLabel& w) { return "(" + w.first + "," + w.second + ")"; }

std::vector<OmegaLabel> omega(const PartitionedEnsemble& e) {
  std::vector<OmegaLabel> out;
  for (const auto& a : e.cell0)
    for (const auto& b : e.cell1) out.push_back({a, b});
  return out;
}

std::vector<std::string> omega_strings(const PartitionedEnsemble& e) {
  std::vector<std::string> out;
  for (const auto& w : omega(e)) out.push_back(to_string(w));
  return out;
}

std::size_t AverageEnsemble::index_of(const OmegaLabel& w) const {
  const auto it = std::find(omega.begin(), omega.end(), w);
  if (it == omega.end()) throw DimensionError("average ensemble has no outcome " + to_string(w));
  return static_cast<std::size_t>(it - omega.begin());
}

AverageEnsemble average_ensemble(const PartitionedEnsemble& e) {
  if (e.cell0.empty() || e.cell1.empty()) {
    throw DimensionError("average_ensemble: partition must have exactly two non-empty cells");
  }
  AverageEnsemble ae;
  ae.omega = omega(e);
  for (const auto& w : ae.omega) {
    const double e0 = e.prior(w.first);
    const double e1 = e.prior(w.second);
    ae.priors.push_back(0.5 * (e0 + e1));
    HermitianOperator mix = e0 * e.state(w.first).op() + e1 * e.state(w.second).op();
    mix *= 1.0 / (e0 + e1);
    ae.states.emplace_back(std::move(mix));
  }
  return ae;
}

namespace {

void require_omega_outcomes(const std::vector<std::string>& expected, const Povm& m) {
  const std::set<std::string> lhs(expected.begin(), expected.end());
  const std::set<std::string> rhs(m.outcomes.begin(), m.outcomes.end());
  if (lhs != rhs) throw DimensionError("POVM outcomes do not match A0 x A1");
}

}  // namespace

double pi_success_direct(const PartitionedEnsemble& e, const Povm& m) {
  const auto om = omega(e);
  std::vector<std::string> names;
  for (const auto& w : om) names.push_back(to_string(w));
  require_omega_outcomes(names, m);

  double p = 0.0;
  for (int b = 0; b < 2; ++b) {
    for (const auto& i : e.cell(b)) {
      HermitianOperator credited = identity_operator(e.dims()) * 0.0;
      for (const auto& w : om)
        if (w.component(b) == i) credited += m.element(to_string(w));
      p += e.prior(i) * born_probability(e.state(i), credited);
    }
  }
  return p;
}

double pi_success_via_average(const AverageEnsemble& ae, const Povm& m) {
  std::vector<std::string> names;
  for (const auto& w : ae.omega) names.push_back(to_string(w));
  require_omega_outcomes(names, m);
  double p = 0.0;
  for (std::size_t k = 0; k < ae.omega.size(); ++k) {
    p += ae.priors[k] * born_probability(ae.states[k], m.element(names[k]));
  }
  return 2.0 * p;
}

double pi_success_probability(const PartitionedEnsemble& e, const Povm& m) {
  const double direct = pi_success_direct(e, m);
  const double averaged = pi_success_via_average(average_ensemble(e), m);
  if (std::abs(direct - averaged) > 1e-10) {
    throw ContractError("pi_success_probability: direct and averaged evaluations differ by " +
                        std::to_string(direct - averaged));
  }
  return direct;
}

Povm pi_povm_example1() {
  const Dims d{2, 2};
  return Povm::checked(
      {"(0,+)", "(1,+)", "(0,-)", "(1,-)"},
      {projector_operator(kron(kets::plus(), kets::zero()), d),
       projector_operator(kron(kets::plus(), kets::one()), d),
       projector_operator(kron(kets::minus(), kets::zero()), d),
       projector_operator(kron(kets::minus(), kets::one()), d)});
}

Povm bell_povm() {
  const Dims d{2, 2};
  return Povm::checked({"(0,+)", "(0,-)", "(1,+)", "(1,-)"},
                       {projector_operator(Ket::normalized({1.0, 0.0, 0.0, 1.0}), d),
                        projector_operator(Ket::normalized({1.0, 0.0, 0.0, -1.0}), d),
                        projector_operator(Ket::normalized({0.0, 1.0, 1.0, 0.0}), d),
                        projector_operator(Ket::normalized({0.0, 1.0, -1.0, 0.0}), d)});
}

const HermitianOperator& PiProjectors::operator[](const OmegaLabel& w) const {
  if (w == OmegaLabel{"0", "+"}) return p0_plus;
  if (w == OmegaLabel{"1", "-"}) return p1_minus;
  if (w == OmegaLabel{"1", "+"}) return p1_plus;
  if (w == OmegaLabel{"0", "-"}) return p0_minus;
  throw DimensionError("PiProjectors: unknown outcome " + to_string(w));
}

PiProjectors pi_projectors_example2(double gamma) {
  const auto ae = average_ensemble(example2_ensemble(gamma));
  const auto first = helstrom_binary(0.5, ae.state({"0", "+"}), 0.5, ae.state({"1", "-"}));
  const auto second = helstrom_binary(0.5, ae.state({"1", "+"}), 0.5, ae.state({"0", "-"}));
  return {first.povm.elements[0], first.povm.elements[1], second.povm.elements[0],
          second.povm.elements[1]};
}

Povm pi_locc_povm_example2(double gamma) {
  const auto pi = pi_projectors_example2(gamma);
  return Povm::checked({"(0,+)", "(0,-)", "(1,+)", "(1,-)"},
                       {0.5 * pi.p0_plus, 0.5 * pi.p0_minus, 0.5 * pi.p1_plus, 0.5 * pi.p1_minus});
}

double plpi_closed_form_example2(double gamma) {
  require_gamma(gamma, "plpi_closed_form_example2");
  return 0.5 * (1.0 + std::sqrt(1.0 + gamma + gamma * gamma) / (1.0 + gamma));
}

KOperators k_operators_example2(double gamma) {
  const auto ae = average_ensemble(example2_ensemble(gamma));
  const auto pi = pi_projectors_example2(gamma);
  const Dims d{2, 2};
  auto half_product = [](const DensityMatrix& rho, const HermitianOperator& p) {
    ComplexMatrix m = rho.op().matrix() * p.matrix();
    m *= 0.5;
    return m;
  };
  ComplexMatrix k0 = half_product(ae.state({"0", "+"}), pi.p0_plus) +
                     half_product(ae.state({"1", "-"}), pi.p1_minus);
  ComplexMatrix k1 = half_product(ae.state({"1", "+"}), pi.p1_plus) +
                     half_product(ae.state({"0", "-"}), pi.p0_minus);
  return {HermitianOperator(std::move(k0), d), HermitianOperator(std::move(k1), d)};
}

double SymmetryReport::worst() const {
  double w = 0.0;
  for (const auto& c : checks) w = std::max(w, c.residual);
  return w;
}

double cross_block_residual(const HermitianOperator& a) {
  if (!(a.dims() == Dims{2, 2})) throw DimensionError("cross_block_residual: needs 2x2 dims");
  double r = 0.0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      r = std::max(r, std::abs(a(2 * i, 2 * j + 1) - a(2 * i + 1, 2 * j)));
  return r;
}

double y_invariant_block_residual(const HermitianOperator& a) {
  if (!(a.dims() == Dims{2, 2})) {
    throw DimensionError("y_invariant_block_residual: needs 2x2 dims");
  }
  double r = 0.0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      r = std::max(r, std::abs(a(2 * i, 2 * j) - a(2 * i + 1, 2 * j + 1)));
      r = std::max(r, std::abs(a(2 * i, 2 * j + 1) + a(2 * i + 1, 2 * j)));
    }
  return r;
}

SymmetryReport symmetry_checks(double gamma) {
  const auto ae = average_ensemble(example2_ensemble(gamma));
  const auto pi = pi_projectors_example2(gamma);
  const auto k = k_operators_example2(gamma);
  const ComplexMatrix x = kron(pauli(0).matrix(), pauli(1).matrix());
  const ComplexMatrix y = kron(pauli(0).matrix(), pauli(2).matrix());
  const HermitianOperator id = identity_operator({2, 2});
  auto rho = [&](const char* a, const char* b) { return ae.state({a, b}).op(); };
  auto diff = [](const HermitianOperator& a, const HermitianOperator& b) {
    return max_abs_diff(a.matrix(), b.matrix());
  };

  SymmetryReport r;
  auto add = [&r](std::string name, double residual) {
    r.checks.push_back({std::move(name), residual});
  };

  add("Y rho(0,+) Y = rho(1,-)", diff(conjugate(y, rho("0", "+")), rho("1", "-")));
  add("Y rho(0,-) Y = rho(1,+)", diff(conjugate(y, rho("0", "-")), rho("1", "+")));
  add("X rho(0,+) X = rho(1,+)", diff(conjugate(x, rho("0", "+")), rho("1", "+")));
  add("X rho(0,-) X = rho(1,-)", diff(conjugate(x, rho("0", "-")), rho("1", "-")));

  add("Y Pi(0,+) Y = Pi(1,-)", diff(conjugate(y, pi.p0_plus), pi.p1_minus));
  add("Y Pi(1,+) Y = Pi(0,-)", diff(conjugate(y, pi.p1_plus), pi.p0_minus));
  add("Pi(0,+) + Pi(1,-) = I", diff(pi.p0_plus + pi.p1_minus, id));
  add("Pi(1,+) + Pi(0,-) = I", diff(pi.p1_plus + pi.p0_minus, id));

  const std::pair<const char*, const HermitianOperator*> projectors[] = {
      {"Pi(0,+)", &pi.p0_plus},
      {"Pi(1,-)", &pi.p1_minus},
      {"Pi(1,+)", &pi.p1_plus},
      {"Pi(0,-)", &pi.p0_minus}};
  for (const auto& [name, p] : projectors) {
    add(std::string(name) + " + Y " + name + " Y = I", diff(*p + conjugate(y, *p), id));
    add(std::string("<i0|") + name + "|j1> = <i1|" + name + "|j0>", cross_block_residual(*p));
    add(std::string("PT(") + name + ") = " + name, diff(partial_transpose(*p), *p));
  }

  add("X K0 X = K1", diff(conjugate(x, k.k0), k.k1));
  add("X K1 X = K0", diff(conjugate(x, k.k1), k.k0));
  add("Y K0 Y = K0", diff(conjugate(y, k.k0), k.k0));
  add("Y K1 Y = K1", diff(conjugate(y, k.k1), k.k1));
  add("K0 block identities", y_invariant_block_residual(k.k0));
  add("K1 block identities", y_invariant_block_residual(k.k1));
  add("PT(K0) = X K0 X", diff(partial_transpose(k.k0), conjugate(x, k.k0)));
  add("PT(K0) = K1", diff(partial_transpose(k.k0), k.k1));
  add("PT(K1) = K0", diff(partial_transpose(k.k1), k.k0));
  return r;
}

}  // namespace nlwe
