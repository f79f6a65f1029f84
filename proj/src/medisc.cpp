#include "nlwe/medisc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <utility>

#include "nlwe/errors.hpp"
#include "nlwe/random.hpp"

namespace nlwe {

Povm Povm::checked(std::vector<std::string> outcomes, std::vector<HermitianOperator> elements,
                   double tol) {
  if (outcomes.size() != elements.size() || outcomes.empty()) {
    throw DimensionError("Povm: outcome and element counts differ or are zero");
  }
  if (std::set<std::string>(outcomes.begin(), outcomes.end()).size() != outcomes.size()) {
    throw ContractError("Povm: duplicate outcome labels");
  }
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (!(elements[i].dims() == elements.front().dims())) {
      throw DimensionError("Povm: elements have different dims");
    }
    if (!is_psd(elements[i], tol)) {
      throw ContractError("Povm: element '" + outcomes[i] + "' is not PSD");
    }
  }
  Povm m{std::move(outcomes), std::move(elements)};
  const double res = m.completeness_residual();
  if (res > 1e-10) {
    throw ContractError("Povm: elements sum to identity only within " + std::to_string(res));
  }
  return m;
}

const HermitianOperator& Povm::element(const std::string& label) const {
  const auto it = std::find(outcomes.begin(), outcomes.end(), label);
  if (it == outcomes.end()) throw DimensionError("Povm has no outcome '" + label + "'");
  return elements[static_cast<std::size_t>(it - outcomes.begin())];
}

double Povm::completeness_residual() const {
  ComplexMatrix sum(elements.front().dim());
  for (const auto& el : elements) sum += el.matrix();
  return max_abs_diff(sum, ComplexMatrix::identity(sum.dim()));
}

double born_probability(const DensityMatrix& rho, const HermitianOperator& m) {
  const auto& a = rho.op().matrix();
  const auto& b = m.matrix();
  if (a.dim() != b.dim()) throw DimensionError("born_probability: dimension mismatch");
  double s = 0.0;
  for (std::size_t r = 0; r < a.dim(); ++r)
    for (std::size_t c = 0; c < a.dim(); ++c) s += (a(r, c) * b(c, r)).real();
  return s;
}

namespace {

void require_matching_labels(const PartitionedEnsemble& e, const Povm& m) {
  const std::set<std::string> lhs(e.labels.begin(), e.labels.end());
  const std::set<std::string> rhs(m.outcomes.begin(), m.outcomes.end());
  if (lhs != rhs) throw DimensionError("POVM outcomes do not match ensemble labels");
  if (!(m.elements.front().dims() == e.dims())) {
    throw DimensionError("POVM and ensemble act on different spaces");
  }
}

}  // namespace

double success_probability(const PartitionedEnsemble& e, const Povm& m) {
  require_matching_labels(e, m);
  double p = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    p += e.priors[i] * born_probability(e.states[i], m.element(e.labels[i]));
  }
  return p;
}

DiscriminationReport check_global_optimality(const PartitionedEnsemble& e, const Povm& m,
                                             double tol) {
  require_matching_labels(e, m);
  const std::size_t n = e.dims().total();
  ComplexMatrix z(n);
  for (std::size_t i = 0; i < e.size(); ++i) {
    z += (e.states[i].op().matrix() * m.element(e.labels[i]).matrix()) * e.priors[i];
  }
  DiscriminationReport r;
  r.success_probability = success_probability(e, m);
  ComplexMatrix skew = z - z.adjoint();
  r.hermiticity_residual = 0.5 * max_abs(skew);
  ComplexMatrix zh = z + z.adjoint();
  zh *= 0.5;
  const HermitianOperator lagrange(std::move(zh), e.dims());

  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < e.size(); ++j) {
    worst = std::min(worst, min_eigenvalue(lagrange - e.priors[j] * e.states[j].op()));
  }
  r.optimality_residual = worst;
  r.is_globally_optimal = worst >= -tol && r.hermiticity_residual <= tol;
  r.povm = m;
  return r;
}

HelstromResult helstrom_binary(double q0, const DensityMatrix& r0, double q1,
                               const DensityMatrix& r1) {
  if (!(q0 > 0.0 && q1 > 0.0) || std::abs(q0 + q1 - 1.0) > 1e-12) {
    throw ContractError("helstrom_binary: priors must be positive and sum to 1");
  }
  if (!(r0.dims() == r1.dims())) throw DimensionError("helstrom_binary: dims mismatch");

  const HermitianOperator diff = q0 * r0.op() - q1 * r1.op();
  const auto eig = hermitian_eig(diff);
  const std::size_t n = diff.dim();
  ComplexMatrix plus(n);
  double norm1 = 0.0;
  for (double x : eig.eigenvalues) norm1 += std::abs(x);
  for (const auto& cl : spectral_clusters(eig)) {
    if (cl.eigenvalue > kClusterTol) plus += cl.projector;
  }
  HermitianOperator p_plus(std::move(plus), diff.dims());
  HermitianOperator p_minus = identity_operator(diff.dims()) - p_plus;

  HelstromResult out;
  out.success_probability = 0.5 * (1.0 + norm1);
  out.projector_success = q0 * born_probability(r0, p_plus) + q1 * born_probability(r1, p_minus);
  out.povm = Povm::checked({"0", "1"}, {std::move(p_plus), std::move(p_minus)});
  return out;
}

namespace {

// Amplitudes sqrt(1/2 -+ g / (2 sqrt(1 + g^2))) shared by mu, Gamma and nu.
struct SplitAmplitudes {
  double small;
  double large;
};

SplitAmplitudes split_amplitudes(double gamma) {
  const double t = gamma / (2.0 * std::sqrt(1.0 + gamma * gamma));
  return {std::sqrt(0.5 - t), std::sqrt(0.5 + t)};
}

}  // namespace

Povm optimal_povm_example1(double gamma) {
  require_gamma(gamma, "optimal_povm_example1");
  const auto [a, b] = split_amplitudes(gamma);
  const Dims d{2, 2};
  const Ket mu_plus({a, b});
  const Ket mu_minus({a, -b});
  const Ket big_gamma0({b, 0.0, 0.0, -a});  // b|00> - a|11>
  const Ket big_gamma1({0.0, b, -a, 0.0});  // b|01> - a|10>
  return Povm::checked({"0", "1", "+", "-"},
                       {projector_operator(big_gamma0, d), projector_operator(big_gamma1, d),
                        projector_operator(kron(mu_plus, kets::plus()), d),
                        projector_operator(kron(mu_minus, kets::minus()), d)});
}

Povm optimal_povm_example2(double gamma) {
  require_gamma(gamma, "optimal_povm_example2");
  const auto [a, b] = split_amplitudes(gamma);
  const Dims d{2, 2};
  const Ket nu_plus({a, b});
  const Ket nu_minus({b, -a});
  return Povm::checked({"0", "1", "+", "-"},
                       {projector_operator(kron(nu_minus, kets::zero()), d),
                        projector_operator(kron(nu_minus, kets::one()), d),
                        projector_operator(kron(nu_plus, kets::plus()), d),
                        projector_operator(kron(nu_plus, kets::minus()), d)});
}

double pg_closed_form(double gamma) {
  require_gamma(gamma, "pg_closed_form");
  return 0.5 * (1.0 + std::sqrt(1.0 + gamma * gamma) / (1.0 + gamma));
}

double pl_closed_form_example1(double gamma) {
  require_gamma(gamma, "pl_closed_form_example1");
  return 0.5 * (1.0 + gamma / (1.0 + gamma));
}

DiscriminationReport fixed_point_me_oracle(const PartitionedEnsemble& e, int max_iters,
                                           double tol) {
  const Dims dims = e.dims();
  const std::size_t n = e.size();
  std::vector<HermitianOperator> m(n, identity_operator(dims) * (1.0 / static_cast<double>(n)));

  DiscriminationReport report;
  report.converged = false;
  for (int it = 1; it <= max_iters; ++it) {
    std::vector<HermitianOperator> weighted;
    weighted.reserve(n);
    HermitianOperator g = identity_operator(dims) * 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const auto& rho = e.states[j].op().matrix();
      const double w = e.priors[j] * e.priors[j];
      weighted.emplace_back(rho * m[j].matrix() * rho * w, dims);
      g += weighted.back();
    }
    const HermitianOperator g_isqrt = psd_inverse_sqrt(g);
    HermitianOperator sum = identity_operator(dims) * 0.0;
    double change = 0.0;
    std::vector<HermitianOperator> next;
    next.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
      next.emplace_back(g_isqrt.matrix() * weighted[j].matrix() * g_isqrt.matrix(), dims);
      sum += next.back();
    }
    next.front() += identity_operator(dims) - sum;
    for (std::size_t j = 0; j < n; ++j) {
      change = std::max(change, max_abs_diff(next[j].matrix(), m[j].matrix()));
    }
    m = std::move(next);
    report.iterations = it;
    if (change < 1e-12) {
      report.converged = true;
      break;
    }
  }

  const Povm povm{e.labels, m};
  DiscriminationReport check = check_global_optimality(e, povm, tol);
  check.converged = report.converged;
  check.iterations = report.iterations;
  check.is_globally_optimal = check.is_globally_optimal && check.converged;
  return check;
}

Povm random_povm(const std::vector<std::string>& outcomes, Dims dims, std::uint64_t seed) {
  CounterRng rng(seed, 0x706f766d);
  const std::size_t n = dims.total();
  std::vector<HermitianOperator> rank1;
  rank1.reserve(outcomes.size());
  HermitianOperator s = identity_operator(dims) * 0.0;
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    std::vector<Complex> v(n);
    for (auto& x : v) x = Complex(rng.normal(), rng.normal());
    rank1.push_back(projector_operator(Ket::normalized(std::move(v)), dims));
    s += rank1.back();
  }
  const auto s_isqrt = psd_inverse_sqrt(s, 1e-12);
  HermitianOperator sum = identity_operator(dims) * 0.0;
  for (auto& el : rank1) {
    el = HermitianOperator(s_isqrt.matrix() * el.matrix() * s_isqrt.matrix(), dims);
    sum += el;
  }
  rank1.front() += identity_operator(dims) - sum;
  return Povm::checked(outcomes, std::move(rank1));
}

}  // namespace nlwe
