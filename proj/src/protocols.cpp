#include "nlwe/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <set>
#include <sstream>

#include "nlwe/errors.hpp"
#include "nlwe/pidisc.hpp"
#include "nlwe/random.hpp"

namespace nlwe {

NodePtr make_node(Party party, std::vector<Branch> branches, bool assumed_locc) {
  return std::make_shared<const ProtocolNode>(
      ProtocolNode{party, std::move(branches), assumed_locc});
}

namespace {

std::size_t local_dim(Party party, Dims dims) {
  switch (party) {
    case Party::First:
      return dims.first;
    case Party::Second:
      return dims.second;
    case Party::Joint:
      return dims.total();
  }
  return 0;
}

ComplexMatrix embed(Party party, Dims dims, const ComplexMatrix& local) {
  switch (party) {
    case Party::First:
      return kron(local, ComplexMatrix::identity(dims.second));
    case Party::Second:
      return kron(ComplexMatrix::identity(dims.first), local);
    case Party::Joint:
      return local;
  }
  return local;
}

const char* party_name(Party party) {
  switch (party) {
    case Party::First:
      return "party 1";
    case Party::Second:
      return "party 2";
    case Party::Joint:
      return "joint";
  }
  return "?";
}

void validate_node(const ProtocolNode& node, const LoccProtocol& p,
                   const std::set<std::string>& labels, int depth) {
  if (depth > 64) throw ContractError(p.name + ": protocol tree is too deep (cycle?)");
  if (node.branches.empty()) throw ContractError(p.name + ": node without branches");
  if (node.party == Party::Joint && !node.assumed_locc_implementable) {
    throw ContractError(p.name + ": joint measurement node is not flagged as LOCC-implementable");
  }
  const std::size_t d = local_dim(node.party, p.dims);
  ComplexMatrix sum(d);
  for (const auto& br : node.branches) {
    if (br.op.dim() != d) {
      throw ContractError(p.name + ": branch '" + br.tag + "' operator has wrong dimension");
    }
    const HermitianOperator h(br.op, Dims{d, 1});
    if (!is_psd(h)) throw ContractError(p.name + ": branch '" + br.tag + "' is not PSD");
    sum += br.op;
    if (const auto* leaf = std::get_if<std::string>(&br.next)) {
      if (!labels.count(*leaf)) {
        throw ContractError(p.name + ": leaf '" + *leaf + "' is not an outcome label");
      }
    } else {
      const auto& child = std::get<NodePtr>(br.next);
      if (!child) throw ContractError(p.name + ": null child node");
      validate_node(*child, p, labels, depth + 1);
    }
  }
  if (max_abs_diff(sum, ComplexMatrix::identity(d)) > 1e-10) {
    throw ContractError(p.name + ": local measurement at " + party_name(node.party) +
                        " is not complete");
  }
}

bool node_uses_assumed(const ProtocolNode& node) {
  if (node.assumed_locc_implementable) return true;
  for (const auto& br : node.branches)
    if (const auto* child = std::get_if<NodePtr>(&br.next))
      if (node_uses_assumed(**child)) return true;
  return false;
}

void describe_node(const ProtocolNode& node, int indent, std::ostringstream& os) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  os << pad << "measure (" << party_name(node.party) << ")";
  if (node.assumed_locc_implementable) os << " [assumed LOCC-implementable]";
  os << "\n";
  for (const auto& br : node.branches) {
    os << pad << "  " << br.tag << " -> ";
    if (const auto* leaf = std::get_if<std::string>(&br.next)) {
      os << "guess " << *leaf << "\n";
    } else {
      os << "\n";
      describe_node(*std::get<NodePtr>(br.next), indent + 2, os);
    }
  }
}

}  // namespace

void validate(const LoccProtocol& p) {
  if (p.components.empty()) throw ContractError(p.name + ": protocol has no components");
  const std::set<std::string> labels(p.outcome_labels.begin(), p.outcome_labels.end());
  if (labels.size() != p.outcome_labels.size()) {
    throw ContractError(p.name + ": duplicate outcome labels");
  }
  double total = 0.0;
  for (const auto& c : p.components) {
    if (!(c.weight > 0.0)) throw ContractError(p.name + ": mixture weight must be positive");
    if (!c.root) throw ContractError(p.name + ": null root");
    total += c.weight;
    validate_node(*c.root, p, labels, 0);
  }
  if (std::abs(total - 1.0) > 1e-10) throw ContractError(p.name + ": mixture weights != 1");
}

bool uses_assumed_locc_nodes(const LoccProtocol& p) {
  return std::any_of(p.components.begin(), p.components.end(),
                     [](const auto& c) { return node_uses_assumed(*c.root); });
}

std::string describe(const LoccProtocol& p) {
  std::ostringstream os;
  os << p.name << "\n";
  for (const auto& c : p.components) {
    os << "with probability " << c.weight << ":\n";
    describe_node(*c.root, 1, os);
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Compilation

namespace {

// Embedded Kraus operators, flattened into index-linked nodes.
struct CompiledBranch {
  ComplexMatrix kraus;
  int child = -1;  // index into nodes, or -1 for a leaf
  int leaf = -1;   // index into outcome_labels
};

struct CompiledProtocol {
  std::vector<std::vector<CompiledBranch>> nodes;
  std::vector<int> roots;
  std::vector<double> weights;
};

int compile_node(const ProtocolNode& node, const LoccProtocol& p, CompiledProtocol& out) {
  const int index = static_cast<int>(out.nodes.size());
  out.nodes.emplace_back();
  const std::size_t d = local_dim(node.party, p.dims);
  std::vector<CompiledBranch> branches;
  for (const auto& br : node.branches) {
    CompiledBranch cb;
    const auto local_kraus = psd_sqrt(HermitianOperator(br.op, Dims{d, 1}));
    cb.kraus = embed(node.party, p.dims, local_kraus.matrix());
    if (const auto* leaf = std::get_if<std::string>(&br.next)) {
      const auto it = std::find(p.outcome_labels.begin(), p.outcome_labels.end(), *leaf);
      cb.leaf = static_cast<int>(it - p.outcome_labels.begin());
    } else {
      cb.child = compile_node(*std::get<NodePtr>(br.next), p, out);
    }
    branches.push_back(std::move(cb));
  }
  out.nodes[static_cast<std::size_t>(index)] = std::move(branches);
  return index;
}

CompiledProtocol compile(const LoccProtocol& p) {
  validate(p);
  CompiledProtocol out;
  for (const auto& c : p.components) {
    out.roots.push_back(compile_node(*c.root, p, out));
    out.weights.push_back(c.weight);
  }
  return out;
}

void accumulate(const CompiledProtocol& cp, int node, const ComplexMatrix& path, double weight,
                std::vector<ComplexMatrix>& elements) {
  for (const auto& br : cp.nodes[static_cast<std::size_t>(node)]) {
    const ComplexMatrix next = br.kraus * path;
    if (br.child >= 0) {
      accumulate(cp, br.child, next, weight, elements);
    } else {
      elements[static_cast<std::size_t>(br.leaf)] += next.adjoint() * next * weight;
    }
  }
}

}  // namespace

Povm induced_povm(const LoccProtocol& p) {
  const auto cp = compile(p);
  const std::size_t n = p.dims.total();
  std::vector<ComplexMatrix> elements(p.outcome_labels.size(), ComplexMatrix(n));
  for (std::size_t k = 0; k < cp.roots.size(); ++k) {
    accumulate(cp, cp.roots[k], ComplexMatrix::identity(n), cp.weights[k], elements);
  }
  std::vector<HermitianOperator> ops;
  ops.reserve(elements.size());
  for (auto& m : elements) ops.emplace_back(std::move(m), p.dims);
  return Povm::checked(p.outcome_labels, std::move(ops));
}

// ---------------------------------------------------------------------------
// The named protocols

std::vector<std::string> protocol_names() {
  return {"ex1_me", "ex1_pi", "ex2_me", "ex2_pi", "upb_pi"};
}

namespace {

Branch to_leaf(std::string tag, const Ket& k, std::string label) {
  return {std::move(tag), projector(k), std::move(label)};
}

Branch to_node(std::string tag, const Ket& k, NodePtr child) {
  return {std::move(tag), projector(k), std::move(child)};
}

std::vector<std::string> two_qubit_omega() { return {"(0,+)", "(0,-)", "(1,+)", "(1,-)"}; }

LoccProtocol ex1_me() {
  using namespace kets;
  auto computational = make_node(Party::Second, {to_leaf("0", zero(), "0"), to_leaf("1", one(), "1")});
  auto diagonal = make_node(Party::Second, {to_leaf("+", plus(), "+"), to_leaf("-", minus(), "-")});
  auto root = make_node(Party::First, {to_node("0", zero(), computational),
                                       to_node("1", one(), diagonal)});
  return {"ex1_me", {2, 2}, {"0", "1", "+", "-"}, {{1.0, root}}};
}

LoccProtocol ex1_pi() {
  using namespace kets;
  auto after_plus = make_node(Party::Second, {to_leaf("0", zero(), "(0,+)"),
                                              to_leaf("1", one(), "(1,+)")});
  auto after_minus = make_node(Party::Second, {to_leaf("0", zero(), "(0,-)"),
                                               to_leaf("1", one(), "(1,-)")});
  auto root = make_node(Party::First, {to_node("+", plus(), after_plus),
                                       to_node("-", minus(), after_minus)});
  return {"ex1_pi", {2, 2}, two_qubit_omega(), {{1.0, root}}};
}

LoccProtocol ex2_me(double gamma) {
  using namespace kets;
  require_gamma(gamma, "named_protocol(ex2_me)");
  const double t = gamma / (2.0 * std::sqrt(1.0 + gamma * gamma));
  const double a = std::sqrt(0.5 - t);
  const double b = std::sqrt(0.5 + t);
  const Ket nu_plus({a, b});
  const Ket nu_minus({b, -a});
  auto diagonal = make_node(Party::Second, {to_leaf("+", plus(), "+"), to_leaf("-", minus(), "-")});
  auto computational = make_node(Party::Second, {to_leaf("0", zero(), "0"), to_leaf("1", one(), "1")});
  auto root = make_node(Party::First, {to_node("nu+", nu_plus, diagonal),
                                       to_node("nu-", nu_minus, computational)});
  LoccProtocol p{"ex2_me", {2, 2}, {"0", "1", "+", "-"}, {{1.0, root}}};
  return p;
}

LoccProtocol ex2_pi(double gamma) {
  const auto pi = pi_projectors_example2(gamma);
  auto first = make_node(Party::Joint,
                         {{"Pi(0,+)", pi.p0_plus.matrix(), std::string("(0,+)")},
                          {"Pi(1,-)", pi.p1_minus.matrix(), std::string("(1,-)")}},
                         true);
  auto second = make_node(Party::Joint,
                          {{"Pi(1,+)", pi.p1_plus.matrix(), std::string("(1,+)")},
                           {"Pi(0,-)", pi.p0_minus.matrix(), std::string("(0,-)")}},
                          true);
  return {"ex2_pi", {2, 2}, two_qubit_omega(), {{0.5, first}, {0.5, second}}};
}

// Party 2 measures the computational basis first. Outcome 0 (or 2) rules out
// rho_5 (or rho_4) and leaves a pair in the first cell whose party-1 kets are
// orthogonal; outcome 1 can only come from rho_3 in the first cell, and party 1
// then separates |0> from |2> for the second cell.
LoccProtocol upb_pi() {
  const auto phi = upb_phi_kets();
  const Ket w0 = Ket::normalized({2.0, -1.0, -1.0});  // completes {phi_2, phi_3}
  const Ket w2 = Ket::normalized({1.0, 1.0, -2.0});   // completes {phi_1, phi_3}
  auto after0 = make_node(Party::First, {to_leaf("phi2", phi[1], "(2,4)"),
                                         to_leaf("phi3", phi[2], "(3,4)"),
                                         to_leaf("rest", w0, "(2,4)")});
  auto after2 = make_node(Party::First, {to_leaf("phi1", phi[0], "(1,5)"),
                                         to_leaf("phi3", phi[2], "(3,5)"),
                                         to_leaf("rest", w2, "(1,5)")});
  auto after1 = make_node(Party::First, {to_leaf("0", Ket::basis(3, 0), "(3,4)"),
                                         to_leaf("1", Ket::basis(3, 1), "(3,4)"),
                                         to_leaf("2", Ket::basis(3, 2), "(3,5)")});
  auto root = make_node(Party::Second, {to_node("0", Ket::basis(3, 0), after0),
                                        to_node("1", Ket::basis(3, 1), after1),
                                        to_node("2", Ket::basis(3, 2), after2)});
  return {"upb_pi",
          {3, 3},
          {"(1,4)", "(1,5)", "(2,4)", "(2,5)", "(3,4)", "(3,5)"},
          {{1.0, root}}};
}

double need_gamma(const std::string& name, std::optional<double> gamma) {
  if (!gamma) throw DomainError("named_protocol(" + name + "): gamma is required");
  return *gamma;
}

}  // namespace

LoccProtocol named_protocol(const std::string& name, std::optional<double> gamma) {
  LoccProtocol p;
  if (name == "ex1_me") {
    p = ex1_me();
  } else if (name == "ex1_pi") {
    p = ex1_pi();
  } else if (name == "ex2_me") {
    p = ex2_me(need_gamma(name, gamma));
  } else if (name == "ex2_pi") {
    p = ex2_pi(need_gamma(name, gamma));
  } else if (name == "upb_pi") {
    p = upb_pi();
  } else {
    throw DomainError("named_protocol: unknown protocol '" + name + "'");
  }
  validate(p);
  return p;
}

// ---------------------------------------------------------------------------
// Monte Carlo

namespace {

using State = std::vector<Complex>;

struct PureComponent {
  double weight;
  State amplitudes;
};

std::vector<PureComponent> pure_components(const DensityMatrix& rho) {
  const auto eig = hermitian_eig(rho.op());
  std::vector<PureComponent> out;
  const std::size_t n = rho.dim();
  for (std::size_t k = 0; k < n; ++k) {
    if (eig.eigenvalues[k] <= 1e-12) continue;
    State v(n);
    for (std::size_t r = 0; r < n; ++r) v[r] = eig.eigenvectors(r, k);
    out.push_back({eig.eigenvalues[k], std::move(v)});
  }
  return out;
}

template <typename Weights, typename Get>
std::size_t sample_index(double u, const Weights& items, Get weight_of) {
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < items.size(); ++k) {
    const double w = weight_of(items[k]);
    if (w <= 0.0) continue;
    last_positive = k;
    acc += w;
    if (u < acc) return k;
  }
  return last_positive;  // u landed in rounding slack
}

struct Scorer {
  bool pi = false;
  // For each prepared-state index and each leaf index: is the guess correct?
  std::vector<std::vector<char>> correct;
};

Scorer make_scorer(const PartitionedEnsemble& e, const LoccProtocol& p) {
  Scorer s;
  const std::set<std::string> leaves(p.outcome_labels.begin(), p.outcome_labels.end());
  const std::set<std::string> labels(e.labels.begin(), e.labels.end());
  const auto om = omega(e);
  std::set<std::string> om_names;
  for (const auto& w : om) om_names.insert(to_string(w));

  if (leaves == labels) {
    s.pi = false;
  } else if (leaves == om_names) {
    s.pi = true;
  } else {
    throw DimensionError("monte_carlo_success: protocol labels match neither the ensemble "
                         "labels nor A0 x A1");
  }
  s.correct.assign(e.size(), std::vector<char>(p.outcome_labels.size(), 0));
  for (std::size_t i = 0; i < e.size(); ++i) {
    const int cell =
        std::count(e.cell0.begin(), e.cell0.end(), e.labels[i]) > 0 ? 0 : 1;
    for (std::size_t l = 0; l < p.outcome_labels.size(); ++l) {
      if (!s.pi) {
        s.correct[i][l] = p.outcome_labels[l] == e.labels[i];
      } else {
        const auto it = std::find_if(om.begin(), om.end(), [&](const OmegaLabel& w) {
          return to_string(w) == p.outcome_labels[l];
        });
        s.correct[i][l] = it->component(cell) == e.labels[i];
      }
    }
  }
  return s;
}

std::uint64_t run_shard(const PartitionedEnsemble& e, const CompiledProtocol& cp,
                        const std::vector<std::vector<PureComponent>>& components,
                        const Scorer& scorer, std::uint64_t trials, std::uint64_t seed,
                        std::uint64_t shard) {
  CounterRng rng(seed, shard);
  const std::size_t n = e.dims().total();
  State psi(n);
  State next(n);
  std::vector<double> probs;
  std::uint64_t successes = 0;

  for (std::uint64_t t = 0; t < trials; ++t) {
    const std::size_t i =
        sample_index(rng.uniform(), e.priors, [](double w) { return w; });
    const auto& comps = components[i];
    const std::size_t c =
        sample_index(rng.uniform(), comps, [](const PureComponent& pc) { return pc.weight; });
    psi = comps[c].amplitudes;
    const std::size_t k =
        sample_index(rng.uniform(), cp.weights, [](double w) { return w; });

    int node = cp.roots[k];
    int leaf = -1;
    while (leaf < 0) {
      const auto& branches = cp.nodes[static_cast<std::size_t>(node)];
      probs.assign(branches.size(), 0.0);
      for (std::size_t b = 0; b < branches.size(); ++b) {
        double p = 0.0;
        const auto& kr = branches[b].kraus;
        for (std::size_t r = 0; r < n; ++r) {
          Complex y = 0.0;
          for (std::size_t col = 0; col < n; ++col) y += kr(r, col) * psi[col];
          p += std::norm(y);
        }
        probs[b] = p;
      }
      const std::size_t b = sample_index(rng.uniform(), probs, [](double w) { return w; });
      const auto& kr = branches[b].kraus;
      double norm2 = 0.0;
      for (std::size_t r = 0; r < n; ++r) {
        Complex y = 0.0;
        for (std::size_t col = 0; col < n; ++col) y += kr(r, col) * psi[col];
        next[r] = y;
        norm2 += std::norm(y);
      }
      const double inv = 1.0 / std::sqrt(norm2);
      for (std::size_t r = 0; r < n; ++r) psi[r] = next[r] * inv;
      if (branches[b].child >= 0) {
        node = branches[b].child;
      } else {
        leaf = branches[b].leaf;
      }
    }
    successes += static_cast<std::uint64_t>(scorer.correct[i][static_cast<std::size_t>(leaf)]);
  }
  return successes;
}

}  // namespace

MonteCarloResult monte_carlo_success(const PartitionedEnsemble& e, const LoccProtocol& p,
                                     std::uint64_t trials, std::uint64_t seed, unsigned shards) {
  if (trials == 0) throw DomainError("monte_carlo_success: trials must be >= 1");
  if (!(p.dims == e.dims())) throw DimensionError("monte_carlo_success: dims mismatch");
  shards = std::max(1u, shards);
  const auto cp = compile(p);
  const auto scorer = make_scorer(e, p);
  std::vector<std::vector<PureComponent>> components;
  for (const auto& s : e.states) components.push_back(pure_components(s));

  std::vector<std::future<std::uint64_t>> futures;
  for (unsigned s = 0; s < shards; ++s) {
    const std::uint64_t share = trials / shards + (s < trials % shards ? 1 : 0);
    futures.push_back(std::async(std::launch::async, [&, share, s] {
      return run_shard(e, cp, components, scorer, share, seed, s);
    }));
  }
  MonteCarloResult r;
  for (auto& f : futures) r.successes += f.get();
  r.trials = trials;
  r.seed = seed;
  r.post_measurement_information = scorer.pi;
  r.estimate = static_cast<double>(r.successes) / static_cast<double>(trials);
  r.standard_error = std::sqrt(r.estimate * (1.0 - r.estimate) / static_cast<double>(trials));
  return r;
}

}  // namespace nlwe
