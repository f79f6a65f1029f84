#pragma once

// Finite-round LOCC protocols as measurement trees.
//
// A node is a local measurement by one party (a list of PSD operators on that
// party's factor summing to its identity). Each outcome either ends in a leaf
// carrying the final guess label or hands over to a child node. A protocol is
// a convex mixture of such trees. Post-measurement states follow the Lueders
// rule with Kraus operator sqrt(E); for the projective measurements used here
// that is just the projector.
//
// A `Joint` node acts on the full space. It is only allowed when flagged
// `assumed_locc_implementable`: it stands for a measurement known to admit a
// finite-round LOCC realisation that the tree does not spell out.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nlwe/ensembles.hpp"
#include "nlwe/linalg.hpp"
#include "nlwe/medisc.hpp"

namespace nlwe {

enum class Party { First, Second, Joint };

struct ProtocolNode;
using NodePtr = std::shared_ptr<const ProtocolNode>;

struct Branch {
  std::string tag;
  ComplexMatrix op;                          // on the acting party's factor
  std::variant<std::string, NodePtr> next;  // leaf label or child
};

struct ProtocolNode {
  Party party = Party::First;
  std::vector<Branch> branches;
  bool assumed_locc_implementable = false;
};

struct MixtureComponent {
  double weight = 1.0;
  NodePtr root;
};

struct LoccProtocol {
  std::string name;
  Dims dims;
  std::vector<std::string> outcome_labels;
  std::vector<MixtureComponent> components;
};

NodePtr make_node(Party party, std::vector<Branch> branches, bool assumed_locc = false);

/// Checks every node: operator dimensions, PSD within kDefaultTol, local
/// completeness within 1e-10, Joint only when flagged, leaves drawn from
/// outcome_labels, mixture weights positive and summing to 1.
/// Throws ContractError on the first violation.
void validate(const LoccProtocol& p);

/// True if any node is a flagged joint measurement.
bool uses_assumed_locc_nodes(const LoccProtocol& p);

/// Indented text rendering; flagged nodes are marked.
std::string describe(const LoccProtocol& p);

/// Global POVM realised by the protocol: each root-to-leaf path contributes
/// weight * A^dagger A, A the ordered product of embedded Kraus operators.
Povm induced_povm(const LoccProtocol& p);

/// Names accepted by named_protocol.
std::vector<std::string> protocol_names();

/// ex1_me, ex1_pi, ex2_me, ex2_pi, upb_pi. ex2_me and ex2_pi need gamma.
LoccProtocol named_protocol(const std::string& name, std::optional<double> gamma = std::nullopt);

struct MonteCarloResult {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  std::uint64_t seed = 0;
  bool post_measurement_information = false;
};

/// Samples the prepared label by priors, walks the tree drawing outcomes by
/// the Born rule and scores the leaf. When the protocol's labels are A0 x A1
/// the guess is read with post-measurement information: correct iff
/// w_b = i for the prepared state's cell b. Trials are split over `shards`
/// independent counter-based streams derived from `seed`; the result does not
/// depend on thread scheduling.
MonteCarloResult monte_carlo_success(const PartitionedEnsemble& e, const LoccProtocol& p,
                                     std::uint64_t trials, std::uint64_t seed,
                                     unsigned shards = 8);

}  // namespace nlwe
