#ifndef BN_PROPAGATION_HPP_
#define BN_PROPAGATION_HPP_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bn/model.hpp"

// Pearl's pi/lambda message passing on singly connected networks.
namespace bn {

struct MessageStore {
  // Causal support P(x | e+) (unnormalized) and diagnostic support
  // P(e- | x), one vector per node.
  std::vector<std::vector<double>> pi_node;
  std::vector<std::vector<double>> lambda_node;
  // Keyed by (parent, child): pi message sent down the edge.
  std::map<std::pair<VarId, VarId>, std::vector<double>> pi_msg;
  // Keyed by (child, parent): lambda message sent up the edge.
  std::map<std::pair<VarId, VarId>, std::vector<double>> lambda_msg;
};

enum class MessageKind { Pi, Lambda };
enum class Phase { Collect, Distribute };

struct TraceRecord {
  VarId from;
  VarId to;
  MessageKind kind;
  Phase phase;
  std::vector<double> values;
};

struct PropagationOptions {
  // Root of the schedule for the component containing it; other components
  // (and the default) use their lowest id.
  std::optional<VarId> pivot;
  bool trace = false;
};

struct PropagationResult {
  MessageStore messages;
  std::vector<Belief> beliefs;  // indexed by VarId; empty if evidence_mass == 0
  // Sum over all assignments of joint * evidence weight, i.e. P(e) for hard
  // evidence.
  double evidence_mass = 0.0;
  std::vector<TraceRecord> trace;
};

// Indicator for hard evidence, the likelihood vector for soft evidence,
// all ones otherwise.
std::vector<double> node_lambda_from_evidence(const BayesianNetwork& net, VarId v,
                                              const Evidence& e);

// pi(x) = sum_u P(x | u) prod_i msg_i(u_i), with one message per CPT parent
// in CPT order. A root returns its prior.
std::vector<double> node_pi(const Cpt& cpt, std::span<const std::vector<double>> parent_messages);

// Lambda message from the CPT child to parent number `parent`:
// sum_x lambda(x) sum_{u_k, k != parent} P(x | u) prod_{k != parent} msg_k(u_k).
std::vector<double> lambda_message(const Cpt& cpt, std::span<const double> lambda,
                                   std::span<const std::vector<double>> parent_messages,
                                   std::size_t parent);

// Two-phase collect/distribute propagation. Throws NotAPolytree on a loopy
// skeleton and ImpossibleEvidence when the evidence has zero mass.
PropagationResult propagate(const BayesianNetwork& net, const Evidence& e,
                            const PropagationOptions& options = {});

// As propagate(), but zero evidence mass is reported rather than thrown.
PropagationResult propagate_weighted(const BayesianNetwork& net, const Evidence& e,
                                     const PropagationOptions& options = {});

// One `MSG <from> <to> <pi|lambda> v1,v2,...` line per record.
std::string format_trace(const BayesianNetwork& net, std::span<const TraceRecord> trace);

}  // namespace bn

#endif  // BN_PROPAGATION_HPP_
