#ifndef BN_QUERY_HPP_
#define BN_QUERY_HPP_

#include <optional>
#include <string_view>
#include <vector>

#include "bn/model.hpp"

namespace bn {

// Direction of reasoning relative to the arcs. None is reported when no
// evidence node is d-connected to the target.
enum class InferenceType { Forward, Backward, Intercausal, Mixed, None };

std::string_view to_string(InferenceType type);

struct SubVerdict {
  VarId evidence;
  InferenceType type;
};

struct QueryClass {
  InferenceType type = InferenceType::None;
  // One entry per evidence node that influences the target, in id order.
  std::vector<SubVerdict> sub_verdicts;
};

// Per evidence node v, judged against e without v:
//   d-separated from the target      -> no verdict
//   ancestor of the target           -> Forward
//   descendant of the target         -> Backward
//   otherwise                        -> Intercausal
// An evidence node whose observation is what connects an Intercausal node
// to the target (the observed common effect) is part of that intercausal
// inference and is also labelled Intercausal. Uniform verdicts give their
// type, mixed verdicts give Mixed.
//
// Throws InvalidQuery for empty evidence or a hard-observed target.
QueryClass classify_query(const BayesianNetwork& net, VarId target, const Evidence& e);

enum class Method { Auto, Enumeration, Polytree, Cutset };

std::string_view to_string(Method method);

struct InferenceResult {
  Belief belief;
  Method method = Method::Enumeration;  // the method actually run
  std::optional<QueryClass> query_class;  // absent for empty evidence
};

// Auto runs Polytree on singly connected networks and Cutset otherwise.
InferenceResult infer(const BayesianNetwork& net, VarId target, const Evidence& e,
                      Method method = Method::Auto);

}  // namespace bn

#endif  // BN_QUERY_HPP_
