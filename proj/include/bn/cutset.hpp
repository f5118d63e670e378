#ifndef BN_CUTSET_HPP_
#define BN_CUTSET_HPP_

#include <cstddef>
#include <utility>
#include <vector>

#include "bn/model.hpp"
#include "bn/structure.hpp"

// Exact inference on multiply connected networks by loop cutset
// conditioning: every joint instantiation of the cutset turns the network
// into a polytree; the polytree answers are mixed by P(cutset = c, e).
namespace bn {

// Values for the cutset nodes, in increasing id order.
using CutsetInstantiation = std::vector<std::pair<VarId, std::size_t>>;

// The network with each instantiated node's outgoing edges cut: children
// keep the CPT slice at the instantiated value, the node itself keeps its
// parents. Variable ids are unchanged.
BayesianNetwork condition_network(const BayesianNetwork& net, const CutsetInstantiation& c);

// P(C = c, e), read off the propagation normalizer of the conditioned
// network. Throws NotAPolytree if instantiating c leaves a loop.
double instantiation_weight(const BayesianNetwork& net, const CutsetInstantiation& c,
                            const Evidence& e);

struct ConditioningOptions {
  // Evaluate instantiations concurrently. Aggregation order is fixed, so the
  // result does not depend on this flag.
  bool parallel = false;
};

struct ConditionedResult {
  Belief belief;
  LoopCutset cutset;
  std::size_t instantiations = 0;  // prod of cutset state counts
  std::vector<double> weights;     // P(C = c, e) per instantiation, enumeration order
};

// Throws InvalidQuery if the target is hard-observed, ImpossibleEvidence
// when every instantiation has zero weight.
ConditionedResult condition_on_cutset(const BayesianNetwork& net, VarId target, const Evidence& e,
                                      const ConditioningOptions& options = {});

inline Belief conditioned_posterior(const BayesianNetwork& net, VarId target, const Evidence& e,
                                    const ConditioningOptions& options = {}) {
  return condition_on_cutset(net, target, e, options).belief;
}

}  // namespace bn

#endif  // BN_CUTSET_HPP_
