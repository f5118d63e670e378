#ifndef BN_STRUCTURE_HPP_
#define BN_STRUCTURE_HPP_

#include <cstddef>
#include <string_view>
#include <vector>

#include "bn/model.hpp"

namespace bn {

enum class ConnectionKind { Serial, Diverging, Converging };

std::string_view to_string(ConnectionKind kind);

// Kind of the connection at v on the skeleton path a - v - b. Throws
// Error(NotAPath) if a, v, b are not distinct or a - v, v - b are not edges.
ConnectionKind classify_connection(const BayesianNetwork& net, VarId a, VarId v, VarId b);

// A path blocked by `blocker`, one of its intermediate nodes.
struct BlockedPath {
  std::vector<VarId> path;
  VarId blocker;
  ConnectionKind kind;  // connection at the blocker
};

struct SeparationVerdict {
  bool separated = false;
  // One entry per skeleton path between the endpoints when separated.
  std::vector<BlockedPath> blocking_witnesses;
  // A path transmitting evidence when connected.
  std::vector<VarId> active_path;
};

// Whether node v blocks the flow along a path where it sits in connection
// `kind`. Serial and diverging nodes block when hard-observed; converging
// nodes block when neither they nor any descendant carry evidence of any
// kind.
bool blocks(const BayesianNetwork& net, const Evidence& e, VarId v, ConnectionKind kind);

// d-separation of x and z given e. Throws Error(InvalidQuery) if x == z or
// either endpoint carries hard evidence.
//
// Networks up to kPathEnumerationLimit nodes are decided by enumerating
// every simple skeleton path, which yields per-path witnesses. Larger
// networks use a reachability search over (node, direction) pairs; its
// separated verdicts carry no witnesses.
SeparationVerdict d_separated(const BayesianNetwork& net, VarId x, VarId z, const Evidence& e);

inline constexpr std::size_t kPathEnumerationLimit = 25;

// Reachability-based d-separation, exposed for cross-checking the path
// enumerator.
SeparationVerdict d_separated_reachability(const BayesianNetwork& net, VarId x, VarId z,
                                           const Evidence& e);

// Directed reachability helpers.
std::vector<bool> ancestors_of(const BayesianNetwork& net, VarId v);    // excludes v
std::vector<bool> descendants_of(const BayesianNetwork& net, VarId v);  // excludes v

struct PolytreeCheck {
  bool polytree = true;
  std::vector<VarId> cycle;  // an undirected cycle when !polytree
};

PolytreeCheck is_polytree(const BayesianNetwork& net);

// The skeleton left after instantiating `cutset`: every edge leaving a
// cutset node is dropped (its children see the instantiated value as a
// constant), edges into cutset nodes remain. Returns whether that skeleton
// is acyclic.
bool conditioned_skeleton_is_forest(const BayesianNetwork& net, const std::vector<bool>& cutset);

struct LoopCutset {
  std::vector<VarId> nodes;  // increasing id order
};

// Exhaustive search by increasing size up to this many variables; greedy
// above it.
inline constexpr std::size_t kExhaustiveCutsetLimit = 20;

// Minimum-cardinality loop cutset, ties broken toward the lexicographically
// smallest id set. Empty for polytrees.
LoopCutset select_cutset(const BayesianNetwork& net);

// Greedy cutset used above kExhaustiveCutsetLimit.
LoopCutset greedy_cutset(const BayesianNetwork& net);

}  // namespace bn

#endif  // BN_STRUCTURE_HPP_
