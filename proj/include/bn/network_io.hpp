#ifndef BN_NETWORK_IO_HPP_
#define BN_NETWORK_IO_HPP_

#include <string>
#include <string_view>

#include "bn/model.hpp"

// Line-oriented network files:
//
//   # comment
//   network <name>
//   variable <name> : <state>, <state>[, ...]
//   cpt <child> [| <parent>[, <parent>...]]
//   <parentstate>[,<parentstate>...] : p1, p2, ...
//
// A root CPT has a single row `: p1, p2, ...`. Rows appear in row-major
// order over the parent assignments, last parent fastest, and must name
// their parent states in that order.
namespace bn {

struct ParseOptions {
  // Rescale rows whose sum is off by at most kNormalizeTolerance.
  bool normalize_rows = false;
};

// Throws Error(Parse) with a line number on malformed text and
// Error(Validation) with line numbers when the network breaks an
// invariant.
BayesianNetwork parse_network(std::string_view text, const ParseOptions& options = {});

BayesianNetwork load_network(const std::string& path, const ParseOptions& options = {});

// Canonical text; parse_network(serialize_network(n)) reproduces n exactly.
std::string serialize_network(const BayesianNetwork& net);

}  // namespace bn

#endif  // BN_NETWORK_IO_HPP_
