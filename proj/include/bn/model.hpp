#ifndef BN_MODEL_HPP_
#define BN_MODEL_HPP_

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace bn {

// Variables are addressed by their dense declaration index.
using VarId = std::size_t;

inline constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();

// Rows of a CPT must sum to one within this tolerance.
inline constexpr double kRowSumTolerance = 1e-9;
// Rows off by at most this much may be rescaled on load.
inline constexpr double kNormalizeTolerance = 1e-6;

struct Variable {
  std::string name;
  std::vector<std::string> states;

  std::size_t state_count() const { return states.size(); }
};

// P(child | parents). One row per joint parent assignment, enumerated in
// row-major order with the last parent varying fastest; each row holds one
// probability per child state. A root has exactly one row.
struct Cpt {
  VarId child = 0;
  std::vector<VarId> parents;
  std::vector<std::vector<double>> rows;
};

enum class ViolationKind {
  TooFewStates,
  DuplicateState,
  DuplicateName,
  UndeclaredVariable,
  MissingCpt,
  DuplicateCpt,
  SelfLoop,
  DuplicateParent,
  Cycle,
  MissingRow,
  ExtraRow,
  RowLength,
  BadProbability,
  RowSum,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::optional<VarId> variable;   // offending variable / CPT child
  std::optional<std::size_t> row;  // offending CPT row
  std::string message;
};

// A discrete Bayesian network. Construction never throws on malformed
// content; call validate() to list invariant violations. Inference entry
// points assume a network for which validate() is empty.
class BayesianNetwork {
 public:
  BayesianNetwork() = default;
  BayesianNetwork(std::string name, std::vector<Variable> variables,
                  std::vector<Cpt> cpts);

  const std::string& name() const { return name_; }
  std::size_t size() const { return variables_.size(); }

  const std::vector<Variable>& variables() const { return variables_; }
  const Variable& variable(VarId v) const { return variables_.at(v); }
  std::size_t state_count(VarId v) const { return variables_[v].states.size(); }

  const std::vector<Cpt>& cpts() const { return cpts_; }
  bool has_cpt(VarId v) const { return cpt_of_[v] != kUnset; }
  const Cpt& cpt(VarId v) const;

  // Parents in CPT order; children in increasing id order.
  const std::vector<VarId>& parents(VarId v) const { return parents_[v]; }
  const std::vector<VarId>& children(VarId v) const { return children_[v]; }

  std::optional<VarId> find(std::string_view name) const;
  std::optional<std::size_t> state_index(VarId v, std::string_view state) const;

  // Ids in a parents-before-children order; empty when the graph is cyclic
  // (and the network is nonempty).
  const std::vector<VarId>& topological_order() const { return topo_; }
  bool acyclic() const { return size() == 0 || !topo_.empty(); }

  // Number of CPT rows v should have: product of its parents' state counts.
  std::size_t row_count(VarId v) const;

  // Row of v's CPT selected by the parent states found in a full joint
  // state vector indexed by VarId.
  std::size_t row_index(VarId v, std::span<const std::size_t> states) const;

  double probability(VarId v, std::size_t state, std::size_t row) const {
    return cpts_[cpt_of_[v]].rows[row][state];
  }

 private:
  std::string name_;
  std::vector<Variable> variables_;
  std::vector<Cpt> cpts_;
  std::vector<std::size_t> cpt_of_;
  std::vector<std::vector<VarId>> parents_;
  std::vector<std::vector<VarId>> children_;
  std::vector<std::vector<std::size_t>> strides_;
  std::vector<VarId> topo_;
};

std::vector<Violation> validate(const BayesianNetwork& net);

// Throws Error(Validation) listing every violation.
void require_valid(const BayesianNetwork& net);

// Rescales a row whose sum is within kNormalizeTolerance of one. Returns
// whether the row was changed.
bool normalize_row(std::vector<double>& row);

// Evidence ---------------------------------------------------------------

struct HardEvidence {
  std::size_t state;
};

// Likelihood (virtual) evidence: multiplies the joint by likelihood[state].
struct SoftEvidence {
  std::vector<double> likelihood;
};

using Observation = std::variant<HardEvidence, SoftEvidence>;

class Evidence {
 public:
  using Map = std::map<VarId, Observation>;

  Evidence() = default;

  // Throws Error(InvalidQuery) if v already has an entry.
  Evidence& observe(VarId v, Observation obs);
  Evidence& hard(VarId v, std::size_t state) { return observe(v, HardEvidence{state}); }
  Evidence& soft(VarId v, std::vector<double> likelihood) {
    return observe(v, SoftEvidence{std::move(likelihood)});
  }

  // Replaces any existing entry.
  void set(VarId v, Observation obs) { entries_[v] = std::move(obs); }
  void erase(VarId v) { entries_.erase(v); }

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  bool contains(VarId v) const { return entries_.count(v) != 0; }
  const Observation* find(VarId v) const;
  bool is_hard(VarId v) const;

  // Likelihood of v being in `state`: indicator for hard, the vector entry
  // for soft, 1 when v is unobserved.
  double likelihood(VarId v, std::size_t state) const;

  Map::const_iterator begin() const { return entries_.begin(); }
  Map::const_iterator end() const { return entries_.end(); }

 private:
  Map entries_;
};

// Throws Error(InvalidQuery) if an entry refers to an unknown variable, an
// out-of-range state, or a malformed soft vector.
void check_evidence(const BayesianNetwork& net, const Evidence& e);

// Assignment -------------------------------------------------------------

class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::size_t n) : values_(n, kUnset) {}
  explicit Assignment(std::vector<std::size_t> values) : values_(std::move(values)) {}

  std::size_t size() const { return values_.size(); }
  std::size_t operator[](VarId v) const { return values_[v]; }
  void set(VarId v, std::size_t state) { values_.at(v) = state; }
  bool is_set(VarId v) const { return values_[v] != kUnset; }
  std::span<const std::size_t> values() const { return values_; }

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<std::size_t> values_;
};

// Throws Error(MissingValue) unless `a` assigns an in-range state to every
// variable of `net`.
void check_complete(const BayesianNetwork& net, const Assignment& a);

// Chain-rule product of CPT entries selected by `a`.
double joint_probability(const BayesianNetwork& net, const Assignment& a);

// Same product without completeness checks; `states` is indexed by VarId.
double chain_rule_product(const BayesianNetwork& net,
                          std::span<const std::size_t> states);

// Product of the evidence likelihoods at a's states.
double evidence_weight(const BayesianNetwork& net, const Evidence& e,
                       const Assignment& a);

// Belief -----------------------------------------------------------------

struct Belief {
  VarId variable = 0;
  std::vector<double> probabilities;
};

}  // namespace bn

#endif  // BN_MODEL_HPP_
