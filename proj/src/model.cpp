#include "bn/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include "bn/error.hpp"

namespace bn {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MissingValue: return "MissingValue";
    case ErrorKind::NotAPath: return "NotAPath";
    case ErrorKind::InvalidQuery: return "InvalidQuery";
    case ErrorKind::ImpossibleEvidence: return "ImpossibleEvidence";
    case ErrorKind::NotAPolytree: return "NotAPolytree";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::Validation: return "Validation";
  }
  return "Unknown";
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::TooFewStates: return "too-few-states";
    case ViolationKind::DuplicateState: return "duplicate-state";
    case ViolationKind::DuplicateName: return "duplicate-name";
    case ViolationKind::UndeclaredVariable: return "undeclared-variable";
    case ViolationKind::MissingCpt: return "missing-cpt";
    case ViolationKind::DuplicateCpt: return "duplicate-cpt";
    case ViolationKind::SelfLoop: return "self-loop";
    case ViolationKind::DuplicateParent: return "duplicate-parent";
    case ViolationKind::Cycle: return "cycle";
    case ViolationKind::MissingRow: return "missing-row";
    case ViolationKind::ExtraRow: return "extra-row";
    case ViolationKind::RowLength: return "row-length";
    case ViolationKind::BadProbability: return "bad-probability";
    case ViolationKind::RowSum: return "row-sum";
  }
  return "unknown";
}

BayesianNetwork::BayesianNetwork(std::string name, std::vector<Variable> variables,
                                 std::vector<Cpt> cpts)
    : name_(std::move(name)), variables_(std::move(variables)), cpts_(std::move(cpts)) {
  const std::size_t n = variables_.size();
  cpt_of_.assign(n, kUnset);
  parents_.assign(n, {});
  children_.assign(n, {});
  strides_.assign(n, {});

  for (std::size_t i = 0; i < cpts_.size(); ++i) {
    const VarId child = cpts_[i].child;
    if (child >= n || cpt_of_[child] != kUnset) continue;
    cpt_of_[child] = i;
    std::set<VarId> seen;
    for (VarId p : cpts_[i].parents) {
      if (p >= n || p == child || !seen.insert(p).second) continue;
      parents_[child].push_back(p);
      children_[p].push_back(child);
    }
  }
  for (auto& c : children_) std::sort(c.begin(), c.end());

  for (VarId v = 0; v < n; ++v) {
    const auto& ps = parents_[v];
    strides_[v].assign(ps.size(), 1);
    std::size_t stride = 1;
    for (std::size_t i = ps.size(); i-- > 0;) {
      strides_[v][i] = stride;
      stride *= state_count(ps[i]);
    }
  }

  // Kahn's algorithm, smallest ready id first.
  std::vector<std::size_t> indegree(n);
  for (VarId v = 0; v < n; ++v) indegree[v] = parents_[v].size();
  std::priority_queue<VarId, std::vector<VarId>, std::greater<>> ready;
  for (VarId v = 0; v < n; ++v)
    if (indegree[v] == 0) ready.push(v);
  std::vector<VarId> order;
  while (!ready.empty()) {
    VarId v = ready.top();
    ready.pop();
    order.push_back(v);
    for (VarId c : children_[v])
      if (--indegree[c] == 0) ready.push(c);
  }
  if (order.size() == n) topo_ = std::move(order);
}

const Cpt& BayesianNetwork::cpt(VarId v) const {
  if (v >= size() || cpt_of_[v] == kUnset)
    throw Error(ErrorKind::Validation, "variable has no CPT");
  return cpts_[cpt_of_[v]];
}

std::optional<VarId> BayesianNetwork::find(std::string_view name) const {
  for (VarId v = 0; v < variables_.size(); ++v)
    if (variables_[v].name == name) return v;
  return std::nullopt;
}

std::optional<std::size_t> BayesianNetwork::state_index(VarId v,
                                                        std::string_view state) const {
  const auto& states = variables_.at(v).states;
  for (std::size_t s = 0; s < states.size(); ++s)
    if (states[s] == state) return s;
  return std::nullopt;
}

std::size_t BayesianNetwork::row_count(VarId v) const {
  std::size_t rows = 1;
  for (VarId p : parents_[v]) rows *= state_count(p);
  return rows;
}

std::size_t BayesianNetwork::row_index(VarId v, std::span<const std::size_t> states) const {
  std::size_t row = 0;
  const auto& ps = parents_[v];
  const auto& st = strides_[v];
  for (std::size_t i = 0; i < ps.size(); ++i) row += states[ps[i]] * st[i];
  return row;
}

namespace {

std::string var_label(const BayesianNetwork& net, VarId v) {
  if (v < net.size()) return net.variable(v).name;
  return "#" + std::to_string(v);
}

// One directed cycle of the parent relation, as a node sequence.
std::vector<VarId> find_cycle(const BayesianNetwork& net) {
  const std::size_t n = net.size();
  enum Color : unsigned char { White, Grey, Black };
  std::vector<Color> color(n, White);
  std::vector<VarId> stack;
  std::vector<std::size_t> next_child(n, 0);
  for (VarId root = 0; root < n; ++root) {
    if (color[root] != White) continue;
    stack.push_back(root);
    color[root] = Grey;
    while (!stack.empty()) {
      VarId v = stack.back();
      const auto& ch = net.children(v);
      if (next_child[v] < ch.size()) {
        VarId c = ch[next_child[v]++];
        if (color[c] == Grey) {
          auto it = std::find(stack.begin(), stack.end(), c);
          return {it, stack.end()};
        }
        if (color[c] == White) {
          color[c] = Grey;
          stack.push_back(c);
        }
      } else {
        color[v] = Black;
        stack.pop_back();
      }
    }
  }
  return {};
}

}  // namespace

std::vector<Violation> validate(const BayesianNetwork& net) {
  std::vector<Violation> out;
  const std::size_t n = net.size();
  auto add = [&](ViolationKind kind, std::optional<VarId> var, std::optional<std::size_t> row,
                 std::string msg) {
    out.push_back(Violation{kind, var, row, std::move(msg)});
  };

  std::set<std::string_view> names;
  for (VarId v = 0; v < n; ++v) {
    const Variable& var = net.variable(v);
    if (!names.insert(var.name).second)
      add(ViolationKind::DuplicateName, v, std::nullopt, "duplicate variable name '" + var.name + "'");
    if (var.states.size() < 2)
      add(ViolationKind::TooFewStates, v, std::nullopt,
          "variable '" + var.name + "' has fewer than 2 states");
    std::set<std::string_view> states;
    for (const auto& s : var.states)
      if (!states.insert(s).second)
        add(ViolationKind::DuplicateState, v, std::nullopt,
            "variable '" + var.name + "' repeats state '" + s + "'");
  }

  std::vector<bool> has_cpt(n, false);
  for (const Cpt& cpt : net.cpts()) {
    if (cpt.child >= n) {
      add(ViolationKind::UndeclaredVariable, std::nullopt, std::nullopt,
          "CPT for undeclared variable " + var_label(net, cpt.child));
      continue;
    }
    const std::string child = net.variable(cpt.child).name;
    if (has_cpt[cpt.child]) {
      add(ViolationKind::DuplicateCpt, cpt.child, std::nullopt, "second CPT for '" + child + "'");
      continue;
    }
    has_cpt[cpt.child] = true;

    bool parents_ok = true;
    std::set<VarId> seen;
    for (VarId p : cpt.parents) {
      if (p >= n) {
        add(ViolationKind::UndeclaredVariable, cpt.child, std::nullopt,
            "CPT of '" + child + "' names undeclared parent " + var_label(net, p));
        parents_ok = false;
      } else if (p == cpt.child) {
        add(ViolationKind::SelfLoop, cpt.child, std::nullopt, "'" + child + "' is its own parent");
        parents_ok = false;
      } else if (!seen.insert(p).second) {
        add(ViolationKind::DuplicateParent, cpt.child, std::nullopt,
            "CPT of '" + child + "' repeats parent '" + net.variable(p).name + "'");
        parents_ok = false;
      }
    }
    if (!parents_ok) continue;

    const std::size_t expected_rows = net.row_count(cpt.child);
    const std::size_t width = net.state_count(cpt.child);
    for (std::size_t r = cpt.rows.size(); r < expected_rows; ++r)
      add(ViolationKind::MissingRow, cpt.child, r,
          "CPT of '" + child + "' is missing row " + std::to_string(r));
    for (std::size_t r = 0; r < cpt.rows.size(); ++r) {
      const auto& row = cpt.rows[r];
      const std::string where = "CPT of '" + child + "' row " + std::to_string(r);
      if (r >= expected_rows) {
        add(ViolationKind::ExtraRow, cpt.child, r, where + " is beyond the parent assignments");
        continue;
      }
      if (row.size() != width) {
        add(ViolationKind::RowLength, cpt.child, r,
            where + " has " + std::to_string(row.size()) + " entries, expected " +
                std::to_string(width));
        continue;
      }
      bool finite = true;
      for (double p : row) {
        if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
          finite = false;
          std::ostringstream msg;
          msg << where << " has probability " << p << " outside [0,1]";
          add(ViolationKind::BadProbability, cpt.child, r, msg.str());
          break;
        }
      }
      if (!finite) continue;
      const double sum = std::accumulate(row.begin(), row.end(), 0.0);
      if (std::abs(sum - 1.0) > kRowSumTolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << where << " sums to " << sum;
        add(ViolationKind::RowSum, cpt.child, r, msg.str());
      }
    }
  }

  for (VarId v = 0; v < n; ++v)
    if (!has_cpt[v])
      add(ViolationKind::MissingCpt, v, std::nullopt, "variable '" + net.variable(v).name + "' has no CPT");

  if (!net.acyclic()) {
    auto cycle = find_cycle(net);
    std::string msg = "directed cycle:";
    for (VarId v : cycle) msg += " " + net.variable(v).name + " ->";
    if (!cycle.empty()) msg += " " + net.variable(cycle.front()).name;
    add(ViolationKind::Cycle, cycle.empty() ? std::nullopt : std::optional<VarId>(cycle.front()),
        std::nullopt, msg);
  }
  return out;
}

void require_valid(const BayesianNetwork& net) {
  auto violations = validate(net);
  if (violations.empty()) return;
  std::string msg = "invalid network";
  for (const auto& v : violations) msg += "\n  " + v.message;
  throw Error(ErrorKind::Validation, msg);
}

bool normalize_row(std::vector<double>& row) {
  const double sum = std::accumulate(row.begin(), row.end(), 0.0);
  if (sum == 1.0 || std::abs(sum - 1.0) > kNormalizeTolerance) return false;
  for (double& p : row) p /= sum;
  return true;
}

// Evidence ---------------------------------------------------------------

Evidence& Evidence::observe(VarId v, Observation obs) {
  if (!entries_.emplace(v, std::move(obs)).second)
    throw Error(ErrorKind::InvalidQuery, "variable observed twice");
  return *this;
}

const Observation* Evidence::find(VarId v) const {
  auto it = entries_.find(v);
  return it == entries_.end() ? nullptr : &it->second;
}

bool Evidence::is_hard(VarId v) const {
  const Observation* obs = find(v);
  return obs != nullptr && std::holds_alternative<HardEvidence>(*obs);
}

double Evidence::likelihood(VarId v, std::size_t state) const {
  const Observation* obs = find(v);
  if (obs == nullptr) return 1.0;
  if (const auto* hard = std::get_if<HardEvidence>(obs)) return hard->state == state ? 1.0 : 0.0;
  return std::get<SoftEvidence>(*obs).likelihood[state];
}

void check_evidence(const BayesianNetwork& net, const Evidence& e) {
  for (const auto& [v, obs] : e) {
    if (v >= net.size())
      throw Error(ErrorKind::InvalidQuery, "evidence on undeclared variable #" + std::to_string(v));
    const auto& var = net.variable(v);
    if (const auto* hard = std::get_if<HardEvidence>(&obs)) {
      if (hard->state >= var.state_count())
        throw Error(ErrorKind::InvalidQuery, "evidence state out of range for '" + var.name + "'");
      continue;
    }
    const auto& lik = std::get<SoftEvidence>(obs).likelihood;
    if (lik.size() != var.state_count())
      throw Error(ErrorKind::InvalidQuery,
                  "soft evidence for '" + var.name + "' needs " +
                      std::to_string(var.state_count()) + " values");
    bool positive = false;
    for (double x : lik) {
      if (!std::isfinite(x) || x < 0.0)
        throw Error(ErrorKind::InvalidQuery, "soft evidence for '" + var.name + "' is negative");
      positive = positive || x > 0.0;
    }
    if (!positive)
      throw Error(ErrorKind::InvalidQuery, "soft evidence for '" + var.name + "' is all zero");
  }
}

// Assignment -------------------------------------------------------------

void check_complete(const BayesianNetwork& net, const Assignment& a) {
  if (a.size() != net.size())
    throw Error(ErrorKind::MissingValue, "assignment covers " + std::to_string(a.size()) +
                                             " of " + std::to_string(net.size()) + " variables");
  for (VarId v = 0; v < net.size(); ++v) {
    if (!a.is_set(v))
      throw Error(ErrorKind::MissingValue, "no value for '" + net.variable(v).name + "'");
    if (a[v] >= net.state_count(v))
      throw Error(ErrorKind::MissingValue, "state out of range for '" + net.variable(v).name + "'");
  }
}

double chain_rule_product(const BayesianNetwork& net, std::span<const std::size_t> states) {
  double p = 1.0;
  for (VarId v = 0; v < net.size() && p != 0.0; ++v)
    p *= net.probability(v, states[v], net.row_index(v, states));
  return p;
}

double joint_probability(const BayesianNetwork& net, const Assignment& a) {
  check_complete(net, a);
  return chain_rule_product(net, a.values());
}

double evidence_weight(const BayesianNetwork& net, const Evidence& e, const Assignment& a) {
  check_complete(net, a);
  double w = 1.0;
  for (const auto& [v, obs] : e) w *= e.likelihood(v, a[v]);
  return w;
}

}  // namespace bn
