#include "bn/propagation.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

#include "bn/error.hpp"
#include "bn/structure.hpp"

namespace bn {

std::vector<double> node_lambda_from_evidence(const BayesianNetwork& net, VarId v,
                                              const Evidence& e) {
  std::vector<double> lambda(net.state_count(v), 1.0);
  const Observation* obs = e.find(v);
  if (obs == nullptr) return lambda;
  if (const auto* hard = std::get_if<HardEvidence>(obs)) {
    std::fill(lambda.begin(), lambda.end(), 0.0);
    lambda[hard->state] = 1.0;
    return lambda;
  }
  return std::get<SoftEvidence>(*obs).likelihood;
}

namespace {

// Calls f(row, parent_states) for every CPT row in storage order.
template <typename F>
void for_each_row(const Cpt& cpt, std::span<const std::vector<double>> parent_messages, F&& f) {
  std::vector<std::size_t> states(parent_messages.size(), 0);
  for (std::size_t r = 0; r < cpt.rows.size(); ++r) {
    f(r, std::span<const std::size_t>(states));
    for (std::size_t i = states.size(); i-- > 0;) {
      if (++states[i] < parent_messages[i].size()) break;
      states[i] = 0;
    }
  }
}

}  // namespace

std::vector<double> node_pi(const Cpt& cpt, std::span<const std::vector<double>> parent_messages) {
  std::vector<double> pi(cpt.rows.front().size(), 0.0);
  for_each_row(cpt, parent_messages, [&](std::size_t r, std::span<const std::size_t> u) {
    double weight = 1.0;
    for (std::size_t i = 0; i < u.size(); ++i) weight *= parent_messages[i][u[i]];
    if (weight == 0.0) return;
    const auto& row = cpt.rows[r];
    for (std::size_t x = 0; x < pi.size(); ++x) pi[x] += row[x] * weight;
  });
  return pi;
}

std::vector<double> lambda_message(const Cpt& cpt, std::span<const double> lambda,
                                   std::span<const std::vector<double>> parent_messages,
                                   std::size_t parent) {
  std::vector<double> msg(parent_messages[parent].size(), 0.0);
  for_each_row(cpt, parent_messages, [&](std::size_t r, std::span<const std::size_t> u) {
    double weight = 1.0;
    for (std::size_t k = 0; k < u.size(); ++k)
      if (k != parent) weight *= parent_messages[k][u[k]];
    if (weight == 0.0) return;
    const auto& row = cpt.rows[r];
    double expected = 0.0;
    for (std::size_t x = 0; x < row.size(); ++x) expected += lambda[x] * row[x];
    msg[u[parent]] += expected * weight;
  });
  return msg;
}

namespace {

class Propagator {
 public:
  Propagator(const BayesianNetwork& net, const Evidence& e, const PropagationOptions& options)
      : net_(net), options_(options), evidence_lambda_(net.size()) {
    for (VarId v = 0; v < net.size(); ++v) evidence_lambda_[v] = node_lambda_from_evidence(net, v, e);
  }

  PropagationResult run() {
    const std::size_t n = net_.size();
    std::vector<bool> seen(n, false);
    double mass = 1.0;
    for (VarId root = 0; root < n; ++root) {
      if (seen[root]) continue;
      auto component = component_of(root);
      for (VarId v : component) seen[v] = true;
      VarId pivot = root;
      if (options_.pivot && std::find(component.begin(), component.end(), *options_.pivot) !=
                                component.end())
        pivot = *options_.pivot;
      mass *= schedule(pivot);
    }

    auto& store = result_.messages;
    store.pi_node.resize(n);
    store.lambda_node.resize(n);
    for (VarId v = 0; v < n; ++v) {
      store.pi_node[v] = pi_node(v);
      store.lambda_node[v] = lambda_node(v);
    }
    result_.evidence_mass = mass;
    if (mass > 0.0) {
      result_.beliefs.resize(n);
      for (VarId v = 0; v < n; ++v) {
        std::vector<double> b(net_.state_count(v));
        for (std::size_t x = 0; x < b.size(); ++x) b[x] = store.pi_node[v][x] * store.lambda_node[v][x];
        const double alpha = std::accumulate(b.begin(), b.end(), 0.0);
        for (double& p : b) p /= alpha;
        result_.beliefs[v] = Belief{v, std::move(b)};
      }
    }
    return std::move(result_);
  }

 private:
  std::vector<VarId> neighbours(VarId v) const {
    std::vector<VarId> adj = net_.parents(v);
    adj.insert(adj.end(), net_.children(v).begin(), net_.children(v).end());
    std::sort(adj.begin(), adj.end());
    return adj;
  }

  std::vector<VarId> component_of(VarId root) const {
    std::vector<VarId> out{root};
    std::vector<bool> in(net_.size(), false);
    in[root] = true;
    for (std::size_t i = 0; i < out.size(); ++i)
      for (VarId w : neighbours(out[i]))
        if (!in[w]) {
          in[w] = true;
          out.push_back(w);
        }
    return out;
  }

  // Runs both phases over the tree rooted at `pivot`; returns the
  // component's evidence mass.
  double schedule(VarId pivot) {
    std::vector<VarId> preorder;
    std::vector<VarId> toward(net_.size(), kUnset);
    std::vector<VarId> stack{pivot};
    toward[pivot] = pivot;
    while (!stack.empty()) {
      VarId v = stack.back();
      stack.pop_back();
      preorder.push_back(v);
      auto adj = neighbours(v);
      for (auto it = adj.rbegin(); it != adj.rend(); ++it)
        if (toward[*it] == kUnset) {
          toward[*it] = v;
          stack.push_back(*it);
        }
    }

    // Normalizers of pi messages flowing toward the pivot; the pivot's
    // mass is computed from normalized messages and rescaled by these.
    double scale = 1.0;
    for (auto it = preorder.rbegin(); it != preorder.rend(); ++it) {
      if (*it == pivot) continue;
      scale *= send(*it, toward[*it], Phase::Collect);
    }
    for (VarId v : preorder)
      for (VarId w : neighbours(v))
        if (w != v && toward[w] == v) send(v, w, Phase::Distribute);

    const auto pi = pi_node(pivot);
    const auto lambda = lambda_node(pivot);
    double mass = 0.0;
    for (std::size_t x = 0; x < pi.size(); ++x) mass += pi[x] * lambda[x];
    return mass * scale;
  }

  bool is_parent(VarId p, VarId c) const {
    const auto& ps = net_.parents(c);
    return std::find(ps.begin(), ps.end(), p) != ps.end();
  }

  std::vector<std::vector<double>> incoming_pi(VarId v) const {
    std::vector<std::vector<double>> msgs;
    for (VarId p : net_.parents(v)) msgs.push_back(result_.messages.pi_msg.at({p, v}));
    return msgs;
  }

  std::vector<double> pi_node(VarId v) const {
    auto msgs = incoming_pi(v);
    return bn::node_pi(net_.cpt(v), msgs);
  }

  // Evidence lambda times every child's lambda message except `skip`'s.
  std::vector<double> lambda_node(VarId v, VarId skip = kUnset) const {
    std::vector<double> lambda = evidence_lambda_[v];
    for (VarId c : net_.children(v)) {
      if (c == skip) continue;
      const auto& msg = result_.messages.lambda_msg.at({c, v});
      for (std::size_t x = 0; x < lambda.size(); ++x) lambda[x] *= msg[x];
    }
    return lambda;
  }

  // Sends v's message to neighbour u; returns the normalizer applied (1 for
  // lambda messages).
  double send(VarId v, VarId u, Phase phase) {
    double normalizer = 1.0;
    std::vector<double> values;
    MessageKind kind;
    if (is_parent(v, u)) {
      kind = MessageKind::Pi;
      values = pi_node(v);
      const auto lambda = lambda_node(v, u);
      for (std::size_t x = 0; x < values.size(); ++x) values[x] *= lambda[x];
      normalizer = std::accumulate(values.begin(), values.end(), 0.0);
      if (normalizer > 0.0)
        for (double& p : values) p /= normalizer;
      result_.messages.pi_msg[{v, u}] = values;
    } else {
      kind = MessageKind::Lambda;
      const auto& ps = net_.parents(v);
      const auto index = static_cast<std::size_t>(std::find(ps.begin(), ps.end(), u) - ps.begin());
      const auto lambda = lambda_node(v);
      values = lambda_message(net_.cpt(v), lambda, incoming_pi_except(v, u), index);
      result_.messages.lambda_msg[{v, u}] = values;
    }
    if (options_.trace) result_.trace.push_back(TraceRecord{v, u, kind, phase, values});
    return normalizer;
  }

  // Pi messages from v's parents, with a placeholder for `excluded`, whose
  // message is not read by lambda_message.
  std::vector<std::vector<double>> incoming_pi_except(VarId v, VarId excluded) const {
    std::vector<std::vector<double>> msgs;
    for (VarId p : net_.parents(v)) {
      if (p == excluded)
        msgs.emplace_back(net_.state_count(p), 1.0);
      else
        msgs.push_back(result_.messages.pi_msg.at({p, v}));
    }
    return msgs;
  }

  const BayesianNetwork& net_;
  const PropagationOptions& options_;
  std::vector<std::vector<double>> evidence_lambda_;
  PropagationResult result_;
};

}  // namespace

PropagationResult propagate_weighted(const BayesianNetwork& net, const Evidence& e,
                                     const PropagationOptions& options) {
  check_evidence(net, e);
  if (options.pivot && *options.pivot >= net.size())
    throw Error(ErrorKind::InvalidQuery, "pivot is not a declared variable");
  if (!is_polytree(net).polytree)
    throw Error(ErrorKind::NotAPolytree, "network '" + net.name() + "' is not singly connected");
  return Propagator(net, e, options).run();
}

PropagationResult propagate(const BayesianNetwork& net, const Evidence& e,
                            const PropagationOptions& options) {
  auto result = propagate_weighted(net, e, options);
  if (!(result.evidence_mass > 0.0))
    throw Error(ErrorKind::ImpossibleEvidence, "evidence has probability zero");
  return result;
}

std::string format_trace(const BayesianNetwork& net, std::span<const TraceRecord> trace) {
  std::string out;
  char buf[32];
  for (const auto& rec : trace) {
    out += "MSG ";
    out += net.variable(rec.from).name;
    out += ' ';
    out += net.variable(rec.to).name;
    out += rec.kind == MessageKind::Pi ? " pi " : " lambda ";
    for (std::size_t i = 0; i < rec.values.size(); ++i) {
      if (i > 0) out += ',';
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, rec.values[i]);
      out.append(buf, end);
    }
    out += '\n';
  }
  return out;
}

}  // namespace bn
