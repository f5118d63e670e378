#include "bn/cutset.hpp"

#include <algorithm>
#include <exception>

#include "bn/error.hpp"
#include "bn/kahan.hpp"
#include "bn/propagation.hpp"

namespace bn {

BayesianNetwork condition_network(const BayesianNetwork& net, const CutsetInstantiation& c) {
  std::vector<std::size_t> fixed(net.size(), kUnset);
  for (const auto& [v, state] : c) {
    if (v >= net.size() || state >= net.state_count(v))
      throw Error(ErrorKind::InvalidQuery, "cutset instantiation out of range");
    fixed[v] = state;
  }

  std::vector<Cpt> cpts;
  cpts.reserve(net.size());
  for (VarId v = 0; v < net.size(); ++v) {
    const Cpt& cpt = net.cpt(v);
    Cpt sliced{v, {}, {}};
    for (VarId p : cpt.parents)
      if (fixed[p] == kUnset) sliced.parents.push_back(p);
    if (sliced.parents.size() == cpt.parents.size()) {
      cpts.push_back(cpt);
      continue;
    }
    // Keep the rows whose instantiated parents match; filtering a row-major
    // enumeration preserves row-major order over the remaining parents.
    std::vector<std::size_t> states(cpt.parents.size(), 0);
    for (const auto& row : cpt.rows) {
      bool match = true;
      for (std::size_t i = 0; i < states.size() && match; ++i)
        match = fixed[cpt.parents[i]] == kUnset || fixed[cpt.parents[i]] == states[i];
      if (match) sliced.rows.push_back(row);
      for (std::size_t i = states.size(); i-- > 0;) {
        if (++states[i] < net.state_count(cpt.parents[i])) break;
        states[i] = 0;
      }
    }
    cpts.push_back(std::move(sliced));
  }
  return BayesianNetwork(net.name(), net.variables(), std::move(cpts));
}

namespace {

struct Instantiated {
  double weight = 0.0;
  Belief belief;  // empty probabilities when weight is zero
};

// Evidence with the instantiated nodes hard-observed, plus the likelihood
// the original evidence assigns to the instantiation.
std::pair<Evidence, double> merge_evidence(const Evidence& e, const CutsetInstantiation& c) {
  Evidence merged = e;
  double factor = 1.0;
  for (const auto& [v, state] : c) {
    factor *= e.likelihood(v, state);
    merged.set(v, HardEvidence{state});
  }
  return {std::move(merged), factor};
}

Instantiated evaluate(const BayesianNetwork& net, const CutsetInstantiation& c, const Evidence& e,
                      VarId target) {
  auto [merged, factor] = merge_evidence(e, c);
  if (factor == 0.0) return {};
  const auto reduced = condition_network(net, c);
  auto result = propagate_weighted(reduced, merged);
  Instantiated out;
  out.weight = result.evidence_mass * factor;
  if (out.weight > 0.0 && target != kUnset) out.belief = std::move(result.beliefs[target]);
  return out;
}

}  // namespace

double instantiation_weight(const BayesianNetwork& net, const CutsetInstantiation& c,
                            const Evidence& e) {
  check_evidence(net, e);
  return evaluate(net, c, e, kUnset).weight;
}

ConditionedResult condition_on_cutset(const BayesianNetwork& net, VarId target, const Evidence& e,
                                      const ConditioningOptions& options) {
  if (target >= net.size()) throw Error(ErrorKind::InvalidQuery, "query on undeclared variable");
  if (e.is_hard(target))
    throw Error(ErrorKind::InvalidQuery,
                "target '" + net.variable(target).name + "' carries hard evidence");
  check_evidence(net, e);

  ConditionedResult out;
  out.cutset = select_cutset(net);
  const auto& nodes = out.cutset.nodes;
  std::size_t count = 1;
  for (VarId v : nodes) count *= net.state_count(v);
  out.instantiations = count;

  std::vector<CutsetInstantiation> plans(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t rest = i;
    plans[i].resize(nodes.size());
    for (std::size_t k = nodes.size(); k-- > 0;) {
      const std::size_t d = net.state_count(nodes[k]);
      plans[i][k] = {nodes[k], rest % d};
      rest /= d;
    }
  }

  const bool target_in_cutset = std::binary_search(nodes.begin(), nodes.end(), target);
  const VarId propagated_target = target_in_cutset ? kUnset : target;
  std::vector<Instantiated> parts(count);
  std::vector<std::exception_ptr> failures(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic) if (options.parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      parts[k] = evaluate(net, plans[k], e, propagated_target);
    } catch (...) {
      failures[k] = std::current_exception();
    }
  }
  for (const auto& failure : failures)
    if (failure) std::rethrow_exception(failure);

  const std::size_t states = net.state_count(target);
  KahanSum total;
  std::vector<KahanSum> mixed(states);
  out.weights.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double w = parts[i].weight;
    out.weights.push_back(w);
    if (w == 0.0) continue;
    total.add(w);
    if (target_in_cutset) {
      const auto it = std::find_if(plans[i].begin(), plans[i].end(),
                                   [&](const auto& entry) { return entry.first == target; });
      mixed[it->second].add(w);
    } else {
      for (std::size_t x = 0; x < states; ++x) mixed[x].add(w * parts[i].belief.probabilities[x]);
    }
  }
  if (!(total.value() > 0.0))
    throw Error(ErrorKind::ImpossibleEvidence, "evidence has probability zero");

  out.belief.variable = target;
  out.belief.probabilities.resize(states);
  for (std::size_t x = 0; x < states; ++x)
    out.belief.probabilities[x] = mixed[x].value() / total.value();
  return out;
}

}  // namespace bn
