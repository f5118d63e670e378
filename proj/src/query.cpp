#include "bn/query.hpp"

#include "bn/cutset.hpp"
#include "bn/error.hpp"
#include "bn/oracle.hpp"
#include "bn/propagation.hpp"
#include "bn/structure.hpp"

namespace bn {

std::string_view to_string(InferenceType type) {
  switch (type) {
    case InferenceType::Forward: return "Forward";
    case InferenceType::Backward: return "Backward";
    case InferenceType::Intercausal: return "Intercausal";
    case InferenceType::Mixed: return "Mixed";
    case InferenceType::None: return "None";
  }
  return "Unknown";
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::Auto: return "auto";
    case Method::Enumeration: return "enum";
    case Method::Polytree: return "bp";
    case Method::Cutset: return "cutset";
  }
  return "unknown";
}

namespace {

Evidence without(const Evidence& e, VarId v) {
  Evidence rest = e;
  rest.erase(v);
  return rest;
}

}  // namespace

QueryClass classify_query(const BayesianNetwork& net, VarId target, const Evidence& e) {
  if (e.empty()) throw Error(ErrorKind::InvalidQuery, "query classification needs evidence");
  if (target >= net.size()) throw Error(ErrorKind::InvalidQuery, "query on undeclared variable");
  if (e.is_hard(target))
    throw Error(ErrorKind::InvalidQuery,
                "target '" + net.variable(target).name + "' carries hard evidence");
  check_evidence(net, e);

  const auto ancestors = ancestors_of(net, target);
  const auto descendants = descendants_of(net, target);

  QueryClass out;
  for (const auto& [v, obs] : e) {
    if (v == target) continue;
    if (d_separated(net, target, v, without(e, v)).separated) continue;
    InferenceType type = InferenceType::Intercausal;
    if (ancestors[v])
      type = InferenceType::Forward;
    else if (descendants[v])
      type = InferenceType::Backward;
    out.sub_verdicts.push_back({v, type});
  }

  // Fold observed common effects into the intercausal inference they open.
  std::vector<bool> enabler(net.size(), false);
  for (const auto& w : out.sub_verdicts) {
    if (w.type != InferenceType::Intercausal) continue;
    const Evidence rest = without(e, w.evidence);
    for (const auto& v : out.sub_verdicts) {
      if (v.evidence == w.evidence || v.type == InferenceType::Intercausal) continue;
      if (d_separated(net, target, w.evidence, without(rest, v.evidence)).separated)
        enabler[v.evidence] = true;
    }
  }
  for (auto& v : out.sub_verdicts)
    if (enabler[v.evidence]) v.type = InferenceType::Intercausal;

  if (out.sub_verdicts.empty()) return out;
  out.type = out.sub_verdicts.front().type;
  for (const auto& v : out.sub_verdicts)
    if (v.type != out.type) out.type = InferenceType::Mixed;
  return out;
}

InferenceResult infer(const BayesianNetwork& net, VarId target, const Evidence& e, Method method) {
  if (target >= net.size()) throw Error(ErrorKind::InvalidQuery, "query on undeclared variable");
  if (e.is_hard(target))
    throw Error(ErrorKind::InvalidQuery,
                "target '" + net.variable(target).name + "' carries hard evidence");
  check_evidence(net, e);

  if (method == Method::Auto)
    method = is_polytree(net).polytree ? Method::Polytree : Method::Cutset;

  InferenceResult out;
  out.method = method;
  switch (method) {
    case Method::Enumeration:
      out.belief = posterior(net, target, e);
      break;
    case Method::Polytree:
      out.belief = propagate(net, e).beliefs[target];
      break;
    case Method::Cutset:
      out.belief = conditioned_posterior(net, target, e);
      break;
    case Method::Auto:
      break;
  }
  if (!e.empty()) out.query_class = classify_query(net, target, e);
  return out;
}

}  // namespace bn
