#include "bn/oracle.hpp"

#include <set>

#include "bn/enumeration_kernels.hpp"
#include "bn/error.hpp"
#include "bn/kahan.hpp"

namespace bn {

namespace {

void guard_size(const BayesianNetwork& net) {
  if (kernels::joint_state_count(net) > kMaxJointStates)
    throw Error(ErrorKind::TooLarge, "network has more than 2^22 joint states");
}

void check_target(const BayesianNetwork& net, VarId target, const Evidence& e) {
  if (target >= net.size()) throw Error(ErrorKind::InvalidQuery, "query on undeclared variable");
  if (e.is_hard(target))
    throw Error(ErrorKind::InvalidQuery,
                "target '" + net.variable(target).name + "' carries hard evidence");
}

std::vector<double> table(const BayesianNetwork& net, const Evidence& e,
                          const std::vector<VarId>& targets, const EnumerationOptions& options) {
  check_evidence(net, e);
  guard_size(net);
  if (options.partitions <= 1) return kernels::weighted_table_serial(net, e, targets);
  return kernels::weighted_table_parallel(net, e, targets, options.partitions);
}

std::vector<double> normalized(std::vector<double> cells) {
  KahanSum total;
  for (double c : cells) total.add(c);
  const double z = total.value();
  if (!(z > 0.0)) throw Error(ErrorKind::ImpossibleEvidence, "evidence has probability zero");
  for (double& c : cells) c /= z;
  return cells;
}

}  // namespace

Belief posterior(const BayesianNetwork& net, VarId target, const Evidence& e,
                 const EnumerationOptions& options) {
  check_target(net, target, e);
  return Belief{target, normalized(table(net, e, {target}, options))};
}

JointTable marginal_joint(const BayesianNetwork& net, const std::vector<VarId>& targets,
                          const Evidence& e, const EnumerationOptions& options) {
  if (targets.empty()) throw Error(ErrorKind::InvalidQuery, "no target variables");
  std::set<VarId> distinct;
  for (VarId t : targets) {
    check_target(net, t, e);
    if (!distinct.insert(t).second) throw Error(ErrorKind::InvalidQuery, "repeated target variable");
  }
  return JointTable{targets, normalized(table(net, e, targets, options))};
}

double evidence_probability(const BayesianNetwork& net, const Evidence& e,
                            const EnumerationOptions& options) {
  return table(net, e, {}, options).front();
}

MostProbable most_probable_assignment(const BayesianNetwork& net, const Evidence& e,
                                      const EnumerationOptions& options) {
  check_evidence(net, e);
  guard_size(net);
  const auto best = options.partitions <= 1
                        ? kernels::argmax_serial(net, e)
                        : kernels::argmax_parallel(net, e, options.partitions);
  if (!(best.weight > 0.0))
    throw Error(ErrorKind::ImpossibleEvidence, "every assignment has zero weight");
  return MostProbable{Assignment(kernels::decode_state(net, best.index)), best.weight};
}

}  // namespace bn
