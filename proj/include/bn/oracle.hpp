#ifndef BN_ORACLE_HPP_
#define BN_ORACLE_HPP_

#include <cstddef>
#include <vector>

#include "bn/model.hpp"

// Exact inference by brute-force enumeration of the joint distribution.
// This is the reference every other inference route is checked against.
namespace bn {

// Enumeration refuses networks with more joint states than this.
inline constexpr std::size_t kMaxJointStates = std::size_t{1} << 22;

struct EnumerationOptions {
  // Number of contiguous blocks the state space is split into. Results are
  // bitwise reproducible for a fixed value; 1 runs the serial kernels.
  std::size_t partitions = 1;
};

// P(target | e). Throws InvalidQuery if the target is hard-observed,
// ImpossibleEvidence if P(e) = 0, TooLarge past kMaxJointStates.
Belief posterior(const BayesianNetwork& net, VarId target, const Evidence& e,
                 const EnumerationOptions& options = {});

// Normalized joint posterior over several variables.
struct JointTable {
  std::vector<VarId> targets;
  std::vector<double> probabilities;  // row-major, last target fastest
};

JointTable marginal_joint(const BayesianNetwork& net, const std::vector<VarId>& targets,
                          const Evidence& e, const EnumerationOptions& options = {});

// Sum over all assignments of joint * evidence weight; P(e) for hard
// evidence.
double evidence_probability(const BayesianNetwork& net, const Evidence& e,
                            const EnumerationOptions& options = {});

struct MostProbable {
  Assignment assignment;
  double probability = 0.0;  // joint * evidence weight
};

// Maximizer of joint * evidence weight; ties go to the first assignment in
// declaration order. Throws ImpossibleEvidence if every weight is zero.
MostProbable most_probable_assignment(const BayesianNetwork& net, const Evidence& e,
                                      const EnumerationOptions& options = {});

}  // namespace bn

#endif  // BN_ORACLE_HPP_
