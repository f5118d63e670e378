#ifndef BN_ENUMERATION_KERNELS_HPP_
#define BN_ENUMERATION_KERNELS_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "bn/model.hpp"

// Inner loops of the enumeration oracle. Every kernel walks the joint
// state space in row-major declaration order (the last declared variable
// varies fastest). The serial versions are the reference; the parallel
// versions split the index range into `partitions` contiguous blocks, reduce
// each block independently and merge blocks in order, so their output
// depends on the partition count only, never on the thread count. With one
// partition they are bitwise identical to the serial kernels.
namespace bn::kernels {

// Unnormalized sums of joint * evidence weight, bucketed by the states of
// `targets` (row-major, last target fastest).
std::vector<double> weighted_table_serial(const BayesianNetwork& net, const Evidence& e,
                                          std::span<const VarId> targets);
std::vector<double> weighted_table_parallel(const BayesianNetwork& net, const Evidence& e,
                                            std::span<const VarId> targets,
                                            std::size_t partitions);

struct BestState {
  std::size_t index = 0;  // linear joint-state index
  double weight = 0.0;
};

// First joint state (in enumeration order) of maximal joint * weight.
BestState argmax_serial(const BayesianNetwork& net, const Evidence& e);
BestState argmax_parallel(const BayesianNetwork& net, const Evidence& e, std::size_t partitions);

// Total joint-state count; saturates at SIZE_MAX.
std::size_t joint_state_count(const BayesianNetwork& net);

// Joint state for a linear index.
std::vector<std::size_t> decode_state(const BayesianNetwork& net, std::size_t index);

}  // namespace bn::kernels

#endif  // BN_ENUMERATION_KERNELS_HPP_
