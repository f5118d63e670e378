#include "bn/enumeration_kernels.hpp"

#include <limits>

#include "bn/kahan.hpp"

namespace bn::kernels {

namespace {

// Per-query tables shared by every block of the walk.
class StateWalk {
 public:
  StateWalk(const BayesianNetwork& net, const Evidence& e, std::span<const VarId> targets)
      : net_(net), likelihood_(net.size()), target_stride_(net.size(), 0) {
    for (const auto& [v, obs] : e) {
      likelihood_[v].resize(net.state_count(v));
      for (std::size_t s = 0; s < likelihood_[v].size(); ++s) likelihood_[v][s] = e.likelihood(v, s);
    }
    std::size_t stride = 1;
    for (std::size_t i = targets.size(); i-- > 0;) {
      target_stride_[targets[i]] = stride;
      stride *= net.state_count(targets[i]);
    }
    cells_ = stride;
  }

  std::size_t cells() const { return cells_; }

  // joint * evidence weight at `states`.
  double weight(std::span<const std::size_t> states) const {
    double w = 1.0;
    for (VarId v = 0; v < states.size() && w != 0.0; ++v)
      if (!likelihood_[v].empty()) w *= likelihood_[v][states[v]];
    if (w == 0.0) return 0.0;
    return w * chain_rule_product(net_, states);
  }

  std::size_t cell(std::span<const std::size_t> states) const {
    std::size_t c = 0;
    for (VarId v = 0; v < states.size(); ++v) c += states[v] * target_stride_[v];
    return c;
  }

  // Advances `states` to the next joint state.
  void next(std::vector<std::size_t>& states) const {
    for (std::size_t v = states.size(); v-- > 0;) {
      if (++states[v] < net_.state_count(v)) return;
      states[v] = 0;
    }
  }

  void accumulate(std::size_t begin, std::size_t end, std::vector<KahanSum>& sums) const {
    if (begin >= end) return;
    auto states = decode_state(net_, begin);
    for (std::size_t i = begin; i < end; ++i) {
      const double w = weight(states);
      if (w != 0.0) sums[cell(states)].add(w);
      next(states);
    }
  }

  BestState best(std::size_t begin, std::size_t end) const {
    BestState out{begin, -1.0};
    if (begin >= end) return out;
    auto states = decode_state(net_, begin);
    for (std::size_t i = begin; i < end; ++i) {
      const double w = weight(states);
      if (w > out.weight) out = {i, w};
      next(states);
    }
    return out;
  }

 private:
  const BayesianNetwork& net_;
  std::vector<std::vector<double>> likelihood_;
  std::vector<std::size_t> target_stride_;
  std::size_t cells_ = 1;
};

std::size_t block_begin(std::size_t total, std::size_t parts, std::size_t p) {
  const std::size_t base = total / parts;
  const std::size_t extra = total % parts;
  return p * base + (p < extra ? p : extra);
}

}  // namespace

std::size_t joint_state_count(const BayesianNetwork& net) {
  std::size_t total = 1;
  for (VarId v = 0; v < net.size(); ++v) {
    const std::size_t k = net.state_count(v);
    if (k != 0 && total > std::numeric_limits<std::size_t>::max() / k)
      return std::numeric_limits<std::size_t>::max();
    total *= k;
  }
  return total;
}

std::vector<std::size_t> decode_state(const BayesianNetwork& net, std::size_t index) {
  std::vector<std::size_t> states(net.size(), 0);
  for (std::size_t v = net.size(); v-- > 0;) {
    const std::size_t k = net.state_count(v);
    states[v] = index % k;
    index /= k;
  }
  return states;
}

std::vector<double> weighted_table_serial(const BayesianNetwork& net, const Evidence& e,
                                          std::span<const VarId> targets) {
  const StateWalk walk(net, e, targets);
  std::vector<KahanSum> sums(walk.cells());
  walk.accumulate(0, joint_state_count(net), sums);
  std::vector<double> out(sums.size());
  for (std::size_t c = 0; c < sums.size(); ++c) out[c] = sums[c].value();
  return out;
}

std::vector<double> weighted_table_parallel(const BayesianNetwork& net, const Evidence& e,
                                            std::span<const VarId> targets,
                                            std::size_t partitions) {
  if (partitions == 0) partitions = 1;
  const StateWalk walk(net, e, targets);
  const std::size_t total = joint_state_count(net);
  std::vector<std::vector<KahanSum>> blocks(partitions, std::vector<KahanSum>(walk.cells()));

  const auto parts = static_cast<std::ptrdiff_t>(partitions);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t p = 0; p < parts; ++p) {
    const auto up = static_cast<std::size_t>(p);
    walk.accumulate(block_begin(total, partitions, up), block_begin(total, partitions, up + 1),
                    blocks[up]);
  }

  std::vector<double> out(walk.cells());
  for (std::size_t c = 0; c < out.size(); ++c) {
    KahanSum merged;
    for (const auto& block : blocks) merged.add(block[c].value());
    out[c] = merged.value();
  }
  return out;
}

BestState argmax_serial(const BayesianNetwork& net, const Evidence& e) {
  const StateWalk walk(net, e, {});
  return walk.best(0, joint_state_count(net));
}

BestState argmax_parallel(const BayesianNetwork& net, const Evidence& e, std::size_t partitions) {
  if (partitions == 0) partitions = 1;
  const StateWalk walk(net, e, {});
  const std::size_t total = joint_state_count(net);
  std::vector<BestState> blocks(partitions);

  const auto parts = static_cast<std::ptrdiff_t>(partitions);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t p = 0; p < parts; ++p) {
    const auto up = static_cast<std::size_t>(p);
    blocks[up] = walk.best(block_begin(total, partitions, up), block_begin(total, partitions, up + 1));
  }

  BestState out{0, -1.0};
  for (const auto& b : blocks)
    if (b.weight > out.weight) out = b;
  return out;
}

}  // namespace bn::kernels
