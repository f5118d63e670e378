#include <doctest.h>

#include <omp.h>

#include <cmath>
#include <limits>

#include "bn/enumeration_kernels.hpp"
#include "support/networks.hpp"

using namespace bn;
using namespace bn::testing;

TEST_CASE("one partition reproduces the serial kernel bitwise") {
  Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    auto net = parametrize(random_dag_shape(rng, 9, 2, 3, 0.4, 3), rng, 0.1);
    Evidence e = random_evidence(rng, net, kUnset);
    const std::vector<VarId> targets{static_cast<VarId>(trial % 9), static_cast<VarId>((trial + 4) % 9)};
    CHECK(kernels::weighted_table_parallel(net, e, targets, 1) ==
          kernels::weighted_table_serial(net, e, targets));
    const auto a = kernels::argmax_serial(net, e);
    const auto b = kernels::argmax_parallel(net, e, 1);
    CHECK(a.index == b.index);
    CHECK(a.weight == b.weight);
  }
}

TEST_CASE("partitioned sums depend on the partition count only") {
  Rng rng(43);
  auto net = parametrize(random_dag_shape(rng, 12, 2, 3, 0.3, 3), rng);
  Evidence e = random_evidence(rng, net, 0);
  const std::vector<VarId> targets{0};
  const auto serial = kernels::weighted_table_serial(net, e, targets);

  for (std::size_t parts : {2u, 3u, 7u, 16u}) {
    omp_set_num_threads(1);
    const auto one_thread = kernels::weighted_table_parallel(net, e, targets, parts);
    omp_set_num_threads(4);
    const auto four_threads = kernels::weighted_table_parallel(net, e, targets, parts);
    CHECK(one_thread == four_threads);
    for (std::size_t c = 0; c < serial.size(); ++c)
      CHECK(std::abs(one_thread[c] - serial[c]) <= 1e-12 * std::abs(serial[c]));
    CHECK(kernels::argmax_parallel(net, e, parts).index == kernels::argmax_serial(net, e).index);
  }
  omp_set_num_threads(omp_get_num_procs());
}

TEST_CASE("more partitions than states") {
  auto net = fixture("serial.bn");
  const std::vector<VarId> targets{2};
  const auto serial = kernels::weighted_table_serial(net, Evidence{}, targets);
  const auto parallel = kernels::weighted_table_parallel(net, Evidence{}, targets, 32);
  for (std::size_t c = 0; c < serial.size(); ++c) CHECK(parallel[c] == doctest::Approx(serial[c]).epsilon(1e-15));
}

TEST_CASE("state decoding follows declaration order, last variable fastest") {
  auto net = fixture("sprinkler.bn");  // 4 x 2 x 2 x 2 x 2
  CHECK(kernels::joint_state_count(net) == 64);
  CHECK(kernels::decode_state(net, 0) == std::vector<std::size_t>{0, 0, 0, 0, 0});
  CHECK(kernels::decode_state(net, 1) == std::vector<std::size_t>{0, 0, 0, 0, 1});
  CHECK(kernels::decode_state(net, 16) == std::vector<std::size_t>{1, 0, 0, 0, 0});
  CHECK(kernels::decode_state(net, 63) == std::vector<std::size_t>{3, 1, 1, 1, 1});
}

TEST_CASE("joint state count saturates") {
  Shape wide;
  for (int i = 0; i < 70; ++i) {
    wide.states.push_back(2);
    wide.parents.emplace_back();
  }
  Rng rng(1);
  auto net = parametrize(wide, rng);
  CHECK(kernels::joint_state_count(net) == std::numeric_limits<std::size_t>::max());
}
