#include <doctest.h>

#include <cmath>
#include <numeric>

#include "bn/error.hpp"
#include "bn/oracle.hpp"
#include "support/networks.hpp"

using namespace bn;
using namespace bn::testing;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Parse;
}

// Serial fixture ids: X=0, Y=1, Z=2; state 0 is "true".
// Diverging fixture ids: Y=0, X=1, Z=2.

}  // namespace

TEST_CASE("forward inference through the serial chain") {
  auto net = fixture("serial.bn");
  Evidence x_true;
  x_true.hard(0, 0);
  // 0.95 * 0.85 + 0.01 * 0.15
  CHECK(std::abs(posterior(net, 2, x_true).probabilities[0] - 0.809) < 1e-12);
  Evidence x_false;
  x_false.hard(0, 1);
  // 0.05 * 0.03 + 0.99 * 0.97
  CHECK(std::abs(posterior(net, 2, x_false).probabilities[1] - 0.9618) < 1e-12);
}

TEST_CASE("backward serial posteriors use the true evidence marginal, not 0.765 or 0.8487") {
  auto net = fixture("serial.bn");
  Evidence z_true;
  z_true.hard(2, 0);
  // P(X+, Z+) = 0.9 * 0.809 = 0.7281; P(Z+) = 0.7281 + 0.1 * (0.03 * 0.95 + 0.97 * 0.01)
  CHECK(std::abs(posterior(net, 0, z_true).probabilities[0] - 0.7281 / 0.73192) < 1e-12);
  CHECK(std::abs(posterior(net, 0, z_true).probabilities[0] - 0.99478) < 5e-6);
  Evidence y_true;
  y_true.hard(1, 0);
  // 0.765 / (0.765 + 0.003)
  CHECK(std::abs(posterior(net, 0, y_true).probabilities[0] - 0.765 / 0.768) < 1e-12);
  CHECK(std::abs(posterior(net, 0, y_true).probabilities[0] - 0.99609) < 1e-5);
}

TEST_CASE("diverging posteriors: 0.94936 and the consistent 0.999993 instead of 0.8379") {
  auto net = fixture("diverging.bn");
  Evidence z_true;
  z_true.hard(2, 0);
  const double expected = (0.98 * 0.95 * 0.90 + 0.02 * 0.01 * 0.03) / (0.98 * 0.90 + 0.02 * 0.03);
  CHECK(std::abs(posterior(net, 1, z_true).probabilities[0] - expected) < 1e-12);
  CHECK(std::abs(posterior(net, 1, z_true).probabilities[0] - 0.94936) < 5e-6);

  Evidence xz;
  xz.hard(1, 0);
  xz.hard(2, 0);
  // 0.8379 / (0.8379 + 0.02 * 0.01 * 0.03)
  CHECK(std::abs(posterior(net, 0, xz).probabilities[0] - 0.8379 / 0.837906) < 1e-12);
  CHECK(std::abs(posterior(net, 0, xz).probabilities[0] - 0.999993) < 1e-5);
}

TEST_CASE("roots keep their prior without evidence") {
  auto sprinkler = fixture("sprinkler.bn");
  const auto b = posterior(sprinkler, 0, Evidence{});
  for (double p : b.probabilities) CHECK(std::abs(p - 0.25) < 1e-12);
  auto serial = fixture("serial.bn");
  CHECK(std::abs(posterior(serial, 0, Evidence{}).probabilities[0] - 0.9) < 1e-12);
}

TEST_CASE("marginals match direct summation of the joint") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    auto net = parametrize(random_dag_shape(rng, 7, 2, 3, 0.4, 3), rng);
    std::vector<std::vector<double>> direct(net.size());
    for (VarId v = 0; v < net.size(); ++v) direct[v].assign(net.state_count(v), 0.0);
    for (const auto& x : all_states(net)) {
      const double p = joint_probability(net, Assignment(x));
      for (VarId v = 0; v < net.size(); ++v) direct[v][x[v]] += p;
    }
    for (VarId v = 0; v < net.size(); ++v) {
      const auto b = posterior(net, v, Evidence{});
      for (std::size_t s = 0; s < b.probabilities.size(); ++s)
        CHECK(std::abs(b.probabilities[s] - direct[v][s]) < 1e-9);
    }
  }
}

TEST_CASE("root marginal of a chain by forward propagation") {
  auto net = fixture("serial.bn");
  // P(Y+) = 0.9 * 0.85 + 0.1 * 0.03 ; P(Z+) = P(Y+) * 0.95 + P(Y-) * 0.01
  const double y = 0.9 * 0.85 + 0.1 * 0.03;
  const double z = y * 0.95 + (1 - y) * 0.01;
  CHECK(std::abs(posterior(net, 1, Evidence{}).probabilities[0] - y) < 1e-12);
  CHECK(std::abs(posterior(net, 2, Evidence{}).probabilities[0] - z) < 1e-12);
}

TEST_CASE("soft evidence: neutral vectors and scaling") {
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    auto net = parametrize(random_dag_shape(rng, 6, 2, 3, 0.4, 3), rng);
    Evidence e = random_evidence(rng, net, 0);
    const auto base = posterior(net, 0, e);

    VarId free = kUnset;
    for (VarId v = 1; v < net.size(); ++v)
      if (!e.contains(v)) free = v;
    if (free != kUnset) {
      Evidence neutral = e;
      neutral.soft(free, std::vector<double>(net.state_count(free), 1.0));
      const auto b = posterior(net, 0, neutral);
      for (std::size_t s = 0; s < b.probabilities.size(); ++s)
        CHECK(std::abs(b.probabilities[s] - base.probabilities[s]) < 1e-12);
    }

    Evidence scaled;
    for (const auto& [v, obs] : e) {
      if (const auto* soft = std::get_if<SoftEvidence>(&obs)) {
        auto lik = soft->likelihood;
        for (double& x : lik) x *= 7.5;
        scaled.soft(v, lik);
      } else {
        scaled.observe(v, obs);
      }
    }
    const auto b = posterior(net, 0, scaled);
    for (std::size_t s = 0; s < b.probabilities.size(); ++s)
      CHECK(std::abs(b.probabilities[s] - base.probabilities[s]) < 1e-12);
  }
}

TEST_CASE("explaining away on the sprinkler fixture") {
  auto net = fixture("sprinkler.bn");
  Evidence wet;
  wet.hard(3, 0);
  Evidence wet_and_rain = wet;
  wet_and_rain.hard(1, 0);
  const double on_given_wet = posterior(net, 2, wet).probabilities[0];
  const double on_given_wet_rain = posterior(net, 2, wet_and_rain).probabilities[0];
  CHECK(on_given_wet > on_given_wet_rain);
}

TEST_CASE("marginal joint of the converging parents") {
  Rng rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    // X(0) -> Y(1) <- Z(2)
    auto net = parametrize(converging_shape(), rng);
    for (std::size_t y = 0; y < 2; ++y) {
      Evidence e;
      e.hard(1, y);
      const auto table = marginal_joint(net, {0, 2}, e);
      double direct[2][2];
      double total = 0.0;
      for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t z = 0; z < 2; ++z) {
          direct[x][z] = net.cpt(1).rows[x * 2 + z][y] * net.cpt(0).rows[0][x] * net.cpt(2).rows[0][z];
          total += direct[x][z];
        }
      for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t z = 0; z < 2; ++z)
          CHECK(std::abs(table.probabilities[x * 2 + z] - direct[x][z] / total) < 1e-12);
    }
  }
}

TEST_CASE("marginal joint over every variable is the joint") {
  auto net = fixture("sprinkler.bn");
  const auto table = marginal_joint(net, {0, 1, 2, 3, 4}, Evidence{});
  const auto states = all_states(net);
  REQUIRE(table.probabilities.size() == states.size());
  for (std::size_t i = 0; i < states.size(); ++i)
    CHECK(std::abs(table.probabilities[i] - joint_probability(net, Assignment(states[i]))) < 1e-12);

  Evidence e;
  e.hard(4, 0);
  const auto single = marginal_joint(net, {2}, e);
  const auto b = posterior(net, 2, e);
  CHECK(single.probabilities == b.probabilities);
}

TEST_CASE("marginal joint validates targets") {
  auto net = fixture("serial.bn");
  CHECK(kind_of([&] { marginal_joint(net, {}, Evidence{}); }) == ErrorKind::InvalidQuery);
  CHECK(kind_of([&] { marginal_joint(net, {0, 0}, Evidence{}); }) == ErrorKind::InvalidQuery);
  Evidence e;
  e.hard(1, 0);
  CHECK(kind_of([&] { marginal_joint(net, {1, 2}, e); }) == ErrorKind::InvalidQuery);
}

TEST_CASE("most probable assignment") {
  auto net = fixture("serial.bn");
  const auto best = most_probable_assignment(net, Evidence{});
  CHECK(best.assignment == Assignment({0, 0, 0}));
  CHECK(std::abs(best.probability - 0.72675) < 1e-15);

  // Deterministic chain: A -> B -> C copies A.
  BayesianNetwork chain("det", {Variable{"A", {"a", "b"}}, Variable{"B", {"a", "b"}}, Variable{"C", {"a", "b"}}},
                        {Cpt{0, {}, {{0.3, 0.7}}}, Cpt{1, {0}, {{1.0, 0.0}, {0.0, 1.0}}},
                         Cpt{2, {1}, {{1.0, 0.0}, {0.0, 1.0}}}});
  Evidence root_a;
  root_a.hard(0, 0);
  const auto det = most_probable_assignment(chain, root_a);
  CHECK(det.assignment == Assignment({0, 0, 0}));
  CHECK(det.probability == 0.3);

  Evidence contradiction;
  contradiction.hard(0, 0);
  contradiction.hard(2, 1);
  CHECK(kind_of([&] { most_probable_assignment(chain, contradiction); }) == ErrorKind::ImpossibleEvidence);
  CHECK(kind_of([&] { posterior(chain, 1, contradiction); }) == ErrorKind::ImpossibleEvidence);
}

TEST_CASE("ties go to the first assignment in declaration order") {
  BayesianNetwork flat("flat", {Variable{"A", {"a", "b"}}, Variable{"B", {"a", "b"}}},
                       {Cpt{0, {}, {{0.5, 0.5}}}, Cpt{1, {}, {{0.5, 0.5}}}});
  CHECK(most_probable_assignment(flat, Evidence{}).assignment == Assignment({0, 0}));
  CHECK(most_probable_assignment(flat, Evidence{}, {4}).assignment == Assignment({0, 0}));
}

TEST_CASE("posterior rejects bad queries") {
  auto net = fixture("serial.bn");
  Evidence e;
  e.hard(2, 0);
  CHECK(kind_of([&] { posterior(net, 2, e); }) == ErrorKind::InvalidQuery);
  CHECK(kind_of([&] { posterior(net, 7, Evidence{}); }) == ErrorKind::InvalidQuery);
}

TEST_CASE("enumeration refuses more than 2^22 joint states") {
  Shape wide;
  for (int i = 0; i < 23; ++i) {
    wide.states.push_back(2);
    wide.parents.emplace_back();
  }
  Rng rng(2);
  auto net = parametrize(wide, rng);
  CHECK(kind_of([&] { posterior(net, 0, Evidence{}); }) == ErrorKind::TooLarge);
  CHECK(kind_of([&] { most_probable_assignment(net, Evidence{}); }) == ErrorKind::TooLarge);
}

TEST_CASE("partitioned enumeration agrees with the serial default") {
  auto net = fixture("loopy8.bn");
  Evidence e;
  e.hard(7, 1);
  const auto serial = posterior(net, 0, e);
  const auto one = posterior(net, 0, e, {1});
  CHECK(serial.probabilities == one.probabilities);
  const auto many = posterior(net, 0, e, {5});
  for (std::size_t s = 0; s < serial.probabilities.size(); ++s)
    CHECK(std::abs(many.probabilities[s] - serial.probabilities[s]) < 1e-12);
  CHECK(posterior(net, 0, e, {5}).probabilities == many.probabilities);
}
