#include <cmath>
#include <numbers>

#include "doctest.h"
#include "test_support.hpp"
#include "thermo/error.hpp"
#include "thermo/sft.hpp"

using namespace thermo;

namespace {

TransitionGraph Full2() {
  return TransitionGraph::FromAdjacency({{true, true}, {true, true}});
}

TransitionGraph GoldenMean() {
  return TransitionGraph::FromAdjacency({{true, true}, {true, false}});
}

double TracePower(const TransitionGraph& g, int t) {
  Eigen::MatrixXd a = g.adjacency_matrix();
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(g.size(), g.size());
  for (int k = 0; k < t; ++k) p = p * a;
  return p.trace();
}

}  // namespace

TEST_CASE("graph validation") {
  CHECK_THROWS_AS(TransitionGraph::FromAdjacency({{true, true}, {false, false}}),
                  InputError);
  CHECK_THROWS_AS(TransitionGraph::FromAdjacency({{false, true}, {false, true}}),
                  InputError);
  CHECK(Full2().irreducible());
  // two disjoint loops: valid, not irreducible
  auto two = TransitionGraph::FromAdjacency({{true, false}, {false, true}});
  CHECK_FALSE(two.irreducible());
  CHECK(GoldenMean().num_edges() == 3);
  CHECK(GoldenMean().edge_index(1, 1) == -1);
}

TEST_CASE("edge potential on forbidden edge throws") {
  auto g = GoldenMean();
  auto f = EdgePotential::Constant(g, 1.0);
  CHECK(f(0, 1) == 1.0);
  CHECK_THROWS_AS(f(1, 1), InputError);
}

TEST_CASE("enumerate cycles: spec examples") {
  CHECK(EnumerateCycles(Full2(), 3).size() == 8);
  CHECK(EnumerateCycles(GoldenMean(), 4).size() == 7);
  auto loop = TransitionGraph::FromAdjacency({{true}});
  CHECK(EnumerateCycles(loop, 5).size() == 1);
  CHECK_THROWS_AS(EnumerateCycles(Full2(), 30, 1000), InputError);
}

TEST_CASE("trace identity, exhaustive small graphs") {
  // every valid graph on up to 3 states, plus random ones up to 6
  for (int n = 1; n <= 3; ++n) {
    const int bits = n * n;
    for (int mask = 0; mask < (1 << bits); ++mask) {
      std::vector<Edge> edges;
      for (int b = 0; b < bits; ++b) {
        if (mask >> b & 1) edges.push_back({b / n, b % n});
      }
      if (edges.empty()) continue;
      std::optional<TransitionGraph> g;
      try {
        g = TransitionGraph::FromEdges(n, edges);
      } catch (const InputError&) {
        continue;
      }
      for (int t = 1; t <= 6; ++t) {
        REQUIRE(static_cast<double>(EnumerateCycles(*g, t).size()) == TracePower(*g, t));
      }
    }
  }
  test::Rng rng(11);
  for (int k = 0; k < 30; ++k) {
    auto g = test::RandomIrreducibleGraph(rng, 6);
    for (int t = 1; t <= 7; ++t) {
      REQUIRE(static_cast<double>(EnumerateCycles(g, t).size()) == TracePower(g, t));
    }
  }
}

TEST_CASE("birkhoff sums") {
  auto g = GoldenMean();
  auto c = EdgePotential::Constant(g, 0.7);
  CHECK(BirkhoffSum(c, CyclicWord(g, {0, 1, 0, 0})) == doctest::Approx(2.8));

  auto full = Full2();
  auto ind = EdgePotential::FromFunction(full, [](int i, int j) { return i == 1 && j == 1 ? 1.0 : 0.0; });
  CHECK(BirkhoffSum(ind, CyclicWord(full, {1, 1, 1})) == 3.0);

  auto f = EdgePotential::FromFunction(g, [](int i, int j) {
    if (i == 0 && j == 0) return 0.3;
    if (i == 0 && j == 1) return -0.1;
    return 0.5;
  });
  CHECK(BirkhoffSum(f, CyclicWord(g, {0, 1, 0, 0})) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(CyclicWord(g, {1, 1}), InputError);
}

TEST_CASE("entropy examples") {
  auto full = Full2();
  Eigen::MatrixXd half = Eigen::MatrixXd::Constant(2, 2, 0.5);
  MarkovMeasure bern(full, half, Eigen::Vector2d(0.5, 0.5));
  CHECK(KsEntropy(bern) == doctest::Approx(std::log(2.0)).epsilon(1e-14));

  Eigen::MatrixXd point(2, 2);
  point << 0.0, 0.0, 0.0, 1.0;
  MarkovMeasure delta(full, point, Eigen::Vector2d(0.0, 1.0));
  CHECK(KsEntropy(delta) == 0.0);

  // Parry measure
  const double phi = std::numbers::phi;
  auto g = GoldenMean();
  Eigen::MatrixXd p(2, 2);
  p << 1.0 / phi, 1.0 / (phi * phi), 1.0, 0.0;
  Eigen::Vector2d pi(phi * phi / (1.0 + phi * phi), 1.0 / (1.0 + phi * phi));
  MarkovMeasure parry(g, p, pi);
  CHECK(KsEntropy(parry) == doctest::Approx(std::log(phi)).epsilon(1e-13));
}

TEST_CASE("integrate examples") {
  auto full = Full2();
  Eigen::MatrixXd half = Eigen::MatrixXd::Constant(2, 2, 0.5);
  MarkovMeasure bern(full, half, Eigen::Vector2d(0.5, 0.5));
  auto ind = EdgePotential::FromFunction(full, [](int i, int j) { return i == 0 && j == 1 ? 1.0 : 0.0; });
  CHECK(Integrate(ind, bern) == doctest::Approx(0.25));
  CHECK(Integrate(EdgePotential::Constant(full, -1.5), bern) == doctest::Approx(-1.5));

  Eigen::MatrixXd point(2, 2);
  point << 0.0, 0.0, 0.0, 1.0;
  MarkovMeasure delta(full, point, Eigen::Vector2d(0.0, 1.0));
  auto f = EdgePotential(full, {0.1, 0.2, 0.3, 0.4});
  CHECK(Integrate(f, delta) == 0.4);
}

TEST_CASE("Markov measure validation") {
  auto g = GoldenMean();
  Eigen::MatrixXd p(2, 2);
  p << 0.5, 0.5, 0.5, 0.5;  // mass on forbidden 1->1
  CHECK_THROWS_AS(MarkovMeasure(g, p, Eigen::Vector2d(0.5, 0.5)), InputError);
  Eigen::MatrixXd q(2, 2);
  q << 0.5, 0.5, 1.0, 0.0;
  CHECK_THROWS_AS(MarkovMeasure(g, q, Eigen::Vector2d(0.5, 0.5)), InputError);
  CHECK_NOTHROW(MarkovMeasure(g, q, Eigen::Vector2d(2.0 / 3.0, 1.0 / 3.0)));
}

TEST_CASE("entropy bound: h(mu) <= log spectral radius") {
  test::Rng rng(5);
  for (int k = 0; k < 50; ++k) {
    auto g = test::RandomIrreducibleGraph(rng, 6);
    const double top = std::log(g.adjacency_matrix().eigenvalues().cwiseAbs().maxCoeff());
    for (int m = 0; m < 20; ++m) {
      REQUIRE(KsEntropy(test::RandomMarkovMeasure(g, rng)) <= top + 1e-9);
    }
  }
}

TEST_CASE("integrate is linear in f") {
  test::Rng rng(6);
  for (int k = 0; k < 20; ++k) {
    auto g = test::RandomIrreducibleGraph(rng, 5);
    auto f = test::RandomPotential(g, rng, -1, 1);
    auto h = test::RandomPotential(g, rng, -1, 1);
    auto mu = test::RandomMarkovMeasure(g, rng);
    CHECK(Integrate(f * 2.0 + h * -3.0, mu) ==
          doctest::Approx(2.0 * Integrate(f, mu) - 3.0 * Integrate(h, mu)).epsilon(1e-12));
  }
}
