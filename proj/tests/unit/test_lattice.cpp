#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "hsf/errors.hpp"
#include "hsf/lattice.hpp"
#include "oracles.hpp"
#include "sampling.hpp"

using namespace hsf;

TEST_SUITE("lattice") {

TEST_CASE("products, inverses and the commutator") {
  const LatticeElement a = kGeneratorA, b = kGeneratorB;
  CHECK(lattice_multiply(a, lattice_inverse(a)) == kLatticeIdentity);
  const LatticeElement ab = lattice_multiply(a, b);
  CHECK(lattice_multiply(ab, ab) == LatticeElement{2, 2, 3});
  const LatticeElement c = lattice_commutator(a, b);
  CHECK(c == LatticeElement{0, 0, 1});
  CHECK(lattice_multiply(c, a) == lattice_multiply(a, c));
  CHECK(lattice_multiply(c, b) == lattice_multiply(b, c));
  CHECK(lattice_power(c, 5) == LatticeElement{0, 0, 5});
  CHECK(lattice_power(a, 0) == kLatticeIdentity);
  const std::int64_t big = std::int64_t{1} << 40;
  CHECK_THROWS_AS(lattice_multiply({big, 0, 0}, {0, big, 0}), BudgetExceeded);
}

TEST_CASE("ball sizes against brute-force word enumeration") {
  const auto words = oracle::brute_force_ball(7);
  const WordBall ball = word_ball(7);
  REQUIRE(ball.size() == words.size());
  for (std::size_t i = 0; i < ball.size(); ++i) {
    const auto& g = ball.elements()[i];
    const auto it = words.find({g.x, g.y, g.z});
    REQUIRE(it != words.end());
    REQUIRE(it->second == ball.distances()[i]);
  }
  const std::vector<std::size_t> expected{1, 5, 17, 53, 135};
  for (int r = 0; r <= 4; ++r) CHECK(word_ball(r).size() == expected[r]);
  const auto sizes = ball_sizes(7);
  for (int r = 0; r <= 7; ++r) CHECK(sizes[r] == ball.cumulative_sizes()[r]);
}

TEST_CASE("BFS layers are consistent along generator edges") {
  const WordBall ball = word_ball(6);
  for (std::size_t i = 0; i < ball.size(); ++i) {
    const auto& g = ball.elements()[i];
    for (const auto& s : symmetric_generators()) {
      const auto d = ball.distance(lattice_multiply(g, s));
      if (d) CHECK(std::abs(*d - ball.distances()[i]) <= 1);
    }
  }
  // layers are in BFS order
  for (std::size_t i = 1; i < ball.size(); ++i) {
    CHECK(ball.distances()[i - 1] <= ball.distances()[i]);
  }
}

TEST_CASE("word distance") {
  const LatticeElement g{2, -1, 3};
  CHECK(word_distance(g, g).distance == 0);
  CHECK(word_distance(kLatticeIdentity, {0, 0, 1}).distance == 4);
  for (long k = 1; k <= 64; ++k) {
    const auto d = word_distance(kLatticeIdentity, {0, 0, k});
    REQUIRE(d.resolved);
    CHECK(d.distance == oracle::commutator_power_length(k));
    const double ratio = d.distance / std::sqrt(static_cast<double>(k));
    CHECK(ratio >= 4.0);
    CHECK(ratio <= 6.0);
  }
  const auto far = word_distance(kLatticeIdentity, {0, 0, 10000}, 8);
  CHECK_FALSE(far.resolved);
  CHECK(far.explored_radius == 8);

  // symmetric and left-invariant
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> coord(-4, 4);
  for (int i = 0; i < 50; ++i) {
    const LatticeElement x{coord(rng), coord(rng), coord(rng)};
    const LatticeElement y{coord(rng), coord(rng), coord(rng)};
    const LatticeElement h{coord(rng), coord(rng), coord(rng)};
    const int d = word_distance(x, y).distance;
    CHECK(word_distance(y, x).distance == d);
    CHECK(word_distance(lattice_multiply(h, x), lattice_multiply(h, y)).distance == d);
  }
}

TEST_CASE("the sets X_n") {
  CHECK(build_xn(1).elements == std::vector<LatticeElement>{kLatticeIdentity});
  const XnSet five = build_xn(5);
  const WordBall b1 = word_ball(1);
  CHECK(std::equal(five.elements.begin(), five.elements.end(), b1.elements().begin()));
  CHECK(five.inner_radius == 1);
  CHECK(five.outer_radius == 1);

  const XnSet xn = build_xn(100);
  CHECK(xn.elements.size() == 100);
  CHECK(std::set<LatticeElement>(xn.elements.begin(), xn.elements.end()).size() == 100);
  CHECK(xn.inner_radius == 3);  // |B(3)| = 53 <= 100 < 135 = |B(4)|
  CHECK(xn.outer_radius == 4);
  // ties inside a layer are lexicographic
  for (std::size_t i = 1; i < xn.elements.size(); ++i) {
    if (xn.distances[i - 1] == xn.distances[i]) CHECK(xn.elements[i - 1] < xn.elements[i]);
  }
}

TEST_CASE("lattice to H_1") {
  CHECK(lattice_to_continuous(kGeneratorA) == GroupPoint(1, 0, 0));
  CHECK(lattice_to_continuous(kGeneratorB) == GroupPoint(0, 1, 0));
  CHECK(lattice_to_continuous({0, 0, 1}) == GroupPoint(0, 0, -4));
  std::mt19937_64 rng(22);
  std::uniform_int_distribution<int> coord(-50, 50);
  for (int i = 0; i < 10000; ++i) {
    const LatticeElement g{coord(rng), coord(rng), coord(rng)};
    const LatticeElement h{coord(rng), coord(rng), coord(rng)};
    const GroupPoint lhs = lattice_to_continuous(lattice_multiply(g, h));
    const GroupPoint rhs = lattice_to_continuous(g) * lattice_to_continuous(h);
    REQUIRE(lhs == rhs);  // integers, exact in double
  }
  // central elements land on 4Z
  for (long k = -5; k <= 5; ++k) {
    CHECK(std::fmod(lattice_to_continuous({0, 0, k}).w(), 4.0) == 0.0);
  }
}

TEST_CASE("word metric and Koranyi metric are comparable on B(8)") {
  const WordBall ball = word_ball(8);
  double lo = INFINITY, hi = 0;
  for (std::size_t i = 1; i < ball.size(); ++i) {
    const double ratio = koranyi_norm(lattice_to_continuous(ball.elements()[i])) /
                         ball.distances()[i];
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  CHECK(lo > 0.2);
  CHECK(hi <= 1.0 + 1e-12);
}

TEST_CASE("growth") {
  const GrowthFit fit = growth_fit(24);
  CHECK(fit.exponent >= 3.7);
  CHECK(fit.exponent <= 4.3);
  CHECK(fit.sizes[6] == 593);
  CHECK(fit.sizes[12] == 8871);
  CHECK(fit.sizes[24] == 141225);
  CHECK(growth_fit(24).residual < growth_fit(12).residual);
  for (int r : {6, 12}) {
    const double ratio = static_cast<double>(fit.sizes[2 * r]) / fit.sizes[r];
    CHECK(ratio >= 8.0);
    CHECK(ratio <= 32.0);
  }
  CHECK_THROWS_AS(growth_fit(4), DomainError);
  CHECK_THROWS_AS(word_ball(30, 1000), BudgetExceeded);
}

}
