#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "hsf/errors.hpp"
#include "hsf/integrate.hpp"
#include "hsf/monte_carlo.hpp"
#include "hsf/random.hpp"

using namespace hsf;

TEST_SUITE("monte_carlo") {

TEST_CASE("Philox known-answer vectors") {
  // Random123 kat_vectors, philox4x32 with 10 rounds
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) ==
        PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("counter RNG streams") {
  CounterRng a(1, 0, 0), b(1, 0, 0), c(1, 1, 0), d(2, 0, 0);
  const double x = a.uniform();
  CHECK(x == b.uniform());
  CHECK(x != c.uniform());
  CHECK(x != d.uniform());
  double sum = 0, sq = 0;
  const int count = 100000;
  for (int i = 0; i < count; ++i) {
    CounterRng r(9, 3, static_cast<std::uint64_t>(i));
    const double u = r.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    const double z = r.normal();
    sum += z;
    sq += z * z;
  }
  CHECK(std::abs(sum / count) < 0.02);
  CHECK(std::abs(sq / count - 1.0) < 0.02);
}

TEST_CASE("parallel map keeps order and propagates errors") {
  const auto squares = parallel_map<int>(1000, 4, [](std::size_t i) { return int(i * i); });
  for (std::size_t i = 0; i < squares.size(); ++i) CHECK(squares[i] == int(i * i));
  CHECK_THROWS_AS(parallel_for(100, 3,
                               [](std::size_t i) {
                                 if (i == 57) throw DomainError("boom");
                               }),
                  DomainError);
  CHECK(resolve_workers(0) >= 1);
  CHECK(resolve_workers(3) == 3);
}

TEST_CASE("running stats merge") {
  RunningStats all, left, right;
  std::mt19937_64 rng(41);
  std::normal_distribution<double> g(3.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = g(rng);
    all.add(x);
    (i < 400 ? left : right).add(x);
  }
  left.merge(right);
  CHECK(left.count == all.count);
  CHECK(left.mean == doctest::Approx(all.mean).epsilon(1e-13));
  CHECK(left.std_error() == doctest::Approx(all.std_error()).epsilon(1e-12));
}

TEST_CASE("Koranyi sphere and ball samplers") {
  for (int n = 1; n <= 3; ++n) {
    std::vector<double> h(2 * n);
    double mean_t2 = 0;
    const int count = 20000;
    for (int i = 0; i < count; ++i) {
      CounterRng rng(5, 7, static_cast<std::uint64_t>(i));
      const double t = sample_koranyi_sphere(rng, h);
      double h2 = 0;
      for (double c : h) h2 += c * c;
      REQUIRE(h2 * h2 + t * t == doctest::Approx(1.0).epsilon(1e-12));
      CounterRng rng2(5, 8, static_cast<std::uint64_t>(i));
      const double tb = sample_koranyi_ball(rng2, h);
      h2 = 0;
      for (double c : h) h2 += c * c;
      REQUIRE(h2 * h2 + tb * tb <= 1.0 + 1e-12);
      mean_t2 += tb * tb;
    }
    // E[t^2] over the unit ball, from the slice volumes (1 - t^2)^{n/2}
    double num = 0, den = 0;
    for (int k = 0; k < 200000; ++k) {
      const double t = -1 + (k + 0.5) / 100000.0;
      const double wgt = std::pow(1 - t * t, 0.5 * n);
      num += t * t * wgt;
      den += wgt;
    }
    CHECK(mean_t2 / count == doctest::Approx(num / den).epsilon(0.03));
  }
}

TEST_CASE("kernel norm: dilation and seed stability") {
  const auto params = params_from(2.5, 0.5);
  const MCConfig config{200000, 1, 1};
  const GroupPoint x(0.6, -0.3, 0.7);
  const auto one = mc_kernel_norm(x, params, config);
  const auto two = mc_kernel_norm(dilate(2.0, x), params, MCConfig{200000, 2, 1});
  const double factor = std::pow(2.0, (1 - params.epsilon) * params.p);
  const double diff = two.mean - factor * one.mean;
  CHECK(std::abs(diff) <= 3 * std::hypot(two.std_error, factor * one.std_error));

  const auto again = mc_kernel_norm(x, params, MCConfig{200000, 3, 1});
  CHECK(std::abs(again.mean - one.mean) <= 3 * std::hypot(again.std_error, one.std_error));
  CHECK(one.samples == 200000);
  CHECK(one.seed == 1);
}

TEST_CASE("kernel norm is bit-identical across worker counts") {
  const auto params = params_from(3.0, 0.25);
  const GroupPoint x({0.2, 0.1, 0.4}, {0.0, -0.5, 0.3}, 0.9);
  const auto a = mc_kernel_norm(x, params, MCConfig{50000, 9, 1});
  const auto b = mc_kernel_norm(x, params, MCConfig{50000, 9, 3});
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
}

TEST_CASE("ball-restricted kernel norm") {
  const auto params = params_from(2.5, 0.5);
  const GroupPoint x(1.0, 0.0, 0.0);
  const MCConfig config{200000, 4, 1};
  const auto k1 = mc_kernel_norm_ball(x, 1.0, params, config);
  const auto k4 = mc_kernel_norm_ball(x, 4.0, params, config);
  const auto k8 = mc_kernel_norm_ball(x, 8.0, params, config);
  const auto full = mc_kernel_norm(x, params, config);
  CHECK(k1.mean <= k4.mean + 3 * std::hypot(k1.std_error, k4.std_error));
  CHECK(k8.mean / full.mean > 0.5);
  CHECK(k8.mean <= full.mean * (1 + 1e-12));
  // the inner ball alone: |T| >= (1 - 2^-alpha) N^-alpha there
  const auto third = mc_kernel_norm_ball(x, 1.0 / 3.0, params, config);
  const double floor_value = std::pow(1 - std::pow(2.0, -params.alpha), params.p) *
                             ball_integral_exact(1.0 / 3.0, params.alpha * params.p, params.n);
  CHECK(third.mean >= floor_value - 3 * third.std_error);
  CHECK_THROWS_AS(mc_kernel_norm_ball(x, 0.2, params, config), DomainError);
}

TEST_CASE("kernel norm preconditions") {
  const auto params = params_from(2.5, 0.5);
  CHECK_THROWS_AS(mc_kernel_norm(GroupPoint::identity(2), params, MCConfig{}), DomainError);
  CHECK_THROWS_AS(mc_kernel_norm({1, 0, 0}, params, MCConfig{100, 0, 1}), DomainError);
}

}
