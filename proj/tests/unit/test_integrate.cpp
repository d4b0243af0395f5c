#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "hsf/errors.hpp"
#include "hsf/integrate.hpp"
#include "oracles.hpp"

using namespace hsf;
using std::numbers::pi;

TEST_SUITE("integrate") {

TEST_CASE("Gamma-identity spot values at p = 2") {
  const auto vertical = lambda_integral(0.0, 1.0, 2.0, 0.5);
  CHECK(vertical.value == doctest::Approx(std::sqrt(2 * pi)).epsilon(1e-9));
  CHECK(std::abs(vertical.value - std::sqrt(2 * pi)) <= vertical.abs_error);
  const auto horizontal = lambda_integral(1.0, 0.0, 2.0, 0.5);
  CHECK(horizontal.value == doctest::Approx(2 * std::sqrt(pi)).epsilon(1e-9));
  CHECK(std::abs(horizontal.value - 2 * std::sqrt(pi)) <= horizontal.abs_error);
}

TEST_CASE("p = 2 against the closed form, with honest error bars") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (double eps : {0.05, 0.25, 0.5, 0.8}) {
    for (int i = 0; i < 40; ++i) {
      const double s = unit(rng) < 0.2 ? 0.0 : 3.0 * unit(rng);
      const double w = unit(rng) < 0.2 ? 0.0 : 6.0 * (unit(rng) - 0.5);
      if (s == 0.0 && w == 0.0) continue;
      const auto r = lambda_integral(s, w, 2.0, eps);
      const double exact = oracle::lambda_integral_p2(s, w, eps);
      CAPTURE(s);
      CAPTURE(w);
      CAPTURE(eps);
      CHECK(std::abs(r.value - exact) <= std::max(r.abs_error, 1e-15 * exact));
      CHECK(std::abs(r.value - exact) <= 1e-8 * exact);
    }
  }
}

TEST_CASE("general p against an independent Boost quadrature") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (double p : {2.5, 3.5, 6.0}) {
    for (double eps : {0.1, 0.5}) {
      for (int i = 0; i < 8; ++i) {
        const double s = 0.1 + 2.0 * unit(rng);
        const double w = 4.0 * (unit(rng) - 0.5);
        const auto r = lambda_integral(s, w, p, eps);
        const double ref = oracle::lambda_integral(s, w, p, eps);
        CAPTURE(p);
        CAPTURE(eps);
        CAPTURE(s);
        CAPTURE(w);
        CHECK(std::abs(r.value - ref) <= 1e-8 * ref);
      }
    }
  }
}

TEST_CASE("homogeneity I(4s, 4w) = 2^{(1-eps)p} I(s, w)") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (double p : {2.0, 3.0, 5.0}) {
    for (double eps : {0.1, 0.5}) {
      for (int i = 0; i < 5; ++i) {
        const double s = 0.2 + unit(rng), w = unit(rng) - 0.5;
        const double lhs = lambda_integral(4 * s, 4 * w, p, eps).value;
        // the scaled side through the oracle, which never rescales
        const double rhs = std::pow(2.0, (1 - eps) * p) * oracle::lambda_integral(s, w, p, eps);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("degenerate input and bad arguments") {
  const auto zero = lambda_integral(0.0, 0.0, 2.5, 0.5);
  CHECK(zero.value == 0.0);
  CHECK(zero.degenerate);
  CHECK_THROWS_AS(lambda_integral(-1.0, 0.0, 2.5, 0.5), DomainError);
  CHECK_THROWS_AS(lambda_integral(1.0, 0.0, 1.5, 0.5), DomainError);
  CHECK_THROWS_AS(lambda_integral(1.0, 0.0, 2.5, 1.5), DomainError);
  CHECK_THROWS_AS(lambda_integral(1.0, 0.0, 2.5, 0.5, 0.0), DomainError);
  CHECK_THROWS_AS(lambda_integral(0.3, 2.0, 2.5, 0.5, 1e-12, 100), ConvergenceError);
}

TEST_CASE("halving the tolerance moves the value by less than the error bars") {
  for (auto [s, w] : {std::pair{0.0, 1.0}, {0.3, 0.7}, {1.0, 0.0}, {0.01, 1.0}}) {
    const auto a = lambda_integral(s, w, 2.5, 0.25, 1e-6);
    const auto b = lambda_integral(s, w, 2.5, 0.25, 5e-7);
    CHECK(std::abs(a.value - b.value) <= a.abs_error + b.abs_error);
    CHECK(a.abs_error <= 1e-6 * a.value);
  }
}

TEST_CASE("tail and head bounds") {
  const double p = 2.5, eps = 0.5;
  double previous = INFINITY;
  for (double cut : {10.0, 100.0, 1000.0}) {
    const double t = lambda_tail_bound(cut, p, eps);
    CHECK(t == doctest::Approx(std::pow(2.0, p / 2) * 2 / ((1 - eps) * p) *
                               std::pow(cut, -(1 - eps) * p / 2)));
    CHECK(t < previous);
    previous = t;
  }
  CHECK(lambda_head_bound(1e-3, 1.0, 1.0, p, eps) > 0.0);
  CHECK(lambda_head_bound(1e-4, 1.0, 1.0, p, eps) < lambda_head_bound(1e-3, 1.0, 1.0, p, eps));
}

TEST_CASE("phase average") {
  boost::math::quadrature::tanh_sinh<double> q;
  for (double qq : {0.5, 1.25, 3.0}) {
    for (double a : {0.0, 0.3, 0.9, 1.0}) {
      const double ref =
          q.integrate([&](double phi) { return std::pow(1 - a * std::cos(phi), qq); }, 0.0, pi) /
          pi;
      CHECK(phase_average(a, qq) == doctest::Approx(ref).epsilon(1e-11));
    }
    CHECK(phase_average_at_one(qq) == doctest::Approx(phase_average(1.0, qq)).epsilon(1e-11));
  }
}

TEST_CASE("Koranyi ball volume and ball integrals") {
  CHECK(koranyi_ball_volume(1) == doctest::Approx(pi * pi / 2).epsilon(1e-13));
  CHECK(koranyi_ball_volume(2) == doctest::Approx(2 * pi * pi / 3).epsilon(1e-13));
  for (int n = 1; n <= 5; ++n) {
    CHECK(koranyi_ball_volume(n) == doctest::Approx(oracle::koranyi_ball_volume(n)).epsilon(1e-11));
  }
  CHECK(ball_integral_exact(2.0, 0.0, 2) ==
        doctest::Approx(koranyi_ball_volume(2) * std::pow(2.0, 6)).epsilon(1e-14));
  for (double r : {0.5, 1.0, 2.0}) {
    CHECK(ball_integral_exact(r, 5.0, 2) == doctest::Approx(4 * pi * pi * r).epsilon(1e-13));
  }
  // 1/p-th power scales as R^{1-eps}
  const double p = 2.5, eps = 0.5, beta = 1.9 * p;
  const double base = std::pow(ball_integral_exact(0.5, beta, 2), 1 / p);
  for (double r : {1.0, 2.0}) {
    CHECK(std::pow(ball_integral_exact(r, beta, 2), 1 / p) / base ==
          doctest::Approx(std::pow(r / 0.5, 1 - eps)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(ball_integral_exact(1.0, 6.0, 2), DomainError);
  CHECK_THROWS_AS(ball_integral_exact(0.0, 1.0, 2), DomainError);
  CHECK_THROWS_AS(koranyi_ball_volume(0), DomainError);
}

TEST_CASE("ball integral against a shell Monte Carlo oracle") {
  for (auto [n, beta] : {std::pair{1, 2.0}, {2, 5.0}, {2, 4.75}}) {
    for (double r : {0.5, 2.0}) {
      const auto mc = oracle::ball_integral_mc(r, beta, n, 400000, 5);
      const double exact = ball_integral_exact(r, beta, n);
      CAPTURE(n);
      CAPTURE(beta);
      CHECK(std::abs(mc.mean - exact) <= 4 * mc.std_error);
    }
  }
}

}
