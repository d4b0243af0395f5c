#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "hsf/analysis.hpp"
#include "hsf/errors.hpp"

using namespace hsf;

namespace {

std::vector<GroupPoint> xn_points(std::size_t n) {
  std::vector<GroupPoint> out;
  for (const auto& g : build_xn(n).elements) out.push_back(lattice_to_continuous(g));
  return out;
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("distortion of trivial pairs of metrics") {
  const auto pts = xn_points(30);
  PairMetric d = [&](std::size_t i, std::size_t j) { return koranyi_distance(pts[i], pts[j]); };
  PairMetric d3 = [&](std::size_t i, std::size_t j) { return 3 * d(i, j); };
  CHECK(distortion_report(pts.size(), d, d).distortion == doctest::Approx(1.0));
  const auto scaled = distortion_report(pts.size(), d, d3);
  CHECK(scaled.distortion == doctest::Approx(1.0));
  CHECK(scaled.min_ratio == doctest::Approx(3.0));
  CHECK(scaled.pair_count == 30 * 29 / 2);
  CHECK_THROWS_AS(distortion_report(1, d, d), DomainError);
}

TEST_CASE("distortion of the representation embedding on X_100") {
  const auto params = params_from(2.5, 0.5);
  const auto pts = xn_points(100);
  PairMetric snow = [&](std::size_t i, std::size_t j) {
    return std::sqrt(koranyi_distance(pts[i], pts[j]));
  };
  PairMetric repr = [&](std::size_t i, std::size_t j) {
    return repr_distance(pts[i], pts[j], params).value;
  };
  DistortionOptions options;
  options.workers = 2;
  const auto report = distortion_report(pts.size(), snow, repr, options);
  CHECK(report.pair_count == 4950);
  CHECK(report.excluded_pairs == 0);
  CHECK(report.distortion >= 1.0);
  // witnesses reproduce the extremes
  const auto& lo = report.min_witness;
  CHECK(repr(lo.i, lo.j) / snow(lo.i, lo.j) == report.min_ratio);
  const auto& hi = report.max_witness;
  CHECK(repr(hi.i, hi.j) / snow(hi.i, hi.j) == report.max_ratio);
  // regression baseline
  CHECK(report.distortion == doctest::Approx(1.1078307701827772).epsilon(1e-9));

  // seeded subsample
  options.max_pairs = 500;
  options.seed = 3;
  const auto sub = distortion_report(pts.size(), snow, repr, options);
  CHECK(sub.subsampled);
  CHECK(sub.pair_count == 500);
  CHECK(sub.distortion <= report.distortion);
  CHECK(distortion_report(pts.size(), snow, repr, options).min_ratio == sub.min_ratio);
}

TEST_CASE("coincident points are excluded and counted") {
  const std::vector<double> xs{0.0, 1.0, 1.0, 3.0};
  PairMetric d = [&](std::size_t i, std::size_t j) { return std::abs(xs[i] - xs[j]); };
  const auto r = distortion_report(xs.size(), d, d);
  CHECK(r.excluded_pairs == 1);
  CHECK(r.pair_count == 5);
}

TEST_CASE("doubling on a Euclidean grid") {
  std::vector<std::pair<double, double>> grid;
  for (int i = 0; i <= 40; ++i)
    for (int j = 0; j <= 40; ++j) grid.emplace_back(i / 40.0, j / 40.0);
  PairMetric d = [&](std::size_t a, std::size_t b) {
    return std::hypot(grid[a].first - grid[b].first, grid[a].second - grid[b].second);
  };
  PairMetric d5 = [&](std::size_t a, std::size_t b) { return 5 * d(a, b); };
  const std::vector<double> radii{0.1, 0.2};
  const auto centers = select_centers(grid.size(), 6, 1);
  DoublingOptions options;
  options.resolution = 0.025;
  options.bound = 64;
  const auto report = doubling_estimate(grid.size(), d, radii, centers, options);
  CHECK_FALSE(report.unreliable);
  CHECK(report.within_bound);
  for (const auto& t : report.trials) {
    CHECK(t.cover_verified);
    CHECK(t.packing <= t.covering);
    CHECK(t.covering <= 32);
  }
  const std::vector<double> radii5{0.5, 1.0};
  options.resolution = 0.125;
  const auto scaled = doubling_estimate(grid.size(), d5, radii5, centers, options);
  CHECK(scaled.max_covering == report.max_covering);
  CHECK(scaled.max_packing == report.max_packing);

  options.resolution = 0.1;
  CHECK(doubling_estimate(grid.size(), d, radii, centers, options).unreliable);
}

TEST_CASE("centers") {
  const auto c = select_centers(100, 10, 4);
  CHECK(c.size() == 10);
  CHECK(std::set<std::size_t>(c.begin(), c.end()).size() == 10);
  CHECK(c == select_centers(100, 10, 4));
  CHECK_THROWS_AS(select_centers(5, 6, 0), DomainError);
}

TEST_CASE("Heisenberg net and its image metric") {
  const auto net = heisenberg_net(0.25);
  for (const auto& x : net.points) CHECK(koranyi_norm(x) <= 1.0 + 1e-12);
  const auto params = params_from(2.5, 0.5);
  const NetReprMetric metric(net, params);
  std::mt19937_64 rng(61);
  std::uniform_int_distribution<std::size_t> pick(0, net.points.size() - 1);
  for (int k = 0; k < 300; ++k) {
    const std::size_t i = pick(rng), j = pick(rng);
    const double direct = repr_distance(net.points[i], net.points[j], params, 1e-9).value;
    CHECK(metric(i, j) == doctest::Approx(direct).epsilon(1e-6));
  }
  CHECK(metric.resolution() ==
        doctest::Approx(std::max(repr_distance({0, 0, 0}, {0.25, 0, 0}, params).value,
                                 repr_distance({0, 0, 0}, {0, 0, 0.0625}, params).value))
            .epsilon(1e-6));
  CHECK(metric.cache_size() > 0);
  CHECK_THROWS_AS(heisenberg_net(0.01, 1.0, 1000), BudgetExceeded);
  CHECK(image_doubling_bound(0.5) == 65536.0);
}

TEST_CASE("image doubling stays below the bound") {
  for (double eps : {0.25, 0.5}) {
    const auto params = params_from(2.5, eps);
    const auto net = heisenberg_net(0.125);
    const NetReprMetric metric(net, params);
    const std::vector<double> radii{2 * metric.resolution()};
    const auto centers = select_centers(net.points.size(), 2, 7);
    DoublingOptions options;
    options.resolution = metric.resolution();
    options.bound = image_doubling_bound(eps);
    const auto report = doubling_estimate(
        net.points.size(), [&](std::size_t i, std::size_t j) { return metric(i, j); }, radii,
        centers, options);
    CHECK(report.within_bound);
    for (const auto& t : report.trials) CHECK(t.cover_verified);
  }
}

TEST_CASE("measure ratio") {
  const auto half = measure_ratio_check(params_from(2.5, 0.5), 1.0, MCConfig{200000, 7, 1});
  CHECK(half.expected == 256.0);
  CHECK(std::abs(half.ratio / 256.0 - 1) < 0.1);
  const auto quarter = measure_ratio_check(params_from(2.5, 0.25), 1.0, MCConfig{200000, 7, 1});
  CHECK(std::abs(quarter.ratio / std::pow(2.0, 16.0 / 3) - 1) < 0.1);
  for (double r : {0.5, 2.0}) {
    const auto other = measure_ratio_check(params_from(2.5, 0.5), r, MCConfig{200000, 8, 1});
    CHECK(std::abs(other.ratio - half.ratio) <= 3 * std::hypot(other.std_error, half.std_error));
  }
  CHECK_THROWS_AS(measure_ratio_check(params_from(2.5, 0.5), 1.0, MCConfig{200, 7, 1}),
                  ConvergenceError);
}

TEST_CASE("sphere range") {
  const auto params = params_from(2.0, 0.5);
  const auto range = repr_sphere_range(params);
  const double vertical = repr_norm(0.0, 1.0, params).value;
  const double horizontal = repr_norm(1.0, 0.0, params).value;
  CHECK(range.min <= std::min(vertical, horizontal) + 1e-12);
  CHECK(range.max >= std::max(vertical, horizontal) - 1e-12);
}

TEST_CASE("epsilon sweep") {
  const auto eps = dyadic_epsilons(2, 7);
  CHECK(eps.size() == 6);
  CHECK(eps.front() == 0.25);
  SweepSpec spec;
  spec.pairs = 128;
  for (double p : {2.0, 2.5, 4.0}) {
    const auto report = epsilon_sweep(eps, p, spec);
    CHECK(std::abs(report.slope - 1 / p) <= 0.2);
    CHECK(std::abs(report.sup_slope - 1 / p) <= 0.2);
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
      CHECK(report.rows[i].sup_ratio >= report.rows[i - 1].sup_ratio);
      CHECK(report.rows[i].inf_ratio >= 0.5 * report.rows[0].inf_ratio);
    }
  }
  CHECK_THROWS_AS(epsilon_sweep(dyadic_epsilons(2, 4), 2.0, spec), DomainError);
}

TEST_CASE("inequality (3) pieces") {
  // partial sums against the integral comparison: the gap tends to the
  // Euler-Mascheroni constant as eps p -> 0
  const double sum = ln_analytic_sum(32, 2.0, 0.125);
  const double integral = ln_integral_comparison(32, 2.0, 0.125);
  CHECK(sum == doctest::Approx(5.2229).epsilon(1e-4));
  CHECK(integral == doctest::Approx(2 / 0.25 * (1 - std::pow(32.0, -0.25))).epsilon(1e-14));
  CHECK(sum > integral);
  CHECK(sum <= integral + 1.0);

  const auto params = params_from(2.0, 0.25);
  const auto report = ln_inequality_eval(2, params);
  CHECK(report.ball_n == 17);
  const double d1 = repr_distance({0, 0, 0}, {0, 0, -4}, params).value;
  CHECK(report.first_term == doctest::Approx(17 * d1 * d1).epsilon(1e-9));
  double lhs = 0;
  for (int k = 1; k <= 4; ++k) {
    const double d = repr_distance({0, 0, 0}, {0, 0, -4.0 * k}, params).value;
    lhs += 17 * d * d / std::pow(k, 2.0);
  }
  CHECK(report.lhs == doctest::Approx(lhs).epsilon(1e-9));

  // rhs_proxy / lhs grows as eps shrinks
  double previous = 0;
  for (double e : {0.25, 0.125, 0.0625, 0.03125}) {
    const auto r = ln_inequality_eval(3, params_from(2.0, e));
    CHECK(r.rhs_proxy / r.lhs > previous);
    previous = r.rhs_proxy / r.lhs;
  }
}

}
