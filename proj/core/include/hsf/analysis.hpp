#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hsf/embeddings.hpp"
#include "hsf/heisenberg.hpp"
#include "hsf/lattice.hpp"
#include "hsf/monte_carlo.hpp"

namespace hsf {

/// Distance between points i and j of some indexed point set.
using PairMetric = std::function<double(std::size_t, std::size_t)>;

// ---------------------------------------------------------------------------
// Distortion

struct WitnessPair {
  std::size_t i = 0;
  std::size_t j = 0;
  double metric_a = 0.0;
  double metric_b = 0.0;
  double ratio = 0.0;  // metric_b / metric_a
};

struct DistortionReport {
  std::string label_a;
  std::string label_b;
  std::size_t point_count = 0;
  std::size_t pair_count = 0;
  /// Pairs with metric_a = 0, left out of the ratios.
  std::size_t excluded_pairs = 0;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  /// max_ratio / min_ratio.
  double distortion = 1.0;
  WitnessPair min_witness;
  WitnessPair max_witness;
  bool subsampled = false;
  std::uint64_t seed = 0;
};

struct DistortionOptions {
  std::string label_a = "a";
  std::string label_b = "b";
  /// 0 means every pair; otherwise a seeded uniform sample of distinct pairs.
  std::size_t max_pairs = 0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

/// Extremes of metric_b / metric_a over pairs i < j. Throws DomainError for
/// fewer than two points or when every pair is excluded.
DistortionReport distortion_report(std::size_t count, const PairMetric& metric_a,
                                   const PairMetric& metric_b,
                                   const DistortionOptions& options = {});

// ---------------------------------------------------------------------------
// Doubling

struct DoublingTrial {
  std::size_t center = 0;
  double radius = 0.0;
  /// Points of B(center, 2 radius).
  std::size_t ball_size = 0;
  /// Greedy farthest-point cover of that ball by radius-r balls.
  std::size_t covering = 0;
  /// Greedy 2r-separated subset of the ball; a lower bound for any cover.
  std::size_t packing = 0;
  /// Every ball point re-checked to lie within r of a cover center.
  bool cover_verified = false;
};

struct DoublingReport {
  std::vector<std::size_t> centers;
  std::vector<double> radii;
  std::vector<DoublingTrial> trials;
  std::size_t max_covering = 0;
  std::size_t max_packing = 0;
  /// Bound the covering numbers are compared with (infinity when none).
  double bound = std::numeric_limits<double>::infinity();
  bool within_bound = true;
  /// Largest nearest-neighbour spacing of the net in the metric.
  double resolution = 0.0;
  /// Set when some radius is below 2 * resolution.
  bool unreliable = false;
};

struct DoublingOptions {
  double resolution = 0.0;
  double bound = std::numeric_limits<double>::infinity();
};

DoublingReport doubling_estimate(std::size_t count, const PairMetric& metric,
                                 std::span<const double> radii,
                                 std::span<const std::size_t> centers,
                                 const DoublingOptions& options = {});

/// `k` distinct indices in [0, count), sampled without replacement.
std::vector<std::size_t> select_centers(std::size_t count, std::size_t k,
                                        std::uint64_t seed);

/// Lattice net of B_N(0, radius) in H_1 with spacing (h, h, h^2):
/// point (i, j, k) is (i h, j h, k h^2).
struct HeisenbergNet {
  double h = 0.0;
  std::vector<std::array<std::int64_t, 3>> index;
  std::vector<GroupPoint> points;
};

/// Requires h in (0, radius]; throws BudgetExceeded above `max_points`.
HeisenbergNet heisenberg_net(double h, double radius = 1.0,
                             std::size_t max_points = 2'000'000);

/// repr_distance restricted to a HeisenbergNet. x_i^{-1} x_j is again a net
/// vector, so I(s, w) is cached on the reduced integer pair
/// (|du|^2+|dv|^2, |dw|) / gcd and rescaled exactly. Thread-safe.
class NetReprMetric {
 public:
  NetReprMetric(const HeisenbergNet& net, EmbeddingParams params,
                double tol = 1e-7);

  double operator()(std::size_t i, std::size_t j) const;
  /// Distance from the identity to (i h, j h, k h^2).
  double from_identity(std::int64_t i, std::int64_t j, std::int64_t k) const;
  /// Largest distance to a nearest net neighbour: steps (h,0,0), (0,0,h^2).
  double resolution() const;
  std::size_t cache_size() const;

 private:
  double integral(std::int64_t a, std::int64_t b) const;

  const HeisenbergNet* net_;
  EmbeddingParams params_;
  double tol_;
  mutable std::mutex mutex_;
  mutable std::map<std::pair<std::int64_t, std::int64_t>, double> cache_;
};

/// The bound 2^{8/(1-eps)} on the doubling constant of the image.
double image_doubling_bound(double epsilon);

// ---------------------------------------------------------------------------
// Measure ratio

struct MeasureRatioReport {
  double ratio = 0.0;
  double std_error = 0.0;
  /// 2^{4/(1-eps)}
  double expected = 0.0;
  double radius = 0.0;
  double volume_r = 0.0;
  double volume_2r = 0.0;
  std::int64_t hits_r = 0;
  std::int64_t hits_2r = 0;
  std::int64_t samples = 0;
  /// Samples whose membership needed a quadrature.
  std::int64_t quadratures = 0;
  std::uint64_t seed = 0;
};

/// vol{q in H_1 : ||Q(q) - Q(e)|| <= 2r} / vol{... <= r}, each volume by
/// uniform sampling of its own bounding box (config.samples points each).
/// Throws ConvergenceError when a box gets fewer than 100 hits.
MeasureRatioReport measure_ratio_check(const EmbeddingParams& params, double r,
                                       const MCConfig& config,
                                       double tol = 1e-6);

/// Range of ||Q(g)|| over the Koranyi unit sphere of H_1, from a grid in
/// the angle atan2(|w|, |u|^2+|v|^2).
struct SphereRange {
  double min = 0.0;
  double max = 0.0;
};
SphereRange repr_sphere_range(const EmbeddingParams& params,
                              std::size_t grid = 129, double tol = 1e-8);

// ---------------------------------------------------------------------------
// Epsilon sweep

struct SweepSpec {
  std::size_t pairs = 256;
  /// Pairs are drawn uniformly from B_N(0, radius) in H_1.
  double radius = 10.0;
  std::uint64_t seed = 0;
  double tol = 1e-8;
  unsigned workers = 1;
};

struct SweepRow {
  double epsilon = 0.0;
  double sup_ratio = 0.0;
  double inf_ratio = 0.0;
  double spread = 0.0;  // sup / inf
  double max_abs_error = 0.0;  // largest quadrature error among the ratios
};

struct SweepReport {
  double p = 0.0;
  std::size_t pairs = 0;
  std::uint64_t seed = 0;
  std::vector<SweepRow> rows;
  /// Least-squares slope of log(spread) against log(1/eps).
  double slope = 0.0;
  double intercept = 0.0;
  /// Least-squares slope of log(sup_ratio) against log(1/eps).
  double sup_slope = 0.0;
  double sup_intercept = 0.0;
};

/// Ratio extremes of repr_distance / d_N^{1-eps} over one fixed pair sample
/// per epsilon. Requires at least 4 epsilons in [1e-4, 1/2].
SweepReport epsilon_sweep(std::span<const double> epsilons, double p,
                          const SweepSpec& spec = {});

/// The epsilons 2^{-first}, ..., 2^{-last}.
std::vector<double> dyadic_epsilons(int first, int last);

// ---------------------------------------------------------------------------
// Inequality (3) for f = Q on the lattice

/// sum_{k=1}^{n^2} k^{-1-eps p/2}.
double ln_analytic_sum(int n, double p, double epsilon);
/// The integral comparison (2/(eps p))(1 - n^{-eps p}).
double ln_integral_comparison(int n, double p, double epsilon);

struct LnInequalityReport {
  int n = 0;
  double p = 0.0;
  double epsilon = 0.0;
  std::size_t ball_n = 0;      // |B_n|
  std::size_t ball_21n = 0;    // |B_{21n}|
  /// |B_n| sum_k ||Q(c^k) - Q(e)||^p / k^{1+p/2}
  double lhs = 0.0;
  /// |B_{21n}| (||Q(a) - Q(e)||^p + ||Q(b) - Q(e)||^p)
  double rhs_proxy = 0.0;
  double analytic_sum = 0.0;
  double integral_comparison = 0.0;
  /// The k = 1 term of lhs.
  double first_term = 0.0;
  /// Relative quadrature error bound carried into lhs and rhs_proxy.
  double rel_error = 0.0;
};

LnInequalityReport ln_inequality_eval(int n, const EmbeddingParams& params,
                                      double tol = kDefaultQuadratureTol,
                                      std::size_t budget = kDefaultBallBudget);

}  // namespace hsf
