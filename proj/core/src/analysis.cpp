#include "hsf/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include "hsf/errors.hpp"
#include "hsf/integrate.hpp"
#include "hsf/random.hpp"

namespace hsf {
namespace {

constexpr std::uint32_t kStreamPairs = 0x5100;
constexpr std::uint32_t kStreamCenters = 0x5200;
constexpr std::uint32_t kStreamSweepX = 0x5300;
constexpr std::uint32_t kStreamSweepY = 0x5301;
constexpr std::uint32_t kStreamVolume = 0x5400;
constexpr std::int64_t kVolumeChunk = 8192;
constexpr std::int64_t kMinHits = 100;

struct PairValues {
  double a = 0.0;
  double b = 0.0;
};

std::vector<std::pair<std::size_t, std::size_t>> all_pairs(std::size_t count) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(count * (count - 1) / 2);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) pairs.emplace_back(i, j);
  }
  return pairs;
}

std::vector<std::pair<std::size_t, std::size_t>> sampled_pairs(
    std::size_t count, std::size_t wanted, std::uint64_t seed) {
  std::set<std::pair<std::size_t, std::size_t>> chosen;
  std::uint64_t draw = 0;
  while (chosen.size() < wanted) {
    CounterRng rng(seed, kStreamPairs, draw++);
    auto i = static_cast<std::size_t>(rng.uniform() * static_cast<double>(count));
    auto j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(count));
    i = std::min(i, count - 1);
    j = std::min(j, count - 1);
    if (i == j) continue;
    chosen.emplace(std::min(i, j), std::max(i, j));
  }
  return {chosen.begin(), chosen.end()};
}

// Least-squares slope and intercept of ys against xs.
std::pair<double, double> fit_line(const std::vector<double>& xs,
                                   const std::vector<double>& ys) {
  const double count = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / count;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / count;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

// ||Q(g)|| on the Koranyi unit sphere of H_1 as a function of the angle
// phi = atan2(|w|, s) in [0, pi/2], tabulated and linearly interpolated.
// `margin` is ten times the largest relative interpolation error seen at
// the cell midpoints, which bounds how far the table may be trusted.
class SphereProfile {
 public:
  SphereProfile(const EmbeddingParams& params, std::size_t cells, double tol)
      : step_(0.5 * std::numbers::pi / static_cast<double>(cells)) {
    values_.resize(cells + 1);
    for (std::size_t i = 0; i <= cells; ++i) values_[i] = exact(params, i * step_, tol);
    double worst = 0.0;
    for (std::size_t i = 0; i < cells; ++i) {
      const double mid = (static_cast<double>(i) + 0.5) * step_;
      const double truth = exact(params, mid, tol);
      worst = std::max(worst, std::abs(interpolate(mid) - truth) / truth);
      min_ = std::min({min_, values_[i], truth});
      max_ = std::max({max_, values_[i], truth});
    }
    min_ = std::min(min_, values_.back());
    max_ = std::max(max_, values_.back());
    margin_ = std::max(10.0 * worst, 1e-6);
  }

  double interpolate(double phi) const {
    const double pos = std::clamp(phi / step_, 0.0,
                                  static_cast<double>(values_.size() - 1));
    const auto i = std::min(static_cast<std::size_t>(pos), values_.size() - 2);
    const double frac = pos - static_cast<double>(i);
    return values_[i] + frac * (values_[i + 1] - values_[i]);
  }
  double min() const { return min_; }
  double max() const { return max_; }
  double margin() const { return margin_; }

 private:
  static double exact(const EmbeddingParams& params, double phi, double tol) {
    return repr_norm(std::cos(phi), std::sin(phi), params, tol).value;
  }

  double step_;
  std::vector<double> values_;
  double min_ = std::numeric_limits<double>::infinity();
  double max_ = 0.0;
  double margin_ = 0.0;
};

struct VolumeCount {
  std::int64_t hits = 0;
  std::int64_t quadratures = 0;
};

}  // namespace

// ---------------------------------------------------------------------------

DistortionReport distortion_report(std::size_t count, const PairMetric& metric_a,
                                   const PairMetric& metric_b,
                                   const DistortionOptions& options) {
  if (count < 2) throw DomainError("distortion_report: need at least 2 points");
  const std::size_t total = count * (count - 1) / 2;
  const bool subsample = options.max_pairs != 0 && options.max_pairs < total;
  const auto pairs = subsample
                         ? sampled_pairs(count, options.max_pairs, options.seed)
                         : all_pairs(count);
  const auto values = parallel_map<PairValues>(
      pairs.size(), options.workers, [&](std::size_t k) {
        return PairValues{metric_a(pairs[k].first, pairs[k].second),
                          metric_b(pairs[k].first, pairs[k].second)};
      });

  DistortionReport report;
  report.label_a = options.label_a;
  report.label_b = options.label_b;
  report.point_count = count;
  report.subsampled = subsample;
  report.seed = options.seed;
  bool any = false;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (values[k].a == 0.0) {
      ++report.excluded_pairs;
      continue;
    }
    const WitnessPair w{pairs[k].first, pairs[k].second, values[k].a,
                        values[k].b, values[k].b / values[k].a};
    ++report.pair_count;
    if (!any || w.ratio < report.min_witness.ratio) report.min_witness = w;
    if (!any || w.ratio > report.max_witness.ratio) report.max_witness = w;
    any = true;
  }
  if (!any) throw DomainError("distortion_report: every pair was excluded");
  report.min_ratio = report.min_witness.ratio;
  report.max_ratio = report.max_witness.ratio;
  report.distortion = report.max_ratio / report.min_ratio;
  return report;
}

// ---------------------------------------------------------------------------

DoublingReport doubling_estimate(std::size_t count, const PairMetric& metric,
                                 std::span<const double> radii,
                                 std::span<const std::size_t> centers,
                                 const DoublingOptions& options) {
  if (count == 0) throw DomainError("doubling_estimate: empty point set");
  if (radii.empty() || centers.empty()) {
    throw DomainError("doubling_estimate: need radii and centers");
  }
  DoublingReport report;
  report.centers.assign(centers.begin(), centers.end());
  report.radii.assign(radii.begin(), radii.end());
  report.bound = options.bound;
  report.resolution = options.resolution;
  for (double r : radii) {
    if (!(r > 0.0)) throw DomainError("doubling_estimate: radii must be > 0");
    if (r < 2.0 * options.resolution) report.unreliable = true;
  }

  for (std::size_t center : centers) {
    if (center >= count) throw DomainError("doubling_estimate: bad center");
    std::vector<double> from_center(count);
    for (std::size_t j = 0; j < count; ++j) from_center[j] = metric(center, j);
    for (double r : radii) {
      DoublingTrial trial;
      trial.center = center;
      trial.radius = r;
      std::vector<std::size_t> ball;
      for (std::size_t j = 0; j < count; ++j) {
        if (from_center[j] <= 2.0 * r) ball.push_back(j);
      }
      trial.ball_size = ball.size();

      // Farthest-point cover, seeded with the center itself.
      std::vector<double> gap(ball.size());
      for (std::size_t k = 0; k < ball.size(); ++k) gap[k] = from_center[ball[k]];
      std::vector<std::size_t> cover{center};
      while (true) {
        const auto worst = std::max_element(gap.begin(), gap.end());
        if (worst == gap.end() || *worst <= r) break;
        const std::size_t next = ball[static_cast<std::size_t>(worst - gap.begin())];
        cover.push_back(next);
        for (std::size_t k = 0; k < ball.size(); ++k) {
          gap[k] = std::min(gap[k], metric(next, ball[k]));
        }
      }
      trial.covering = cover.size();
      trial.cover_verified = std::all_of(ball.begin(), ball.end(), [&](std::size_t j) {
        return std::any_of(cover.begin(), cover.end(),
                           [&](std::size_t c) { return metric(c, j) <= r; });
      });

      // Greedy 2r-separated set, scanning outwards from the center.
      std::vector<std::size_t> order = ball;
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return from_center[a] < from_center[b];
      });
      std::vector<std::size_t> packing;
      for (std::size_t j : order) {
        const bool separated = std::all_of(packing.begin(), packing.end(), [&](std::size_t a) {
          return metric(a, j) > 2.0 * r;
        });
        if (separated) packing.push_back(j);
      }
      trial.packing = packing.size();

      report.max_covering = std::max(report.max_covering, trial.covering);
      report.max_packing = std::max(report.max_packing, trial.packing);
      report.trials.push_back(trial);
    }
  }
  report.within_bound = static_cast<double>(report.max_covering) <= report.bound;
  return report;
}

std::vector<std::size_t> select_centers(std::size_t count, std::size_t k,
                                        std::uint64_t seed) {
  if (k > count) throw DomainError("select_centers: k exceeds the point count");
  std::vector<std::size_t> index(count);
  std::iota(index.begin(), index.end(), 0);
  for (std::size_t i = 0; i < k; ++i) {
    CounterRng rng(seed, kStreamCenters, i);
    const auto span = static_cast<double>(count - i);
    const auto pick = i + std::min(static_cast<std::size_t>(rng.uniform() * span),
                                   count - i - 1);
    std::swap(index[i], index[pick]);
  }
  index.resize(k);
  return index;
}

HeisenbergNet heisenberg_net(double h, double radius, std::size_t max_points) {
  if (!(h > 0.0) || !(radius > 0.0) || h > radius) {
    throw DomainError("heisenberg_net: need 0 < h <= radius");
  }
  HeisenbergNet net;
  net.h = h;
  const auto m = static_cast<std::int64_t>(std::floor(radius / h + 1e-9));
  const auto mw = static_cast<std::int64_t>(std::floor(radius * radius / (h * h) + 1e-9));
  const double limit = radius * (1.0 + 1e-12);
  for (std::int64_t i = -m; i <= m; ++i) {
    for (std::int64_t j = -m; j <= m; ++j) {
      for (std::int64_t k = -mw; k <= mw; ++k) {
        GroupPoint g(static_cast<double>(i) * h, static_cast<double>(j) * h,
                     static_cast<double>(k) * h * h);
        if (koranyi_norm(g) > limit) continue;
        if (net.points.size() == max_points) {
          throw BudgetExceeded("heisenberg_net: more than " +
                               std::to_string(max_points) + " points");
        }
        net.index.push_back({i, j, k});
        net.points.push_back(std::move(g));
      }
    }
  }
  return net;
}

NetReprMetric::NetReprMetric(const HeisenbergNet& net, EmbeddingParams params,
                             double tol)
    : net_(&net), params_(params), tol_(tol) {
  require_embedding_epsilon(params_);
}

double NetReprMetric::integral(std::int64_t a, std::int64_t b) const {
  const auto key = std::make_pair(a, b);
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  const double value = lambda_integral(static_cast<double>(a), static_cast<double>(b),
                                       params_.p, params_.epsilon, tol_)
                           .value;
  std::lock_guard lock(mutex_);
  cache_.emplace(key, value);
  return value;
}

double NetReprMetric::from_identity(std::int64_t i, std::int64_t j,
                                    std::int64_t k) const {
  const std::int64_t a = i * i + j * j;
  const std::int64_t b = k < 0 ? -k : k;
  if (a == 0 && b == 0) return 0.0;
  const std::int64_t g = std::gcd(a, b);
  const double kappa = 0.5 * (1.0 - params_.epsilon) * params_.p;
  // I(h^2 g a', h^2 g b') = (h^2 g)^kappa I(a', b')
  const double scaled = std::pow(net_->h * net_->h * static_cast<double>(g), kappa) *
                        integral(a / g, b / g);
  return std::pow(1.0 - params_.epsilon, 1.0 / params_.p) *
         std::pow(scaled, 1.0 / params_.p);
}

double NetReprMetric::operator()(std::size_t i, std::size_t j) const {
  const auto& x = net_->index[i];
  const auto& y = net_->index[j];
  // x^{-1} y in net units: w = w_y - w_x + 2 u_x v_y - 2 v_x u_y
  return from_identity(y[0] - x[0], y[1] - x[1],
                       y[2] - x[2] + 2 * x[0] * y[1] - 2 * x[1] * y[0]);
}

double NetReprMetric::resolution() const {
  return std::max(from_identity(1, 0, 0), from_identity(0, 0, 1));
}

std::size_t NetReprMetric::cache_size() const {
  std::lock_guard lock(mutex_);
  return cache_.size();
}

double image_doubling_bound(double epsilon) {
  return std::exp2(8.0 / (1.0 - epsilon));
}

// ---------------------------------------------------------------------------

SphereRange repr_sphere_range(const EmbeddingParams& params, std::size_t grid,
                              double tol) {
  if (grid < 2) throw DomainError("repr_sphere_range: grid must be >= 2");
  SphereRange range{std::numeric_limits<double>::infinity(), 0.0};
  for (std::size_t i = 0; i < grid; ++i) {
    const double phi = 0.5 * std::numbers::pi * static_cast<double>(i) /
                       static_cast<double>(grid - 1);
    const double d = repr_norm(std::cos(phi), std::sin(phi), params, tol).value;
    range.min = std::min(range.min, d);
    range.max = std::max(range.max, d);
  }
  return range;
}

MeasureRatioReport measure_ratio_check(const EmbeddingParams& params, double r,
                                       const MCConfig& config, double tol) {
  require_embedding_epsilon(params);
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw DomainError("measure_ratio_check: r must be > 0");
  }
  if (config.samples < 1) throw DomainError("measure_ratio_check: no samples");
  const SphereProfile profile(params, 1024, tol);
  const double snow = 1.0 - params.epsilon;
  // Safe lower bound for ||Q|| on the unit sphere, for the bounding box.
  const double floor_value = 0.9 * profile.min() * (1.0 - profile.margin());

  MeasureRatioReport report;
  report.radius = r;
  report.samples = config.samples;
  report.seed = config.seed;
  report.expected = std::exp2(4.0 / snow);

  auto volume = [&](double level, std::uint32_t stream, std::int64_t& hits,
                    std::int64_t& quadratures) {
    const double big = std::pow(level / floor_value, 1.0 / snow);
    const double box = 8.0 * big * big * big * big;  // [-R,R]^2 x [-R^2,R^2]
    const std::int64_t chunks = (config.samples + kVolumeChunk - 1) / kVolumeChunk;
    const auto parts = parallel_map<VolumeCount>(
        static_cast<std::size_t>(chunks), config.workers, [&](std::size_t c) {
          VolumeCount out;
          const std::int64_t begin = static_cast<std::int64_t>(c) * kVolumeChunk;
          const std::int64_t end = std::min(begin + kVolumeChunk, config.samples);
          for (std::int64_t i = begin; i < end; ++i) {
            CounterRng rng(config.seed, stream, static_cast<std::uint64_t>(i));
            const double u = big * (2.0 * rng.uniform() - 1.0);
            const double v = big * (2.0 * rng.uniform() - 1.0);
            const double w = big * big * (2.0 * rng.uniform() - 1.0);
            const double s = u * u + v * v;
            const double norm = std::sqrt(std::hypot(s, w));
            const double phi = std::atan2(std::abs(w), s);
            const double approx = std::pow(norm, snow) * profile.interpolate(phi);
            bool inside;
            if (std::abs(approx - level) > profile.margin() * level) {
              inside = approx <= level;
            } else {
              inside = repr_norm(s, w, params, tol).value <= level;
              ++out.quadratures;
            }
            if (inside) ++out.hits;
          }
          return out;
        });
    for (const auto& part : parts) {
      hits += part.hits;
      quadratures += part.quadratures;
    }
    if (hits < kMinHits) {
      throw ConvergenceError("measure_ratio_check: fewer than 100 hits in the "
                             "bounding box",
                             0.0, 0.0);
    }
    return box * static_cast<double>(hits) / static_cast<double>(config.samples);
  };

  report.volume_r = volume(r, kStreamVolume, report.hits_r, report.quadratures);
  report.volume_2r =
      volume(2.0 * r, kStreamVolume + 1, report.hits_2r, report.quadratures);
  report.ratio = report.volume_2r / report.volume_r;
  const double n = static_cast<double>(config.samples);
  const double p1 = static_cast<double>(report.hits_r) / n;
  const double p2 = static_cast<double>(report.hits_2r) / n;
  report.std_error =
      report.ratio * std::sqrt((1.0 - p1) / (n * p1) + (1.0 - p2) / (n * p2));
  return report;
}

// ---------------------------------------------------------------------------

SweepReport epsilon_sweep(std::span<const double> epsilons, double p,
                          const SweepSpec& spec) {
  if (epsilons.size() < 4) {
    throw DomainError("epsilon_sweep: need at least 4 epsilon values");
  }
  for (double eps : epsilons) {
    if (!(eps >= kMinEpsilon && eps <= 0.5)) {
      throw DomainError("epsilon_sweep: epsilons must lie in [1e-4, 1/2]");
    }
  }
  if (spec.pairs < 2) throw DomainError("epsilon_sweep: need at least 2 pairs");
  if (!(spec.radius > 0.0)) throw DomainError("epsilon_sweep: radius must be > 0");

  // Reduced invariants of x^{-1} y on the Koranyi unit sphere.
  std::vector<std::pair<double, double>> directions;
  directions.reserve(spec.pairs);
  for (std::size_t i = 0; i < spec.pairs; ++i) {
    CounterRng rx(spec.seed, kStreamSweepX, i);
    CounterRng ry(spec.seed, kStreamSweepY, i);
    std::array<double, 2> hx{}, hy{};
    const double tx = sample_koranyi_ball(rx, hx);
    const double ty = sample_koranyi_ball(ry, hy);
    const double rr = spec.radius;
    const GroupPoint x(rr * hx[0], rr * hx[1], rr * rr * tx);
    const GroupPoint y(rr * hy[0], rr * hy[1], rr * rr * ty);
    const GroupPoint g = multiply(inverse(x), y);
    const double norm = koranyi_norm(g);
    if (norm == 0.0) continue;
    directions.emplace_back(g.horizontal_norm_sq() / (norm * norm),
                            g.w() / (norm * norm));
  }

  SweepReport report;
  report.p = p;
  report.pairs = directions.size();
  report.seed = spec.seed;
  std::vector<double> xs, ys, sups;
  for (double eps : epsilons) {
    const EmbeddingParams params = params_from(p, eps);
    const auto values = parallel_map<QuadratureResult>(
        directions.size(), spec.workers, [&](std::size_t k) {
          return repr_norm(directions[k].first, directions[k].second, params,
                           spec.tol);
        });
    SweepRow row;
    row.epsilon = eps;
    row.sup_ratio = 0.0;
    row.inf_ratio = std::numeric_limits<double>::infinity();
    for (const auto& v : values) {
      row.sup_ratio = std::max(row.sup_ratio, v.value);
      row.inf_ratio = std::min(row.inf_ratio, v.value);
      row.max_abs_error = std::max(row.max_abs_error, v.abs_error);
    }
    row.spread = row.sup_ratio / row.inf_ratio;
    xs.push_back(std::log(1.0 / eps));
    ys.push_back(std::log(row.spread));
    sups.push_back(std::log(row.sup_ratio));
    report.rows.push_back(row);
  }
  std::tie(report.slope, report.intercept) = fit_line(xs, ys);
  std::tie(report.sup_slope, report.sup_intercept) = fit_line(xs, sups);
  return report;
}

std::vector<double> dyadic_epsilons(int first, int last) {
  if (first < 1 || last < first) {
    throw DomainError("dyadic_epsilons: need 1 <= first <= last");
  }
  std::vector<double> out;
  for (int k = first; k <= last; ++k) out.push_back(std::exp2(-k));
  return out;
}

// ---------------------------------------------------------------------------

double ln_analytic_sum(int n, double p, double epsilon) {
  if (n < 1) throw DomainError("ln_analytic_sum: n must be >= 1");
  const double exponent = -1.0 - 0.5 * epsilon * p;
  const auto terms = static_cast<std::int64_t>(n) * n;
  double sum = 0.0;
  for (std::int64_t k = terms; k >= 1; --k) {
    sum += std::pow(static_cast<double>(k), exponent);
  }
  return sum;
}

double ln_integral_comparison(int n, double p, double epsilon) {
  if (n < 1) throw DomainError("ln_integral_comparison: n must be >= 1");
  const double ep = epsilon * p;
  return 2.0 / ep * (1.0 - std::pow(static_cast<double>(n), -ep));
}

LnInequalityReport ln_inequality_eval(int n, const EmbeddingParams& params,
                                      double tol, std::size_t budget) {
  if (n < 1) throw DomainError("ln_inequality_eval: n must be >= 1");
  require_embedding_epsilon(params);
  LnInequalityReport report;
  report.n = n;
  report.p = params.p;
  report.epsilon = params.epsilon;
  const auto sizes = ball_sizes(21 * n, budget);
  report.ball_n = sizes[static_cast<std::size_t>(n)];
  report.ball_21n = sizes.back();

  const double p = params.p;
  double sum = 0.0;
  double rel = 0.0;
  const std::int64_t terms = static_cast<std::int64_t>(n) * n;
  for (std::int64_t k = 1; k <= terms; ++k) {
    // c^k maps to (0, 0, -4k)
    const auto d = repr_norm(0.0, -4.0 * static_cast<double>(k), params, tol);
    const double term = std::pow(d.value, p) / std::pow(static_cast<double>(k), 1.0 + 0.5 * p);
    if (k == 1) report.first_term = static_cast<double>(report.ball_n) * term;
    sum += term;
    rel = std::max(rel, p * d.abs_error / d.value);
  }
  report.lhs = static_cast<double>(report.ball_n) * sum;
  double generators = 0.0;
  for (const auto& g : {kGeneratorA, kGeneratorB}) {
    const GroupPoint image = lattice_to_continuous(g);
    const auto d = repr_norm(image.horizontal_norm_sq(), image.w(), params, tol);
    generators += std::pow(d.value, p);
    rel = std::max(rel, p * d.abs_error / d.value);
  }
  report.rhs_proxy = static_cast<double>(report.ball_21n) * generators;
  report.analytic_sum = ln_analytic_sum(n, p, params.epsilon);
  report.integral_comparison = ln_integral_comparison(n, p, params.epsilon);
  report.rel_error = rel;
  return report;
}

}  // namespace hsf
