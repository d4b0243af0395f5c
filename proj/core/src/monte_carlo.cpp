#include "hsf/monte_carlo.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "hsf/errors.hpp"
#include "hsf/integrate.hpp"

namespace hsf {
namespace {

constexpr std::int64_t kChunk = 8192;
constexpr std::uint32_t kStreamChoice = 0x4b00;
constexpr std::uint32_t kStreamDirection = 0x4b01;
constexpr double kDelta = 0.01;
constexpr double kWeightCenter = 0.4;
constexpr double kWeightShifted = 0.4;
constexpr double kWeightTail = 0.2;
constexpr double kCoreRadius = 2.0;
// Beyond this radius the shifted component cannot reach (N(x) = 1), and the
// scale-free evaluation below is used.
constexpr double kFarRadius = 4.0;

using Horizontal = std::array<double, 2 * kMaxKernelN>;

double sq(double x) { return x * x; }

// Everything that does not depend on the sample, in the frame N(x) = 1.
struct KernelSampler {
  int n = 0;
  int dim = 0;  // 2n
  double p = 0.0;
  double alpha = 0.0;
  double q_dim = 0.0;  // 2n + 2
  double beta_core = 0.0;
  double log_z_core = 0.0;
  double log_z_tail = 0.0;
  double tail_exponent = 0.0;  // eps p
  double limit = std::numeric_limits<double>::infinity();  // ball radius
  Horizontal xh{};  // (u, v) of x
  double xc = 0.0;  // w of x
  double xh_sq = 0.0;

  // |T(z)|^p / density(z) for a sample at z = (zh, t) with N(z) = rho.
  double weight_near(const Horizontal& zh, double t, double rho) const {
    if (rho >= limit) return 0.0;
    double a = 0.0, dot = 0.0, twist = 0.0;
    for (int i = 0; i < n; ++i) {
      // <a, v> - <b, u> with x = (a, b, c)
      twist += xh[i] * zh[n + i] - xh[n + i] * zh[i];
    }
    for (int i = 0; i < dim; ++i) {
      a += zh[i] * zh[i];
      dot += xh[i] * zh[i];
    }
    const double da = xh_sq - 2.0 * dot;
    const double shift = -xc + 2.0 * twist;  // w(x^{-1} z) - w(z)
    const double n4 = a * a + t * t;
    const double d = da * (2.0 * a + da) + shift * (2.0 * t + shift);
    double kernel;
    double rho_shifted;
    if (std::abs(d) <= 0.5 * n4) {
      const double ratio = d / n4;
      kernel = std::pow(rho, -alpha) *
               std::expm1(-0.25 * alpha * std::log1p(ratio));
      rho_shifted = rho * std::pow(1.0 + ratio, 0.25);
    } else {
      double a_shifted = 0.0;
      for (int i = 0; i < dim; ++i) a_shifted += sq(zh[i] - xh[i]);
      rho_shifted = std::sqrt(std::hypot(a_shifted, t + shift));
      if (rho_shifted == 0.0 || rho == 0.0) return 0.0;  // null event
      kernel = std::pow(rho_shifted, -alpha) - std::pow(rho, -alpha);
    }
    double density = 0.0;
    if (rho < kCoreRadius) {
      density += kWeightCenter * std::exp(-beta_core * std::log(rho) - log_z_core);
    }
    if (rho_shifted < kCoreRadius) {
      density += kWeightShifted *
                 std::exp(-beta_core * std::log(rho_shifted) - log_z_core);
    }
    if (rho > kCoreRadius) {
      density += kWeightTail * std::exp(-(alpha + 1.0) * p * std::log(rho) -
                                        log_z_tail);
    }
    return std::pow(std::abs(kernel), p) / density;
  }

  // Tail sample z = delta_{1/r}(omega) with r < 1/kFarRadius. Only the tail
  // component has mass there; all terms are written in powers of r so that
  // nothing overflows when rho = 1/r is astronomically large.
  double weight_far(const Horizontal& omega, double tau, double r) const {
    if (r * limit <= 1.0) return 0.0;  // rho = 1/r >= limit
    double a_omega = 0.0, g = 0.0, twist = 0.0;
    for (int i = 0; i < n; ++i) {
      twist += xh[i] * omega[n + i] - xh[n + i] * omega[i];
    }
    for (int i = 0; i < dim; ++i) {
      a_omega += omega[i] * omega[i];
      g += xh[i] * omega[i];
    }
    const double e1 = r * xh_sq - 2.0 * g;
    const double e2 = 2.0 * twist - xc * r;
    const double slope =
        e1 * (2.0 * a_omega + r * e1) + e2 * (2.0 * tau + r * e2);
    // |T|^p / (w_tail rho^{-(alpha+1)p} / Z_tail) = |rho E|^p Z_tail / w_tail
    double scaled;
    if (r > 1e-280) {
      scaled = std::expm1(-0.25 * alpha * std::log1p(r * slope)) / r;
    } else {
      scaled = -0.25 * alpha * slope;
    }
    return std::pow(std::abs(scaled), p) * std::exp(log_z_tail) / kWeightTail;
  }

  double sample_weight(std::uint64_t seed, std::uint64_t index) const {
    CounterRng choice(seed, kStreamChoice, index);
    CounterRng direction(seed, kStreamDirection, index);
    const double pick = choice.uniform();
    const double u = choice.uniform();
    Horizontal omega{};
    const double tau =
        sample_koranyi_sphere(direction, std::span(omega.data(), dim));
    if (pick < kWeightCenter + kWeightShifted) {
      const double rho0 = kCoreRadius * std::pow(u, 1.0 / (q_dim - beta_core));
      Horizontal zh{};
      for (int i = 0; i < dim; ++i) zh[i] = rho0 * omega[i];
      double t = rho0 * rho0 * tau;
      if (pick >= kWeightCenter) {
        // left translation z = x z0
        double twist = 0.0;
        for (int i = 0; i < n; ++i) {
          twist += xh[i] * zh[n + i] - xh[n + i] * zh[i];
        }
        t += xc - 2.0 * twist;
        for (int i = 0; i < dim; ++i) zh[i] += xh[i];
      }
      double a = 0.0;
      for (int i = 0; i < dim; ++i) a += zh[i] * zh[i];
      return weight_near(zh, t, std::sqrt(std::hypot(a, t)));
    }
    // rho = 2 u^{-1/(eps p)}, kept as r = 1/rho
    const double r = 0.5 * std::exp(std::log(u) / tail_exponent);
    if (r < 1.0 / kFarRadius) return weight_far(omega, tau, r);
    const double rho = 1.0 / r;
    Horizontal zh{};
    for (int i = 0; i < dim; ++i) zh[i] = rho * omega[i];
    return weight_near(zh, rho * rho * tau, rho);
  }
};

KernelSampler make_sampler(const GroupPoint& x, const EmbeddingParams& params,
                           double k, const MCConfig& config) {
  if (params.n < 1 || params.n > kMaxKernelN) {
    throw DomainError("kernel sampler: n must lie in [1, 16]");
  }
  if (config.samples < kMinKernelSamples) {
    throw DomainError("kernel sampler: need at least 10^4 samples");
  }
  GroupPoint y = x;
  if (y.dim() == 1 && params.n > 1) y = embed_h1(y, params.n);
  if (static_cast<int>(y.dim()) != params.n) {
    throw DomainError("kernel sampler: point dimension does not match n");
  }
  const double norm = koranyi_norm(y);
  if (norm == 0.0) throw DomainError("kernel sampler: x is the identity");
  y = dilate(1.0 / norm, y);

  KernelSampler s;
  s.n = params.n;
  s.dim = 2 * params.n;
  s.p = params.p;
  s.alpha = params.alpha;
  s.q_dim = params.homogeneous_dim();
  s.beta_core = params.alpha * params.p - kDelta;
  s.log_z_core = std::log(ball_integral_exact(kCoreRadius, s.beta_core, s.n));
  s.tail_exponent = params.epsilon * params.p;
  s.log_z_tail = std::log(koranyi_ball_volume(s.n) * s.q_dim) -
                 s.tail_exponent * std::log(kCoreRadius) -
                 std::log(s.tail_exponent);
  s.limit = k;
  for (int i = 0; i < s.n; ++i) {
    s.xh[i] = y.u()[i];
    s.xh[s.n + i] = y.v()[i];
  }
  s.xc = y.w();
  for (int i = 0; i < s.dim; ++i) s.xh_sq += s.xh[i] * s.xh[i];
  return s;
}

MCEstimate run_sampler(const KernelSampler& sampler, double norm,
                       const EmbeddingParams& params, const MCConfig& config) {
  const std::int64_t chunks = (config.samples + kChunk - 1) / kChunk;
  const auto parts = parallel_map<RunningStats>(
      static_cast<std::size_t>(chunks), config.workers, [&](std::size_t c) {
        RunningStats stats;
        const std::int64_t begin = static_cast<std::int64_t>(c) * kChunk;
        const std::int64_t end = std::min(begin + kChunk, config.samples);
        for (std::int64_t i = begin; i < end; ++i) {
          stats.add(sampler.sample_weight(config.seed,
                                          static_cast<std::uint64_t>(i)));
        }
        return stats;
      });
  RunningStats total;
  for (const auto& part : parts) total.merge(part);
  const double scale = std::pow(norm, params.integrability_margin());
  MCEstimate out;
  out.mean = total.mean * scale;
  out.std_error = total.std_error() * scale;
  out.samples = config.samples;
  out.seed = config.seed;
  return out;
}

double koranyi_norm_of(const GroupPoint& x, const EmbeddingParams& params) {
  GroupPoint y = x;
  if (y.dim() == 1 && params.n > 1) y = embed_h1(y, params.n);
  return koranyi_norm(y);
}

}  // namespace

void RunningStats::merge(const RunningStats& other) noexcept {
  if (other.count == 0) return;
  if (count == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(count);
  const double nb = static_cast<double>(other.count);
  const double delta = other.mean - mean;
  const double total = na + nb;
  mean += delta * nb / total;
  m2 += other.m2 + delta * delta * na * nb / total;
  count += other.count;
}

double RunningStats::std_error() const noexcept {
  if (count < 2) return 0.0;
  const double n = static_cast<double>(count);
  return std::sqrt(m2 / (n - 1.0) / n);
}

double sample_koranyi_ball(CounterRng& rng, std::span<double> horizontal) {
  const std::size_t dim = horizontal.size();
  while (true) {
    double norm_sq = 0.0;
    for (auto& h : horizontal) {
      h = rng.normal();
      norm_sq += h * h;
    }
    if (norm_sq == 0.0) continue;
    const double radius =
        std::pow(rng.uniform(), 1.0 / static_cast<double>(dim)) /
        std::sqrt(norm_sq);
    double a = 0.0;
    for (auto& h : horizontal) {
      h *= radius;
      a += h * h;
    }
    const double t = 2.0 * rng.uniform() - 1.0;
    if (a * a + t * t <= 1.0) return t;
  }
}

double sample_koranyi_sphere(CounterRng& rng, std::span<double> horizontal) {
  while (true) {
    const double t = sample_koranyi_ball(rng, horizontal);
    double a = 0.0;
    for (double h : horizontal) a += h * h;
    const double norm = std::sqrt(std::hypot(a, t));
    if (norm == 0.0) continue;
    const double inv = 1.0 / norm;
    for (auto& h : horizontal) h *= inv;
    return t * inv * inv;
  }
}

MCEstimate mc_kernel_norm(const GroupPoint& x, const EmbeddingParams& params,
                          const MCConfig& config) {
  const KernelSampler sampler = make_sampler(
      x, params, std::numeric_limits<double>::infinity(), config);
  return run_sampler(sampler, koranyi_norm_of(x, params), params, config);
}

MCEstimate mc_kernel_norm_ball(const GroupPoint& x, double k,
                               const EmbeddingParams& params,
                               const MCConfig& config) {
  if (!(k >= 1.0 / 3.0)) {
    throw DomainError("mc_kernel_norm_ball: K must be >= 1/3");
  }
  const KernelSampler sampler = make_sampler(x, params, k, config);
  return run_sampler(sampler, koranyi_norm_of(x, params), params, config);
}

}  // namespace hsf
