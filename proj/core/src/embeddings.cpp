#include "hsf/embeddings.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "hsf/errors.hpp"
#include "hsf/gauss_kronrod.hpp"

namespace hsf {
namespace {

// The tail integral of the upper envelope is done numerically up to this
// radius and bounded analytically beyond it.
constexpr double kEnvelopeCut = 1e4;

// g or g^{-1} = -g, whichever has a positive first nonzero coordinate.
GroupPoint canonical_representative(const GroupPoint& g) {
  for (double c : g.u()) {
    if (c != 0.0) return c > 0.0 ? g : inverse(g);
  }
  for (double c : g.v()) {
    if (c != 0.0) return c > 0.0 ? g : inverse(g);
  }
  return g.w() >= 0.0 ? g : inverse(g);
}

}  // namespace

void require_embedding_epsilon(const EmbeddingParams& params) {
  if (!(params.epsilon >= kMinEpsilon && params.epsilon <= 1.0 - kMinEpsilon)) {
    throw DomainError("epsilon must lie in [1e-4, 1 - 1e-4]");
  }
}

double kernel_eval(const GroupPoint& x, const GroupPoint& z,
                   const EmbeddingParams& params) {
  if (x.is_identity()) return 0.0;
  const double near = koranyi_distance(x, z);
  const double far = koranyi_norm(z);
  if (near == 0.0) return std::numeric_limits<double>::infinity();
  if (far == 0.0) return -std::numeric_limits<double>::infinity();
  return std::pow(near, -params.alpha) - std::pow(far, -params.alpha);
}

double KernelFunction::scale() const {
  return params_.p * std::pow(1.0 - params_.epsilon, 1.0 / params_.p);
}

KernelEnvelope kernel_norm_envelope(const EmbeddingParams& params) {
  const double p = params.p;
  const double alpha = params.alpha;
  const double beta = alpha * p;
  const double q_dim = params.homogeneous_dim();
  const int n = params.n;
  KernelEnvelope env;
  env.lower = std::pow(1.0 - std::pow(2.0, -alpha), p) *
              ball_integral_exact(1.0 / 3.0, beta, n);

  // int_2^inf (rho - 1)^{-(alpha+1)p} rho^{Q-1} drho, with rho - 1 = e^t
  const double decay = (alpha + 1.0) * p;
  auto radial = [&](double t) {
    return std::exp(t * (1.0 - decay)) * std::pow(1.0 + std::exp(t), q_dim - 1.0);
  };
  const auto body =
      quad::integrate(radial, 0.0, std::log(kEnvelopeCut - 1.0), 1e-10, 0.0);
  const double eps_p = params.epsilon * p;
  const double rest = std::pow(kEnvelopeCut / (kEnvelopeCut - 1.0), q_dim - 1.0) *
                      std::pow(kEnvelopeCut - 1.0, -eps_p) / eps_p;
  const double tail = std::pow(alpha, p) * koranyi_ball_volume(n) * q_dim *
                      (body.value + body.error + rest);
  env.upper = std::pow(2.0, p - 1.0) * (ball_integral_exact(2.0, beta, n) +
                                        ball_integral_exact(3.0, beta, n)) +
              tail;
  return env;
}

MCEstimate kernel_distance(const GroupPoint& x, const GroupPoint& y,
                           const EmbeddingParams& params,
                           const MCConfig& config) {
  require_embedding_epsilon(params);
  const GroupPoint g = multiply(inverse(y), x);
  MCEstimate out;
  out.seed = config.seed;
  if (g.is_identity()) return out;
  const MCEstimate norm_p =
      mc_kernel_norm(canonical_representative(g), params, config);
  const double scale = params.p * std::pow(1.0 - params.epsilon, 1.0 / params.p);
  out.samples = norm_p.samples;
  out.mean = scale * std::pow(norm_p.mean, 1.0 / params.p);
  out.std_error = norm_p.mean > 0.0
                      ? out.mean * norm_p.std_error / (params.p * norm_p.mean)
                      : 0.0;
  return out;
}

QuadratureResult repr_norm(double s, double w, const EmbeddingParams& params,
                           double tol) {
  require_embedding_epsilon(params);
  const QuadratureResult integral =
      lambda_integral(s, w, params.p, params.epsilon, tol);
  QuadratureResult out;
  out.evaluations = integral.evaluations;
  out.degenerate = integral.degenerate;
  if (integral.degenerate || integral.value <= 0.0) return out;
  const double inv_p = 1.0 / params.p;
  out.value = std::pow(1.0 - params.epsilon, inv_p) *
              std::pow(integral.value, inv_p);
  out.abs_error = out.value * inv_p * integral.abs_error / integral.value;
  return out;
}

QuadratureResult repr_distance(const GroupPoint& x, const GroupPoint& y,
                               const EmbeddingParams& params, double tol) {
  if (x.dim() != y.dim()) throw DomainError("repr_distance: points of different dimension");
  // x^{-1} y, arranged so that swapping x and y flips w exactly
  double s = 0.0, cross_a = 0.0, cross_b = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    const double du = y.u()[i] - x.u()[i];
    const double dv = y.v()[i] - x.v()[i];
    s += du * du + dv * dv;
    cross_a += x.u()[i] * y.v()[i];
    cross_b += x.v()[i] * y.u()[i];
  }
  const double w = (y.w() - x.w()) + 2.0 * (cross_a - cross_b);
  return repr_norm(s, w, params, tol);
}

ReprEnvelope repr_envelope(const GroupPoint& g, const EmbeddingParams& params) {
  require_embedding_epsilon(params);
  const double eps = params.epsilon;
  const double inv_p = 1.0 / params.p;
  const double half = 0.5 * (1.0 - eps);
  ReprEnvelope env;
  env.term_uv = (std::pow(eps, -inv_p) + std::pow(1.0 - eps, -inv_p)) *
                std::pow(g.horizontal_norm_sq(), half);
  env.term_w = std::pow(std::abs(g.w()), half) / std::pow(1.0 - eps, inv_p);
  return env;
}

double schrodinger_pairing_oracle(double lambda, double u, double v, double w,
                                  const GridSpec& grid) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("schrodinger_pairing_oracle: lambda must be > 0");
  }
  const double root = std::sqrt(lambda);
  const double needed = 8.0 + 2.0 * root * (std::abs(u) + std::abs(v));
  const double half_width =
      grid.half_width > 0.0 ? grid.half_width : needed + 4.0;
  if (half_width < needed) {
    throw DomainError("schrodinger_pairing_oracle: grid does not cover the "
                      "shifted Gaussian");
  }
  if (!(grid.spacing > 0.0) || grid.spacing > 0.01) {
    throw DomainError("schrodinger_pairing_oracle: spacing must be in (0, 0.01]");
  }
  const auto cells = static_cast<std::int64_t>(std::ceil(2.0 * half_width / grid.spacing));
  const double h = 2.0 * half_width / static_cast<double>(cells);
  const double shift = 2.0 * root * u;
  const double phase0 = lambda * (w - 2.0 * u * v);
  const double freq = 2.0 * root * v;
  double sum = 0.0;
  for (std::int64_t i = 0; i <= cells; ++i) {
    const double x = -half_width + h * static_cast<double>(i);
    const double g0 = std::exp(-0.5 * x * x);
    const double g1 = std::exp(-0.5 * (x - shift) * (x - shift));
    // |g0 - e^{i phi} g1|^2
    const double value =
        g0 * g0 + g1 * g1 - 2.0 * g0 * g1 * std::cos(phase0 + freq * x);
    sum += (i == 0 || i == cells) ? 0.5 * value : value;
  }
  return sum * h;
}

double schrodinger_pairing_closed_form(double lambda, double s, double w) {
  return 2.0 * std::sqrt(std::numbers::pi) *
         (1.0 - std::exp(-lambda * s) * std::cos(lambda * w));
}

}  // namespace hsf
