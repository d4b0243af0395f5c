#pragma once

#include <cstddef>
#include <span>

#include "hsf/heisenberg.hpp"
#include "hsf/integrate.hpp"
#include "hsf/monte_carlo.hpp"

namespace hsf {

/// The embeddings are evaluated for epsilon in [1e-4, 1 - 1e-4] only.
inline constexpr double kMinEpsilon = 1e-4;
/// Throws DomainError when params.epsilon is outside that window.
void require_embedding_epsilon(const EmbeddingParams& params);

/// T(x)(z) = N(x^{-1} z)^{-alpha} - N(z)^{-alpha}. Returns +inf at z = x,
/// -inf at z = identity (x not the identity) and 0 when x is the identity.
double kernel_eval(const GroupPoint& x, const GroupPoint& z,
                   const EmbeddingParams& params);

/// z -> T(x)(z), evaluated lazily.
class KernelFunction {
 public:
  KernelFunction(GroupPoint x, EmbeddingParams params)
      : x_(std::move(x)), params_(params) {}

  double operator()(const GroupPoint& z) const {
    return kernel_eval(x_, z, params_);
  }
  const GroupPoint& basepoint() const noexcept { return x_; }
  const EmbeddingParams& params() const noexcept { return params_; }
  /// Scalar p (1 - eps)^{1/p} turning T into S.
  double scale() const;

 private:
  GroupPoint x_;
  EmbeddingParams params_;
};

/// Analytic bracket for ||T(x)||_p^p at N(x) = 1:
///   lower = (1 - 2^{-alpha})^p int_{B_N(0,1/3)} N^{-alpha p},
///   upper = 2^{p-1}(int_{B_N(0,2)} N^{-alpha p} + int_{B_N(0,3)} N^{-alpha p})
///           + alpha^p int_{N > 2} (N - 1)^{-(alpha+1)p}.
/// Both scale by N(x)^{(1-eps)p}.
struct KernelEnvelope {
  double lower = 0.0;
  double upper = 0.0;
};
KernelEnvelope kernel_norm_envelope(const EmbeddingParams& params);

/// ||S(x) - S(y)||_p = p (1-eps)^{1/p} ||T(y^{-1} x)||_p by Monte Carlo, with
/// a delta-method standard error. The argument is canonicalized between
/// y^{-1}x and its inverse, so the result is exactly symmetric.
MCEstimate kernel_distance(const GroupPoint& x, const GroupPoint& y,
                           const EmbeddingParams& params,
                           const MCConfig& config);

/// ||Q(x) - Q(y)||_p = (1-eps)^{1/p} I(s, w)^{1/p} at (u, v, w) = x^{-1} y,
/// s = |u|^2 + |v|^2. `tol` is the relative tolerance of I.
QuadratureResult repr_distance(const GroupPoint& x, const GroupPoint& y,
                               const EmbeddingParams& params,
                               double tol = kDefaultQuadratureTol);

/// Same as repr_distance(identity, g) from the reduced invariants of g.
QuadratureResult repr_norm(double s, double w, const EmbeddingParams& params,
                           double tol = kDefaultQuadratureTol);

/// The two structural terms of the two-sided estimate for ||Q(g)||:
///   term_uv = (eps^{-1/p} + (1-eps)^{-1/p}) (|u|^2+|v|^2)^{(1-eps)/2},
///   term_w  = |w|^{(1-eps)/2} / (1-eps)^{1/p}.
struct ReprEnvelope {
  double term_uv = 0.0;
  double term_w = 0.0;
};
ReprEnvelope repr_envelope(const GroupPoint& g, const EmbeddingParams& params);

/// Grid for the Schrodinger pairing oracle on [-half_width, half_width].
/// half_width = 0 selects 8 + 2 sqrt(lambda)(|u|+|v|) + 4.
struct GridSpec {
  double half_width = 0.0;
  double spacing = 0.005;
};

/// ||g - sigma_lambda(u,v,w) g||_2^2 for the Gaussian g(x) = e^{-x^2/2} on R,
/// with (sigma_lambda(u,v,w) g)(x) = e^{i lambda (w - 2uv) + 2i sqrt(lambda) v x}
/// g(x - 2 sqrt(lambda) u), by the trapezoid rule. Throws DomainError when
/// the grid is coarser than 0.01 or narrower than 8 + 2 sqrt(lambda)(|u|+|v|).
double schrodinger_pairing_oracle(double lambda, double u, double v, double w,
                                  const GridSpec& grid = {});

/// 2 sqrt(pi) (1 - e^{-lambda s} cos(lambda w)) with s = u^2 + v^2.
double schrodinger_pairing_closed_form(double lambda, double s, double w);

}  // namespace hsf
