#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hsf {

/// Element (u, v, w) of the continuous Heisenberg group H_n, with
/// u, v in R^n and central coordinate w. The product is
///
///   (u,v,w)(u',v',w') = (u+u', v+v', w+w' - 2<u,v'> + 2<v,u'>).
///
/// Values are immutable; all coordinates are finite.
class GroupPoint {
 public:
  /// Identity of H_1.
  GroupPoint();
  GroupPoint(std::vector<double> u, std::vector<double> v, double w);
  /// Convenience constructor for H_1.
  GroupPoint(double u, double v, double w);

  static GroupPoint identity(std::size_t n);

  std::size_t dim() const noexcept { return u_.size(); }
  std::span<const double> u() const noexcept { return u_; }
  std::span<const double> v() const noexcept { return v_; }
  double w() const noexcept { return w_; }

  /// ||u||^2 + ||v||^2.
  double horizontal_norm_sq() const noexcept;
  bool is_identity() const noexcept;

  friend bool operator==(const GroupPoint&, const GroupPoint&) = default;

 private:
  std::vector<double> u_;
  std::vector<double> v_;
  double w_ = 0.0;
};

GroupPoint multiply(const GroupPoint& x, const GroupPoint& y);
GroupPoint inverse(const GroupPoint& x);
/// Heisenberg dilation (theta u, theta v, theta^2 w); theta > 0.
GroupPoint dilate(double theta, const GroupPoint& x);

inline GroupPoint operator*(const GroupPoint& x, const GroupPoint& y) {
  return multiply(x, y);
}

/// Koranyi gauge N(u,v,w) = ((|u|^2+|v|^2)^2 + w^2)^{1/4}.
double koranyi_norm(const GroupPoint& x);
/// Left-invariant metric d_N(x, y) = N(x^{-1} y).
double koranyi_distance(const GroupPoint& x, const GroupPoint& y);

/// Canonical homomorphism H_1 -> H_n padding u and v with zeros.
GroupPoint embed_h1(const GroupPoint& x, std::size_t n);

/// The largest absolute coordinate value.
double max_abs_coordinate(const GroupPoint& x);

// Interleaved coordinates x in R^{2n+1}: (x_1, ..., x_2n, x_{2n+1}) with
// product (pi(x)+pi(y), x_{2n+1}+y_{2n+1} - 2[pi(x),pi(y)]). The map
// u_j = x_{2j-1}, v_j = x_{2j}, w = x_{2n+1} is a group isomorphism onto the
// (u,v,w) model.

/// [a, b] = sum_j (a_{2j-1} b_{2j} - a_{2j} b_{2j-1}) for even-length a, b.
double symplectic_form(std::span<const double> a, std::span<const double> b);
/// Product of two interleaved points of equal odd length.
std::vector<double> interleaved_multiply(std::span<const double> x,
                                         std::span<const double> y);
GroupPoint from_interleaved(std::span<const double> x);
std::vector<double> to_interleaved(const GroupPoint& x);

/// Parameters shared by both embeddings: the target exponent p in [2, inf),
/// the snowflake defect epsilon in (0, 1), the ambient index n with
/// n <= p < n+1 and the kernel exponent alpha = (2n+2)/p - 1 + epsilon.
struct EmbeddingParams {
  double p = 2.5;
  double epsilon = 0.5;
  int n = 2;
  double alpha = 1.9;

  /// 2n + 2, the homogeneous dimension of H_n.
  double homogeneous_dim() const noexcept { return 2.0 * n + 2.0; }
  /// (2n+2) - alpha p, which equals (1 - epsilon) p.
  double integrability_margin() const noexcept {
    return homogeneous_dim() - alpha * p;
  }
  /// The statements about F_{eps,p} are made for epsilon in (0, 1/2].
  bool in_theorem_range() const noexcept {
    return epsilon > 0.0 && epsilon <= 0.5;
  }
};

/// Derives n and alpha from (p, epsilon). Throws DomainError when p < 2,
/// p is not finite, or epsilon is outside (0, 1).
EmbeddingParams params_from(double p, double epsilon);

}  // namespace hsf
