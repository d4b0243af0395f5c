#include "hsf/heisenberg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hsf/errors.hpp"

namespace hsf {
namespace {

void require_finite(std::span<const double> values, const char* what) {
  for (double value : values) {
    if (!std::isfinite(value)) {
      throw DomainError(std::string(what) + ": coordinates must be finite");
    }
  }
}

void require_same_dim(const GroupPoint& x, const GroupPoint& y) {
  if (x.dim() != y.dim()) {
    throw DomainError("Heisenberg points of different dimension: " +
                      std::to_string(x.dim()) + " vs " +
                      std::to_string(y.dim()));
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

}  // namespace

GroupPoint::GroupPoint() : u_(1, 0.0), v_(1, 0.0), w_(0.0) {}

GroupPoint::GroupPoint(std::vector<double> u, std::vector<double> v, double w)
    : u_(std::move(u)), v_(std::move(v)), w_(w) {
  if (u_.empty() || u_.size() != v_.size()) {
    throw DomainError("GroupPoint: u and v must have equal length n >= 1");
  }
  require_finite(u_, "GroupPoint");
  require_finite(v_, "GroupPoint");
  if (!std::isfinite(w_)) throw DomainError("GroupPoint: w must be finite");
}

GroupPoint::GroupPoint(double u, double v, double w)
    : GroupPoint(std::vector<double>{u}, std::vector<double>{v}, w) {}

GroupPoint GroupPoint::identity(std::size_t n) {
  if (n == 0) throw DomainError("GroupPoint::identity: n must be >= 1");
  return GroupPoint(std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                    0.0);
}

double GroupPoint::horizontal_norm_sq() const noexcept {
  return dot(u_, u_) + dot(v_, v_);
}

bool GroupPoint::is_identity() const noexcept {
  auto zero = [](double c) { return c == 0.0; };
  return w_ == 0.0 && std::all_of(u_.begin(), u_.end(), zero) &&
         std::all_of(v_.begin(), v_.end(), zero);
}

GroupPoint multiply(const GroupPoint& x, const GroupPoint& y) {
  require_same_dim(x, y);
  const std::size_t n = x.dim();
  std::vector<double> u(n), v(n);
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = x.u()[i] + y.u()[i];
    v[i] = x.v()[i] + y.v()[i];
  }
  const double w =
      x.w() + y.w() - 2.0 * dot(x.u(), y.v()) + 2.0 * dot(x.v(), y.u());
  return GroupPoint(std::move(u), std::move(v), w);
}

GroupPoint inverse(const GroupPoint& x) {
  std::vector<double> u(x.u().begin(), x.u().end());
  std::vector<double> v(x.v().begin(), x.v().end());
  for (auto& c : u) c = -c;
  for (auto& c : v) c = -c;
  return GroupPoint(std::move(u), std::move(v), -x.w());
}

GroupPoint dilate(double theta, const GroupPoint& x) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw DomainError("dilate: theta must be a positive finite number");
  }
  std::vector<double> u(x.u().begin(), x.u().end());
  std::vector<double> v(x.v().begin(), x.v().end());
  for (auto& c : u) c *= theta;
  for (auto& c : v) c *= theta;
  return GroupPoint(std::move(u), std::move(v), theta * theta * x.w());
}

double koranyi_norm(const GroupPoint& x) {
  // hypot keeps s^2 + w^2 from overflowing for large points.
  return std::sqrt(std::hypot(x.horizontal_norm_sq(), x.w()));
}

double koranyi_distance(const GroupPoint& x, const GroupPoint& y) {
  return koranyi_norm(multiply(inverse(x), y));
}

GroupPoint embed_h1(const GroupPoint& x, std::size_t n) {
  if (x.dim() != 1) throw DomainError("embed_h1: source must lie in H_1");
  if (n == 0) throw DomainError("embed_h1: target n must be >= 1");
  std::vector<double> u(n, 0.0), v(n, 0.0);
  u[0] = x.u()[0];
  v[0] = x.v()[0];
  return GroupPoint(std::move(u), std::move(v), x.w());
}

double max_abs_coordinate(const GroupPoint& x) {
  double m = std::abs(x.w());
  for (double c : x.u()) m = std::max(m, std::abs(c));
  for (double c : x.v()) m = std::max(m, std::abs(c));
  return m;
}

double symplectic_form(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() % 2 != 0) {
    throw DomainError("symplectic_form: arguments must have equal even length");
  }
  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < a.size(); j += 2) {
    sum += a[j] * b[j + 1] - a[j + 1] * b[j];
  }
  return sum;
}

std::vector<double> interleaved_multiply(std::span<const double> x,
                                         std::span<const double> y) {
  if (x.size() != y.size() || x.size() % 2 == 0) {
    throw DomainError(
        "interleaved_multiply: arguments must have equal odd length");
  }
  const std::size_t m = x.size() - 1;
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < m; ++i) out[i] = x[i] + y[i];
  out[m] = x[m] + y[m] - 2.0 * symplectic_form(x.first(m), y.first(m));
  return out;
}

GroupPoint from_interleaved(std::span<const double> x) {
  if (x.size() < 3 || x.size() % 2 == 0) {
    throw DomainError("from_interleaved: expected odd length 2n+1 >= 3, got " +
                      std::to_string(x.size()));
  }
  const std::size_t n = (x.size() - 1) / 2;
  std::vector<double> u(n), v(n);
  for (std::size_t j = 0; j < n; ++j) {
    u[j] = x[2 * j];
    v[j] = x[2 * j + 1];
  }
  return GroupPoint(std::move(u), std::move(v), x[2 * n]);
}

std::vector<double> to_interleaved(const GroupPoint& x) {
  const std::size_t n = x.dim();
  std::vector<double> out(2 * n + 1);
  for (std::size_t j = 0; j < n; ++j) {
    out[2 * j] = x.u()[j];
    out[2 * j + 1] = x.v()[j];
  }
  out[2 * n] = x.w();
  return out;
}

EmbeddingParams params_from(double p, double epsilon) {
  if (!std::isfinite(p) || p < 2.0) {
    throw DomainError("params_from: p must be finite and >= 2");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw DomainError("params_from: epsilon must lie in (0, 1)");
  }
  EmbeddingParams params;
  params.p = p;
  params.epsilon = epsilon;
  params.n = static_cast<int>(std::floor(p));
  params.alpha = (2.0 * params.n + 2.0) / p - 1.0 + epsilon;
  if (!(params.alpha * p < 2.0 * params.n + 2.0)) {
    throw DomainError("params_from: alpha p must stay below 2n+2");
  }
  return params;
}

}  // namespace hsf
