#pragma once

// Reference values computed without the library's numerical code paths.
// Everything here is deliberately slow and simple.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace oracle {

/// I(s, w) at p = 2 from the Gamma identity
///   int_0^inf (1 - e^{-lambda z}) lambda^{-1-sigma} dlambda = -Gamma(-sigma) z^sigma,
/// with z = s + i w and sigma = 1 - eps.
inline double lambda_integral_p2(double s, double w, double epsilon) {
  const double sigma = 1.0 - epsilon;
  return -std::tgamma(-sigma) * std::real(std::pow(std::complex<double>(s, w), sigma));
}

/// I(s, w) by Boost quadrature on the raw variable, no rescaling. Needs s > 0:
/// past Lambda = 60/s the damping is below 1e-26 and the tail is exactly
/// Lambda^{-gamma} / gamma.
inline double lambda_integral(double s, double w, double p, double epsilon) {
  if (!(s > 0.0)) throw std::invalid_argument("oracle::lambda_integral needs s > 0");
  const double gamma = 0.5 * (1.0 - epsilon) * p;
  auto f = [&](double lambda) {
    if (lambda <= 0.0) return 0.0;
    const double a = lambda * s;
    const double half = std::sin(0.5 * lambda * w);
    const double base = -std::expm1(-a) + std::exp(-a) * 2.0 * half * half;
    if (base <= 0.0) return 0.0;
    return std::exp(0.5 * p * std::log(base) - (1.0 + gamma) * std::log(lambda));
  };
  const double cutoff = 60.0 / s;
  const double half_period =
      w != 0.0 ? std::numbers::pi / std::abs(w) : std::numeric_limits<double>::infinity();
  const double first = std::min({half_period, 1.0 / s, cutoff});

  boost::math::quadrature::tanh_sinh<double> head;
  double total = head.integrate(f, 0.0, first, 1e-14);
  double a = first;
  while (a < cutoff) {
    const double b = std::min({2.0 * a, a + half_period, cutoff});
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 12, 1e-14);
    a = b;
  }
  return total + std::pow(cutoff, -gamma) / gamma;
}

/// Lebesgue volume of {|h|^4 + t^2 <= 1} in R^{2n+1}: slices in t are
/// Euclidean balls of radius (1-t^2)^{1/4}.
inline double koranyi_ball_volume(int n) {
  double ball = 1.0;  // pi^n / n!
  for (int k = 1; k <= n; ++k) ball *= std::numbers::pi / k;
  boost::math::quadrature::tanh_sinh<double> q;
  const double slices = q.integrate(
      [n](double t) { return std::pow(std::max(0.0, 1.0 - t * t), 0.5 * n); }, -1.0, 1.0,
      1e-14);
  return ball * slices;
}

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// int_{B_N(0,R)} N(z)^{-beta} dz by sampling the shell R/2 < N <= R inside
/// the cylinder {|h| <= R} x [-R^2, R^2],
/// summed over all dyadic shells with the dilation factor 2^{-(2n+2-beta)}
/// per shell.
inline Estimate ball_integral_mc(double radius, double beta, int n, std::int64_t samples,
                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0), uniform(0.0, 1.0);
  const int dim = 2 * n;
  const double q = dim + 2.0;
  double euclid = std::pow(radius, dim);  // volume of the radius-R ball in R^{2n}
  for (int k = 1; k <= n; ++k) euclid *= std::numbers::pi / k;
  const double cylinder = euclid * 2.0 * radius * radius;
  double sum = 0.0, sum_sq = 0.0;
  for (std::int64_t i = 0; i < samples; ++i) {
    // the integrand only sees |h|, which has density ~ r^{2n-1} on [0, R]
    const double r = radius * std::pow(uniform(rng), 1.0 / dim);
    const double t = radius * radius * unit(rng);
    const double norm = std::sqrt(std::hypot(r * r, t));
    double value = 0.0;
    if (norm <= radius && norm > 0.5 * radius) value = std::pow(norm, -beta);
    sum += value;
    sum_sq += value * value;
  }
  const double count = static_cast<double>(samples);
  const double mean = sum / count;
  const double var = std::max(0.0, sum_sq / count - mean * mean);
  const double shells = 1.0 / (1.0 - std::pow(2.0, -(q - beta)));
  return {cylinder * mean * shells, cylinder * std::sqrt(var / count) * shells};
}

/// Word lengths of every element reachable by words of length <= r in the
/// discrete Heisenberg group, (x,y,z)(x',y',z') = (x+x', y+y', z+z'+xy').
inline std::map<std::tuple<long, long, long>, int> brute_force_ball(int r) {
  using Key = std::tuple<long, long, long>;
  const long gens[4][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}};
  std::map<Key, int> best{{Key{0, 0, 0}, 0}};
  std::vector<Key> words{Key{0, 0, 0}};
  for (int len = 1; len <= r; ++len) {
    std::vector<Key> next;
    next.reserve(words.size() * 4);
    for (const auto& [x, y, z] : words) {
      for (const auto& g : gens) {
        const Key k{x + g[0], y + g[1], z + g[2] + x * g[1]};
        next.push_back(k);
        best.emplace(k, len);
      }
    }
    words = std::move(next);
  }
  return best;
}

/// Word length of c^k, c = [a, b]: 2 ceil(2 sqrt(k)) for k >= 1.
inline int commutator_power_length(long k) {
  long m = 0;
  while (m * m < 4 * k) ++m;  // m = ceil(2 sqrt k)
  return static_cast<int>(2 * m);
}

}  // namespace oracle
