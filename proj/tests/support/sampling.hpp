#pragma once

#include <random>
#include <vector>

#include "hsf/heisenberg.hpp"

namespace testing_support {

/// Point of H_n with coordinates uniform in [-scale, scale] (w in
/// [-scale^2, scale^2]).
inline hsf::GroupPoint random_point(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> u(n), v(n);
  for (auto& c : u) c = scale * unit(rng);
  for (auto& c : v) c = scale * unit(rng);
  return hsf::GroupPoint(std::move(u), std::move(v), scale * scale * unit(rng));
}

inline double max_abs_diff(const hsf::GroupPoint& a, const hsf::GroupPoint& b) {
  double m = std::abs(a.w() - b.w());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    m = std::max(m, std::abs(a.u()[i] - b.u()[i]));
    m = std::max(m, std::abs(a.v()[i] - b.v()[i]));
  }
  return m;
}

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

}  // namespace testing_support
