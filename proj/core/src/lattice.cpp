#include "hsf/lattice.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "hsf/errors.hpp"

namespace hsf {
namespace {

constexpr std::array<LatticeElement, 4> kGenerators{
    LatticeElement{1, 0, 0}, LatticeElement{-1, 0, 0},
    LatticeElement{0, 1, 0}, LatticeElement{0, -1, 0}};

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) {
    throw BudgetExceeded("lattice arithmetic overflowed int64");
  }
  return out;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw BudgetExceeded("lattice arithmetic overflowed int64");
  }
  return out;
}

using Layer = std::vector<LatticeElement>;

// Next BFS layer from the two previous ones. In a Cayley graph with a
// symmetric generating set every neighbour of layer r lies in layer r-1, r
// or r+1, so older layers never need to be consulted.
Layer next_layer(const Layer& previous, const Layer& current) {
  Layer candidates;
  candidates.reserve(current.size() * kGenerators.size());
  for (const auto& g : current) {
    for (const auto& s : kGenerators) {
      candidates.push_back(lattice_multiply(g, s));
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());
  Layer without_current;
  without_current.reserve(candidates.size());
  std::set_difference(candidates.begin(), candidates.end(), current.begin(),
                      current.end(), std::back_inserter(without_current));
  Layer fresh;
  fresh.reserve(without_current.size());
  std::set_difference(without_current.begin(), without_current.end(),
                      previous.begin(), previous.end(),
                      std::back_inserter(fresh));
  return fresh;
}

void check_budget(std::size_t size, std::size_t budget, int radius) {
  if (size > budget) {
    throw BudgetExceeded("word ball of radius " + std::to_string(radius) +
                         " exceeds the element budget of " +
                         std::to_string(budget));
  }
}

}  // namespace

LatticeElement lattice_multiply(const LatticeElement& g,
                                const LatticeElement& h) {
  return {checked_add(g.x, h.x), checked_add(g.y, h.y),
          checked_add(checked_add(g.z, h.z), checked_mul(g.x, h.y))};
}

LatticeElement lattice_inverse(const LatticeElement& g) {
  // (x,y,z)^{-1} = (-x, -y, xy - z)
  return {-g.x, -g.y, checked_add(checked_mul(g.x, g.y), -g.z)};
}

LatticeElement lattice_commutator(const LatticeElement& g,
                                  const LatticeElement& h) {
  return lattice_multiply(
      lattice_multiply(lattice_multiply(g, h), lattice_inverse(g)),
      lattice_inverse(h));
}

LatticeElement lattice_power(const LatticeElement& g, std::int64_t k) {
  if (k < 0) throw DomainError("lattice_power: exponent must be >= 0");
  LatticeElement result = kLatticeIdentity;
  LatticeElement base = g;
  while (k > 0) {
    if (k & 1) result = lattice_multiply(result, base);
    base = lattice_multiply(base, base);
    k >>= 1;
  }
  return result;
}

std::span<const LatticeElement, 4> symmetric_generators() {
  return kGenerators;
}

WordBall::WordBall(int radius, std::vector<LatticeElement> elements,
                   std::vector<int> distances,
                   std::vector<std::size_t> cumulative)
    : radius_(radius), elements_(std::move(elements)),
      distances_(std::move(distances)), cumulative_(std::move(cumulative)) {
  sorted_.reserve(elements_.size());
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    sorted_.emplace_back(elements_[i], static_cast<int>(i));
  }
  std::sort(sorted_.begin(), sorted_.end());
}

std::optional<int> WordBall::distance(const LatticeElement& g) const {
  auto it = std::lower_bound(
      sorted_.begin(), sorted_.end(), g,
      [](const auto& entry, const LatticeElement& key) {
        return entry.first < key;
      });
  if (it == sorted_.end() || it->first != g) return std::nullopt;
  return distances_[static_cast<std::size_t>(it->second)];
}

WordBall word_ball(int radius, std::size_t budget) {
  if (radius < 0) throw DomainError("word_ball: radius must be >= 0");
  std::vector<LatticeElement> elements{kLatticeIdentity};
  std::vector<int> distances{0};
  std::vector<std::size_t> cumulative{1};
  Layer previous;
  Layer current{kLatticeIdentity};
  for (int r = 1; r <= radius; ++r) {
    Layer fresh = next_layer(previous, current);
    check_budget(elements.size() + fresh.size(), budget, r);
    elements.insert(elements.end(), fresh.begin(), fresh.end());
    distances.insert(distances.end(), fresh.size(), r);
    cumulative.push_back(elements.size());
    previous = std::move(current);
    current = std::move(fresh);
  }
  return WordBall(radius, std::move(elements), std::move(distances),
                  std::move(cumulative));
}

std::vector<std::size_t> ball_sizes(int r_max, std::size_t budget) {
  if (r_max < 0) throw DomainError("ball_sizes: r_max must be >= 0");
  std::vector<std::size_t> sizes{1};
  Layer previous;
  Layer current{kLatticeIdentity};
  for (int r = 1; r <= r_max; ++r) {
    Layer fresh = next_layer(previous, current);
    check_budget(fresh.size(), budget, r);
    sizes.push_back(sizes.back() + fresh.size());
    previous = std::move(current);
    current = std::move(fresh);
  }
  return sizes;
}

WordDistance word_distance(const LatticeElement& g, const LatticeElement& h,
                           int max_radius, std::size_t budget) {
  const LatticeElement target = lattice_multiply(lattice_inverse(g), h);
  if (target == kLatticeIdentity) return {true, 0, 0};
  Layer previous;
  Layer current{kLatticeIdentity};
  for (int r = 1; r <= max_radius; ++r) {
    Layer fresh = next_layer(previous, current);
    check_budget(fresh.size(), budget, r);
    if (std::binary_search(fresh.begin(), fresh.end(), target)) {
      return {true, r, r};
    }
    previous = std::move(current);
    current = std::move(fresh);
  }
  return {false, 0, max_radius};
}

XnSet build_xn(std::size_t n, std::size_t budget) {
  if (n == 0) throw DomainError("build_xn: n must be >= 1");
  XnSet out;
  out.elements.push_back(kLatticeIdentity);
  out.distances.push_back(0);
  Layer previous;
  Layer current{kLatticeIdentity};
  int r = 0;
  std::size_t total = 1;
  while (total < n) {
    ++r;
    Layer fresh = next_layer(previous, current);
    check_budget(total + fresh.size(), budget, r);
    for (const auto& g : fresh) {
      if (out.elements.size() == n) break;
      out.elements.push_back(g);
      out.distances.push_back(r);
    }
    // B(r) is fully contained once all of its layers fit.
    if (total + fresh.size() <= n) out.inner_radius = r;
    total += fresh.size();
    previous = std::move(current);
    current = std::move(fresh);
  }
  out.outer_radius = out.distances.back();
  return out;
}

GroupPoint lattice_to_continuous(const LatticeElement& g) {
  const double x = static_cast<double>(g.x);
  const double y = static_cast<double>(g.y);
  const double z = static_cast<double>(g.z);
  return GroupPoint(x, y, 2.0 * x * y - 4.0 * z);
}

GrowthFit growth_fit(int r_max, std::size_t budget) {
  if (r_max < 8) throw DomainError("growth_fit: r_max must be >= 8");
  GrowthFit fit;
  fit.sizes = ball_sizes(r_max, budget);
  const int r_min = r_max / 4;
  std::vector<double> xs, ys;
  for (int r = r_min; r <= r_max; ++r) {
    xs.push_back(std::log(static_cast<double>(r)));
    ys.push_back(std::log(static_cast<double>(fit.sizes[r])));
  }
  const double count = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= count;
  my /= count;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  fit.exponent = sxy / sxx;
  const double intercept = my - fit.exponent * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (intercept + fit.exponent * xs[i]);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / count);
  return fit;
}

}  // namespace hsf
