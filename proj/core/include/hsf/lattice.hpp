#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hsf/heisenberg.hpp"

namespace hsf {

/// Element of the discrete Heisenberg group in upper-triangular matrix
/// coordinates: (x, y, z) stands for [[1, x, z], [0, 1, y], [0, 0, 1]], so
///
///   (x,y,z)(x',y',z') = (x+x', y+y', z+z'+x y').
///
/// The generators are a = (1,0,0) and b = (0,1,0); the commutator
/// c = a b a^{-1} b^{-1} = (0,0,1) is central.
struct LatticeElement {
  std::int64_t x = 0;
  std::int64_t y = 0;
  std::int64_t z = 0;

  friend auto operator<=>(const LatticeElement&,
                          const LatticeElement&) = default;
};

inline constexpr LatticeElement kLatticeIdentity{0, 0, 0};
inline constexpr LatticeElement kGeneratorA{1, 0, 0};
inline constexpr LatticeElement kGeneratorB{0, 1, 0};

/// Throws BudgetExceeded on int64 overflow.
LatticeElement lattice_multiply(const LatticeElement& g,
                                const LatticeElement& h);
LatticeElement lattice_inverse(const LatticeElement& g);
LatticeElement lattice_commutator(const LatticeElement& g,
                                  const LatticeElement& h);
/// g^k for k >= 0.
LatticeElement lattice_power(const LatticeElement& g, std::int64_t k);

/// The four generators a, a^{-1}, b, b^{-1}.
std::span<const LatticeElement, 4> symmetric_generators();

/// Default cap on the number of stored elements (covers r ~ 50).
inline constexpr std::size_t kDefaultBallBudget = 10'000'000;

/// Closed ball B(r) of the word metric around the identity, stored in BFS
/// order with ties inside a layer broken lexicographically by (x, y, z).
class WordBall {
 public:
  WordBall(int radius, std::vector<LatticeElement> elements,
           std::vector<int> distances, std::vector<std::size_t> cumulative);

  int radius() const noexcept { return radius_; }
  std::size_t size() const noexcept { return elements_.size(); }
  std::span<const LatticeElement> elements() const noexcept {
    return elements_;
  }
  std::span<const int> distances() const noexcept { return distances_; }
  /// |B(r)| for r = 0..radius().
  std::span<const std::size_t> cumulative_sizes() const noexcept {
    return cumulative_;
  }
  /// Word length of g, or nullopt when g lies outside the ball.
  std::optional<int> distance(const LatticeElement& g) const;
  bool contains(const LatticeElement& g) const {
    return distance(g).has_value();
  }

 private:
  int radius_;
  std::vector<LatticeElement> elements_;
  std::vector<int> distances_;
  std::vector<std::size_t> cumulative_;
  // (x,y,z)-sorted copy of elements_ with positions, for lookup.
  std::vector<std::pair<LatticeElement, int>> sorted_;
};

/// Exact ball B(r) by breadth-first search. Throws BudgetExceeded if it
/// would hold more than `budget` elements.
WordBall word_ball(int radius, std::size_t budget = kDefaultBallBudget);

/// |B(r)| for r = 0..r_max. Keeps only three BFS layers in memory; `budget`
/// caps the size of a single layer.
std::vector<std::size_t> ball_sizes(int r_max,
                                    std::size_t budget = kDefaultBallBudget);

struct WordDistance {
  bool resolved = false;
  /// Exact word distance when resolved.
  int distance = 0;
  /// Radius up to which the search was exhaustive.
  int explored_radius = 0;
};

/// d_W(g, h) = |g^{-1} h|, searched up to `max_radius`.
WordDistance word_distance(const LatticeElement& g, const LatticeElement& h,
                           int max_radius = 64,
                           std::size_t budget = kDefaultBallBudget);

/// The set X_n: the first n elements of the BFS order, together with the
/// radii of the largest ball it contains and the smallest ball containing it.
struct XnSet {
  std::vector<LatticeElement> elements;
  std::vector<int> distances;
  int inner_radius = 0;
  int outer_radius = 0;
};

XnSet build_xn(std::size_t n, std::size_t budget = kDefaultBallBudget);

/// Homomorphism into H_1 sending a -> (1,0,0), b -> (0,1,0); it maps
/// (x, y, z) to (x, y, 2xy - 4z), so c -> (0,0,-4).
GroupPoint lattice_to_continuous(const LatticeElement& g);

struct GrowthFit {
  /// Least-squares slope of log|B(r)| against log r on [r_max/4, r_max].
  double exponent = 0.0;
  /// Root-mean-square residual of that fit.
  double residual = 0.0;
  std::vector<std::size_t> sizes;
};

/// Requires r_max >= 8.
GrowthFit growth_fit(int r_max, std::size_t budget = kDefaultBallBudget);

}  // namespace hsf
