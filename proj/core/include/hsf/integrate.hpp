#pragma once

#include <cstdint>

namespace hsf {

/// Deterministic quadrature outcome. `abs_error` sums the local adaptive
/// error estimates and the analytic bounds on every truncated piece.
struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::int64_t evaluations = 0;
  /// Set when the input was the identity and the exact answer 0 was
  /// returned without any quadrature.
  bool degenerate = false;
};

/// Default relative tolerance for the lambda integral.
inline constexpr double kDefaultQuadratureTol = 1e-8;

/// I(s, w) = int_0^inf (1 - e^{-lambda s} cos(lambda w))^{p/2}
///           lambda^{-1-(1-eps)p/2} dlambda,
/// for s >= 0. Inputs are first rescaled to s + |w| = 1 using
/// I(t s, t w) = t^{(1-eps)p/2} I(s, w). Throws ConvergenceError when the
/// tolerance cannot be met within `max_evaluations`.
QuadratureResult lambda_integral(double s, double w, double p, double epsilon,
                                 double tol = kDefaultQuadratureTol,
                                 std::int64_t max_evaluations = 20'000'000);

/// Bound on the integral over [Lambda, inf) when the integrand is replaced
/// by its envelope 2^{p/2} lambda^{-1-(1-eps)p/2}.
double lambda_tail_bound(double lambda_cut, double p, double epsilon);

/// Bound on the integral over (0, Lambda0] from
/// 1 - e^{-a} cos b <= a + b^2/2.
double lambda_head_bound(double lambda0, double s, double w, double p,
                         double epsilon);

/// (1/pi) int_0^pi (1 - a cos phi)^q dphi, the phase average of the
/// integrand at frozen amplitude a in [0, 1].
double phase_average(double a, double q);

/// Closed form of phase_average(1, q) = 2^q Gamma(q+1/2) / (sqrt(pi) Gamma(q+1)).
double phase_average_at_one(double q);

/// Lebesgue volume c_N(n) of the unit Koranyi ball in R^{2n+1}:
/// n v_{2n} B(n/2, 3/2) with v_{2n} = pi^n / n!.
double koranyi_ball_volume(int n);

/// int_{B_N(0,R)} N(z)^{-beta} dz = c_N (2n+2)/(2n+2-beta) R^{2n+2-beta}.
/// Requires 0 <= beta < 2n+2 and R > 0.
double ball_integral_exact(double radius, double beta, int n);

}  // namespace hsf
