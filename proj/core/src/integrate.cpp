#include "hsf/integrate.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hsf/errors.hpp"
#include "hsf/gauss_kronrod.hpp"

namespace hsf {
namespace {

// Beyond lambda s >= kDampExponent the factor e^{-lambda s} is below 3e-20
// and the integrand equals lambda^{-1-kappa} to double precision.
constexpr double kDampExponent = 45.0;
constexpr int kMaxHeadWindows = 96;

// The lambda integrand for normalized (s, w), s + |w| = 1.
struct LambdaIntegrand {
  double s;
  double w;
  double q;      // p / 2
  double kappa;  // (1 - eps) p / 2
  double eps;

  // 1 - e^{-lambda s} cos(lambda w), as a sum of two nonnegative terms.
  double base(double lambda) const {
    const double x = lambda * s;
    const double half_sin = std::sin(0.5 * lambda * w);
    return -std::expm1(-x) + 2.0 * std::exp(-x) * half_sin * half_sin;
  }

  // base(lambda) / lambda without cancellation or 0/0 as lambda -> 0.
  double base_over_lambda(double lambda) const {
    if (lambda == 0.0) return s;
    const double x = lambda * s;
    const double damped = (x == 0.0) ? s : s * (-std::expm1(-x) / x);
    const double h = 0.5 * lambda * w;
    const double sinc = (h == 0.0) ? 1.0 : std::sin(h) / h;
    return damped + std::exp(-x) * w * std::sin(h) * sinc;
  }

  // Integrand after lambda = e^t: base^q lambda^{-kappa}
  //   = (base/lambda)^q e^{eps q t}.
  double in_log(double t) const {
    return std::pow(base_over_lambda(std::exp(t)), q) * std::exp(eps * q * t);
  }

  double in_linear(double lambda) const {
    return std::pow(base(lambda), q) * std::pow(lambda, -1.0 - kappa);
  }

  double weight(double lambda) const { return std::pow(lambda, -1.0 - kappa); }

  // int_a^b lambda^{-1-kappa} dlambda
  double weight_integral(double a, double b) const {
    return (std::pow(a, -kappa) - std::pow(b, -kappa)) / kappa;
  }
};

double head_bound_log(double t0, double s, double w, double q, double eps) {
  // (x + y)^q <= 2^{q-1} (x^q + y^q) for q >= 1.
  const double c = std::pow(2.0, q - 1.0);
  const double linear = std::pow(s, q) * std::exp(eps * q * t0) / (eps * q);
  const double quadratic = std::pow(0.5 * w * w, q) *
                           std::exp((1.0 + eps) * q * t0) / ((1.0 + eps) * q);
  return c * (linear + quadratic);
}

class Accumulator {
 public:
  Accumulator(std::int64_t budget, double tol)
      : budget_(budget), tol_(tol) {}

  template <class F>
  double add(F&& f, double a, double b, double rel_tol) {
    const std::int64_t remaining = budget_ - evaluations;
    if (remaining < 15) fail("evaluation budget exhausted");
    auto est = quad::integrate(f, a, b, rel_tol, 0.0, remaining);
    evaluations += est.evaluations;
    if (!est.converged) fail("adaptive Gauss-Kronrod did not converge");
    value += est.value;
    error += est.error;
    return est.value;
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw ConvergenceError("lambda_integral: " + why + " (tol " +
                               std::to_string(tol_) + ")",
                           value, error);
  }

  double value = 0.0;
  double error = 0.0;
  std::int64_t evaluations = 0;

 private:
  std::int64_t budget_;
  double tol_;
};

// Integral over (0, e^{t_hi}] by windows [t_hi - 1, t_hi], then widths
// 2, 4, 8, ... leftwards until both the last window and the analytic bound
// on the remainder are negligible.
void integrate_head(const LambdaIntegrand& f, double t_hi, double tol,
                    Accumulator& acc) {
  const double rel = tol / 16.0;
  auto g = [&f](double t) { return f.in_log(t); };
  double width = 1.0;
  double hi = t_hi;
  for (int i = 0; i < kMaxHeadWindows; ++i) {
    const double lo = hi - width;
    const double window = acc.add(g, lo, hi, rel);
    const double bound = head_bound_log(lo, f.s, f.w, f.q, f.eps);
    if (window <= rel * acc.value && bound <= rel * acc.value) {
      acc.error += bound;
      return;
    }
    hi = lo;
    width *= 2.0;
  }
  acc.fail("head windows did not reach the tolerance");
}

// Exact integral of lambda^{-1-kappa} over [lambda_cut, inf), valid once
// e^{-lambda s} is negligible; |base^q - 1| <= q 2^{q-1} e^{-lambda s}.
void add_damped_tail(const LambdaIntegrand& f, double lambda_cut,
                     Accumulator& acc) {
  const double tail = std::pow(lambda_cut, -f.kappa) / f.kappa;
  acc.value += tail;
  acc.error +=
      f.q * std::pow(2.0, f.q - 1.0) * std::exp(-f.s * lambda_cut) * tail;
}

// Oscillatory part [P, inf), P = 2 pi / w, summed period by period. The
// integrand is split into its phase average at frozen amplitude,
// M(lambda) = phase_average(e^{-lambda s}, q), whose tail is integrated
// directly, and an oscillation R with zero period mean. Integrating R h by
// parts with periodic antiderivatives gives, for a period-aligned cut b,
//
//   int_b^inf R h = -c1 h(b) + c2 h'(b) + O(h''(b)),
//
// and every period contributes c1 (h(b)-h(a)) - c2 (h'(b)-h'(a)) + O(h'').
// c1 and c2 are fitted on the last two periods.
void integrate_periods(const LambdaIntegrand& f, double period, double tol,
                       Accumulator& acc) {
  const double rel = tol / 16.0;
  const double m_one = phase_average_at_one(f.q);
  auto linear = [&f](double lambda) { return f.in_linear(lambda); };
  auto mean_profile = [&](double lambda) {
    return f.s == 0.0 ? m_one : phase_average(std::exp(-lambda * f.s), f.q);
  };
  auto mean_piece = [&](double a, double b) {
    if (f.s == 0.0) return m_one * f.weight_integral(a, b);
    return quad::gauss_legendre10(
        [&](double lambda) { return mean_profile(lambda) * f.weight(lambda); },
        a, b);
  };
  auto weight_slope = [&f](double lambda) {
    return -(1.0 + f.kappa) * std::pow(lambda, -2.0 - f.kappa);
  };

  // int_P^inf M(lambda) h(lambda) dlambda
  double mean_tail = 0.0;
  if (f.s == 0.0) {
    mean_tail = m_one * std::pow(period, -f.kappa) / f.kappa;
  } else {
    const double lambda_damp = std::max(period, kDampExponent / f.s);
    auto g = [&](double t) {
      return mean_profile(std::exp(t)) * std::exp(-f.kappa * t);
    };
    auto est = quad::integrate(g, std::log(period), std::log(lambda_damp),
                               1e-13, 0.0, 2'000'000);
    acc.evaluations += est.evaluations;
    mean_tail = est.value + std::pow(lambda_damp, -f.kappa) / f.kappa;
  }

  // The fitted tail has error of order h''(b) ~ k^{-3-kappa}; successive
  // totals differ by about (3+kappa)/k times that error.
  const double order = 3.0 + f.kappa;
  double partial = acc.value;
  double previous_total = std::numeric_limits<double>::quiet_NaN();
  double previous_diff = std::numeric_limits<double>::infinity();
  double prev_r = 0.0, prev_dh = 0.0, prev_dslope = 0.0;
  for (std::int64_t k = 1;; ++k) {
    const double a = static_cast<double>(k) * period;
    const double b = static_cast<double>(k + 1) * period;
    const double before = acc.value;
    acc.add(linear, a, b, rel);
    const double piece = acc.value - before;
    partial += piece;
    if (f.s > 0.0 && f.s * b >= kDampExponent) {
      acc.value = partial;
      add_damped_tail(f, b, acc);
      return;
    }
    const double mean_part = mean_piece(a, b);
    mean_tail -= mean_part;
    const double r = piece - mean_part;
    const double dh = f.weight(b) - f.weight(a);
    const double dslope = -(weight_slope(b) - weight_slope(a));
    if (k >= 2) {
      const double det = prev_dh * dslope - dh * prev_dslope;
      double c1 = r / dh;
      double c2 = 0.0;
      if (det != 0.0) {
        c1 = (prev_r * dslope - r * prev_dslope) / det;
        c2 = (prev_dh * r - dh * prev_r) / det;
      }
      const double oscillating_tail = -c1 * f.weight(b) + c2 * weight_slope(b);
      const double total = partial + mean_tail + oscillating_tail;
      const double diff = std::abs(total - previous_total);
      const double drift =
          (period * f.s) * (period * f.s) * std::exp(-f.s * b) * mean_tail;
      const double extrapolation_error =
          std::max(diff, previous_diff) * static_cast<double>(k + 1) / order +
          drift;
      if (k >= 4 && extrapolation_error <= 0.25 * tol * total) {
        acc.value = total;
        acc.error += extrapolation_error;
        return;
      }
      previous_total = total;
      previous_diff = std::isfinite(diff)
                          ? diff
                          : std::numeric_limits<double>::infinity();
    }
    prev_r = r;
    prev_dh = dh;
    prev_dslope = dslope;
  }
}

}  // namespace

double lambda_tail_bound(double lambda_cut, double p, double epsilon) {
  const double kappa = (1.0 - epsilon) * p / 2.0;
  return std::pow(2.0, p / 2.0) * std::pow(lambda_cut, -kappa) / kappa;
}

double lambda_head_bound(double lambda0, double s, double w, double p,
                         double epsilon) {
  if (lambda0 <= 0.0) return 0.0;
  return head_bound_log(std::log(lambda0), s, std::abs(w), p / 2.0, epsilon);
}

double phase_average(double a, double q) {
  if (a == 0.0) return 1.0;
  if (a == 1.0) return phase_average_at_one(q);
  auto f = [a, q](double phi) { return std::pow(1.0 - a * std::cos(phi), q); };
  auto est = quad::integrate(f, 0.0, std::numbers::pi, 1e-13, 1e-15);
  return est.value / std::numbers::pi;
}

double phase_average_at_one(double q) {
  return std::exp(q * std::log(2.0) + std::lgamma(q + 0.5) -
                  std::lgamma(q + 1.0)) /
         std::sqrt(std::numbers::pi);
}

QuadratureResult lambda_integral(double s, double w, double p, double epsilon,
                                 double tol, std::int64_t max_evaluations) {
  if (!std::isfinite(s) || s < 0.0 || !std::isfinite(w)) {
    throw DomainError("lambda_integral: need finite s >= 0 and finite w");
  }
  if (!std::isfinite(p) || p < 2.0) {
    throw DomainError("lambda_integral: p must be finite and >= 2");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw DomainError("lambda_integral: epsilon must lie in (0, 1)");
  }
  if (!(tol > 0.0)) throw DomainError("lambda_integral: tol must be > 0");

  QuadratureResult out;
  if (s == 0.0 && w == 0.0) {
    out.degenerate = true;
    return out;
  }

  const double q = p / 2.0;
  const double kappa = (1.0 - epsilon) * q;
  const double scale = s + std::abs(w);
  const LambdaIntegrand f{s / scale, std::abs(w) / scale, q, kappa, epsilon};

  Accumulator acc(max_evaluations, tol);
  const double lambda_damp =
      f.s > 0.0 ? kDampExponent / f.s : std::numeric_limits<double>::infinity();
  const double period = f.w > 0.0 ? 2.0 * std::numbers::pi / f.w
                                   : std::numeric_limits<double>::infinity();
  if (lambda_damp <= 16.0 * period) {
    // Damping wins before many oscillations: plain log-space integration.
    integrate_head(f, 0.0, tol, acc);
    const double t_cut = std::max(0.0, std::log(lambda_damp));
    acc.add([&f](double t) { return f.in_log(t); }, 0.0, t_cut, tol / 16.0);
    add_damped_tail(f, std::exp(t_cut), acc);
  } else {
    integrate_head(f, std::log(period), tol, acc);
    integrate_periods(f, period, tol, acc);
  }

  const double factor = std::pow(scale, kappa);
  out.value = factor * acc.value;
  out.abs_error = factor * acc.error;
  out.evaluations = acc.evaluations;
  return out;
}

double koranyi_ball_volume(int n) {
  if (n < 1) throw DomainError("koranyi_ball_volume: n must be >= 1");
  const double half_n = 0.5 * n;
  // n * pi^n / n! * Gamma(n/2) Gamma(3/2) / Gamma(n/2 + 3/2)
  const double log_value = std::log(static_cast<double>(n)) +
                           n * std::log(std::numbers::pi) -
                           std::lgamma(n + 1.0) + std::lgamma(half_n) +
                           std::lgamma(1.5) - std::lgamma(half_n + 1.5);
  return std::exp(log_value);
}

double ball_integral_exact(double radius, double beta, int n) {
  const double dim = 2.0 * n + 2.0;
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw DomainError("ball_integral_exact: radius must be positive");
  }
  if (!(beta >= 0.0)) {
    throw DomainError("ball_integral_exact: beta must be >= 0");
  }
  if (!(beta < dim)) {
    throw DomainError("ball_integral_exact: beta >= 2n+2 makes it diverge");
  }
  return koranyi_ball_volume(n) * dim / (dim - beta) *
         std::pow(radius, dim - beta);
}

}  // namespace hsf
