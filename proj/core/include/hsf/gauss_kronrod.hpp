#pragma once

// Globally adaptive 7/15-point Gauss-Kronrod quadrature on a finite interval.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

namespace hsf::quad {

struct Estimate {
  double value = 0.0;
  double error = 0.0;
  std::int64_t evaluations = 0;
  bool converged = false;
};

namespace detail {

// Kronrod abscissae (positive half, descending) and weights; every odd
// index is also a Gauss node.
inline constexpr std::array<double, 8> kXgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

template <class F>
Segment gk15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  double abs_sum = std::abs(kronrod);
  std::array<double, 7> f1{}, f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    kronrod += kWgk[j] * (f1[j] + f2[j]);
    abs_sum += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1[j] + f2[j]);
  }
  const double mean = 0.5 * kronrod;
  double asc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    asc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }
  const double scale = std::abs(half);
  const double result = kronrod * half;
  asc *= scale;
  abs_sum *= scale;
  double err = std::abs((kronrod - gauss) * half);
  if (asc != 0.0 && err != 0.0) {
    err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  }
  const double eps = std::numeric_limits<double>::epsilon();
  if (abs_sum > std::numeric_limits<double>::min() / (50.0 * eps)) {
    err = std::max(50.0 * eps * abs_sum, err);
  }
  return {a, b, result, err};
}

}  // namespace detail

/// Integrates f over [a, b] until the summed local error estimate is at most
/// max(abs_tol, rel_tol * |value|) or `max_evaluations` is reached.
template <class F>
Estimate integrate(F&& f, double a, double b, double rel_tol, double abs_tol,
                   std::int64_t max_evaluations = 200'000) {
  Estimate out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  std::priority_queue<detail::Segment> heap;
  heap.push(detail::gk15(f, a, b));
  out.evaluations = 15;
  double value = heap.top().value;
  double error = heap.top().error;
  while (true) {
    const double target = std::max(abs_tol, rel_tol * std::abs(value));
    if (error <= target) {
      out.converged = true;
      break;
    }
    if (out.evaluations + 30 > max_evaluations) break;
    const detail::Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > std::min(worst.a, worst.b) && mid < std::max(worst.a, worst.b))) {
      break;  // interval can no longer be split in floating point
    }
    heap.pop();
    const detail::Segment left = detail::gk15(f, worst.a, mid);
    const detail::Segment right = detail::gk15(f, mid, worst.b);
    out.evaluations += 30;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed the drift of the running updates.
  value = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  out.value = value;
  out.error = error;
  if (!out.converged) {
    out.converged = error <= std::max(abs_tol, rel_tol * std::abs(value));
  }
  return out;
}

/// Fixed 10-point Gauss-Legendre rule on [a, b].
template <class F>
double gauss_legendre10(F&& f, double a, double b) {
  static constexpr std::array<double, 5> x{
      0.1488743389816312108848260, 0.4333953941292471907992659,
      0.6794095682990244062343274, 0.8650633666889845107320967,
      0.9739065285171717200779640};
  static constexpr std::array<double, 5> w{
      0.2955242247147528701738930, 0.2692667193099963550912269,
      0.2190863625159820439955349, 0.1494513491505805931457763,
      0.0666713443086881375935688};
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < 5; ++i) {
    sum += w[i] * (f(center - half * x[i]) + f(center + half * x[i]));
  }
  return sum * half;
}

}  // namespace hsf::quad
