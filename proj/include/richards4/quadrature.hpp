#pragma once

#include <array>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "richards4/error.hpp"

namespace richards4 {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// 7-point Gauss weights at the odd-indexed Kronrod nodes.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <typename F>
Panel gauss_kronrod_15(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double r = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = r * kKronrodNodes[j];
    const double pair = f(c - dx) + f(c + dx);
    kronrod += kKronrodWeights[j] * pair;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  return {a, b, kronrod * r, std::abs((kronrod - gauss) * r)};
}

}  // namespace detail

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature of f over [a, b].
///
/// Panels are bisected worst-first until the summed |K15 - G7| estimate falls
/// below abs_tol. Reversed limits return the negated integral. Throws
/// ConvergenceError when max_panels is exhausted.
template <typename F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, double abs_tol,
                                    int max_panels = 4000) {
  if (a == b) return {};
  if (b < a) {
    auto r = integrate_adaptive(f, b, a, abs_tol, max_panels);
    r.value = -r.value;
    return r;
  }
  std::priority_queue<detail::Panel> panels;
  panels.push(detail::gauss_kronrod_15(f, a, b));
  double total = panels.top().value;
  double error = panels.top().error;
  int count = 1;
  while (error > abs_tol) {
    if (count >= max_panels) {
      throw ConvergenceError("adaptive quadrature exceeded " + std::to_string(max_panels) +
                                 " panels",
                             error);
    }
    const detail::Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) break;  // interval at machine resolution
    const auto left = detail::gauss_kronrod_15(f, worst.a, mid);
    const auto right = detail::gauss_kronrod_15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++count;
  }
  // Recompute the sums from the panels to shed accumulated update round-off.
  double value = 0.0;
  double err = 0.0;
  const int n = static_cast<int>(panels.size());
  while (!panels.empty()) {
    value += panels.top().value;
    err += panels.top().error;
    panels.pop();
  }
  return {value, err, n};
}

}  // namespace richards4
