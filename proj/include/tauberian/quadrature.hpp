#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include "tauberian/errors.hpp"

namespace tauberian::quad {

using Complex = std::complex<double>;

struct QuadResult {
  Complex value;
  double error = 0.0;     // estimated absolute error
  int intervals = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15 tables).
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
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  Complex value;
  double error;
  double magnitude;  // integral of |f|, used for the roundoff floor
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Complex checked_eval(F& f, double s) {
  const Complex v = f(s);
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    throw NonfiniteError("integrand is not finite", s);
  }
  return v;
}

template <class F>
Panel kronrod15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const Complex fc = checked_eval(f, center);
  Complex kronrod = fc * kKronrodWeights[7];
  Complex gauss = fc * kGaussWeights[3];
  double magnitude = std::abs(fc) * kKronrodWeights[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const Complex f1 = checked_eval(f, center - dx);
    const Complex f2 = checked_eval(f, center + dx);
    kronrod += (f1 + f2) * kKronrodWeights[j];
    magnitude += (std::abs(f1) + std::abs(f2)) * kKronrodWeights[j];
    if (j % 2 == 1) gauss += (f1 + f2) * kGaussWeights[j / 2];
  }
  return Panel{a, b, kronrod * half, std::abs((kronrod - gauss) * half), magnitude * std::abs(half)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) integration of a complex-valued integrand on [a, b].
///
/// The interval is first cut into `initial_panels` equal pieces (callers size this from the
/// integrand's oscillation); the panel with the largest error estimate is then bisected until
/// the summed estimate drops below max(abs_tol, roundoff floor).
template <class F>
QuadResult integrate(F&& f, double a, double b, double abs_tol, int initial_panels = 1,
                     int max_panels = 200000) {
  if (!(b > a)) return {};
  initial_panels = std::max(1, initial_panels);
  std::priority_queue<detail::Panel> heap;
  Complex total{};
  double error = 0.0;
  double magnitude = 0.0;
  const double width = (b - a) / initial_panels;
  for (int i = 0; i < initial_panels; ++i) {
    const double lo = a + i * width;
    const double hi = (i + 1 == initial_panels) ? b : lo + width;
    auto p = detail::kronrod15(f, lo, hi);
    total += p.value;
    error += p.error;
    magnitude += p.magnitude;
    heap.push(p);
  }
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  int panels = initial_panels;
  while (error > std::max(abs_tol, 50.0 * kEps * magnitude)) {
    if (panels >= max_panels) {
      throw QuadratureError("adaptive quadrature did not reach tolerance " + std::to_string(abs_tol) +
                            " (estimated error " + std::to_string(error) + ")");
    }
    const auto worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // panel cannot be split further
    heap.pop();
    auto left = detail::kronrod15(f, worst.a, mid);
    auto right = detail::kronrod15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    magnitude += left.magnitude + right.magnitude - worst.magnitude;
    heap.push(left);
    heap.push(right);
    ++panels;
  }
  // Recompute from the final partition to shed accumulated update rounding.
  Complex value{};
  double err = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  return {value, err, panels};
}

/// Integrate on [a, inf) via s = a + u/(1-u); f must decay fast enough to be integrable.
template <class F>
QuadResult integrate_to_infinity(F&& f, double a, double abs_tol, int initial_panels = 8) {
  auto mapped = [&](double u) -> Complex {
    const double one_minus = 1.0 - u;
    const double s = a + u / one_minus;
    if (!std::isfinite(s)) return Complex{};
    return f(s) / (one_minus * one_minus);
  };
  return integrate(mapped, 0.0, 1.0, abs_tol, initial_panels);
}

/// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline GaussLegendreRule gauss_legendre(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 0 ? 1.0 : (n == 1 ? x : p1);
      const double pn1 = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pn1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace tauberian::quad
