#pragma once

#include <cmath>
#include <complex>
#include <algorithm>
#include <numbers>
#include <vector>

namespace tauberian::special {

using Complex = std::complex<double>;

/// Sum of (-1)^k a(k), k >= 0, by the Cohen-Rodriguez Villegas-Zagier acceleration
/// (error about 5.8^{-n} times sup|a| for totally monotone a).
template <class Term>
double alternating_sum(Term&& a, int n = 40) {
  double d = std::pow(3.0 + std::sqrt(8.0), n);
  d = 0.5 * (d + 1.0 / d);
  double b = -1.0;
  double c = -d;
  double s = 0.0;
  for (int k = 0; k < n; ++k) {
    c = b - c;
    s += c * a(k);
    b = (static_cast<double>(k) + n) * (static_cast<double>(k) - n) * b / ((k + 0.5) * (k + 1.0));
  }
  return s / d;
}

/// log 2 = 1 - 1/2 + 1/3 - ... via alternating_sum.
inline double log2_oracle() {
  return alternating_sum([](int k) { return 1.0 / (k + 1.0); });
}

/// Dirichlet eta function eta(s) = sum_{n>=1} (-1)^{n-1} n^{-s}, entire, by Borwein's algorithm:
/// eta(s) ~ -1/d_n sum_{k<n} (-1)^k (d_k - d_n) (k+1)^{-s},
/// d_k = n sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!).
/// The term count grows with |Im s| to offset the e^{pi|Im s|/2} factor in the error bound.
inline Complex eta(Complex s) {
  const int n = std::min(170, 40 + static_cast<int>(std::ceil(1.0 * std::abs(s.imag()))));
  std::vector<double> d(n + 1);
  double term = 1.0 / n;  // i = 0 term of the inner sum
  double acc = term;
  d[0] = n * acc;
  for (int i = 0; i < n; ++i) {
    term *= 4.0 * (n + i) * (n - i) / ((2.0 * i + 1.0) * (2.0 * i + 2.0));
    acc += term;
    d[i + 1] = n * acc;
  }
  Complex sum{};
  for (int k = 0; k < n; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    sum += sign * ((d[k] - d[n]) / d[n]) * std::exp(-s * std::log(k + 1.0));
  }
  return -sum;
}

}  // namespace tauberian::special
