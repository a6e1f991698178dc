#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "tauberian/bv_model.hpp"
#include "tauberian/errors.hpp"
#include "tauberian/extension.hpp"
#include "tauberian/parallel.hpp"
#include "tauberian/transform.hpp"

namespace tauberian {

struct GridSpec {
  double t_max = 0.0;
  std::size_t points = 0;
  std::string spacing;
};

/// Grid supremum of a sampled norm compared against an analytic bound. A negative margin is a
/// measured violation and is reported as data.
struct SupReport {
  std::string case_id;
  double grid_sup = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // bound - grid_sup
  double witness_t = 0.0;
  double witness_x = 0.0;
  GridSpec grid;
  bool hypothesis_failed = false;
  double hypothesis_sup = 0.0;

  /// margin >= -rel_noise * bound
  bool holds(double rel_noise = 1e-9) const { return !hypothesis_failed && margin >= -rel_noise * std::abs(bound); }
};

inline std::vector<double> linear_grid(double a, double b, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {b};
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

inline std::vector<double> log_grid(double a, double b, std::size_t n) {
  if (!(a > 0.0) || !(b >= a)) throw PreconditionError("log_grid needs 0 < a <= b");
  std::vector<double> g = linear_grid(std::log(a), std::log(b), n);
  for (auto& v : g) v = std::exp(v);
  return g;
}

struct HybridGridOptions {
  double t_max = 50.0;
  std::size_t uniform_points = 512;
  std::size_t points_per_jump = 64;
  double jump_window = 0.1;
  std::size_t max_refined_jumps = 32;
};

/// Uniform points on (0, t_max] plus geometric clusters in (tau, tau + window] after the first
/// jumps, where these suprema are approached. Clipped to the integrator's represented range.
inline std::vector<double> hybrid_t_grid(const BVFunction& A, const HybridGridOptions& opt = {}) {
  const double t_max = std::min(opt.t_max, A.domain_end());
  std::vector<double> g;
  for (std::size_t i = 1; i <= opt.uniform_points; ++i) {
    g.push_back(t_max * static_cast<double>(i) / static_cast<double>(opt.uniform_points));
  }
  const auto times = A.jump_times();
  const std::size_t refined = std::min(times.size(), opt.max_refined_jumps);
  for (std::size_t j = 0; j < refined && opt.points_per_jump > 0; ++j) {
    for (std::size_t k = 0; k < opt.points_per_jump; ++k) {
      const double frac = opt.points_per_jump == 1 ? 1.0 : static_cast<double>(k) / (opt.points_per_jump - 1);
      const double t = times[j] + opt.jump_window * std::pow(1e-6, 1.0 - frac);
      if (t > 0.0 && t <= t_max) g.push_back(t);
    }
  }
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

namespace detail {

inline GridSpec describe(const std::vector<double>& t_grid, std::string spacing) {
  return {t_grid.empty() ? 0.0 : *std::max_element(t_grid.begin(), t_grid.end()), t_grid.size(), std::move(spacing)};
}

struct Sample {
  double value = -1.0;
  double t = 0.0;
  double x = 0.0;
};

inline Sample best_of(const std::vector<Sample>& samples) {
  Sample best;
  for (const auto& s : samples) {
    if (s.value > best.value) best = s;  // first maximum wins, independent of thread timing
  }
  return best;
}

/// sup_t ||e^{-xt} int_0^t e^{zs} dA(s)|| over the grid, z = x + iy.
inline Sample damped_sup(const BVFunction& A, Complex z, const std::vector<double>& t_grid, double quad_tol) {
  std::vector<Sample> samples(t_grid.size());
  parallel_for(t_grid.size(), [&](std::size_t i) {
    const double t = t_grid[i];
    const auto v = stieltjes_integral(A, Integrand::exponential(z, -z.real() * t), t, quad_tol);
    samples[i] = {v.norm(), t, z.real()};
  });
  return best_of(samples);
}

inline SupReport make_report(std::string id, const Sample& s, double bound, GridSpec grid) {
  SupReport r;
  r.case_id = std::move(id);
  r.grid_sup = std::max(s.value, 0.0);
  r.bound = bound;
  r.margin = bound - r.grid_sup;
  r.witness_t = s.t;
  r.witness_x = s.x;
  r.grid = std::move(grid);
  return r;
}

inline bool hypothesis_holds(double sup, double C, double quad_tol) { return sup <= C * (1.0 + 1e-9) + quad_tol; }

}  // namespace detail

/// Grid supremum of ||x e^{-xt} int_0^t e^{xs} dA(s)|| over t > T and x in [x0, R(t)]; bound C.
inline SupReport check_tauberian(const BVFunction& A, const TauberianCertificate& cert,
                                 const std::vector<double>& t_grid, const std::vector<double>& x_grid,
                                 double quad_tol = 1e-12, std::string case_id = "tauberian") {
  if (t_grid.empty() || x_grid.empty()) throw PreconditionError("check_tauberian needs nonempty grids");
  std::vector<double> ts;
  for (double t : t_grid) {
    if (t > cert.T) ts.push_back(t);
  }
  if (ts.empty()) throw PreconditionError("check_tauberian: no grid time exceeds T = " + std::to_string(cert.T));
  std::vector<detail::Sample> samples(ts.size());
  parallel_for(ts.size(), [&](std::size_t i) {
    const double t = ts[i];
    const Radius R = cert.R_rule(t);
    detail::Sample best;
    for (double x : x_grid) {
      if (x < cert.x0 || !R.admits(x)) continue;
      const auto v = stieltjes_integral(A, Integrand::exponential(x, -x * t), t, quad_tol);
      const double val = x * v.norm();
      if (val > best.value) best = {val, t, x};
    }
    samples[i] = best;
  });
  return detail::make_report(std::move(case_id), detail::best_of(samples), cert.C,
                             detail::describe(ts, "hybrid t x log-spaced x"));
}

/// sup_t ||e^{-xt} int_0^t e^{zs} dA(s)|| versus C(1 + |y|/x), given sup_t ||e^{-xt} int_0^t e^{xs} dA|| <= C.
inline SupReport check_lemma_2_1(const BVFunction& A, double C, double x, double y, const std::vector<double>& t_grid,
                                 double quad_tol = 1e-12, std::string case_id = "lemma_2_1") {
  if (!(x > 0.0) || !(C > 0.0)) throw PreconditionError("check_lemma_2_1 needs x > 0 and C > 0");
  const auto hyp = detail::damped_sup(A, Complex(x, 0.0), t_grid, quad_tol);
  const auto s = detail::damped_sup(A, Complex(x, y), t_grid, quad_tol);
  auto r = detail::make_report(std::move(case_id), s, C * (1.0 + std::abs(y) / x), detail::describe(t_grid, "given"));
  r.witness_x = x;
  r.hypothesis_sup = hyp.value;
  r.hypothesis_failed = !detail::hypothesis_holds(hyp.value, C, quad_tol);
  return r;
}

/// sup_t ||e^{xt} int_t^inf e^{-zs} dA(s)|| versus C(3 + |y|/x). The tail is taken from
/// `closed_form` as f(z) - f_t(z) when supplied, otherwise integrated up to v_max where the
/// omitted remainder is below 1e-6.
inline SupReport check_lemma_2_2(const BVFunction& A, double C, double x, double y, const std::vector<double>& t_grid,
                                 const ExtensionEvaluator* closed_form = nullptr, double quad_tol = 1e-12,
                                 std::string case_id = "lemma_2_2") {
  if (!(x > 0.0) || !(C > 0.0)) throw PreconditionError("check_lemma_2_2 needs x > 0 and C > 0");
  const Complex z(x, y);
  const double bound = C * (3.0 + std::abs(y) / x);
  const auto hyp = detail::damped_sup(A, Complex(x, 0.0), t_grid, quad_tol);
  const double reach = std::log(std::max(bound / 1e-6, 1.0)) / x;
  std::vector<detail::Sample> samples(t_grid.size());
  parallel_for(t_grid.size(), [&](std::size_t i) {
    const double t = t_grid[i];
    VectorValue tail;
    const double v_max = t + reach;
    // Prefer the direct tail integral: f - f_t through the closed form cancels to roundoff * e^{xt} for large t.
    if (v_max <= A.domain_end()) {
      tail = stieltjes_integral_range(A, Integrand::exponential(-z, x * t), t, v_max, quad_tol);
    } else if (closed_form != nullptr) {
      tail = (*closed_form)(z) - f_t(A, z, t, quad_tol);
      tail *= std::exp(x * t);
    } else {
      throw PreconditionError("check_lemma_2_2: tail range [" + std::to_string(t) + ", " + std::to_string(v_max) +
                              ") exceeds represented range; supply a closed form");
    }
    samples[i] = {tail.norm(), t, x};
  });
  auto r = detail::make_report(std::move(case_id), detail::best_of(samples), bound, detail::describe(t_grid, "given"));
  r.hypothesis_sup = hyp.value;
  r.hypothesis_failed = !detail::hypothesis_holds(hyp.value, C, quad_tol);
  return r;
}

/// For each x in (0, x0]: sup_t ||e^{-xt} int_0^t e^{xs} dA|| versus C x0 / x. Reports the worst margin.
inline SupReport check_lemma_2_3(const BVFunction& A, double C, double x0, const std::vector<double>& x_grid,
                                 const std::vector<double>& t_grid, double quad_tol = 1e-12,
                                 std::string case_id = "lemma_2_3") {
  if (!(x0 > 0.0) || !(C > 0.0)) throw PreconditionError("check_lemma_2_3 needs x0 > 0 and C > 0");
  const auto hyp = detail::damped_sup(A, Complex(x0, 0.0), t_grid, quad_tol);
  std::optional<SupReport> worst;
  for (double x : x_grid) {
    if (!(x > 0.0) || x > x0) throw PreconditionError("check_lemma_2_3: x grid must lie in (0, x0]");
    const auto s = detail::damped_sup(A, Complex(x, 0.0), t_grid, quad_tol);
    auto r = detail::make_report(case_id, s, C * x0 / x, detail::describe(t_grid, "given"));
    if (!worst || r.margin < worst->margin) worst = r;
  }
  if (!worst) throw PreconditionError("check_lemma_2_3 needs a nonempty x grid");
  worst->hypothesis_sup = hyp.value;
  worst->hypothesis_failed = !detail::hypothesis_holds(hyp.value, C, quad_tol);
  return *worst;
}

/// g_x(t) = e^{-xt} int_0^t e^{xs} dA(s) for the unit step at T, computed through the Stieltjes
/// integral and cross-checked against 0 (t <= T), e^{x(T-t)} (t > T).
inline double counterexample_2_4(double T, double x, double t) {
  if (!(T > 0.0) || !(x > 0.0)) throw PreconditionError("counterexample_2_4 needs T > 0 and x > 0");
  const BVFunction step(1, NormKind::euclidean, {Jump{T, VectorValue::scalar(1.0)}}, {});
  const double g = stieltjes_integral(step, Integrand::exponential(x, -x * t), t, 1e-14)[0].real();
  const double closed = t > T ? std::exp(x * (T - t)) : 0.0;
  if (std::abs(g - closed) > 1e-12) {
    throw std::logic_error("counterexample_2_4: quadrature " + std::to_string(g) + " disagrees with closed form " +
                           std::to_string(closed));
  }
  return g;
}

/// sup of g_x over grid points t > t_lower, against `bound`.
inline SupReport counterexample_report(double T, double x, const std::vector<double>& t_grid, double t_lower,
                                       double bound, std::string case_id = "counterexample_2_4") {
  detail::Sample best;
  std::vector<double> used;
  for (double t : t_grid) {
    if (!(t > t_lower)) continue;
    used.push_back(t);
    const double g = counterexample_2_4(T, x, t);
    if (g > best.value) best = {g, t, x};
  }
  return detail::make_report(std::move(case_id), best, bound, detail::describe(used, "given"));
}

}  // namespace tauberian
