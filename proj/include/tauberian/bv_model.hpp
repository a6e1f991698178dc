#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tauberian/errors.hpp"
#include "tauberian/quadrature.hpp"
#include "tauberian/vector_value.hpp"

namespace tauberian {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class DensityKind { constant, exponential, power, damped_power };

inline std::string_view to_string(DensityKind kind) {
  switch (kind) {
    case DensityKind::constant: return "constant";
    case DensityKind::exponential: return "exponential";
    case DensityKind::power: return "power";
    case DensityKind::damped_power: return "damped_power";
  }
  return "?";
}

inline DensityKind density_kind_from_string(std::string_view name) {
  if (name == "constant") return DensityKind::constant;
  if (name == "exponential") return DensityKind::exponential;
  if (name == "power") return DensityKind::power;
  if (name == "damped_power") return DensityKind::damped_power;
  throw InputError("unknown density kind '" + std::string(name) +
                   "' (expected constant|exponential|power|damped_power)");
}

/// Density `coef * profile(s)` on [from, to), with profile one of
/// 1, exp(lambda s), s^p, s^p exp(lambda s).
struct DensityPiece {
  double from = 0.0;
  double to = kInfinity;
  DensityKind kind = DensityKind::constant;
  VectorValue coef;
  Complex lambda{};
  double power = 0.0;

  Complex profile(double s) const {
    switch (kind) {
      case DensityKind::constant: return 1.0;
      case DensityKind::exponential: return std::exp(lambda * s);
      case DensityKind::power: return std::pow(s, power);
      case DensityKind::damped_power: return std::pow(s, power) * std::exp(lambda * s);
    }
    return 0.0;
  }

  /// True when the profile is integrable on [from, inf) against exp(-x s) for every x >= 0.
  bool decays_at_infinity() const {
    return kind == DensityKind::exponential || kind == DensityKind::damped_power
               ? lambda.real() < 0.0
               : false;
  }
};

struct Jump {
  double t = 0.0;
  VectorValue value;
};

/// Kernel exp(rate * s + offset) * poly(s). `offset` lets callers fold e^{-xt}-type scalings
/// into the exponent so that e.g. e^{x(s-t)} never overflows for large x.
struct Integrand {
  Complex rate{};
  Complex offset{};
  std::vector<Complex> poly{1.0};  // ascending powers

  static Integrand exponential(Complex c, Complex d = 0.0) { return {c, d, {1.0}}; }
  static Integrand constant(Complex k) { return {0.0, 0.0, {k}}; }
  static Integrand exp_poly(Complex c, std::vector<Complex> coeffs, Complex d = 0.0) {
    return {c, d, std::move(coeffs)};
  }

  Complex operator()(double s) const {
    Complex p{};
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) p = p * s + *it;
    if (rate == Complex{} && offset == Complex{}) return p;
    return std::exp(rate * s + offset) * p;
  }

  double oscillation() const { return std::abs(rate.imag()); }
};

/// A : [0, inf) -> C^d of locally bounded variation, A(0) = 0, left-continuous:
/// finitely many jumps (sorted, strictly increasing) plus piecewise preset densities.
/// `domain_end` marks the end of the range on which the representation is exact
/// (finite for truncated series).
class BVFunction {
 public:
  BVFunction(std::size_t dimension = 1, NormKind norm = NormKind::euclidean)
      : dim_(dimension), norm_(norm), prefix_(dimension, Complex{}) {
    if (dimension == 0) throw PreconditionError("dimension must be >= 1");
  }

  BVFunction(std::size_t dimension, NormKind norm, std::vector<Jump> jumps,
             std::vector<DensityPiece> densities, double domain_end = kInfinity)
      : BVFunction(dimension, norm) {
    std::vector<double> times;
    std::vector<Complex> sizes;
    times.reserve(jumps.size());
    sizes.reserve(jumps.size() * dimension);
    // Jumps may arrive in any order; coincident times merge.
    std::stable_sort(jumps.begin(), jumps.end(), [](const Jump& a, const Jump& b) { return a.t < b.t; });
    for (const auto& j : jumps) {
      check_vector(j.value, "jump");
      if (!times.empty() && j.t == times.back()) {
        for (std::size_t i = 0; i < dimension; ++i) sizes[sizes.size() - dimension + i] += j.value[i];
        continue;
      }
      times.push_back(j.t);
      sizes.insert(sizes.end(), j.value.components().begin(), j.value.components().end());
    }
    set_jumps(std::move(times), std::move(sizes));
    for (auto& d : densities) add_density(std::move(d));
    set_domain_end(domain_end);
  }

  /// Bulk constructor for large jump sets: `sizes` holds dimension() entries per jump.
  static BVFunction from_jump_arrays(std::size_t dimension, NormKind norm, std::vector<double> times,
                                     std::vector<Complex> sizes, double domain_end = kInfinity) {
    BVFunction a(dimension, norm);
    a.set_jumps(std::move(times), std::move(sizes));
    a.set_domain_end(domain_end);
    return a;
  }

  void add_density(DensityPiece piece) {
    check_vector(piece.coef, "density coefficient");
    if (!(piece.from >= 0.0) || !(piece.to > piece.from)) {
      throw PreconditionError("density piece needs 0 <= from < to");
    }
    if ((piece.kind == DensityKind::power || piece.kind == DensityKind::damped_power) &&
        !(piece.power > -1.0)) {
      throw PreconditionError("power density needs exponent p > -1 to stay locally integrable");
    }
    densities_.push_back(std::move(piece));
  }

  std::size_t dimension() const noexcept { return dim_; }
  NormKind norm_kind() const noexcept { return norm_; }
  double domain_end() const noexcept { return domain_end_; }
  std::size_t jump_count() const noexcept { return times_.size(); }
  std::span<const double> jump_times() const noexcept { return times_; }
  std::span<const Complex> jump_size(std::size_t k) const {
    return std::span<const Complex>(sizes_).subspan(k * dim_, dim_);
  }
  const std::vector<DensityPiece>& densities() const noexcept { return densities_; }

  /// Number of jumps located strictly before t.
  std::size_t jumps_before(double t) const {
    return static_cast<std::size_t>(std::lower_bound(times_.begin(), times_.end(), t) - times_.begin());
  }

  /// True when every jump is finite in number and every unbounded density decays, so the
  /// tail integral over [t, inf) converges absolutely for Re z >= 0.
  bool has_summable_tail() const {
    if (std::isfinite(domain_end_)) return false;
    return std::all_of(densities_.begin(), densities_.end(), [](const DensityPiece& d) {
      return std::isfinite(d.to) || d.decays_at_infinity();
    });
  }

  VectorValue zero() const { return VectorValue(dim_, norm_); }

  void check_in_domain(double t, std::string_view what) const {
    if (!(t >= 0.0)) throw PreconditionError(std::string(what) + ": t must be >= 0");
    if (t > domain_end_) {
      throw DomainError(std::string(what) + ": t = " + std::to_string(t) +
                        " beyond represented range " + std::to_string(domain_end_));
    }
  }

  /// Left-continuous value A(t) = sum_{tau < t} Delta + integral of the density over [0, t).
  VectorValue evaluate(double t, double quad_tol = 1e-13) const;

 private:
  void set_jumps(std::vector<double> times, std::vector<Complex> sizes) {
    if (sizes.size() != times.size() * dim_) throw PreconditionError("jump size array has wrong length");
    for (std::size_t k = 0; k < times.size(); ++k) {
      if (!(times[k] >= 0.0) || !std::isfinite(times[k])) {
        throw PreconditionError("jump location must be finite and >= 0");
      }
      if (k > 0 && !(times[k] > times[k - 1])) {
        throw PreconditionError("jump locations must be strictly increasing");
      }
    }
    times_ = std::move(times);
    sizes_ = std::move(sizes);
    prefix_.assign((times_.size() + 1) * dim_, Complex{});
    for (std::size_t k = 0; k < times_.size(); ++k) {
      for (std::size_t i = 0; i < dim_; ++i) {
        prefix_[(k + 1) * dim_ + i] = prefix_[k * dim_ + i] + sizes_[k * dim_ + i];
      }
    }
  }

  void set_domain_end(double end) {
    if (!(end > 0.0)) throw PreconditionError("domain_end must be > 0");
    domain_end_ = end;
  }

  void check_vector(const VectorValue& v, std::string_view what) const {
    if (v.dimension() != dim_) {
      throw PreconditionError(std::string(what) + " has dimension " + std::to_string(v.dimension()) +
                              ", expected " + std::to_string(dim_));
    }
    if (!v.is_finite()) throw PreconditionError(std::string(what) + " is not finite");
  }

  std::size_t dim_;
  NormKind norm_;
  std::vector<double> times_;
  std::vector<Complex> sizes_;
  std::vector<Complex> prefix_;  // prefix_[k*dim + i] = sum of the first k jumps
  std::vector<DensityPiece> densities_;
  double domain_end_ = kInfinity;
};

namespace detail {

inline int initial_panels_for(double length, double frequency) {
  if (!std::isfinite(length)) return 8;
  const double n = std::ceil(length * frequency / std::numbers::pi) + 1.0;
  return static_cast<int>(std::clamp(n, 1.0, 20000.0));
}

/// Integral over [a, b) of phi(s) * profile(s) ds for one density piece (b may be inf).
inline Complex integrate_piece(const DensityPiece& piece, const Integrand& phi, double a, double b,
                               double abs_tol) {
  auto f = [&](double s) { return phi(s) * piece.profile(s); };
  const double freq = phi.oscillation() + std::abs(piece.lambda.imag());
  if (std::isfinite(b)) {
    return quad::integrate(f, a, b, abs_tol, initial_panels_for(b - a, freq)).value;
  }
  return quad::integrate_to_infinity(f, a, abs_tol, 8 + initial_panels_for(8.0, freq)).value;
}

}  // namespace detail

namespace detail {

inline void check_range(const BVFunction& A, double a, double b, double quad_tol) {
  if (!(quad_tol > 0.0)) throw PreconditionError("quad_tol must be > 0");
  if (!(a >= 0.0) || !(b >= a)) throw PreconditionError("integration range must satisfy 0 <= a <= b");
  if (b > A.domain_end()) {
    throw DomainError("integration range end " + std::to_string(b) + " beyond represented range " +
                      std::to_string(A.domain_end()));
  }
}

inline void add_jump_part(const BVFunction& A, const Integrand& phi, double a, double b, VectorValue& out) {
  const std::size_t d = A.dimension();
  const auto times = A.jump_times();
  const std::size_t first = A.jumps_before(a);
  const std::size_t last = A.jumps_before(b);
  auto acc = out.components();
  for (std::size_t k = first; k < last; ++k) {
    const Complex w = phi(times[k]);
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) {
      throw NonfiniteError("integrand is not finite at a jump", times[k]);
    }
    const auto size = A.jump_size(k);
    for (std::size_t i = 0; i < d; ++i) acc[i] += w * size[i];
  }
}

inline void add_density_part(const BVFunction& A, const Integrand& phi, double a, double b, double quad_tol,
                             VectorValue& out) {
  for (const auto& piece : A.densities()) {
    const double lo = std::max(a, piece.from);
    const double hi = std::min(b, piece.to);
    if (!(hi > lo)) continue;
    const double scale = std::max(piece.coef.norm(), 1e-300);
    const Complex scalar = integrate_piece(piece, phi, lo, hi, quad_tol / scale);
    for (std::size_t i = 0; i < A.dimension(); ++i) out[i] += scalar * piece.coef[i];
  }
}

}  // namespace detail

/// Stieltjes integral of phi against dA over [a, b): jumps with a <= tau < b, densities over [a, b).
/// `b` may be +inf when the tail is summable. Each density piece is integrated to absolute
/// accuracy quad_tol (scaled by the piece's coefficient norm).
inline VectorValue stieltjes_integral_range(const BVFunction& A, const Integrand& phi, double a, double b,
                                            double quad_tol) {
  detail::check_range(A, a, b, quad_tol);
  VectorValue out = A.zero();
  detail::add_jump_part(A, phi, a, b, out);
  detail::add_density_part(A, phi, a, b, quad_tol, out);
  return out;
}

/// int_0^t phi(s) dA(s); a jump at tau contributes iff tau < t (including tau = 0).
inline VectorValue stieltjes_integral(const BVFunction& A, const Integrand& phi, double t, double quad_tol) {
  A.check_in_domain(t, "stieltjes_integral");
  return stieltjes_integral_range(A, phi, 0.0, t, quad_tol);
}

inline VectorValue BVFunction::evaluate(double t, double quad_tol) const {
  check_in_domain(t, "evaluate_A");
  VectorValue out = zero();
  const std::size_t k = jumps_before(t);
  for (std::size_t i = 0; i < dim_; ++i) out[i] = prefix_[k * dim_ + i];
  detail::add_density_part(*this, Integrand::constant(1.0), 0.0, t, quad_tol, out);
  return out;
}

inline VectorValue evaluate_A(const BVFunction& A, double t) { return A.evaluate(t); }

/// Total variation on [0, t): sum of jump norms before t plus integral of the density norm.
inline double total_variation(const BVFunction& A, double t, double quad_tol = 1e-12) {
  A.check_in_domain(t, "total_variation");
  double tv = 0.0;
  const std::size_t k = A.jumps_before(t);
  for (std::size_t j = 0; j < k; ++j) tv += norm_of(A.jump_size(j), A.norm_kind());
  for (const auto& piece : A.densities()) {
    const double lo = piece.from;
    const double hi = std::min(t, piece.to);
    if (!(hi > lo)) continue;
    auto f = [&](double s) { return Complex(std::abs(piece.profile(s)), 0.0); };
    const double n = piece.coef.norm();
    if (n == 0.0) continue;
    tv += n * quad::integrate(f, lo, hi, quad_tol / n, detail::initial_panels_for(hi - lo, 0.0)).value.real();
  }
  return tv;
}

}  // namespace tauberian
