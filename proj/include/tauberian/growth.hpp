#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "tauberian/errors.hpp"

namespace tauberian {

enum class GrowthKind { constant, affine, power, log, exp };

inline std::string_view to_string(GrowthKind kind) {
  switch (kind) {
    case GrowthKind::constant: return "constant";
    case GrowthKind::affine: return "affine";
    case GrowthKind::power: return "power";
    case GrowthKind::log: return "log";
    case GrowthKind::exp: return "exp";
  }
  return "?";
}

inline GrowthKind growth_kind_from_string(std::string_view name) {
  if (name == "constant") return GrowthKind::constant;
  if (name == "affine") return GrowthKind::affine;
  if (name == "power") return GrowthKind::power;
  if (name == "log") return GrowthKind::log;
  if (name == "exp") return GrowthKind::exp;
  throw InputError("unknown growth kind '" + std::string(name) + "' (expected constant|affine|power|log|exp)");
}

/// Continuous increasing M : [0, inf) -> [1, inf) from a closed-form preset:
///   constant c, affine c(1+s), power c(1+s)^alpha, log c*log(e+s)^beta, exp c*e^{kappa s}.
/// The constructor certifies M >= 1 and monotonicity on a 10^4-point grid over [0, 1e6].
class GrowthBound {
 public:
  static GrowthBound constant(double c) { return GrowthBound(GrowthKind::constant, c, 0.0); }
  static GrowthBound affine(double c) { return GrowthBound(GrowthKind::affine, c, 1.0); }
  static GrowthBound power(double c, double alpha) { return GrowthBound(GrowthKind::power, c, alpha); }
  static GrowthBound log(double c, double beta) { return GrowthBound(GrowthKind::log, c, beta); }
  static GrowthBound exp(double c, double kappa) { return GrowthBound(GrowthKind::exp, c, kappa); }

  GrowthBound(GrowthKind kind, double c, double shape) : kind_(kind), c_(c), shape_(shape) { certify(); }

  double operator()(double s) const {
    switch (kind_) {
      case GrowthKind::constant: return c_;
      case GrowthKind::affine: return c_ * (1.0 + s);
      case GrowthKind::power: return c_ * std::pow(1.0 + s, shape_);
      case GrowthKind::log: return c_ * std::pow(std::log(std::numbers::e + s), shape_);
      case GrowthKind::exp: return c_ * std::exp(shape_ * s);
    }
    return 1.0;
  }

  GrowthKind kind() const noexcept { return kind_; }
  double scale() const noexcept { return c_; }
  /// alpha, beta or kappa depending on kind (1 for affine, 0 for constant).
  double shape() const noexcept { return shape_; }

 private:
  void certify() const {
    if (!(c_ > 0.0) || !std::isfinite(c_) || !std::isfinite(shape_)) {
      throw PreconditionError("growth bound parameters must be finite with c > 0");
    }
    if ((kind_ == GrowthKind::power || kind_ == GrowthKind::log || kind_ == GrowthKind::exp) && shape_ < 0.0) {
      throw PreconditionError("growth bound shape parameter must be >= 0 for M to be increasing");
    }
    constexpr int kPoints = 10000;
    double prev = (*this)(0.0);
    if (!(prev >= 1.0)) throw PreconditionError("growth bound violates M(0) >= 1 (M(0) = " + std::to_string(prev) + ")");
    for (int i = 1; i < kPoints; ++i) {
      const double s = 1e-6 * std::pow(1e12, static_cast<double>(i - 1) / (kPoints - 2));
      const double m = (*this)(s);
      if (std::isnan(m) || m < prev) {
        throw PreconditionError("growth bound is not increasing near s = " + std::to_string(s));
      }
      prev = m;
    }
  }

  GrowthKind kind_;
  double c_;
  double shape_;
};

enum class CutoffKind { exp_t, constant, infinite };

inline std::string_view to_string(CutoffKind kind) {
  switch (kind) {
    case CutoffKind::exp_t: return "exp";
    case CutoffKind::constant: return "constant";
    case CutoffKind::infinite: return "infinite";
  }
  return "?";
}

/// Value of R(t) in [1, inf]. Infinity is a distinct state, never a large float.
class Radius {
 public:
  static Radius infinite() { return Radius(true, 0.0); }
  static Radius finite(double v) { return Radius(false, v); }

  bool is_infinite() const noexcept { return infinite_; }
  double value() const {
    if (infinite_) throw std::logic_error("Radius::value() on infinite radius");
    return value_;
  }
  /// 1/R with 1/inf = 0.
  double reciprocal() const noexcept { return infinite_ ? 0.0 : 1.0 / value_; }
  /// x <= R, exact for the infinite kind.
  bool admits(double x) const noexcept { return infinite_ || x <= value_; }
  bool operator<(double x) const noexcept { return !infinite_ && value_ < x; }
  double as_double() const noexcept { return infinite_ ? std::numeric_limits<double>::infinity() : value_; }

 private:
  Radius(bool inf, double v) : infinite_(inf), value_(v) {}
  bool infinite_;
  double value_;
};

/// Increasing R : [0, inf) -> [1, inf]: e^t, a constant >= 1, or identically infinite.
class CutoffRule {
 public:
  static CutoffRule exp_t() { return CutoffRule(CutoffKind::exp_t, 0.0); }
  static CutoffRule constant(double value) {
    if (!(value >= 1.0) || !std::isfinite(value)) throw PreconditionError("constant cutoff needs 1 <= R < inf");
    return CutoffRule(CutoffKind::constant, value);
  }
  static CutoffRule infinite() { return CutoffRule(CutoffKind::infinite, 0.0); }

  Radius operator()(double t) const {
    switch (kind_) {
      case CutoffKind::exp_t: return Radius::finite(std::exp(std::max(t, 0.0)));
      case CutoffKind::constant: return Radius::finite(value_);
      case CutoffKind::infinite: return Radius::infinite();
    }
    return Radius::infinite();
  }

  /// Smallest t with R(t) >= x, or +inf when no such t exists.
  double first_time_admitting(double x) const {
    switch (kind_) {
      case CutoffKind::exp_t: return std::max(0.0, std::log(x));
      case CutoffKind::constant: return x <= value_ ? 0.0 : std::numeric_limits<double>::infinity();
      case CutoffKind::infinite: return 0.0;
    }
    return 0.0;
  }

  CutoffKind kind() const noexcept { return kind_; }
  double constant_value() const noexcept { return value_; }

 private:
  CutoffRule(CutoffKind kind, double value) : kind_(kind), value_(value) {}
  CutoffKind kind_;
  double value_;
};

/// M_log(a) = M(a) (log a + log M(a) - 1/2 log(5C)), a >= 1.
inline double m_log(const GrowthBound& M, double C, double a) {
  if (!(C > 0.0)) throw PreconditionError("m_log needs C > 0");
  if (!(a >= 1.0)) throw PreconditionError("m_log needs a >= 1");
  const double m = M(a);
  return m * (std::log(a) + std::log(m) - 0.5 * std::log(5.0 * C));
}

/// M_log for fixed (M, C) together with the start of its increasing branch.
///
/// M_log may dip below its value at a = 1 when log(5C)/2 is large; the branch start is the
/// first point of a geometric grid on [1, 1e6] after which sampled values increase strictly.
/// The inverse is defined only on [branch_start, inf).
class LogGrowth {
 public:
  LogGrowth(GrowthBound M, double C) : M_(M), C_(C) {
    if (!(C > 0.0)) throw PreconditionError("LogGrowth needs C > 0");
    constexpr int kPoints = 10000;
    double prev = (*this)(1.0);
    branch_start_ = 1.0;
    for (int i = 1; i < kPoints; ++i) {
      const double a = std::pow(1e6, static_cast<double>(i) / (kPoints - 1));
      const double v = (*this)(a);
      if (!std::isfinite(v)) break;
      if (!(v > prev)) branch_start_ = a;
      prev = v;
    }
    branch_min_ = (*this)(branch_start_);
  }

  double operator()(double a) const { return m_log(M_, C_, a); }
  double branch_start() const noexcept { return branch_start_; }
  double branch_min() const noexcept { return branch_min_; }
  const GrowthBound& growth() const noexcept { return M_; }
  double C() const noexcept { return C_; }

  /// a >= branch_start with |M_log(a) - y| <= 1e-10 max(1, |y|): geometric bracket expansion,
  /// then bisection.
  double inverse(double y) const {
    if (!std::isfinite(y)) throw DomainError("m_log_inverse: y must be finite");
    if (y < branch_min_) {
      throw DomainError("m_log_inverse: y = " + std::to_string(y) + " below branch minimum " +
                        std::to_string(branch_min_) + " (attained at a = " + std::to_string(branch_start_) + ")");
    }
    const double tol = 1e-10 * std::max(1.0, std::abs(y));
    double lo = branch_start_;
    if (std::abs(branch_min_ - y) <= tol) return lo;
    double hi = std::max(2.0 * lo, lo + 1.0);
    for (int i = 0; (*this)(hi) < y; ++i) {
      if (i > 2000 || !std::isfinite(hi)) throw DomainError("m_log_inverse: could not bracket y = " + std::to_string(y));
      lo = hi;
      hi *= 2.0;
    }
    for (int iter = 0; iter < 400; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (!(mid > lo && mid < hi)) break;
      const double v = (*this)(mid);
      if (std::abs(v - y) <= tol) return mid;
      (v < y ? lo : hi) = mid;
    }
    const double vlo = (*this)(lo);
    const double vhi = (*this)(hi);
    return std::abs(vlo - y) <= std::abs(vhi - y) ? lo : hi;
  }

 private:
  GrowthBound M_;
  double C_;
  double branch_start_ = 1.0;
  double branch_min_ = 0.0;
};

inline double m_log_inverse(const GrowthBound& M, double C, double y) { return LogGrowth(M, C).inverse(y); }

}  // namespace tauberian
