#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tauberian/errors.hpp"

namespace tauberian {

using Complex = std::complex<double>;

enum class NormKind { euclidean, sup };

inline std::string_view to_string(NormKind kind) {
  return kind == NormKind::euclidean ? "euclidean" : "sup";
}

inline NormKind norm_kind_from_string(std::string_view name) {
  if (name == "euclidean") return NormKind::euclidean;
  if (name == "sup") return NormKind::sup;
  throw InputError("unknown norm '" + std::string(name) + "' (expected euclidean|sup)");
}

inline double norm_of(std::span<const Complex> v, NormKind kind) {
  if (kind == NormKind::sup) {
    double m = 0.0;
    for (const auto& c : v) m = std::max(m, std::abs(c));
    return m;
  }
  // hypot-style accumulation keeps the euclidean norm from overflowing early.
  double scale = 0.0;
  for (const auto& c : v) scale = std::max(scale, std::abs(c));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double acc = 0.0;
  for (const auto& c : v) acc += std::norm(c / scale);
  return scale * std::sqrt(acc);
}

/// Element of the finite-dimensional complex normed space X = C^d.
class VectorValue {
 public:
  VectorValue() : components_(1, Complex{}) {}
  explicit VectorValue(std::size_t dimension, NormKind norm = NormKind::euclidean)
      : components_(dimension, Complex{}), norm_(norm) {
    if (dimension == 0) throw PreconditionError("VectorValue dimension must be >= 1");
  }
  VectorValue(std::vector<Complex> components, NormKind norm = NormKind::euclidean)
      : components_(std::move(components)), norm_(norm) {
    if (components_.empty()) throw PreconditionError("VectorValue dimension must be >= 1");
  }
  VectorValue(std::initializer_list<Complex> components, NormKind norm = NormKind::euclidean)
      : VectorValue(std::vector<Complex>(components), norm) {}

  static VectorValue scalar(Complex value) { return VectorValue({value}); }

  std::size_t dimension() const noexcept { return components_.size(); }
  NormKind norm_kind() const noexcept { return norm_; }
  void set_norm_kind(NormKind kind) noexcept { norm_ = kind; }

  Complex& operator[](std::size_t i) { return components_[i]; }
  const Complex& operator[](std::size_t i) const { return components_[i]; }
  std::span<const Complex> components() const noexcept { return components_; }
  std::span<Complex> components() noexcept { return components_; }

  double norm() const { return norm_of(components_, norm_); }

  bool is_finite() const {
    return std::all_of(components_.begin(), components_.end(), [](const Complex& c) {
      return std::isfinite(c.real()) && std::isfinite(c.imag());
    });
  }

  VectorValue conj() const {
    VectorValue out = *this;
    for (auto& c : out.components_) c = std::conj(c);
    return out;
  }

  VectorValue& operator+=(const VectorValue& other) {
    check_same_dimension(other);
    for (std::size_t i = 0; i < components_.size(); ++i) components_[i] += other.components_[i];
    return *this;
  }
  VectorValue& operator-=(const VectorValue& other) {
    check_same_dimension(other);
    for (std::size_t i = 0; i < components_.size(); ++i) components_[i] -= other.components_[i];
    return *this;
  }
  VectorValue& operator*=(Complex alpha) {
    for (auto& c : components_) c *= alpha;
    return *this;
  }

  friend VectorValue operator+(VectorValue a, const VectorValue& b) { return a += b; }
  friend VectorValue operator-(VectorValue a, const VectorValue& b) { return a -= b; }
  friend VectorValue operator*(Complex alpha, VectorValue v) { return v *= alpha; }
  friend VectorValue operator*(VectorValue v, Complex alpha) { return v *= alpha; }
  friend VectorValue operator-(VectorValue v) { return v *= Complex{-1.0, 0.0}; }

 private:
  void check_same_dimension(const VectorValue& other) const {
    if (other.dimension() != dimension()) {
      throw PreconditionError("dimension mismatch: " + std::to_string(dimension()) + " vs " +
                              std::to_string(other.dimension()));
    }
  }

  std::vector<Complex> components_;
  NormKind norm_ = NormKind::euclidean;
};

}  // namespace tauberian
