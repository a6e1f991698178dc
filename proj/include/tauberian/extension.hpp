#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "tauberian/errors.hpp"
#include "tauberian/special.hpp"
#include "tauberian/vector_value.hpp"

namespace tauberian {

enum class ExtensionKind { inv_one_plus_z, eta_shift, rational };

inline std::string_view to_string(ExtensionKind k) {
  switch (k) {
    case ExtensionKind::inv_one_plus_z: return "inv_one_plus_z";
    case ExtensionKind::eta_shift: return "eta_shift";
    case ExtensionKind::rational: return "rational";
  }
  return "?";
}

/// Closed-form analytic extension of a transform, f_ext(z) = coef * h(z) with h one of
/// 1/(1+z), eta(z+1), or p(z)/q(z) (ascending coefficients).
class ExtensionEvaluator {
 public:
  static ExtensionEvaluator inv_one_plus_z(VectorValue coef = VectorValue::scalar(1.0)) {
    return ExtensionEvaluator(ExtensionKind::inv_one_plus_z, std::move(coef), {}, {});
  }
  static ExtensionEvaluator eta_shift(VectorValue coef = VectorValue::scalar(1.0)) {
    return ExtensionEvaluator(ExtensionKind::eta_shift, std::move(coef), {}, {});
  }
  static ExtensionEvaluator rational(std::vector<Complex> numerator, std::vector<Complex> denominator,
                                     VectorValue coef = VectorValue::scalar(1.0)) {
    if (denominator.empty()) throw PreconditionError("rational extension needs a denominator");
    if (numerator.empty()) numerator.push_back(0.0);
    return ExtensionEvaluator(ExtensionKind::rational, std::move(coef), std::move(numerator), std::move(denominator));
  }
  static ExtensionEvaluator zero(std::size_t dimension = 1) {
    return rational({0.0}, {1.0}, VectorValue(dimension));
  }

  Complex scalar(Complex z) const {
    switch (kind_) {
      case ExtensionKind::inv_one_plus_z: return 1.0 / (1.0 + z);
      case ExtensionKind::eta_shift: return special::eta(z + 1.0);
      case ExtensionKind::rational: return horner(numerator_, z) / horner(denominator_, z);
    }
    return 0.0;
  }

  VectorValue operator()(Complex z) const { return scalar(z) * coef_; }

  ExtensionKind kind() const noexcept { return kind_; }
  std::size_t dimension() const noexcept { return coef_.dimension(); }
  const VectorValue& coef() const noexcept { return coef_; }

 private:
  ExtensionEvaluator(ExtensionKind kind, VectorValue coef, std::vector<Complex> p, std::vector<Complex> q)
      : kind_(kind), coef_(std::move(coef)), numerator_(std::move(p)), denominator_(std::move(q)) {}

  static Complex horner(const std::vector<Complex>& c, Complex z) {
    Complex acc{};
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  ExtensionKind kind_;
  VectorValue coef_;
  std::vector<Complex> numerator_;
  std::vector<Complex> denominator_;
};

}  // namespace tauberian
