#pragma once

#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tauberian/bv_model.hpp"
#include "tauberian/errors.hpp"
#include "tauberian/extension.hpp"
#include "tauberian/growth.hpp"
#include "tauberian/rate_engine.hpp"
#include "tauberian/special.hpp"
#include "tauberian/transform.hpp"
#include "tauberian/verification.hpp"

namespace tauberian {

enum class CoefficientSource { alternating, ones, periodic, file };

inline std::string_view to_string(CoefficientSource s) {
  switch (s) {
    case CoefficientSource::alternating: return "alternating";
    case CoefficientSource::ones: return "ones";
    case CoefficientSource::periodic: return "periodic";
    case CoefficientSource::file: return "file";
  }
  return "?";
}

/// Bounded coefficients b_1, b_2, ... in C^d.
class CoefficientSequence {
 public:
  static CoefficientSequence alternating() { return CoefficientSequence(CoefficientSource::alternating, 1, {1.0, -1.0}); }
  static CoefficientSequence ones() { return CoefficientSequence(CoefficientSource::ones, 1, {1.0}); }
  /// b_n = pattern[(n - 1) mod period]; `pattern` holds `dimension` entries per period slot.
  static CoefficientSequence periodic(std::vector<Complex> pattern, std::size_t dimension = 1) {
    if (pattern.empty() || dimension == 0 || pattern.size() % dimension != 0) {
      throw PreconditionError("periodic pattern length must be a positive multiple of the dimension");
    }
    return CoefficientSequence(CoefficientSource::periodic, dimension, std::move(pattern));
  }
  /// One coefficient per line, components as whitespace-separated "re im" pairs. Blank lines and
  /// lines starting with '#' are skipped.
  static CoefficientSequence from_stream(std::istream& in, const std::string& label = "<stream>") {
    std::vector<Complex> values;
    std::size_t dim = 0;
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      std::istringstream row(line);
      std::vector<double> nums;
      std::string token;
      while (row >> token) {
        try {
          std::size_t used = 0;
          const double v = std::stod(token, &used);
          if (used != token.size() || !std::isfinite(v)) throw std::invalid_argument(token);
          nums.push_back(v);
        } catch (const std::exception&) {
          throw InputError(label + ": line " + std::to_string(lineno) + ": cannot parse '" + token + "'");
        }
      }
      if (nums.empty() || nums.size() % 2 != 0) {
        throw InputError(label + ": line " + std::to_string(lineno) + ": expected whitespace-separated 're im' pairs");
      }
      if (dim == 0) dim = nums.size() / 2;
      if (nums.size() / 2 != dim) {
        throw InputError(label + ": line " + std::to_string(lineno) + ": expected " + std::to_string(dim) +
                         " components, found " + std::to_string(nums.size() / 2));
      }
      for (std::size_t i = 0; i < nums.size(); i += 2) values.emplace_back(nums[i], nums[i + 1]);
    }
    if (dim == 0) throw InputError(label + ": no coefficients");
    CoefficientSequence seq(CoefficientSource::file, dim, std::move(values));
    seq.finite_length_ = seq.values_.size() / dim;
    return seq;
  }
  static CoefficientSequence from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open coefficient file '" + path + "'");
    return from_stream(in, path);
  }

  CoefficientSource source() const noexcept { return source_; }
  std::size_t dimension() const noexcept { return dim_; }
  /// Number of available coefficients (0 = unbounded).
  std::size_t available() const noexcept { return finite_length_; }

  /// Component i of b_n, n >= 1.
  Complex at(std::size_t n, std::size_t i = 0) const {
    const std::size_t slots = values_.size() / dim_;
    if (finite_length_ != 0 && n > finite_length_) throw PreconditionError("coefficient index beyond file length");
    return values_[((n - 1) % slots) * dim_ + i];
  }

 private:
  CoefficientSequence(CoefficientSource s, std::size_t dim, std::vector<Complex> values)
      : source_(s), dim_(dim), values_(std::move(values)) {}

  CoefficientSource source_;
  std::size_t dim_;
  std::vector<Complex> values_;
  std::size_t finite_length_ = 0;
};

/// A(s) = sum_{log n < s} b_n / n with the certificate C = D e, x0 = 1, T = 0, R(t) = e^t.
struct DirichletInstance {
  CoefficientSource source = CoefficientSource::ones;
  std::size_t n_max = 0;
  double D = 1.0;  // max{sup ||b_n||, 1} over n <= n_max
  BVFunction A;
  TauberianCertificate cert;
  std::optional<VectorValue> f0;
  std::string f0_provenance = "absent";

  /// Exact range of the truncated integrator: t < log n_max.
  double valid_until() const { return std::log(static_cast<double>(n_max)); }
};

inline DirichletInstance build_instance(const CoefficientSequence& coeffs, std::size_t n_max,
                                        NormKind norm = NormKind::euclidean) {
  if (n_max < 1) throw PreconditionError("build_instance needs N_max >= 1");
  if (coeffs.available() != 0 && n_max > coeffs.available()) {
    throw PreconditionError("N_max = " + std::to_string(n_max) + " exceeds the " +
                            std::to_string(coeffs.available()) + " coefficients available");
  }
  const std::size_t d = coeffs.dimension();
  std::vector<double> times(n_max);
  std::vector<Complex> sizes(n_max * d);
  double sup = 0.0;
  std::vector<Complex> b(d);
  for (std::size_t n = 1; n <= n_max; ++n) {
    for (std::size_t i = 0; i < d; ++i) b[i] = coeffs.at(n, i);
    sup = std::max(sup, norm_of(b, norm));
    times[n - 1] = std::log(static_cast<double>(n));
    for (std::size_t i = 0; i < d; ++i) sizes[(n - 1) * d + i] = b[i] / static_cast<double>(n);
  }
  DirichletInstance inst;
  inst.source = coeffs.source();
  inst.n_max = n_max;
  inst.D = std::max(sup, 1.0);
  // n_max = 1 has an empty valid range; keep the representation usable at t = 0.
  const double end = n_max > 1 ? std::log(static_cast<double>(n_max)) : 1e-300;
  inst.A = BVFunction::from_jump_arrays(d, norm, std::move(times), std::move(sizes), end);
  inst.cert = TauberianCertificate{inst.D * std::numbers::e, 1.0, 0.0, CutoffRule::exp_t()};
  if (coeffs.source() == CoefficientSource::alternating) {
    inst.f0 = VectorValue({special::log2_oracle()}, norm);
    inst.f0_provenance = "oracle: accelerated alternating series for log 2";
  }
  return inst;
}

struct DecayRow {
  double t = 0.0;
  double decay_norm = 0.0;  // ||A(t) - f(0)||
  double bound_B = 0.0;     // B(t, min{R_opt, e^t}) with C = D e
  double R_used = 1.0;
  double margin = 0.0;      // bound_B - decay_norm
};

/// ||sum_{log n < t} a_n - f(0)|| on the grid, each paired with the three-term bound.
inline std::vector<DecayRow> partial_sum_decay(const DirichletInstance& inst, const std::optional<VectorValue>& f0,
                                               const GrowthBound& M, const std::vector<double>& t_grid) {
  if (!f0) throw PreconditionError("partial_sum_decay: f(0) is absent for this instance (no continuous extension supplied)");
  if (f0->dimension() != inst.A.dimension()) throw PreconditionError("f(0) dimension differs from coefficients");
  const RateInputs in{inst.cert.C, inst.cert.T, M, CutoffRule::exp_t()};
  const LogGrowth mlog(M, in.C);
  std::vector<DecayRow> rows;
  rows.reserve(t_grid.size());
  for (double t : t_grid) {
    if (!(t > 0.0) || !(t < inst.valid_until())) {
      throw DomainError("partial_sum_decay: t = " + std::to_string(t) + " outside (0, log N_max = " +
                        std::to_string(inst.valid_until()) + ")");
    }
    const auto rate = decay_rate(in, mlog, t);
    VectorValue diff = inst.A.evaluate(t) - *f0;
    diff.set_norm_kind(inst.A.norm_kind());
    DecayRow row;
    row.t = t;
    row.decay_norm = diff.norm();
    row.bound_B = rate.bound;
    row.R_used = rate.R_used;
    row.margin = row.bound_B - row.decay_norm;
    rows.push_back(row);
  }
  return rows;
}

/// A(t) = int_0^t f(s) ds for a bounded density with ||f|| <= C0; certificate C = C0, x0 = 1,
/// T = 0, R = inf.
inline std::pair<BVFunction, TauberianCertificate> remark_4_1_instance(const DensityPiece& density, double C0,
                                                                       NormKind norm = NormKind::euclidean) {
  if (!(C0 > 0.0)) throw PreconditionError("remark_4_1_instance needs C0 > 0");
  const double hi = std::isfinite(density.to) ? density.to : density.from + 100.0;
  const double coef = density.coef.norm();
  for (double s : linear_grid(density.from, hi, 4001)) {
    const double v = std::abs(density.profile(s)) * coef;
    if (v > C0 * (1.0 + 1e-12)) {
      throw PreconditionError("density exceeds C0 = " + std::to_string(C0) + " at s = " + std::to_string(s));
    }
  }
  BVFunction A(density.coef.dimension(), norm, {}, {density});
  return {std::move(A), TauberianCertificate{C0, 1.0, 0.0, CutoffRule::infinite()}};
}

/// Sample points x + iy with -1/M(|y|) < x <= 0 and |y| <= y_max.
inline std::vector<Complex> q_region_grid(const GrowthBound& M, double y_max, std::size_t ny, std::size_t nx) {
  std::vector<Complex> pts;
  for (double y : linear_grid(-y_max, y_max, ny)) {
    const double width = 1.0 / M(std::abs(y));
    for (std::size_t j = 1; j <= nx; ++j) {
      pts.emplace_back(-width * (1.0 - static_cast<double>(j) / static_cast<double>(nx)), y);
    }
  }
  return pts;
}

/// Grid sup of ||f_ext(z)|| - M(|y|) over points of Q; bound 0, so a nonnegative margin passes.
/// witness_x / witness_t hold Re z / Im z of the worst point; non-finite values count as +inf.
inline SupReport check_admissibility(const ExtensionEvaluator& f_ext, const GrowthBound& M,
                                     const std::vector<Complex>& grid, std::string case_id = "admissibility") {
  if (grid.empty()) throw PreconditionError("check_admissibility needs a nonempty grid");
  SupReport r;
  r.case_id = std::move(case_id);
  r.grid_sup = -kInfinity;
  for (const Complex& z : grid) {
    const double limit = -1.0 / M(std::abs(z.imag()));
    if (!(z.real() > limit) || z.real() > 0.0) {
      throw PreconditionError("admissibility grid point outside Q: " + std::to_string(z.real()) + " + " +
                              std::to_string(z.imag()) + "i");
    }
    const VectorValue v = f_ext(z);
    const double excess = v.is_finite() ? v.norm() - M(std::abs(z.imag())) : kInfinity;
    if (excess > r.grid_sup || std::isnan(excess)) {
      r.grid_sup = std::isnan(excess) ? kInfinity : excess;
      r.witness_x = z.real();
      r.witness_t = z.imag();
    }
  }
  r.bound = 0.0;
  r.margin = -r.grid_sup;
  r.grid = GridSpec{0.0, grid.size(), "Q region samples"};
  return r;
}

/// Smallest scale c >= 1 (up to a 5% safety factor) with ||f_ext|| <= c(1 + |y|) on the sampled
/// part of Q, found by rescanning until the narrower region no longer raises c.
inline double calibrate_affine_growth(const ExtensionEvaluator& f_ext, double y_max, std::size_t ny = 201,
                                      std::size_t nx = 20) {
  double c = 1.0;
  for (int iter = 0; iter < 50; ++iter) {
    const auto M = GrowthBound::affine(c);
    double need = 1.0;
    for (const Complex& z : q_region_grid(M, y_max, ny, nx)) {
      const VectorValue v = f_ext(z);
      if (!v.is_finite()) throw DomainError("calibrate_affine_growth: extension singular in Q");
      need = std::max(need, v.norm() / (1.0 + std::abs(z.imag())));
    }
    if (need <= c) return c;
    c = 1.05 * need;
  }
  throw DomainError("calibrate_affine_growth did not converge");
}

}  // namespace tauberian
