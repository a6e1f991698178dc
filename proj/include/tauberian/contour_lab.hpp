#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "tauberian/bv_model.hpp"
#include "tauberian/errors.hpp"
#include "tauberian/extension.hpp"
#include "tauberian/growth.hpp"
#include "tauberian/parallel.hpp"
#include "tauberian/quadrature.hpp"
#include "tauberian/transform.hpp"

namespace tauberian {

/// Newman's multiplier (1 + z^2/R^2)^2.
inline Complex fudge_factor(Complex z, double R) {
  if (!(R > 0.0)) throw PreconditionError("fudge_factor needs R > 0");
  const Complex w = 1.0 + z * z / (R * R);
  return w * w;
}

enum class PieceKind { gamma1, gamma1_reflected, gamma2 };

inline std::string_view to_string(PieceKind k) {
  switch (k) {
    case PieceKind::gamma1: return "gamma1";
    case PieceKind::gamma1_reflected: return "gamma1_reflected";
    case PieceKind::gamma2: return "gamma2";
  }
  return "?";
}

/// Quadrature nodes of one contour piece; weights already include dz/ds.
struct ContourPiece {
  std::string name;
  PieceKind kind;
  std::vector<double> s_param;
  std::vector<Complex> z;
  std::vector<Complex> dz;
};

struct ContourOptions {
  /// Panels per unit of (arc length x local frequency / 2pi); 16 Gauss-Legendre nodes per panel.
  double density = 4.0;
  int points_per_panel = 16;
  double quad_tol = 1e-14;
  /// Direct route on gamma1 forms e^{tz}(f_t - f) by subtraction; refuse when tR exceeds this.
  double max_direct_exponent = 30.0;
};

/// Gamma1: right half circle |z| = R from -iR to iR. Reflected arc: left half circle from iR
/// through -R to -iR. Gamma2: [iR, -d + iR], [-d + iR, -d - iR], [-d - iR, -iR] with
/// d = 1/(2M(R)); the vertical segment is split at |y| = 1 and y = 0.
struct ContourSpec {
  double R = 1.0;
  double t = 1.0;
  double left_abscissa = -0.5;
  std::vector<ContourPiece> pieces;
};

namespace detail {

inline int panel_count(double density, double length, double t, double dist, int points) {
  const double scale = 1.0 + t + 1.0 / dist;
  const double n = std::ceil(density * length * scale * 16.0 / (2.0 * std::numbers::pi * points));
  return static_cast<int>(std::clamp(n, 1.0, 1e6));
}

inline void add_arc(ContourPiece& piece, double R, double theta0, double theta1, int panels,
                    const quad::GaussLegendreRule& rule) {
  const double h = (theta1 - theta0) / panels;
  for (int p = 0; p < panels; ++p) {
    const double a = theta0 + p * h;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double theta = a + 0.5 * h * (rule.nodes[k] + 1.0);
      const Complex z = std::polar(R, theta);
      piece.s_param.push_back(theta);
      piece.z.push_back(z);
      piece.dz.push_back(Complex(0.0, 1.0) * z * (0.5 * h * rule.weights[k]));
    }
  }
}

inline void add_segment(ContourPiece& piece, Complex from, Complex to, int panels, const quad::GaussLegendreRule& rule,
                        double s_offset) {
  const Complex dir = to - from;
  const double h = 1.0 / panels;
  for (int p = 0; p < panels; ++p) {
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double u = (p + 0.5 * (rule.nodes[k] + 1.0)) * h;
      piece.s_param.push_back(s_offset + u * std::abs(dir));
      piece.z.push_back(from + u * dir);
      piece.dz.push_back(dir * (0.5 * h * rule.weights[k]));
    }
  }
}

inline double segment_distance_to_origin(Complex a, Complex b) {
  const Complex d = b - a;
  const double len2 = std::norm(d);
  double u = len2 > 0.0 ? -(std::conj(d) * a).real() / len2 : 0.0;
  u = std::clamp(u, 0.0, 1.0);
  return std::abs(a + u * d);
}

}  // namespace detail

inline ContourSpec build_contour(const GrowthBound& M, double R, double t, const ContourOptions& opt = {}) {
  if (!(R >= 1.0)) throw PreconditionError("contour radius must satisfy R >= 1");
  if (!(t > 0.0)) throw PreconditionError("contour needs t > 0");
  if (!(opt.density > 0.0) || opt.points_per_panel < 2) throw PreconditionError("invalid contour quadrature density");
  const auto rule = quad::gauss_legendre(opt.points_per_panel);
  ContourSpec contour;
  contour.R = R;
  contour.t = t;
  contour.left_abscissa = -1.0 / (2.0 * M(R));
  const double pi = std::numbers::pi;
  const int arc_panels = detail::panel_count(opt.density, pi * R, t, R, opt.points_per_panel);

  ContourPiece g1{"gamma1", PieceKind::gamma1, {}, {}, {}};
  detail::add_arc(g1, R, -pi / 2.0, pi / 2.0, arc_panels, rule);
  ContourPiece g1r{"gamma1_reflected", PieceKind::gamma1_reflected, {}, {}, {}};
  detail::add_arc(g1r, R, pi / 2.0, 3.0 * pi / 2.0, arc_panels, rule);

  ContourPiece g2{"gamma2", PieceKind::gamma2, {}, {}, {}};
  const double d = contour.left_abscissa;
  std::vector<Complex> knots{Complex(0.0, R), Complex(d, R)};
  for (double y : {1.0, 0.0, -1.0}) {
    if (std::abs(y) < R) knots.emplace_back(d, y);
  }
  knots.emplace_back(d, -R);
  knots.emplace_back(0.0, -R);
  double offset = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double len = std::abs(knots[i + 1] - knots[i]);
    const double dist = detail::segment_distance_to_origin(knots[i], knots[i + 1]);
    const int panels = detail::panel_count(opt.density, len, t, dist, opt.points_per_panel);
    detail::add_segment(g2, knots[i], knots[i + 1], panels, rule, offset);
    offset += len;
  }
  contour.pieces = {std::move(g1), std::move(g1r), std::move(g2)};
  return contour;
}

enum class TailRoute { tail_integral, direct_difference };

/// The three scaled integrands of the Cauchy identity (without the dz weight):
///   gamma1:            e^{tz}(f_t(z) - f(z)) (1 + z^2/R^2)^2 / z
///   gamma1_reflected:  e^{tz} f_t(z) (1 + z^2/R^2)^2 / z
///   gamma2:            e^{tz} f(z) (1 + z^2/R^2)^2 / z
/// On gamma1 the difference is the negated tail int_[t,inf) e^{-z(s-t)} dA when the integrator's
/// tail is summable; otherwise it is formed by subtraction.
class ContourIntegrands {
 public:
  ContourIntegrands(const BVFunction& A, const ExtensionEvaluator& f_ext, double t, double R, double quad_tol)
      : A_(A), f_(f_ext), t_(t), R_(R), tol_(quad_tol) {
    if (f_ext.dimension() != A.dimension()) throw PreconditionError("extension and integrator dimensions differ");
    route_ = A.has_summable_tail() ? TailRoute::tail_integral : TailRoute::direct_difference;
  }

  TailRoute route() const noexcept { return route_; }

  VectorValue scaled_value(PieceKind kind, Complex z) const {
    switch (kind) {
      case PieceKind::gamma1:
        if (route_ == TailRoute::tail_integral) return -tail_scaled(A_, z, t_, tol_);
        return f_t_scaled(A_, z, t_, tol_) - scaled_extension(z);
      case PieceKind::gamma1_reflected: return f_t_scaled(A_, z, t_, tol_);
      case PieceKind::gamma2: return scaled_extension(z);
    }
    return A_.zero();
  }

  Complex kernel(Complex z) const { return fudge_factor(z, R_) / z; }

  VectorValue integrand(PieceKind kind, Complex z) const { return kernel(z) * scaled_value(kind, z); }

 private:
  VectorValue scaled_extension(Complex z) const {
    VectorValue v = f_(z);
    v.set_norm_kind(A_.norm_kind());
    return v * std::exp(t_ * z);
  }

  const BVFunction& A_;
  const ExtensionEvaluator& f_;
  double t_, R_, tol_;
  TailRoute route_;
};

struct ResidualReport {
  double residual = 0.0;  // ||LHS' - (f_t(0) - f(0))|| / max(1e-30, ||f_t(0) - f(0)||)
  VectorValue lhs;
  VectorValue reference;  // f_t(0) - f(0) = A(t) - f_ext(0)
  VectorValue gamma1, reflected, gamma2;  // the three contour integrals, each divided by 2 pi i
  TailRoute route = TailRoute::tail_integral;
  std::size_t nodes = 0;
};

namespace detail {

inline VectorValue integrate_piece(const ContourIntegrands& F, const ContourPiece& piece, const BVFunction& A) {
  std::vector<VectorValue> terms(piece.z.size(), A.zero());
  parallel_for(piece.z.size(), [&](std::size_t i) { terms[i] = F.integrand(piece.kind, piece.z[i]) * piece.dz[i]; });
  VectorValue sum = A.zero();
  for (const auto& v : terms) sum += v;  // fixed order
  return sum * (1.0 / Complex(0.0, 2.0 * std::numbers::pi));
}

inline void check_direct_budget(const ContourIntegrands& F, double t, double R, const ContourOptions& opt) {
  if (F.route() == TailRoute::direct_difference && t * R > opt.max_direct_exponent) {
    throw RefusalError("contour: e^{tR} = e^" + std::to_string(t * R) +
                           " on gamma1 exceeds the subtraction budget e^" + std::to_string(opt.max_direct_exponent) +
                           "; reduce t*R or supply an integrator with a summable tail",
                       t * R);
  }
}

}  // namespace detail

/// Relative residual of the Cauchy identity with the gamma2 part of the f_t-integral moved to the
/// reflected arc:
///   (1/2 pi i)[int_G1 (f_t - f) g + int_G1' f_t g - int_G2 f g] = f_t(0) - f(0),
/// g(z) = e^{tz}(1 + z^2/R^2)^2 / z, f_t(0) = A(t), f(0) = f_ext(0).
inline ResidualReport cauchy_residual(const BVFunction& A, const ExtensionEvaluator& f_ext, const GrowthBound& M,
                                      double t, double R, const ContourOptions& opt = {}) {
  const auto contour = build_contour(M, R, t, opt);
  ContourIntegrands F(A, f_ext, t, R, opt.quad_tol);
  detail::check_direct_budget(F, t, R, opt);
  ResidualReport rep;
  rep.route = F.route();
  rep.gamma1 = detail::integrate_piece(F, contour.pieces[0], A);
  rep.reflected = detail::integrate_piece(F, contour.pieces[1], A);
  rep.gamma2 = detail::integrate_piece(F, contour.pieces[2], A);
  for (const auto& p : contour.pieces) rep.nodes += p.z.size();
  rep.lhs = rep.gamma1 + rep.reflected - rep.gamma2;
  VectorValue f0 = f_ext(0.0);
  f0.set_norm_kind(A.norm_kind());
  rep.reference = A.evaluate(t, opt.quad_tol) - f0;
  const double denom = std::max(1e-30, rep.reference.norm());
  rep.residual = (rep.lhs - rep.reference).norm() / denom;
  return rep;
}

struct TermBounds {
  double I = 0.0, II = 0.0, III = 0.0;  // measured (1/2pi) int ||integrand|| |dz| per piece
  double I_bound = 0.0;                 // 6C/R
  double II_bound = 0.0;                // 4C/R
  double III_bound = 0.0;               // M(R)/(tR^3) + 2R M(R)^2 e^{-t/(2M(R))}
  double I_derived = 0.0;               // 12C/(pi R) + 2C/R
  double II_derived = 0.0;              // 4C/(pi R) + 2C/R

  double margin_I() const { return I_bound - I; }
  double margin_II() const { return II_bound - II; }
  double margin_III() const { return III_bound - III; }
  double margin_I_derived() const { return I_derived - I; }
  double margin_II_derived() const { return II_derived - II; }
  /// All measured pieces within their displayed bounds up to rel_noise.
  bool holds(double rel_noise = 1e-9) const {
    return margin_I() >= -rel_noise * I_bound && margin_II() >= -rel_noise * II_bound &&
           margin_III() >= -rel_noise * III_bound;
  }
};

/// Measures I, II, III of the three-term split and reports them next to their estimates.
/// Needs t > T and 1 <= R <= R(t) so that the certificate covers every Re z on the arcs.
inline TermBounds term_bounds(const BVFunction& A, const TauberianCertificate& cert, const ExtensionEvaluator& f_ext,
                              const GrowthBound& M, double t, double R, const ContourOptions& opt = {}) {
  if (!(t > cert.T)) throw PreconditionError("term_bounds needs t > T");
  if (!cert.R_rule(t).admits(R)) throw PreconditionError("term_bounds needs R <= R(t)");
  const auto contour = build_contour(M, R, t, opt);
  ContourIntegrands F(A, f_ext, t, R, opt.quad_tol);
  detail::check_direct_budget(F, t, R, opt);
  auto measure = [&](const ContourPiece& piece) {
    std::vector<double> terms(piece.z.size());
    parallel_for(piece.z.size(), [&](std::size_t i) {
      terms[i] = F.integrand(piece.kind, piece.z[i]).norm() * std::abs(piece.dz[i]);
    });
    double sum = 0.0;
    for (double v : terms) sum += v;
    return sum / (2.0 * std::numbers::pi);
  };
  TermBounds b;
  b.I = measure(contour.pieces[0]);
  b.II = measure(contour.pieces[1]);
  b.III = measure(contour.pieces[2]);
  const double C = cert.C;
  const double pi = std::numbers::pi;
  const double m = M(R);
  b.I_bound = 6.0 * C / R;
  b.II_bound = 4.0 * C / R;
  b.I_derived = 12.0 * C / (pi * R) + 2.0 * C / R;
  b.II_derived = 4.0 * C / (pi * R) + 2.0 * C / R;
  b.III_bound = m / (t * R * R * R) + 2.0 * R * m * m * std::exp(-t / (2.0 * m));
  return b;
}

struct ContourDumpRow {
  std::string piece;
  double s_param;
  Complex z;
  double magnitude;  // ||integrand||, dz excluded
};

inline std::vector<ContourDumpRow> contour_dump(const BVFunction& A, const ExtensionEvaluator& f_ext,
                                                const GrowthBound& M, double t, double R,
                                                const ContourOptions& opt = {}) {
  const auto contour = build_contour(M, R, t, opt);
  ContourIntegrands F(A, f_ext, t, R, opt.quad_tol);
  detail::check_direct_budget(F, t, R, opt);
  std::vector<ContourDumpRow> rows;
  for (const auto& piece : contour.pieces) {
    std::vector<double> mags(piece.z.size());
    parallel_for(piece.z.size(), [&](std::size_t i) { mags[i] = F.integrand(piece.kind, piece.z[i]).norm(); });
    for (std::size_t i = 0; i < piece.z.size(); ++i) rows.push_back({piece.name, piece.s_param[i], piece.z[i], mags[i]});
  }
  return rows;
}

}  // namespace tauberian
