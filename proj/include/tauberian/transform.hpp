#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "tauberian/bv_model.hpp"
#include "tauberian/errors.hpp"
#include "tauberian/growth.hpp"

namespace tauberian {

/// Constants of the uniform bound ||x e^{-xt} int_0^t e^{xs} dA(s)|| <= C over t > T, x0 <= x <= R(t).
struct TauberianCertificate {
  double C = 1.0;
  double x0 = 1.0;
  double T = 0.0;
  CutoffRule R_rule = CutoffRule::infinite();
};

struct TransformPoint {
  Complex z;
  VectorValue value;
  double truncation_bound = 0.0;  // 0 for finite transforms
  double t_star = 0.0;            // truncation point used (0 for finite transforms)
};

/// f_t(z) = int_0^t e^{-zs} dA(s).
inline VectorValue f_t(const BVFunction& A, Complex z, double t, double quad_tol) {
  return stieltjes_integral(A, Integrand::exponential(-z), t, quad_tol);
}

/// e^{tz} f_t(z) = int_0^t e^{z(t-s)} dA(s), evaluated without forming e^{tz} separately.
inline VectorValue f_t_scaled(const BVFunction& A, Complex z, double t, double quad_tol) {
  return stieltjes_integral(A, Integrand::exponential(-z, z * t), t, quad_tol);
}

/// e^{tz} (f(z) - f_t(z)) = int_[t,inf) e^{-z(s-t)} dA(s), for Re z >= 0 and a summable tail.
inline VectorValue tail_scaled(const BVFunction& A, Complex z, double t, double quad_tol) {
  if (!A.has_summable_tail()) throw PreconditionError("tail_scaled needs an integrator with summable tail");
  return stieltjes_integral_range(A, Integrand::exponential(-z, z * t), t, kInfinity, quad_tol);
}

/// Hypothesis constant for the tail estimate at real part x: from the certificate,
/// sup_{t>T} ||e^{-xt} int_0^t e^{xs} dA|| <= C/x for x in [x0, R(t)], and the rescaling
/// (C/x0)(x0/x) = C/x covers 0 < x < x0.
inline double tail_constant(const TauberianCertificate& cert, double x) { return cert.C / x; }

/// Lemma-2.2-type bound on ||int_t^inf e^{-zs} dA(s)||: e^{-xt} K (3 + |y|/x).
inline double tail_bound(const TauberianCertificate& cert, Complex z, double t) {
  const double x = z.real();
  return std::exp(-x * t) * tail_constant(cert, x) * (3.0 + std::abs(z.imag()) / x);
}

/// Improper transform f(z) for Re z > 0, truncated at the smallest t* >= T for which the
/// certified tail bound is <= target_err (and the certificate covers x at t*).
inline TransformPoint f_improper(const BVFunction& A, Complex z, const TauberianCertificate& cert,
                                 double target_err, double quad_tol, double t_cap = 1e4) {
  const double x = z.real();
  if (!(x > 0.0)) throw DomainError("f_improper needs Re z > 0 (got " + std::to_string(x) + ")");
  if (!(target_err > 0.0)) throw PreconditionError("f_improper needs target_err > 0");
  const double K = tail_constant(cert, x) * (3.0 + std::abs(z.imag()) / x);
  double t_star = std::max({cert.T, std::log(K / target_err) / x, 0.0});
  // guard against rounding leaving the bound a few ulps above the target
  while (tail_bound(cert, z, t_star) > target_err) t_star = std::nextafter(t_star, kInfinity) * (1.0 + 1e-15);
  if (x >= cert.x0) {
    const double t_cover = cert.R_rule.first_time_admitting(x);
    if (!std::isfinite(t_cover)) {
      throw DomainError("certificate cutoff R(t) never reaches Re z = " + std::to_string(x));
    }
    t_star = std::max(t_star, t_cover);
  }
  const double cap = std::min(t_cap, A.domain_end());
  if (t_star > cap) {
    throw RefusalError("f_improper: required truncation t* = " + std::to_string(t_star) + " exceeds cap " +
                           std::to_string(cap) + "; achievable tail bound " +
                           std::to_string(tail_bound(cert, z, cap)),
                       tail_bound(cert, z, cap));
  }
  TransformPoint out;
  out.z = z;
  out.t_star = t_star;
  out.value = f_t(A, z, t_star, quad_tol);
  out.truncation_bound = tail_bound(cert, z, t_star);
  return out;
}

}  // namespace tauberian
