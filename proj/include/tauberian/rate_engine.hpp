#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "tauberian/errors.hpp"
#include "tauberian/growth.hpp"

namespace tauberian {

struct RateInputs {
  double C = 1.0;  // Tauberian constant
  double T = 0.0;
  GrowthBound M = GrowthBound::constant(1.0);
  CutoffRule R_rule = CutoffRule::infinite();
};

enum class RateBranch { opt_inside, cutoff_limited };

inline std::string_view to_string(RateBranch b) {
  return b == RateBranch::opt_inside ? "opt_inside" : "cutoff_limited";
}

struct TPrime {
  double value = 0.0;
  double threshold_term = 0.0;  // 4M(1)(log M(1) - 1/2 log(5C)) before clamping
  bool clamped = false;          // threshold_term < 0 was clamped to 0
};

struct RateResult {
  double t = 0.0;
  double R_opt = 1.0;
  Radius R_rule_t = Radius::infinite();
  double R_used = 1.0;
  double bound = 0.0;
  RateBranch branch = RateBranch::opt_inside;
  double T_prime = 0.0;
  std::optional<double> K_prime;  // absent when M(1) <= sqrt(5C): bound via the three-term estimate only
  double rate_shape = 0.0;         // max{1/R_opt, 1/R(t)}
};

/// B(t, R) = 10C/R + M(R)/(t R^3) + 2R M(R)^2 exp(-t / (2 M(R))).
inline double bound_B(const RateInputs& in, double t, double R) {
  if (!(t > 0.0)) throw PreconditionError("bound_B needs t > 0");
  if (!(R >= 1.0)) throw PreconditionError("bound_B needs R >= 1");
  const double m = in.M(R);
  return 10.0 * in.C / R + m / (t * R * R * R) + 2.0 * R * m * m * std::exp(-t / (2.0 * m));
}

/// Radius solving t = 4 M(R)(log R + log M(R) - 1/2 log(5C)), i.e. M_log^{-1}(t/4).
inline double r_opt(const LogGrowth& mlog, double t) { return mlog.inverse(t / 4.0); }
inline double r_opt(const RateInputs& in, double t) { return r_opt(LogGrowth(in.M, in.C), t); }

inline TPrime t_prime_detail(const RateInputs& in) {
  const double m1 = in.M(1.0);
  TPrime tp;
  tp.threshold_term = 4.0 * m1 * (std::log(m1) - 0.5 * std::log(5.0 * in.C));
  tp.clamped = tp.threshold_term < 0.0;
  tp.value = std::max(in.T, std::max(tp.threshold_term, 0.0));
  return tp;
}

inline double t_prime(const RateInputs& in) { return t_prime_detail(in).value; }

/// K' = (log M(1) - log sqrt(5C))^{-1}, reported only when positive and finite.
inline std::optional<double> k_prime(const RateInputs& in) {
  const double denom = std::log(in.M(1.0)) - 0.5 * std::log(5.0 * in.C);
  if (!(denom > 0.0)) return std::nullopt;
  return 1.0 / denom;
}

inline RateResult decay_rate(const RateInputs& in, const LogGrowth& mlog, double t) {
  const double tp = t_prime(in);
  if (!(t > tp)) {
    throw PreconditionError("decay_rate needs t > T' = " + std::to_string(tp) + " (got t = " + std::to_string(t) + ")");
  }
  RateResult r;
  r.t = t;
  r.T_prime = tp;
  r.K_prime = k_prime(in);
  r.R_opt = r_opt(mlog, t);
  r.R_rule_t = in.R_rule(t);
  if (r.R_rule_t < r.R_opt) {
    r.branch = RateBranch::cutoff_limited;
    r.R_used = r.R_rule_t.value();
  } else {
    r.branch = RateBranch::opt_inside;
    r.R_used = r.R_opt;
  }
  r.bound = bound_B(in, t, r.R_used);
  r.rate_shape = std::max(1.0 / r.R_opt, r.R_rule_t.reciprocal());
  return r;
}

inline RateResult decay_rate(const RateInputs& in, double t) { return decay_rate(in, LogGrowth(in.M, in.C), t); }

}  // namespace tauberian
