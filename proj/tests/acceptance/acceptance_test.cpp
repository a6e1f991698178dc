// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tauberian/contour_lab.hpp"
#include "tauberian/dirichlet_app.hpp"
#include "tauberian/rate_engine.hpp"
#include "tauberian/verification.hpp"

using namespace tauberian;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

BVFunction step_at(double T) { return BVFunction(1, NormKind::euclidean, {Jump{T, VectorValue::scalar(1.0)}}, {}); }

DensityPiece exp_piece(double lambda) {
  DensityPiece d;
  d.kind = DensityKind::exponential;
  d.lambda = lambda;
  d.coef = VectorValue::scalar(1.0);
  return d;
}

BVFunction decaying_density() { return BVFunction(1, NormKind::euclidean, {}, {exp_piece(-1.0)}); }

// 1. Stieltjes integral against closed forms on random (z, t).
Outcome quadrature_oracles() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double tau = 1.3;
  const auto step = step_at(tau);
  const auto dens = decaying_density();
  const std::size_t n_block = 60;
  const auto block = build_instance(CoefficientSequence::alternating(), n_block);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const Complex z(4.0 * u(rng) - 1.0, 40.0 * u(rng) - 20.0);
    double t = 0.05 + 3.95 * u(rng);
    Complex got, want;
    switch (k % 3) {
      case 0:
        t = tau + 2.0 * u(rng);  // past the jump, so the reference is nonzero
        got = stieltjes_integral(step, Integrand::exponential(-z), t, 1e-14)[0];
        want = std::exp(-z * tau);
        break;
      case 1:
        got = stieltjes_integral(dens, Integrand::exponential(-z), t, 1e-14)[0];
        want = (1.0 - std::exp(-(1.0 + z) * t)) / (1.0 + z);
        break;
      default:
        t = std::min(t, block.valid_until());
        got = stieltjes_integral(block.A, Integrand::exponential(-z), t, 1e-14)[0];
        want = 0.0;
        for (std::size_t n = 1; n <= n_block && std::log(double(n)) < t; ++n) {
          want += (n % 2 ? 1.0 : -1.0) / double(n) * std::pow(double(n), -z);
        }
    }
    worst = std::max(worst, std::abs(got - want) / std::abs(want));
  }
  return {worst <= 1e-10, "max relative error " + num(worst) + " over 50 cases (tol 1e-10)"};
}

// 2. Step-function counterexample.
Outcome step_counterexample() {
  const double T = 1.0;
  const auto grid = hybrid_t_grid(step_at(T));
  bool ok = true;
  double worst_closed = 0.0;
  std::string notes;
  for (double x : {0.5, 1.0, 4.0}) {
    for (double t : grid) {
      const double g = counterexample_2_4(T, x, t);  // throws if quadrature and closed form differ by > 1e-12
      worst_closed = std::max(worst_closed, std::abs(g - (t > T ? std::exp(x * (T - t)) : 0.0)));
    }
    const auto all = counterexample_report(T, x, grid, 0.0, 1.0 / x);
    ok = ok && std::abs(all.grid_sup - 1.0) <= 1e-3;
    if (x > 1.0) ok = ok && all.grid_sup > 1.0 / x;
    const double t_prime = T + std::log(x) / x + 1.0;
    const auto late = counterexample_report(T, x, linear_grid(0.0, 60.0, 6001), t_prime, 1.0 / x);
    ok = ok && late.grid_sup < 1.0 / x;
    notes += " x=" + num(x) + ": sup " + num(all.grid_sup) + ", sup after T' " + num(late.grid_sup) + ";";
  }
  ok = ok && worst_closed <= 1e-12;
  return {ok, "closed-form deviation " + num(worst_closed) + ";" + notes};
}

// 3. Lemma bounds on three instance families.
Outcome lemma_suite() {
  const auto eta = ExtensionEvaluator::eta_shift();
  const auto inv = ExtensionEvaluator::inv_one_plus_z();
  const auto dirichlet = build_instance(CoefficientSequence::alternating(), 20000);
  struct Family {
    std::string name;
    BVFunction A;
    const ExtensionEvaluator* f;
  };
  const std::vector<Family> families{{"step", step_at(1.0), nullptr},
                                     {"exp_density", decaying_density(), &inv},
                                     {"alternating", dirichlet.A, &eta}};
  const double C = 1.0;
  const std::vector<double> xs{0.1, 0.5, 1.0};
  double worst = kInfinity;
  std::string worst_case;
  int reports = 0, failures = 0;
  auto note = [&](const SupReport& r, const std::string& fam) {
    ++reports;
    if (!r.holds()) ++failures;
    const double rel = r.margin / r.bound;
    if (rel < worst) {
      worst = rel;
      worst_case = fam + "/" + r.case_id;
    }
  };
  for (const auto& fam : families) {
    HybridGridOptions opt;
    if (fam.name == "alternating") opt.uniform_points = 256;
    const auto grid = hybrid_t_grid(fam.A, opt);
    for (double x : xs) {
      for (double y : {0.0, 2.0, 10.0}) {
        note(check_lemma_2_1(fam.A, C, x, y, grid), fam.name);
        note(check_lemma_2_2(fam.A, C, x, y, grid, fam.f), fam.name);
      }
    }
    note(check_lemma_2_3(fam.A, C, 1.0, xs, grid), fam.name);
  }
  return {failures == 0, std::to_string(reports) + " reports, " + std::to_string(failures) +
                             " below -1e-9*bound or with failed hypothesis; smallest margin/bound " + num(worst) +
                             " (" + worst_case + ")"};
}

// 4. Tauberian condition for the alternating Dirichlet series with C = D e over x in (0, e^t].
Outcome dirichlet_tauberian() {
  const auto inst = build_instance(CoefficientSequence::alternating(), 22027);  // log N_max ~ 10
  TauberianCertificate cert = inst.cert;
  cert.x0 = 1e-3;  // the bound holds for every x in (0, e^t]
  HybridGridOptions opt;
  opt.uniform_points = 160;
  opt.points_per_jump = 24;
  const auto ts = hybrid_t_grid(inst.A, opt);
  const auto xs = log_grid(1e-3, 22027.0, 48);
  const auto r = check_tauberian(inst.A, cert, ts, xs);
  return {r.margin >= 0.0 && inst.D == 1.0,
          "C = D e = " + num(cert.C) + ", grid sup " + num(r.grid_sup) + " at (t, x) = (" + num(r.witness_t) + ", " +
              num(r.witness_x) + "), margin " + num(r.margin) + ", " + std::to_string(ts.size()) + " t x " +
              std::to_string(xs.size()) + " x points"};
}

// 5. Inverse of M_log.
Outcome m_log_inverse_suite() {
  std::mt19937_64 rng(5);
  const std::vector<GrowthBound> presets{GrowthBound::constant(2.0), GrowthBound::affine(1.0),
                                         GrowthBound::power(1.0, 2.0), GrowthBound::log(1.0, 2.0),
                                         GrowthBound::exp(1.0, 0.5)};
  double worst = 0.0;
  for (const auto& M : presets) {
    const LogGrowth L(M, 1.0);
    std::uniform_real_distribution<double> u(L.branch_min(), L.branch_min() + 500.0);
    for (int k = 0; k < 50; ++k) {
      const double y = u(rng);
      worst = std::max(worst, std::abs(L(L.inverse(y)) - y) / std::max(1.0, std::abs(y)));
    }
  }
  const double r8 = r_opt(RateInputs{1.0, 0.0, GrowthBound::constant(2.0), CutoffRule::infinite()}, 8.0);
  const double closed = std::sqrt(5.0) / 2.0 * std::numbers::e;
  const double r_e = m_log_inverse(GrowthBound::constant(1.0), 0.2, 1.0);
  const bool ok = worst <= 1e-10 && std::abs(r8 - closed) <= 1e-6 && std::abs(r_e - std::numbers::e) <= 1e-6;
  char buf[160];
  std::snprintf(buf, sizeof buf, "round-trip residual %.3g (250 points); R_opt(8) = %.9f vs (sqrt5/2)e = %.9f", worst,
                r8, closed);
  return {ok, buf};
}

// 6. Contour identity.
Outcome contour_identity() {
  const auto M = GrowthBound::constant(2.0);
  const auto f = ExtensionEvaluator::inv_one_plus_z();
  const auto A = decaying_density();
  double worst = 0.0;
  for (double t : {2.0, 5.0, 10.0}) {
    for (double R : {1.0, 2.0, 5.0}) worst = std::max(worst, cauchy_residual(A, f, M, t, R).residual);
  }
  const auto inst = build_instance(CoefficientSequence::alternating(), 1000);
  const double eta_res = cauchy_residual(inst.A, ExtensionEvaluator::eta_shift(), GrowthBound::affine(2.0), 3.0, 1.5).residual;
  double worst_ratio = kInfinity;
  for (double t : {2.0, 5.0, 10.0}) {
    ContourOptions coarse, fine;
    coarse.density = 0.5;
    fine.density = 1.0;
    const double a = cauchy_residual(A, f, M, t, 2.0, coarse).residual;
    const double b = cauchy_residual(A, f, M, t, 2.0, fine).residual;
    worst_ratio = std::min(worst_ratio, a / b);
  }
  return {worst <= 1e-6 && eta_res <= 1e-5 && worst_ratio >= 4.0,
          "rational max residual " + num(worst) + ", eta residual " + num(eta_res) +
              ", smallest shrink factor under doubling " + num(worst_ratio)};
}

// 7. Measured proof terms against their displayed bounds.
Outcome term_bound_suite() {
  int cases = 0, failures = 0;
  double worst = kInfinity;
  auto record = [&](const TermBounds& b) {
    ++cases;
    if (!b.holds()) ++failures;
    worst = std::min({worst, b.margin_I() / b.I_bound, b.margin_II() / b.II_bound, b.margin_III() / b.III_bound});
  };
  const TauberianCertificate dens_cert{1.0, 1.0, 0.0, CutoffRule::infinite()};
  const auto inv = ExtensionEvaluator::inv_one_plus_z();
  for (double t : {2.0, 5.0, 10.0, 20.0}) {
    for (double R : {1.0, 2.0, 5.0}) record(term_bounds(decaying_density(), dens_cert, inv, GrowthBound::constant(2.0), t, R));
  }
  const auto inst = build_instance(CoefficientSequence::alternating(), 100000);
  const auto eta = ExtensionEvaluator::eta_shift();
  const auto M = GrowthBound::affine(calibrate_affine_growth(eta, 20.0));
  for (auto [t, R] : std::vector<std::pair<double, double>>{{3.0, 1.5}, {5.0, 2.0}, {8.0, 3.0}}) {
    record(term_bounds(inst.A, inst.cert, eta, M, t, R));
  }
  return {failures == 0, std::to_string(cases) + " (t, R) cases, " + std::to_string(failures) +
                             " violations; smallest margin/bound " + num(worst)};
}

// 8. Bounded density: ||A(t) - 1|| = e^{-t} against the explicit bound.
Outcome bounded_density_rate() {
  auto [A, cert] = remark_4_1_instance(exp_piece(-1.0), 1.0);
  const RateInputs in{cert.C, cert.T, GrowthBound::constant(2.0), cert.R_rule};
  const LogGrowth L(in.M, in.C);
  const double tp = t_prime(in);
  bool ok = true;
  double worst = kInfinity;
  std::vector<double> ts, log_decay, log_shape;
  for (int i = 1; i <= 100; ++i) {
    const double t = tp + (50.0 - tp) * i / 100.0;
    const double decay = (evaluate_A(A, t) - VectorValue::scalar(1.0)).norm();
    const auto r = decay_rate(in, L, t);
    ok = ok && std::abs(decay - std::exp(-t)) <= 1e-12 && decay <= r.bound && r.branch == RateBranch::opt_inside;
    worst = std::min(worst, r.bound - decay);
    ts.push_back(t);
    log_decay.push_back(-t);  // log of the exact decay; A(t) - 1 cancels to 0 in double precision for t > 37
    log_shape.push_back(std::log(r.rate_shape));
  }
  auto slope = [&](const std::vector<double>& y) {
    double mt = 0, my = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) mt += ts[i], my += y[i];
    mt /= ts.size();
    my /= ts.size();
    double num_ = 0, den = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) num_ += (ts[i] - mt) * (y[i] - my), den += (ts[i] - mt) * (ts[i] - mt);
    return num_ / den;
  };
  const double s_decay = slope(log_decay), s_shape = slope(log_shape);
  ok = ok && s_decay <= -1.0 / 8.0 && std::abs(s_shape + 1.0 / 8.0) <= 1e-9;
  return {ok, "T' = " + num(tp) + ", smallest bound - decay " + num(worst) + ", fitted slope of log decay " +
                  num(s_decay) + ", of log(1/R_opt) " + num(s_shape)};
}

// 9. Alternating series against the explicit bound with C = e.
Outcome alternating_rate() {
  const double f0 = special::log2_oracle();
  // direct partial sum, paired to limit cancellation
  double direct = 0.0;
  for (long n = 1; n < 10000000; n += 2) direct += 1.0 / (double(n) * double(n + 1));
  const bool oracle_ok = std::abs(direct - f0) <= 1e-7 && std::abs(f0 - std::numbers::ln2) <= 1e-15;
  const auto inst = build_instance(CoefficientSequence::alternating(), 1000000);
  const auto eta = ExtensionEvaluator::eta_shift();
  const double c = calibrate_affine_growth(eta, 50.0, 501, 25);
  const auto M = GrowthBound::affine(c);
  const RateInputs in{inst.cert.C, inst.cert.T, M, CutoffRule::exp_t()};
  const double tp = t_prime(in);
  std::vector<double> ts;
  for (int i = 1; i <= 200; ++i) ts.push_back(tp + (13.0 - tp) * i / 200.0);
  const auto rows = partial_sum_decay(inst, VectorValue::scalar(f0), M, ts);
  double worst = kInfinity;
  for (const auto& r : rows) worst = std::min(worst, r.margin);
  const auto adm = check_admissibility(eta, M, q_region_grid(M, 50.0, 1001, 25));
  return {oracle_ok && worst >= 0.0 && adm.margin >= 0.0,
          "f0 oracle vs 10^7-term sum " + num(std::abs(direct - f0)) + "; M(s) = " + num(c) + "(1+s) (sampled on Q, margin " +
              num(adm.margin) + "); T' = " + num(tp) + "; smallest bound - decay on 200 points in (T', 13] " + num(worst)};
}

// 10. Byte-identical CSV bodies from two CLI runs.
Outcome determinism() {
  namespace fs = std::filesystem;
  const std::string exe = TAUBERIAN_LAB_EXE;
  const std::string problems = TAUBERIAN_PROBLEMS_DIR;
  const auto dir = fs::temp_directory_path() / ("tauberian_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::vector<std::pair<std::string, std::string>> runs{{"verify", "exp_density.json"},
                                                              {"verify", "step_counterexample.json"},
                                                              {"rate", "rate_constant_growth.json"},
                                                              {"contour", "exp_density.json"},
                                                              {"dirichlet", "eta_alternating.json"}};
  bool ok = true;
  int compared = 0;
  for (const auto& [cmd, file] : runs) {
    std::string bodies[2];
    for (int k = 0; k < 2; ++k) {
      const auto out = dir / (cmd + "_" + std::to_string(k) + ".csv");
      const std::string line =
          exe + " " + cmd + " --problem " + problems + "/" + file + " --seed 42 --out " + out.string() + " 2>/dev/null";
      const int status = std::system(line.c_str());
      if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) ok = false;
      bodies[k] = slurp(out);
    }
    ok = ok && !bodies[0].empty() && bodies[0] == bodies[1];
    ++compared;
  }
  fs::remove_all(dir);
  return {ok, std::to_string(compared) + " commands run twice with seed 42, CSV bodies compared byte for byte"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"quadrature oracle equivalence", quadrature_oracles},
      {"step counterexample reproduction", step_counterexample},
      {"lemma bound suite", lemma_suite},
      {"Tauberian condition for Dirichlet series", dirichlet_tauberian},
      {"M_log inverse", m_log_inverse_suite},
      {"contour identity", contour_identity},
      {"proof-term bounds", term_bound_suite},
      {"bounded density decay rate", bounded_density_rate},
      {"alternating series decay rate", alternating_rate},
      {"CLI determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  criterion %2zu  %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
