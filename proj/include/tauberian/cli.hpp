#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "tauberian/contour_lab.hpp"
#include "tauberian/dirichlet_app.hpp"
#include "tauberian/problem_io.hpp"
#include "tauberian/rate_engine.hpp"
#include "tauberian/verification.hpp"

namespace tauberian::cli {

inline constexpr const char* kVersion = "0.1.0";

enum class Command { rate, verify, contour, dirichlet };

inline Command command_from_string(const std::string& name) {
  if (name == "rate") return Command::rate;
  if (name == "verify") return Command::verify;
  if (name == "contour") return Command::contour;
  if (name == "dirichlet") return Command::dirichlet;
  throw InputError("unknown command '" + name + "' (expected rate|verify|contour|dirichlet)");
}

inline const char* to_string(Command c) {
  switch (c) {
    case Command::rate: return "rate";
    case Command::verify: return "verify";
    case Command::contour: return "contour";
    case Command::dirichlet: return "dirichlet";
  }
  return "?";
}

struct RunConfig {
  Command command = Command::rate;
  std::string problem_path;
  std::string output_path;        // CSV; metadata goes to <output_path>.meta.json
  std::string dump_path;          // contour only: per-node dump CSV
  std::optional<io::GridArg> t_grid;
  std::optional<io::GridArg> x_grid;
  double quad_tol = 1e-12;
  std::uint64_t seed = 1;
};

enum ExitStatus : int { kOk = 0, kBoundViolated = 1, kInputError = 2 };

/// Fixed "%.17g" formatting so identical runs give byte-identical CSV bodies.
inline std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header) { row(header); }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) body_ << (i ? "," : "") << cells[i];
    body_ << '\n';
  }
  std::string str() const { return body_.str(); }

 private:
  std::ostringstream body_;
};

namespace detail {

using nlohmann::json;

inline json grid_json(const std::vector<double>& g, const std::string& spacing) {
  json j;
  j["points"] = g.size();
  j["spacing"] = spacing;
  if (!g.empty()) {
    j["min"] = g.front();
    j["max"] = g.back();
  }
  return j;
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

template <class T>
const T& require(const std::optional<T>& v, const char* field, Command cmd) {
  if (!v) throw InputError(std::string("command '") + to_string(cmd) + "' needs '" + field + "' in the problem file");
  return *v;
}

inline std::vector<double> linear_from(const io::GridArg& g) { return linear_grid(g.a, g.b, g.n); }
inline std::vector<double> log_from(const io::GridArg& g) {
  if (!(g.a > 0.0)) throw InputError("x grid needs a > 0");
  return log_grid(g.a, g.b, g.n);
}

struct Output {
  std::string csv;
  std::string dump;
  json meta = json::object();
  int status = kOk;
};

inline Output run_rate(const RunConfig& cfg, const io::Problem& p) {
  const auto& M = require(p.growth, "growth", cfg.command);
  const auto& cert = require(p.certificate, "certificate", cfg.command);
  const RateInputs in{cert.C, cert.T, M, p.cutoff.value_or(CutoffRule::infinite())};
  const auto tp = t_prime_detail(in);
  const auto grid_arg = cfg.t_grid ? cfg.t_grid : p.t_grid;
  const auto ts = grid_arg ? linear_from(*grid_arg) : linear_grid(tp.value + 1.0, tp.value + 100.0, 100);
  const LogGrowth mlog(M, in.C);
  CsvWriter csv({"t", "R_opt", "R_rule_t", "branch", "bound_B", "rate_shape"});
  for (double t : ts) {
    const auto r = decay_rate(in, mlog, t);
    csv.row({fmt(t), fmt(r.R_opt), r.R_rule_t.is_infinite() ? "inf" : fmt(r.R_rule_t.value()),
             std::string(to_string(r.branch)), fmt(r.bound), fmt(r.rate_shape)});
  }
  Output out;
  out.csv = csv.str();
  out.meta["T_prime"] = tp.value;
  out.meta["T_prime_threshold_term"] = tp.threshold_term;
  if (tp.clamped) out.meta["notes"].push_back("negative threshold term in T' clamped to 0");
  if (const auto kp = k_prime(in)) {
    out.meta["K_prime"] = *kp;
  } else {
    out.meta["K_prime"] = nullptr;
    out.meta["notes"].push_back("M(1) <= sqrt(5C): K' undefined, rate certified through bound_B only");
  }
  out.meta["t_grid"] = grid_json(ts, "linear");
  return out;
}

/// A Dirichlet block, when present, supplies the integrator in place of explicit jumps.
inline BVFunction integrator_of(const io::Problem& p) {
  if (p.dirichlet && p.A.jump_count() == 0) return build_instance(p.dirichlet->coeffs, p.dirichlet->n_max, p.norm).A;
  return p.A;
}

inline Output run_verify(const RunConfig& cfg, const io::Problem& p_in) {
  io::Problem p = p_in;
  p.A = integrator_of(p_in);
  const auto& cert = require(p.certificate, "certificate", cfg.command);
  Output out;
  std::vector<double> ts;
  const auto t_arg = cfg.t_grid ? cfg.t_grid : p.t_grid;
  if (t_arg) {
    for (double t : linear_from(*t_arg)) {
      if (t <= p.A.domain_end()) ts.push_back(t);
    }
  } else {
    ts = hybrid_t_grid(p.A);
  }
  const auto x_arg = cfg.x_grid ? cfg.x_grid : p.x_grid;
  const double x_top = cert.R_rule.kind() == CutoffKind::constant ? cert.R_rule.constant_value()
                                                                  : std::max(cert.x0, 1e3);
  const auto xs = x_arg ? log_from(*x_arg) : log_grid(cert.x0, std::max(cert.x0, x_top), 64);

  std::vector<SupReport> reports;
  reports.push_back(check_tauberian(p.A, cert, ts, xs, cfg.quad_tol, "tauberian"));

  // Seeded random probes between grid points.
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double t_lo = std::max(cert.T, ts.front() * 0.5);
  const double t_hi = ts.back();
  std::vector<double> probe_t, probe_x;
  for (int i = 0; i < 64; ++i) {
    const double t = t_lo + (t_hi - t_lo) * unit(rng);
    const double u = unit(rng);
    if (!(t > cert.T)) continue;
    const double x_max = std::min(xs.back(), cert.R_rule(t).as_double());
    if (x_max < cert.x0) continue;
    probe_t.push_back(t);
    probe_x.push_back(cert.x0 * std::pow(x_max / cert.x0, u));
  }
  if (!probe_t.empty()) {
    SupReport probes;
    probes.case_id = "tauberian_random_probes";
    probes.bound = cert.C;
    probes.grid_sup = 0.0;
    for (std::size_t i = 0; i < probe_t.size(); ++i) {
      const double t = probe_t[i], x = probe_x[i];
      const double v = x * stieltjes_integral(p.A, Integrand::exponential(x, -x * t), t, cfg.quad_tol).norm();
      if (v > probes.grid_sup) {
        probes.grid_sup = v;
        probes.witness_t = t;
        probes.witness_x = x;
      }
    }
    probes.margin = probes.bound - probes.grid_sup;
    reports.push_back(probes);
  }

  if (p.lemmas) {
    const auto& L = *p.lemmas;
    const ExtensionEvaluator* closed = p.extension ? &*p.extension : nullptr;
    for (double x : L.x) {
      for (double y : L.y) {
        const std::string tag = "[x=" + fmt(x) + ";y=" + fmt(y) + "]";
        reports.push_back(check_lemma_2_1(p.A, L.C, x, y, ts, cfg.quad_tol, "lemma_2_1" + tag));
        reports.push_back(check_lemma_2_2(p.A, L.C, x, y, ts, closed, cfg.quad_tol, "lemma_2_2" + tag));
      }
    }
    std::vector<double> below;
    for (double x : L.x) {
      if (x > 0.0 && x <= L.x0) below.push_back(x);
    }
    if (!below.empty()) reports.push_back(check_lemma_2_3(p.A, L.C, L.x0, below, ts, cfg.quad_tol, "lemma_2_3"));
  }

  CsvWriter csv({"case_id", "grid_sup", "bound", "margin", "witness_t"});
  out.meta["hypothesis_failed"] = json::array();
  for (const auto& r : reports) {
    csv.row({r.case_id, fmt(r.grid_sup), fmt(r.bound), fmt(r.margin), fmt(r.witness_t)});
    if (r.hypothesis_failed) out.meta["hypothesis_failed"].push_back(r.case_id);
    if (r.margin < -1e-9 * std::abs(r.bound)) out.status = kBoundViolated;
  }
  out.csv = csv.str();
  out.meta["t_grid"] = grid_json(ts, t_arg ? "linear" : "hybrid: uniform + geometric clusters after jumps");
  out.meta["x_grid"] = grid_json(xs, "log");
  out.meta["random_probes"] = probe_t.size();
  return out;
}

inline Output run_contour(const RunConfig& cfg, const io::Problem& p) {
  const BVFunction A = integrator_of(p);
  const auto& M = require(p.growth, "growth", cfg.command);
  const auto& f = require(p.extension, "extension", cfg.command);
  const auto& block = require(p.contour, "contour", cfg.command);
  ContourOptions opt;
  opt.density = block.density;
  opt.quad_tol = std::min(cfg.quad_tol, 1e-14);
  Output out;
  CsvWriter csv({"t", "R", "route", "residual", "I", "I_bound", "II", "II_bound", "III", "III_bound"});
  CsvWriter dump({"piece", "s_param", "re_z", "im_z", "abs_integrand"});
  for (double t : block.t) {
    for (double R : block.R) {
      const auto res = cauchy_residual(A, f, M, t, R, opt);
      std::vector<std::string> row{fmt(t), fmt(R), res.route == TailRoute::tail_integral ? "tail" : "direct",
                                   fmt(res.residual)};
      if (p.certificate && t > p.certificate->T && p.certificate->R_rule(t).admits(R)) {
        const auto tb = term_bounds(A, *p.certificate, f, M, t, R, opt);
        for (double v : {tb.I, tb.I_bound, tb.II, tb.II_bound, tb.III, tb.III_bound}) row.push_back(fmt(v));
        if (!tb.holds()) out.status = kBoundViolated;
      } else {
        for (int i = 0; i < 6; ++i) row.push_back("na");
      }
      csv.row(row);
      if (!cfg.dump_path.empty() && t == block.t.front() && R == block.R.front()) {
        for (const auto& d : contour_dump(A, f, M, t, R, opt)) {
          dump.row({d.piece, fmt(d.s_param), fmt(d.z.real()), fmt(d.z.imag()), fmt(d.magnitude)});
        }
      }
    }
  }
  out.csv = csv.str();
  out.dump = dump.str();
  out.meta["contour_density"] = block.density;
  out.meta["term_bound_constants"] = "displayed: I <= 6C/R, II <= 4C/R";
  return out;
}

inline Output run_dirichlet(const RunConfig& cfg, const io::Problem& p) {
  const auto& dir = require(p.dirichlet, "dirichlet", cfg.command);
  auto inst = build_instance(dir.coeffs, dir.n_max, p.norm);
  std::optional<VectorValue> f0;
  std::string provenance = "absent";
  if (dir.f0_mode == io::DirichletSpec::F0::value) {
    f0 = dir.f0_value;
    provenance = "supplied value";
  } else if (dir.f0_mode == io::DirichletSpec::F0::oracle) {
    if (!inst.f0) {
      throw InputError("dirichlet.f0: no oracle is available for coefficient source '" +
                       std::string(to_string(dir.coeffs.source())) + "'");
    }
    f0 = inst.f0;
    provenance = inst.f0_provenance;
  }
  if (!f0) throw InputError("dirichlet: missing f0 (limit value f(0)); supply \"f0\": \"oracle\" or {\"value\": ...}");

  Output out;
  std::optional<GrowthBound> M = p.growth;
  if (dir.calibrate_y_max) {
    const auto f = p.extension.value_or(ExtensionEvaluator::eta_shift());
    const double c = calibrate_affine_growth(f, *dir.calibrate_y_max);
    M = GrowthBound::affine(c);
    out.meta["growth_calibration"] = {{"kind", "affine"}, {"c", c}, {"y_max", *dir.calibrate_y_max},
                                      {"status", "empirically admissible (grid pre-scan), not proven"}};
  }
  if (!M) throw InputError("command 'dirichlet' needs 'growth' or 'dirichlet.calibrate_growth'");
  const RateInputs in{inst.cert.C, inst.cert.T, *M, CutoffRule::exp_t()};
  const double tp = t_prime(in);
  const double t_end = std::min(13.0, inst.valid_until() - 1e-9);
  const auto t_arg = cfg.t_grid ? cfg.t_grid : p.t_grid;
  std::vector<double> ts;
  if (t_arg) {
    ts = linear_from(*t_arg);
    if (ts.back() >= inst.valid_until()) {
      std::cerr << "warning: t grid reaches " << ts.back() << " >= log N_max = " << inst.valid_until() << "\n";
    }
  } else {
    if (!(t_end > tp)) throw InputError("dirichlet: log N_max too small for any t > T'");
    for (std::size_t i = 1; i <= 100; ++i) ts.push_back(tp + (t_end - tp) * static_cast<double>(i) / 100.0);
  }
  const auto rows = partial_sum_decay(inst, f0, *M, ts);
  CsvWriter csv({"t", "decay_norm", "bound_B", "margin"});
  for (const auto& r : rows) {
    csv.row({fmt(r.t), fmt(r.decay_norm), fmt(r.bound_B), fmt(r.margin)});
    if (r.margin < 0.0) out.status = kBoundViolated;
  }
  out.csv = csv.str();
  out.meta["D"] = inst.D;
  out.meta["C"] = inst.cert.C;
  out.meta["T_prime"] = tp;
  out.meta["n_max"] = inst.n_max;
  out.meta["f0_provenance"] = provenance;
  out.meta["t_grid"] = grid_json(ts, t_arg ? "linear" : "uniform on (T', min(13, log N_max))");
  return out;
}

}  // namespace detail

/// Runs one command. Exit status: 0 success, 1 some bound report has a negative margin,
/// 2 input or validation error (message on `err`).
inline int run(const RunConfig& cfg, std::ostream& err = std::cerr) {
  using nlohmann::json;
  try {
    if (cfg.problem_path.empty()) throw InputError("--problem is required");
    if (!(cfg.quad_tol > 0.0)) throw InputError("--quad-tol must be > 0");
    const auto problem = io::load_problem(cfg.problem_path);
    detail::Output out;
    switch (cfg.command) {
      case Command::rate: out = detail::run_rate(cfg, problem); break;
      case Command::verify: out = detail::run_verify(cfg, problem); break;
      case Command::contour: out = detail::run_contour(cfg, problem); break;
      case Command::dirichlet: out = detail::run_dirichlet(cfg, problem); break;
    }
    detail::write_text(cfg.output_path, out.csv);
    if (!cfg.dump_path.empty() && !out.dump.empty()) detail::write_text(cfg.dump_path, out.dump);
    json meta = out.meta;
    meta["tool"] = "tauberian_lab";
    meta["version"] = kVersion;
    meta["command"] = to_string(cfg.command);
    meta["problem"] = cfg.problem_path;
    meta["norm"] = std::string(to_string(problem.norm));
    meta["dimension"] = problem.dimension;
    meta["quad_tol"] = cfg.quad_tol;
    meta["seed"] = cfg.seed;
    meta["exit_status"] = out.status;
    meta["timestamp"] = detail::utc_timestamp();
    if (!cfg.output_path.empty() && cfg.output_path != "-") {
      detail::write_text(cfg.output_path + ".meta.json", meta.dump(2) + "\n");
    } else {
      err << meta.dump(2) << "\n";
    }
    return out.status;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
  } catch (const PreconditionError& e) {
    err << "precondition failed: " << e.what() << "\n";
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
  } catch (const RefusalError& e) {
    err << "refused: " << e.what() << "\n";
  } catch (const nlohmann::json::exception& e) {
    err << "input error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kInputError;
}

}  // namespace tauberian::cli
