#pragma once

#include <fstream>
#include <initializer_list>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "tauberian/bv_model.hpp"
#include "tauberian/dirichlet_app.hpp"
#include "tauberian/errors.hpp"
#include "tauberian/extension.hpp"
#include "tauberian/growth.hpp"
#include "tauberian/transform.hpp"

namespace tauberian::io {

using nlohmann::json;

/// Inclusive grid "a:b:n".
struct GridArg {
  double a = 0.0;
  double b = 0.0;
  std::size_t n = 0;
};

inline GridArg parse_grid_arg(const std::string& text, const std::string& what) {
  std::istringstream in(text);
  GridArg g;
  char c1 = 0, c2 = 0;
  long long n = 0;
  if (!(in >> g.a >> c1 >> g.b >> c2 >> n) || c1 != ':' || c2 != ':' || n < 1 || !(in >> std::ws).eof() ||
      !(g.b >= g.a)) {
    throw InputError(what + ": expected 'a:b:n' with a <= b and n >= 1, got '" + text + "'");
  }
  g.n = static_cast<std::size_t>(n);
  return g;
}

struct DirichletSpec {
  CoefficientSequence coeffs = CoefficientSequence::ones();
  std::size_t n_max = 1000000;
  enum class F0 { absent, oracle, value } f0_mode = F0::absent;
  std::optional<VectorValue> f0_value;
  std::optional<double> calibrate_y_max;  // calibrate M = c(1+s) for eta_shift on |y| <= y_max
};

struct ContourBlock {
  std::vector<double> t;
  std::vector<double> R;
  double density = 4.0;
};

struct LemmaBlock {
  double C = 1.0;
  double x0 = 1.0;
  std::vector<double> x;
  std::vector<double> y;
};

/// Everything a problem file can carry; each command checks the parts it needs.
struct Problem {
  std::size_t dimension = 1;
  NormKind norm = NormKind::euclidean;
  BVFunction A;
  std::optional<GrowthBound> growth;
  std::optional<CutoffRule> cutoff;
  std::optional<TauberianCertificate> certificate;  // R_rule filled from `cutoff` (infinite if absent)
  std::optional<ExtensionEvaluator> extension;
  std::optional<LemmaBlock> lemmas;
  std::optional<ContourBlock> contour;
  std::optional<DirichletSpec> dirichlet;
  std::optional<GridArg> t_grid;
  std::optional<GridArg> x_grid;
};

namespace detail {

inline void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw InputError(where + ": expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!ok.count(it.key())) throw InputError(where + ": unknown key '" + it.key() + "'");
  }
}

inline double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw InputError(where + ": expected a number");
  return j.get<double>();
}

inline double time_or_inf(const json& j, const std::string& where) {
  if (j.is_string() && j.get<std::string>() == "inf") return kInfinity;
  return number(j, where);
}

/// A complex scalar: a number or [re, im].
inline Complex complex_value(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw InputError(where + ": expected a number or [re, im]");
}

/// A vector value: [[re, im], ...] with `dim` entries, or a bare number when dim = 1.
inline VectorValue vector_value(const json& j, std::size_t dim, NormKind norm, const std::string& where) {
  if (j.is_number() && dim == 1) return VectorValue({j.get<double>()}, norm);
  if (!j.is_array() || j.size() != dim) {
    throw InputError(where + ": expected " + std::to_string(dim) + " components as [[re, im], ...]");
  }
  std::vector<Complex> c;
  for (std::size_t i = 0; i < dim; ++i) c.push_back(complex_value(j[i], where + "[" + std::to_string(i) + "]"));
  return VectorValue(std::move(c), norm);
}

inline std::vector<double> number_list(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw InputError(where + ": expected a nonempty array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline std::vector<Complex> complex_list(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw InputError(where + ": expected a nonempty array");
  std::vector<Complex> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(complex_value(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline const json& params_of(const json& obj) {
  static const json empty = json::object();
  return obj.contains("params") ? obj.at("params") : empty;
}

inline GrowthBound parse_growth(const json& j) {
  reject_unknown(j, {"kind", "params"}, "growth");
  if (!j.contains("kind") || !j["kind"].is_string()) throw InputError("growth: missing 'kind'");
  const auto kind = growth_kind_from_string(j["kind"].get<std::string>());
  const json& p = params_of(j);
  auto get = [&](const char* key, double dflt) {
    return p.contains(key) ? number(p.at(key), std::string("growth.params.") + key) : dflt;
  };
  switch (kind) {
    case GrowthKind::constant:
      reject_unknown(p, {"c"}, "growth.params");
      return GrowthBound::constant(get("c", 1.0));
    case GrowthKind::affine:
      reject_unknown(p, {"c"}, "growth.params");
      return GrowthBound::affine(get("c", 1.0));
    case GrowthKind::power:
      reject_unknown(p, {"c", "alpha"}, "growth.params");
      return GrowthBound::power(get("c", 1.0), get("alpha", 1.0));
    case GrowthKind::log:
      reject_unknown(p, {"c", "beta"}, "growth.params");
      return GrowthBound::log(get("c", 1.0), get("beta", 1.0));
    case GrowthKind::exp:
      reject_unknown(p, {"c", "kappa"}, "growth.params");
      return GrowthBound::exp(get("c", 1.0), get("kappa", 1.0));
  }
  throw InputError("growth: unsupported kind");
}

inline CutoffRule parse_cutoff(const json& j) {
  reject_unknown(j, {"kind", "params"}, "cutoff");
  if (!j.contains("kind") || !j["kind"].is_string()) throw InputError("cutoff: missing 'kind'");
  const std::string kind = j["kind"].get<std::string>();
  const json& p = params_of(j);
  if (kind == "exp") {
    reject_unknown(p, {}, "cutoff.params");
    return CutoffRule::exp_t();
  }
  if (kind == "infinite") {
    reject_unknown(p, {}, "cutoff.params");
    return CutoffRule::infinite();
  }
  if (kind == "constant") {
    reject_unknown(p, {"value"}, "cutoff.params");
    if (!p.contains("value")) throw InputError("cutoff.params: constant cutoff needs 'value'");
    return CutoffRule::constant(number(p.at("value"), "cutoff.params.value"));
  }
  throw InputError("cutoff: unknown kind '" + kind + "' (expected exp|constant|infinite)");
}

inline ExtensionEvaluator parse_extension(const json& j, std::size_t dim, NormKind norm) {
  reject_unknown(j, {"kind", "params"}, "extension");
  if (!j.contains("kind") || !j["kind"].is_string()) throw InputError("extension: missing 'kind'");
  const std::string kind = j["kind"].get<std::string>();
  const json& p = params_of(j);
  VectorValue coef(std::vector<Complex>(dim, Complex(1.0, 0.0)), norm);
  if (p.contains("coef")) coef = vector_value(p.at("coef"), dim, norm, "extension.params.coef");
  if (kind == "inv_one_plus_z") {
    reject_unknown(p, {"coef"}, "extension.params");
    return ExtensionEvaluator::inv_one_plus_z(coef);
  }
  if (kind == "eta_shift") {
    reject_unknown(p, {"coef"}, "extension.params");
    return ExtensionEvaluator::eta_shift(coef);
  }
  if (kind == "rational") {
    reject_unknown(p, {"coef", "numerator", "denominator"}, "extension.params");
    if (!p.contains("numerator") || !p.contains("denominator")) {
      throw InputError("extension.params: rational needs 'numerator' and 'denominator'");
    }
    return ExtensionEvaluator::rational(complex_list(p.at("numerator"), "extension.params.numerator"),
                                        complex_list(p.at("denominator"), "extension.params.denominator"), coef);
  }
  throw InputError("extension: unknown kind '" + kind + "' (expected inv_one_plus_z|eta_shift|rational)");
}

inline DensityPiece parse_density(const json& j, std::size_t dim, NormKind norm, const std::string& where) {
  reject_unknown(j, {"from", "to", "kind", "params"}, where);
  DensityPiece d;
  d.from = j.contains("from") ? number(j.at("from"), where + ".from") : 0.0;
  d.to = j.contains("to") ? time_or_inf(j.at("to"), where + ".to") : kInfinity;
  if (!j.contains("kind") || !j["kind"].is_string()) throw InputError(where + ": missing 'kind'");
  d.kind = density_kind_from_string(j["kind"].get<std::string>());
  const json& p = params_of(j);
  reject_unknown(p, {"c", "lambda", "p"}, where + ".params");
  d.coef = p.contains("c") ? vector_value(p.at("c"), dim, norm, where + ".params.c")
                           : VectorValue(std::vector<Complex>(dim, Complex(1.0, 0.0)), norm);
  if (p.contains("lambda")) d.lambda = complex_value(p.at("lambda"), where + ".params.lambda");
  if (p.contains("p")) d.power = number(p.at("p"), where + ".params.p");
  const bool needs_lambda = d.kind == DensityKind::exponential || d.kind == DensityKind::damped_power;
  const bool needs_p = d.kind == DensityKind::power || d.kind == DensityKind::damped_power;
  if (needs_lambda && !p.contains("lambda")) throw InputError(where + ".params: missing 'lambda'");
  if (needs_p && !p.contains("p")) throw InputError(where + ".params: missing 'p'");
  return d;
}

inline DirichletSpec parse_dirichlet(const json& j, NormKind norm, const std::string& base_dir) {
  reject_unknown(j, {"coefficients", "n_max", "f0", "calibrate_growth"}, "dirichlet");
  DirichletSpec block;
  if (!j.contains("coefficients")) throw InputError("dirichlet: missing 'coefficients'");
  const json& c = j.at("coefficients");
  reject_unknown(c, {"source", "pattern", "path", "dimension"}, "dirichlet.coefficients");
  if (!c.contains("source") || !c["source"].is_string()) throw InputError("dirichlet.coefficients: missing 'source'");
  const std::string source = c["source"].get<std::string>();
  if (source == "alternating") {
    block.coeffs = CoefficientSequence::alternating();
  } else if (source == "ones") {
    block.coeffs = CoefficientSequence::ones();
  } else if (source == "periodic") {
    const std::size_t dim = c.contains("dimension") ? static_cast<std::size_t>(number(c["dimension"], "dimension")) : 1;
    if (!c.contains("pattern")) throw InputError("dirichlet.coefficients: periodic source needs 'pattern'");
    std::vector<Complex> flat;
    const json& pat = c.at("pattern");
    if (!pat.is_array() || pat.empty()) throw InputError("dirichlet.coefficients.pattern: expected a nonempty array");
    for (std::size_t i = 0; i < pat.size(); ++i) {
      const auto v = vector_value(pat[i], dim, norm, "dirichlet.coefficients.pattern[" + std::to_string(i) + "]");
      flat.insert(flat.end(), v.components().begin(), v.components().end());
    }
    block.coeffs = CoefficientSequence::periodic(std::move(flat), dim);
  } else if (source == "file") {
    if (!c.contains("path") || !c["path"].is_string()) throw InputError("dirichlet.coefficients: file source needs 'path'");
    std::string path = c["path"].get<std::string>();
    if (!path.empty() && path[0] != '/' && !base_dir.empty()) path = base_dir + "/" + path;
    block.coeffs = CoefficientSequence::from_file(path);
  } else {
    throw InputError("dirichlet.coefficients: unknown source '" + source + "' (expected alternating|ones|periodic|file)");
  }
  if (j.contains("n_max")) {
    const double n = number(j["n_max"], "dirichlet.n_max");
    if (!(n >= 1.0) || n != std::floor(n)) throw InputError("dirichlet.n_max: expected an integer >= 1");
    block.n_max = static_cast<std::size_t>(n);
  }
  if (j.contains("f0")) {
    const json& f0 = j.at("f0");
    if (f0.is_string() && f0.get<std::string>() == "oracle") {
      block.f0_mode = DirichletSpec::F0::oracle;
    } else if (f0.is_object()) {
      reject_unknown(f0, {"value"}, "dirichlet.f0");
      if (!f0.contains("value")) throw InputError("dirichlet.f0: expected \"oracle\" or {\"value\": ...}");
      block.f0_mode = DirichletSpec::F0::value;
      block.f0_value = vector_value(f0.at("value"), block.coeffs.dimension(), norm, "dirichlet.f0.value");
    } else {
      throw InputError("dirichlet.f0: expected \"oracle\" or {\"value\": ...}");
    }
  }
  if (j.contains("calibrate_growth")) {
    const json& cg = j.at("calibrate_growth");
    reject_unknown(cg, {"y_max"}, "dirichlet.calibrate_growth");
    block.calibrate_y_max = cg.contains("y_max") ? number(cg["y_max"], "dirichlet.calibrate_growth.y_max") : 10.0;
  }
  return block;
}

inline GridArg grid_from_json(const json& j, const std::string& where) {
  if (!j.is_string()) throw InputError(where + ": expected 'a:b:n'");
  return parse_grid_arg(j.get<std::string>(), where);
}

}  // namespace detail

inline Problem parse_problem(const json& j, const std::string& base_dir = "") {
  using namespace detail;
  reject_unknown(j,
                 {"dimension", "norm", "jumps", "densities", "growth", "cutoff", "certificate", "extension", "lemmas",
                  "contour", "dirichlet", "t_grid", "x_grid", "description"},
                 "problem");
  Problem p;
  if (j.contains("dimension")) {
    const double d = number(j["dimension"], "dimension");
    if (!(d >= 1.0) || d != std::floor(d)) throw InputError("dimension: expected an integer >= 1");
    p.dimension = static_cast<std::size_t>(d);
  }
  if (j.contains("norm")) {
    if (!j["norm"].is_string()) throw InputError("norm: expected \"euclidean\" or \"sup\"");
    p.norm = norm_kind_from_string(j["norm"].get<std::string>());
  }
  std::vector<Jump> jumps;
  if (j.contains("jumps")) {
    if (!j["jumps"].is_array()) throw InputError("jumps: expected an array");
    for (std::size_t i = 0; i < j["jumps"].size(); ++i) {
      const std::string where = "jumps[" + std::to_string(i) + "]";
      const json& e = j["jumps"][i];
      reject_unknown(e, {"t", "value"}, where);
      if (!e.contains("t") || !e.contains("value")) throw InputError(where + ": needs 't' and 'value'");
      jumps.push_back({number(e["t"], where + ".t"), vector_value(e["value"], p.dimension, p.norm, where + ".value")});
    }
  }
  std::vector<DensityPiece> densities;
  if (j.contains("densities")) {
    if (!j["densities"].is_array()) throw InputError("densities: expected an array");
    for (std::size_t i = 0; i < j["densities"].size(); ++i) {
      densities.push_back(parse_density(j["densities"][i], p.dimension, p.norm, "densities[" + std::to_string(i) + "]"));
    }
  }
  try {
    p.A = BVFunction(p.dimension, p.norm, std::move(jumps), std::move(densities));
  } catch (const PreconditionError& e) {
    throw InputError(std::string("integrator: ") + e.what());
  }
  try {
    if (j.contains("growth")) p.growth = parse_growth(j["growth"]);
    if (j.contains("cutoff")) p.cutoff = parse_cutoff(j["cutoff"]);
  } catch (const PreconditionError& e) {
    throw InputError(e.what());
  }
  if (j.contains("certificate")) {
    const json& c = j["certificate"];
    reject_unknown(c, {"C", "x0", "T"}, "certificate");
    TauberianCertificate cert;
    if (!c.contains("C")) throw InputError("certificate: missing 'C'");
    cert.C = number(c["C"], "certificate.C");
    cert.x0 = c.contains("x0") ? number(c["x0"], "certificate.x0") : 1.0;
    cert.T = c.contains("T") ? number(c["T"], "certificate.T") : 0.0;
    if (!(cert.C > 0.0) || !(cert.x0 > 0.0) || !(cert.T >= 0.0)) {
      throw InputError("certificate: needs C > 0, x0 > 0, T >= 0");
    }
    cert.R_rule = p.cutoff.value_or(CutoffRule::infinite());
    p.certificate = cert;
  }
  if (j.contains("extension")) p.extension = parse_extension(j["extension"], p.dimension, p.norm);
  if (j.contains("lemmas")) {
    const json& l = j["lemmas"];
    reject_unknown(l, {"C", "x0", "x", "y"}, "lemmas");
    LemmaBlock b;
    if (!l.contains("C") || !l.contains("x")) throw InputError("lemmas: needs 'C' and 'x'");
    b.C = number(l["C"], "lemmas.C");
    b.x0 = l.contains("x0") ? number(l["x0"], "lemmas.x0") : 1.0;
    b.x = number_list(l["x"], "lemmas.x");
    b.y = l.contains("y") ? number_list(l["y"], "lemmas.y") : std::vector<double>{0.0};
    p.lemmas = b;
  }
  if (j.contains("contour")) {
    const json& c = j["contour"];
    reject_unknown(c, {"t", "R", "density"}, "contour");
    ContourBlock b;
    if (!c.contains("t") || !c.contains("R")) throw InputError("contour: needs 't' and 'R'");
    b.t = number_list(c["t"], "contour.t");
    b.R = number_list(c["R"], "contour.R");
    if (c.contains("density")) b.density = number(c["density"], "contour.density");
    p.contour = b;
  }
  if (j.contains("dirichlet")) p.dirichlet = parse_dirichlet(j["dirichlet"], p.norm, base_dir);
  if (j.contains("t_grid")) p.t_grid = grid_from_json(j["t_grid"], "t_grid");
  if (j.contains("x_grid")) p.x_grid = grid_from_json(j["x_grid"], "x_grid");
  return p;
}

inline Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open problem file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InputError("problem file '" + path + "': " + e.what());
  }
  const auto slash = path.find_last_of('/');
  return parse_problem(j, slash == std::string::npos ? "" : path.substr(0, slash));
}

}  // namespace tauberian::io
