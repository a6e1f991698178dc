// tauberian_lab: batch front end for the decay-rate, verification, contour and Dirichlet experiments.
//
//   tauberian_lab rate      --problem p.json --out rate.csv [--t-grid a:b:n]
//   tauberian_lab verify    --problem p.json --out sups.csv [--t-grid a:b:n] [--x-grid a:b:n] [--seed k]
//   tauberian_lab contour   --problem p.json --out residuals.csv [--dump nodes.csv]
//   tauberian_lab dirichlet --problem p.json --out decay.csv [--t-grid a:b:n]
//
// Every output CSV is accompanied by <out>.meta.json (version, norm, grids, seed, timestamp).

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "tauberian/cli.hpp"

int main(int argc, char** argv) {
  using tauberian::cli::RunConfig;
  CLI::App app{"Numerical laboratory for quantified Tauberian decay rates of Laplace-Stieltjes transforms"};
  app.set_version_flag("--version", tauberian::cli::kVersion);
  app.require_subcommand(1);

  RunConfig cfg;
  std::string t_grid, x_grid;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--problem", cfg.problem_path, "Problem file (JSON)")->required();
    sub->add_option("--out", cfg.output_path, "Output CSV path ('-' = stdout); metadata goes to <out>.meta.json")
        ->default_val("-");
    sub->add_option("--t-grid", t_grid, "Time grid a:b:n (overrides the problem file and built-in default)");
    sub->add_option("--x-grid", x_grid, "Log-spaced x grid a:b:n (verify; default 64 points on [x0, min(R,1e3)])");
    sub->add_option("--quad-tol", cfg.quad_tol, "Absolute quadrature tolerance per smooth piece")->default_val(1e-12);
    sub->add_option("--seed", cfg.seed, "Seed for the randomized probe points")->default_val(1);
  };
  auto* rate = app.add_subcommand("rate", "Decay-rate table: t, R_opt, R_rule_t, branch, bound_B, rate_shape");
  auto* verify = app.add_subcommand("verify", "Grid suprema for the Tauberian condition and lemma bounds");
  auto* contour = app.add_subcommand("contour", "Cauchy-identity residuals and proof-term bounds on the contour");
  auto* dirichlet = app.add_subcommand("dirichlet", "Partial-sum decay of a Dirichlet series against bound_B");
  for (auto* sub : {rate, verify, contour, dirichlet}) add_common(sub);
  contour->add_option("--dump", cfg.dump_path, "Contour node dump CSV for the first (t, R) pair");

  CLI11_PARSE(app, argc, argv);

  try {
    if (rate->parsed()) cfg.command = tauberian::cli::Command::rate;
    if (verify->parsed()) cfg.command = tauberian::cli::Command::verify;
    if (contour->parsed()) cfg.command = tauberian::cli::Command::contour;
    if (dirichlet->parsed()) cfg.command = tauberian::cli::Command::dirichlet;
    if (!t_grid.empty()) cfg.t_grid = tauberian::io::parse_grid_arg(t_grid, "--t-grid");
    if (!x_grid.empty()) cfg.x_grid = tauberian::io::parse_grid_arg(x_grid, "--x-grid");
  } catch (const tauberian::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return tauberian::cli::kInputError;
  }
  return tauberian::cli::run(cfg);
}
