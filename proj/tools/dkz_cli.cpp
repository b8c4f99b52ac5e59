// dkz: Stokes data of the dynamical KZ equation and the checks built on it.

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "dkz/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Stokes matrices, Yang-Baxter and braid checks for the dynamical KZ equation"};
  app.set_version_flag("--version", "dkz 0.1.0");

  std::string command;
  std::string config_path;
  std::string out_path;
  bool permissive = false;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol_rel;

  app.add_option("command", command, "Pipeline to run")
      ->required()
      ->check(CLI::IsMember(dkz::known_commands()));
  app.add_option("--config", config_path, "Run configuration (JSON)")->check(CLI::ExistingFile);
  app.add_option("--out", out_path, "Write the JSON report here");
  app.add_flag("--permissive", permissive, "Allow u/kappa with a real part");
  app.add_option("--seed", seed, "Seed for sampled negative controls");
  app.add_option("--tol-rel", tol_rel, "Relative tolerance of the integrator");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : dkz::kExitValidation;
  }

  dkz::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = dkz::config_from_json(dkz::read_json_file(config_path));
  } catch (const std::exception& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return dkz::kExitValidation;
  }
  if (!cfg.command.empty() && cfg.command != command) {
    std::cerr << "validation error: config names command '" << cfg.command << "' but '" << command
              << "' was requested\n";
    return dkz::kExitValidation;
  }
  cfg.command = command;
  cfg.permissive = cfg.permissive || permissive;
  if (seed) cfg.seed = *seed;
  if (tol_rel) cfg.tol.rel_tol = *tol_rel;

  const dkz::RunResult res = dkz::run(cfg);
  if (res.exit_code == dkz::kExitValidation || res.exit_code == dkz::kExitNumerical)
    std::cerr << res.summary;
  else
    std::cout << res.summary;
  if (!out_path.empty()) {
    try {
      dkz::write_json_atomic(out_path, res.report);
    } catch (const std::exception& e) {
      std::cerr << "cannot write report: " << e.what() << "\n";
      return dkz::kExitNumerical;
    }
  }
  return res.exit_code;
}
