#pragma once

// Run configurations and the command pipelines behind the dkz executable.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dkz/integrator.hpp"
#include "dkz/json_io.hpp"

namespace dkz {

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitValidation = 2, kExitNumerical = 3 };

struct RunConfig {
  std::string command;
  int m = 2;
  int n = 2;
  std::vector<Complex> u;
  Complex kappa{1.0, 0.0};
  ToleranceSpec tol;
  std::uint64_t seed = 0;
  bool permissive = false;

  // Command-specific knobs; defaults are filled in by run().
  std::vector<double> s_values;                 // check-holonomy
  std::vector<std::vector<double>> grid;        // check-isomonodromy
  int chamber = 0;                              // check-isomonodromy
  std::optional<Complex> q;                     // compare-qgroup, default e^{i pi/kappa}
};

inline const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> cmds{"compute-stokes",     "check-ybe",       "check-braid",
                                             "check-holonomy",     "check-isomonodromy", "compare-qgroup",
                                             "selftest"};
  return cmds;
}

/// Fields: m, n, u ([[re,im],...]), kappa [re,im], tolerances {rel_tol, abs_tol,
/// max_steps}, seed, s_values, grid, chamber, q. Unknown keys are rejected.
RunConfig config_from_json(const Json& j);
Json config_to_json(const RunConfig& c);

/// Throws ValidationError naming the violated condition.
void validate(const RunConfig& c);

struct RunResult {
  int exit_code = kExitPass;
  Json report;
  /// One line per check, for the terminal.
  std::string summary;
};

/// Validates, runs the pipeline, and maps ValidationError to exit 2 and
/// NumericalError to exit 3 (report then carries an "error" field).
RunResult run(const RunConfig& c);

}  // namespace dkz
