#pragma once

// Command-line front end. Kept in a library so tests can drive it in-process.

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sumrules::cli {

enum ExitCode : int { ok = 0, validation_failed = 1, config_error = 2, numeric_failure = 3 };

struct RunConfig {
  std::string command;
  std::string problem = "uniform";
  double length = 1.0;
  double alpha = 1.0;
  double epsilon = 1.0;
  double phase = 0.0;
  double rmin = 0.001;
  std::string bc = "neumann";
  int order = 1;
  int count = 2000;
  std::string method;  // empty: pick by boundary condition / problem
  int rr_states = 100;
  std::string density;  // expression in x; overrides problem
  std::map<std::string, double> params;
  std::string config_file;
  std::string out;
  std::optional<double> tol;
  std::vector<double> rmin_grid;
  bool numeric = false;
};

/// Runs one invocation. Results go to `out` (or the --out file), errors to
/// `err` as JSON. Returns an ExitCode value.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace sumrules::cli
