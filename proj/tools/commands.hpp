#pragma once

// Subcommands of the command-line front end. Each writes CSV series and JSON
// summaries (carrying schema_version) into the output directory and returns
// the process exit code.

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "run_config.hpp"

namespace fdtc::cli {

enum ExitCode { kOk = 0, kConfigFailure = 2, kNumericalFailure = 3 };

struct CommandOptions {
  bool dry_run = false;
  /// exchange: run only this fusion sector
  std::optional<Fusion> fusion;
};

using Command = int (*)(const RunConfig&, const CommandOptions&, std::ostream&);

int cmd_spectrum(const RunConfig& c, const CommandOptions& o, std::ostream& log);
int cmd_exchange(const RunConfig& c, const CommandOptions& o, std::ostream& log);
int cmd_degeneracy(const RunConfig& c, const CommandOptions& o, std::ostream& log);
int cmd_heating(const RunConfig& c, const CommandOptions& o, std::ostream& log);
int cmd_oracle(const RunConfig& c, const CommandOptions& o, std::ostream& log);

/// Shortest round-trip decimal form of a double.
std::string format_number(double x);

/// Least-squares fit y = a + b x; returns {a, b, r^2}.
std::vector<double> linear_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace fdtc::cli
