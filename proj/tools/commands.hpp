#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cdgreen/config.hpp"
#include "json.hpp"

namespace cdg::cli {

// Exit codes: 0 all checks passed, 1 a declared tolerance failed,
// 2 usage or configuration error, 3 runtime error (I/O, singular point, ...).
enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2, kRuntime = 3 };

struct Overrides {
  std::optional<std::string> out;
  std::optional<int> threads;
  std::optional<double> tol;
  std::optional<std::string> format;
  bool svg = false;
  std::vector<int> only;
};

struct Outcome {
  bool pass = true;
  std::vector<std::string> files;  // relative to the output directory
  nlohmann::json details = nlohmann::json::object();
};

// Default config, or the file at config_path, with command-line overrides
// applied and the result validated.
config::RunConfig resolve(const std::optional<std::string>& config_path, const std::string& command,
                          const Overrides& ov);

Outcome cmd_eval(const config::RunConfig& c);
Outcome cmd_norms(const config::RunConfig& c);
Outcome cmd_scaling(const config::RunConfig& c);
Outcome cmd_fd(const config::RunConfig& c);
Outcome cmd_residual(const config::RunConfig& c);
Outcome cmd_selfcheck(const config::RunConfig& c);

// Runs a command, writes <command>_summary.json into the output directory and
// prints it to `out`; errors go to `err` as JSON. Returns the exit code.
int run(const std::string& command, const std::optional<std::string>& config_path,
        const Overrides& ov, std::ostream& out, std::ostream& err);

}  // namespace cdg::cli
