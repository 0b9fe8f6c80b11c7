#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace eei::cli {

enum ExitCode : int { kPass = 0, kCheckFailed = 1, kUsage = 2 };

struct RunConfig {
  std::string command;
  std::optional<double> mu;
  // Matrix arguments: path to a matrix JSON file or a number (1x1 matrix).
  std::string x, w, v, r, direction, wp, z1, z2;
  std::optional<std::string> density;   // unset: "gaussian"
  std::optional<std::string> density2;
  std::optional<double> tol;            // unset: the command's own budget
  std::optional<std::int64_t> trials;   // unset: 10000 (100 for variational-check)
  std::uint64_t seed = 42;
  std::size_t grid_points = 4001;
  std::string output;                   // empty: stdout
  std::string format = "json";          // json | csv | text
  bool timing = false;
};

const std::vector<std::string>& commands();

/// Runs one command and writes the report; returns the process exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (EEI_SEED in the environment overrides the default seed) and
/// calls run.
int main_entry(int argc, const char* const* argv, std::ostream& out,
               std::ostream& err);

}  // namespace eei::cli
