#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace detdepth::cli {

struct ExperimentConfig {
  std::string subcommand;
  // Subcommand parameters by flag name without dashes. Keys a subcommand
  // does not know are rejected.
  std::map<std::string, std::string> params;
  std::optional<std::uint64_t> seed;  // required by stochastic subcommands
  std::int64_t trials = 0;            // 0: subcommand default
  std::string format = "csv";         // csv | jsonl
  std::string out;                    // empty: stdout
  int threads = 1;
};

struct Row {
  std::string experiment;
  std::string params;
  double empirical = 0.0;
  std::optional<double> std_error;
  std::optional<double> bound;
  std::string relation;  // <=, >=, ==, ~ (within 3 stderr) or info
  bool pass = true;
};

struct Report {
  ExperimentConfig config;
  std::vector<Row> rows;
  double wall_seconds = 0.0;
  bool AllPass() const;
};

const std::vector<std::string>& Subcommands();

// Throws UnknownSubcommand, InvalidParams, or the module's own errors.
Report Run(const ExperimentConfig& config);

// Header plus one line per row. Numbers use 10 significant digits.
std::string Emit(const Report& report, const std::string& format);

// Writes to a temporary file next to `path`, then renames. IoFailure on error.
void WriteReport(const Report& report, const std::string& format, const std::string& path);

// Entry point of the detdepth executable; returns the process exit code.
int Main(int argc, char** argv);

}  // namespace detdepth::cli
