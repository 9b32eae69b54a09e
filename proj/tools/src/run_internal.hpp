#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "detdepth/cli.hpp"

namespace detdepth::cli::internal {

class Params {
 public:
  Params(const ExperimentConfig& config, std::vector<std::string> allowed);
  bool Has(const std::string& key) const;
  std::string Str(const std::string& key, const std::string& fallback = "") const;
  std::int64_t Int(const std::string& key, std::int64_t fallback) const;
  double Real(const std::string& key, double fallback) const;
  // Comma-separated integers; "a-b" expands to an inclusive range.
  std::vector<std::int64_t> IntList(const std::string& key, std::vector<std::int64_t> fallback) const;
  std::uint64_t Seed() const;
  std::int64_t Trials(std::int64_t fallback) const;

 private:
  const ExperimentConfig& config_;
};

std::int64_t ParseInt(const std::string& key, const std::string& text);
std::string Fmt(double v);
// `relation` is <=, >=, == or ~; inexact relations allow 3 standard errors.
Row BoundRow(std::string experiment, std::string params, double empirical, double std_error,
             double bound, const std::string& relation);
Row InfoRow(std::string experiment, std::string params, double value);

}  // namespace detdepth::cli::internal
