#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "detdepth/cli.hpp"
#include "detdepth/error.hpp"
#include "run_internal.hpp"

namespace detdepth::cli {

namespace {

const std::vector<std::string>& Columns() {
  static const std::vector<std::string> kColumns = {"experiment", "params", "empirical_mean", "stderr",
                                                    "bound",      "relation", "pass"};
  return kColumns;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string OptText(const std::optional<double>& v) { return v ? internal::Fmt(*v) : ""; }

nlohmann::ordered_json Number(std::optional<double> v) {
  if (!v || std::isnan(*v)) return nullptr;
  return std::stod(internal::Fmt(*v));
}

}  // namespace

std::string Emit(const Report& report, const std::string& format) {
  std::string out;
  if (format == "csv") {
    for (std::size_t i = 0; i < Columns().size(); ++i) out += (i ? "," : "") + Columns()[i];
    out += "\n";
    for (const auto& r : report.rows) {
      std::vector<std::string> fields = {r.experiment,         r.params,          internal::Fmt(r.empirical),
                                         OptText(r.std_error), OptText(r.bound), r.relation,
                                         r.pass ? "true" : "false"};
      for (std::size_t i = 0; i < fields.size(); ++i) out += (i ? "," : "") + CsvField(fields[i]);
      out += "\n";
    }
    return out;
  }
  if (format == "jsonl") {
    for (const auto& r : report.rows) {
      nlohmann::ordered_json j;
      j["experiment"] = r.experiment;
      j["params"] = r.params;
      j["empirical_mean"] = Number(r.empirical);
      j["stderr"] = Number(r.std_error);
      j["bound"] = Number(r.bound);
      j["relation"] = r.relation;
      j["pass"] = r.pass;
      out += j.dump() + "\n";
    }
    return out;
  }
  throw Error(ErrorCode::kInvalidParams, "format must be csv or jsonl");
}

void WriteReport(const Report& report, const std::string& format, const std::string& path) {
  const std::string text = Emit(report, format);
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoFailure, "cannot open " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw Error(ErrorCode::kIoFailure, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::kIoFailure, "cannot move report into " + path);
  }
}

}  // namespace detdepth::cli
