#pragma once

// Experiment requests, their machine-readable reports, and the plain-text
// `key = value` configuration format.

#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "qmbh/ratio_check.hpp"

namespace qmbh::report {

struct ExperimentSpec {
  std::string id;
  std::map<std::string, std::string> parameters;  ///< raw values, typed by the schema
  std::filesystem::path output_dir;
};

enum class Status { pass, fail, error };

std::string to_string(Status s);
Status status_from_string(const std::string& s);

struct ExperimentReport {
  std::string id;
  std::vector<RatioCheck> claims;
  std::vector<std::string> tables;  ///< file names relative to the experiment directory
  double runtime = 0.0;             ///< seconds
  Status status = Status::fail;
  std::string message;              ///< error text when status is error

  std::size_t claims_passed() const;
  bool operator==(const ExperimentReport&) const = default;
};

/// pass iff every claim passes (and there is at least one); error is sticky.
Status derive_status(const ExperimentReport& r);

/// JSON text. Non-finite numbers are written as the strings "nan", "inf", "-inf".
std::string serialize(const ExperimentReport& r);
ExperimentReport parse(const std::string& json);

ExperimentReport read_report(const std::filesystem::path& path);

/// Flat `key = value` map. Later lines override earlier ones.
struct Config {
  std::map<std::string, std::string> values;

  bool has(const std::string& key) const { return values.count(key) != 0; }
  const std::string* find(const std::string& key) const;
};

/// One `key = value` per line; `#` starts a comment; blank lines ignored.
/// Throws ConfigError with the line number on malformed input.
Config parse_config(std::istream& in);
Config load_config(const std::filesystem::path& path);

/// Summary CSV with header `id,claims_passed,claims_total,status`, rows in the
/// order given.
std::string summary_csv(const std::vector<ExperimentReport>& reports);

}  // namespace qmbh::report
