#pragma once

// Registry of runnable experiments and batch execution.

#include <filesystem>
#include <string>
#include <vector>

#include "qmbh/report.hpp"

namespace qmbh::experiments {

enum class ParamKind { number, integer, label };

struct ParamSchema {
  std::string key;
  ParamKind kind = ParamKind::number;
  std::string default_value;
  std::string help;
};

struct ExperimentInfo {
  std::string id;
  std::string summary;
  std::vector<ParamSchema> params;
};

/// Registered experiments in a fixed order.
const std::vector<ExperimentInfo>& registry();

/// Throws ConfigError for an unknown id.
const ExperimentInfo& info(const std::string& id);

/// Runs one experiment into spec.output_dir (created if needed). Unknown ids
/// and invalid parameters throw ConfigError before anything is written;
/// numerical failures throw Error prefixed with the experiment id.
report::ExperimentReport run(const report::ExperimentSpec& spec);

/// Spec for `id` from a flat config: keys `<id>.<param>` become parameters.
report::ExperimentSpec spec_from_config(const std::string& id, const report::Config& cfg,
                                        const std::filesystem::path& out_root);

/// Ids selected by the `experiments` key (comma or space separated). Absent
/// means all; present and empty means none.
std::vector<std::string> selected_ids(const report::Config& cfg);

/// Rejects keys that name no experiment parameter or known global.
void validate_config(const report::Config& cfg);

struct BatchResult {
  std::vector<report::ExperimentReport> reports;  ///< in registry order
  std::size_t failures = 0;                       ///< status != pass
  std::vector<std::string> warnings;
};

/// Runs every selected experiment, continuing past failures, and writes
/// `summary.csv` under out_root.
BatchResult run_all(const report::Config& cfg, const std::filesystem::path& out_root);

}  // namespace qmbh::experiments
