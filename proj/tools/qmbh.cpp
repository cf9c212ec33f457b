// Command-line front end: list, run, run-all, report.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qmbh/error.hpp"
#include "qmbh/experiments.hpp"
#include "qmbh/report.hpp"

namespace fs = std::filesystem;
using namespace qmbh;

namespace {

// Exit code for unusable input (bad arguments, config or report files).
constexpr int kUsageError = 125;

// Pairs `--key value` (or `--key=value`) from unparsed arguments.
std::map<std::string, std::string> pairs_from_extras(const std::vector<std::string>& extras) {
  std::map<std::string, std::string> out;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const auto& a = extras[i];
    if (a.rfind("--", 0) != 0 || a.size() == 2) {
      throw ConfigError("unexpected argument '" + a + "'");
    }
    const auto body = a.substr(2);
    if (const auto eq = body.find('='); eq != std::string::npos) {
      out[body.substr(0, eq)] = body.substr(eq + 1);
      continue;
    }
    if (i + 1 >= extras.size()) throw ConfigError("missing value for '" + a + "'");
    out[body] = extras[++i];
  }
  return out;
}

fs::path output_root(const std::string& flag, const report::Config* cfg) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("QMBH_OUT"); env != nullptr && *env != '\0') return env;
  if (cfg != nullptr) {
    if (const auto* out = cfg->find("out")) return *out;
  }
  return "qmbh-out";
}

void print_report(const report::ExperimentReport& r, std::ostream& os) {
  os << r.id << ": " << report::to_string(r.status) << " (" << r.claims_passed() << "/"
     << r.claims.size() << " claims)\n";
  if (!r.message.empty()) os << "  error: " << r.message << "\n";
  for (const auto& c : r.claims) {
    os << "  [" << (c.pass ? "ok" : "FAIL") << "] " << c.id << " computed=" << c.computed
       << " reference=" << c.reference << " (" << to_string(c.kind) << " " << c.tolerance
       << ")\n";
  }
}

int cmd_list() {
  for (const auto& e : experiments::registry()) {
    std::cout << e.id << "  " << e.summary << "\n";
    for (const auto& p : e.params) {
      std::cout << "    --" << p.key << " (default " << p.default_value << ")  " << p.help
                << "\n";
    }
  }
  return 0;
}

int cmd_run(const std::string& id, const std::string& config_path, const std::string& out_flag,
            const std::vector<std::string>& extras) {
  report::Config cfg;
  if (!config_path.empty()) cfg = report::load_config(config_path);
  experiments::validate_config(cfg);
  const auto root = output_root(out_flag, &cfg);
  auto spec = experiments::spec_from_config(id, cfg, root);
  for (const auto& [k, v] : pairs_from_extras(extras)) spec.parameters[k] = v;
  const auto r = experiments::run(spec);
  print_report(r, std::cout);
  std::cout << "tables in " << spec.output_dir.string() << "\n";
  return r.status == report::Status::pass ? 0 : 1;
}

int cmd_run_all(const std::string& config_path, const std::string& out_flag,
                const std::vector<std::string>& extras) {
  report::Config cfg;
  if (!config_path.empty()) cfg = report::load_config(config_path);
  for (const auto& [k, v] : pairs_from_extras(extras)) cfg.values[k] = v;
  const auto root = output_root(out_flag, &cfg);
  const auto batch = experiments::run_all(cfg, root);
  for (const auto& w : batch.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& r : batch.reports) {
    if (r.status != report::Status::pass) print_report(r, std::cerr);
  }
  std::cout << report::summary_csv(batch.reports);
  return static_cast<int>(std::min<std::size_t>(batch.failures, 124));
}

int cmd_report(const fs::path& dir) {
  if (fs::exists(dir / "report.json")) {
    const auto r = report::read_report(dir / "report.json");
    print_report(r, std::cout);
    return r.status == report::Status::pass ? 0 : 1;
  }
  if (!fs::is_directory(dir)) throw ConfigError("no such directory " + dir.string());
  std::vector<fs::path> found;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_directory() && fs::exists(e.path() / "report.json")) found.push_back(e.path());
  }
  std::sort(found.begin(), found.end());
  std::vector<report::ExperimentReport> reports;
  for (const auto& p : found) reports.push_back(report::read_report(p / "report.json"));
  // Registry order first, anything else after.
  std::stable_sort(reports.begin(), reports.end(), [](const auto& a, const auto& b) {
    const auto& reg = experiments::registry();
    auto pos = [&reg](const std::string& id) {
      return std::find_if(reg.begin(), reg.end(), [&](const auto& e) { return e.id == id; }) -
             reg.begin();
    };
    return pos(a.id) < pos(b.id);
  });
  if (reports.empty()) std::cerr << "warning: no reports under " << dir.string() << "\n";
  std::cout << report::summary_csv(reports);
  const auto failures = std::count_if(reports.begin(), reports.end(), [](const auto& r) {
    return r.status != report::Status::pass;
  });
  return static_cast<int>(std::min<long>(failures, 124));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qmbh: numerical checks for quantum-mechanical black-hole models"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "list experiments and their parameters");

  std::string id, config_path, out_flag, report_dir;
  auto* run = app.add_subcommand("run", "run one experiment; extra --key value pairs set parameters");
  run->add_option("id", id, "experiment id")->required();
  run->add_option("--config", config_path, "config file");
  run->add_option("--out", out_flag, "output root (default $QMBH_OUT, then ./qmbh-out)");
  run->allow_extras();

  auto* all = app.add_subcommand("run-all", "run every selected experiment");
  all->add_option("--config", config_path, "config file");
  all->add_option("--out", out_flag, "output root (default $QMBH_OUT, then ./qmbh-out)");
  all->allow_extras();

  auto* rep = app.add_subcommand("report", "summarize reports under a directory");
  rep->add_option("dir", report_dir, "output root or experiment directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (list->parsed()) return cmd_list();
    if (run->parsed()) return cmd_run(id, config_path, out_flag, run->remaining());
    if (all->parsed()) return cmd_run_all(config_path, out_flag, all->remaining());
    if (rep->parsed()) return cmd_report(report_dir);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    // Numerical failure inside a single run.
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kUsageError;
}
