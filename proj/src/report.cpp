#include "qmbh/report.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "qmbh/error.hpp"
#include "qmbh/table_io.hpp"

namespace qmbh::report {

using nlohmann::json;

std::string to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::error: return "error";
  }
  return "error";
}

Status status_from_string(const std::string& s) {
  if (s == "pass") return Status::pass;
  if (s == "fail") return Status::fail;
  if (s == "error") return Status::error;
  throw ConfigError("unknown status '" + s + "'");
}

std::size_t ExperimentReport::claims_passed() const {
  std::size_t n = 0;
  for (const auto& c : claims) n += c.pass ? 1 : 0;
  return n;
}

Status derive_status(const ExperimentReport& r) {
  if (r.status == Status::error) return Status::error;
  return !r.claims.empty() && all_pass(r.claims) ? Status::pass : Status::fail;
}

namespace {

json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double number(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw ConfigError("bad number '" + s + "' in report");
  }
  return j.get<double>();
}

}  // namespace

std::string serialize(const ExperimentReport& r) {
  json claims = json::array();
  for (const auto& c : r.claims) {
    claims.push_back({{"id", c.id},
                      {"computed", number(c.computed)},
                      {"reference", number(c.reference)},
                      {"kind", to_string(c.kind)},
                      {"tolerance", number(c.tolerance)},
                      {"pass", c.pass},
                      {"note", c.note}});
  }
  json j = {{"id", r.id},
            {"status", to_string(r.status)},
            {"runtime_seconds", number(r.runtime)},
            {"claims", claims},
            {"tables", r.tables},
            {"message", r.message}};
  return j.dump(2) + "\n";
}

ExperimentReport parse(const std::string& text) {
  try {
    const json j = json::parse(text);
    ExperimentReport r;
    r.id = j.at("id").get<std::string>();
    r.status = status_from_string(j.at("status").get<std::string>());
    r.runtime = number(j.at("runtime_seconds"));
    for (const auto& c : j.at("claims")) {
      RatioCheck k;
      k.id = c.at("id").get<std::string>();
      k.computed = number(c.at("computed"));
      k.reference = number(c.at("reference"));
      k.kind = tolerance_kind_from_string(c.at("kind").get<std::string>());
      k.tolerance = number(c.at("tolerance"));
      k.pass = c.at("pass").get<bool>();
      k.note = c.at("note").get<std::string>();
      r.claims.push_back(std::move(k));
    }
    r.tables = j.at("tables").get<std::vector<std::string>>();
    r.message = j.value("message", "");
    return r;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  }
}

ExperimentReport read_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read report " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const std::string* Config::find(const std::string& key) const {
  const auto it = values.find(key);
  return it == values.end() ? nullptr : &it->second;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Config parse_config(std::istream& in) {
  Config cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    }
    cfg.values[key] = trim(line.substr(eq + 1));
  }
  return cfg;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  return parse_config(in);
}

std::string summary_csv(const std::vector<ExperimentReport>& reports) {
  io::Table t({"id", "claims_passed", "claims_total", "status"});
  for (const auto& r : reports) {
    t.add_row({r.id, static_cast<long long>(r.claims_passed()),
               static_cast<long long>(r.claims.size()), to_string(r.status)});
  }
  return t.to_csv();
}

}  // namespace qmbh::report
