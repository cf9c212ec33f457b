#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qmbh/error.hpp"
#include "qmbh/experiments.hpp"

using namespace qmbh;
using namespace qmbh::experiments;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("qmbh_exp_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

report::Config config(const std::string& text) {
  std::istringstream in(text);
  return report::parse_config(in);
}

}  // namespace

TEST_CASE("registry") {
  const std::vector<std::string> ids{
      "constants-report", "bohm-vortex", "ring-model", "hopping-dispersion", "emergent-mass",
      "dispersion-vs-relativity", "zbw", "neg-energy-scan", "kn-horizon", "kn-fields",
      "metric-slice", "shell-spin", "charge-confinement"};
  REQUIRE(registry().size() == ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) CHECK(registry()[i].id == ids[i]);
  CHECK_THROWS_AS(info("nope"), ConfigError);
}

TEST_CASE("run rejects bad requests before writing") {
  const auto dir = scratch("bad");
  CHECK_THROWS_AS(run({"nope", {}, dir}), ConfigError);
  CHECK_THROWS_AS(run({"zbw", {{"colour", "red"}}, dir}), ConfigError);
  CHECK_THROWS_AS(run({"zbw", {{"sigma", "ten"}}, dir}), ConfigError);
  CHECK_THROWS_AS(run({"zbw", {{"points", "10.5"}}, dir}), ConfigError);
  CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("numerical failures carry the experiment id") {
  const auto dir = scratch("numeric");
  try {
    run({"zbw", {{"points", "300"}}, dir});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).rfind("zbw: ", 0) == 0);
  }
}

TEST_CASE("constants report has six passing checks") {
  const auto r = run({"constants-report", {}, scratch("constants")});
  CHECK(r.claims.size() == 6);
  CHECK(r.status == report::Status::pass);
}

TEST_CASE("kn-horizon reports the naked electron") {
  const auto dir = scratch("kn");
  const auto r = run({"kn-horizon", {{"particle", "electron"}}, dir});
  const auto naked = std::find_if(r.claims.begin(), r.claims.end(),
                                  [](const RatioCheck& c) { return c.id == "naked"; });
  REQUIRE(naked != r.claims.end());
  CHECK(naked->pass);
  CHECK(r.status == report::Status::pass);
  CHECK(fs::exists(dir / "horizons.csv"));
  // The on-disk record round trips.
  CHECK(report::read_report(dir / "report.json") == r);
}

TEST_CASE("zbw tables are byte-identical across runs") {
  const auto a = scratch("zbw_a"), b = scratch("zbw_b");
  const auto ra = run({"zbw", {{"sigma", "10"}}, a});
  const auto rb = run({"zbw", {{"sigma", "10"}}, b});
  REQUIRE(ra.tables == rb.tables);
  for (const auto& t : ra.tables) CHECK(slurp(a / t) == slurp(b / t));
  auto header = slurp(a / "zbw.csv");
  CHECK(header.substr(0, header.find('\n')) == "t,x_mean");
}

TEST_CASE("config selection") {
  CHECK(selected_ids(config("")).size() == 13);
  CHECK(selected_ids(config("experiments =\n")).empty());
  const auto two = selected_ids(config("experiments = zbw, constants-report\n"));
  CHECK(two == std::vector<std::string>{"constants-report", "zbw"});
  CHECK_THROWS_AS(selected_ids(config("experiments = zbw, warp-drive\n")), ConfigError);
  CHECK_THROWS_AS(validate_config(config("zbw.colour = red\n")), ConfigError);
  CHECK_THROWS_AS(validate_config(config("speed = 3\n")), ConfigError);
  CHECK_NOTHROW(validate_config(config("zbw.tolerance = 0\nout = x\n")));
}

TEST_CASE("run_all counts failures and keeps going") {
  const auto dir = scratch("all");
  const auto batch = run_all(config("experiments = zbw, metric-slice\nzbw.tolerance = 0\n"), dir);
  REQUIRE(batch.reports.size() == 2);
  CHECK(batch.failures == 1);
  CHECK(batch.reports[0].id == "zbw");
  CHECK(batch.reports[0].status == report::Status::fail);
  CHECK(batch.reports[1].status == report::Status::pass);
  CHECK(slurp(dir / "summary.csv").rfind("id,claims_passed,claims_total,status\n", 0) == 0);

  const auto broken = run_all(config("experiments = zbw\nzbw.points = 300\n"), scratch("err"));
  CHECK(broken.failures == 1);
  CHECK(broken.reports[0].status == report::Status::error);

  const auto none = run_all(config("experiments =\n"), scratch("none"));
  CHECK(none.reports.empty());
  CHECK(none.failures == 0);
  CHECK(none.warnings.size() == 1);
}
