#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "qmbh/error.hpp"
#include "qmbh/report.hpp"

using namespace qmbh;
using namespace qmbh::report;

TEST_CASE("report serialization round trips") {
  ExperimentReport r;
  r.id = "zbw";
  r.claims.push_back(relative_check("omega", 2.0024396441084136, 2.0, 0.05, "note \"quoted\""));
  r.claims.push_back(at_most("nan_claim", std::numeric_limits<double>::quiet_NaN(), 1.0));
  r.claims.push_back(at_least("inf_claim", std::numeric_limits<double>::infinity(), 1.0));
  r.tables = {"zbw.csv", "zbw_fit.csv"};
  r.runtime = 0.123456789;
  r.status = derive_status(r);
  CHECK(r.status == Status::fail);

  const auto back = parse(serialize(r));
  CHECK(back.id == r.id);
  CHECK(back.tables == r.tables);
  CHECK(back.runtime == r.runtime);
  REQUIRE(back.claims.size() == 3);
  CHECK(back.claims[0] == r.claims[0]);
  CHECK(std::isnan(back.claims[1].computed));
  CHECK(back.claims[2] == r.claims[2]);
  // Everything except the NaN claim compares equal.
  auto a = r, b = back;
  a.claims.erase(a.claims.begin() + 1);
  b.claims.erase(b.claims.begin() + 1);
  CHECK(a == b);
  CHECK_THROWS_AS(parse("{not json"), ConfigError);
}

TEST_CASE("status follows claims") {
  ExperimentReport r;
  CHECK(derive_status(r) == Status::fail);  // no claims
  r.claims.push_back(at_most("a", 0.0, 1.0));
  CHECK(derive_status(r) == Status::pass);
  r.status = Status::error;
  CHECK(derive_status(r) == Status::error);
}

TEST_CASE("config parsing") {
  std::istringstream in(
      "# comment\n"
      "experiments = zbw, kn-horizon   # trailing\n"
      "\n"
      "zbw.tolerance = 0\n"
      "zbw.tolerance = 0.1\n");
  const auto cfg = parse_config(in);
  CHECK(*cfg.find("experiments") == "zbw, kn-horizon");
  CHECK(*cfg.find("zbw.tolerance") == "0.1");
  CHECK(cfg.find("missing") == nullptr);

  std::istringstream empty_value("experiments =\n");
  CHECK(parse_config(empty_value).find("experiments")->empty());
  std::istringstream bad("no equals sign\n");
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
  std::istringstream no_key(" = 3\n");
  CHECK_THROWS_AS(parse_config(no_key), ConfigError);
}

TEST_CASE("summary csv") {
  ExperimentReport a;
  a.id = "x";
  a.claims = {at_most("c", 0.0, 1.0), at_most("d", 2.0, 1.0)};
  a.status = derive_status(a);
  CHECK(summary_csv({a}) == "id,claims_passed,claims_total,status\nx,1,2,fail\n");
}
