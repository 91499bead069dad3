#include "doctest.h"

#include "hyperlab/bench.hpp"
#include "hyperlab/suites.hpp"

#include "json.hpp"

#include <cmath>
#include <sstream>

using namespace hyperlab;

namespace {

std::string json_of(SuiteResult r)
{
  r.wall_ns = 0;
  std::ostringstream os;
  write_json_report(os, {r});
  return os.str();
}

} // namespace

TEST_CASE("every registered suite passes with defaults")
{
  REQUIRE(suite_names().size() == 14);
  CHECK(suite_names().front() == "thm3-1");
  for (const auto& name : suite_names()) {
    CAPTURE(name);
    auto r = run_suite(name);
    CHECK(r.suite == name);
    CHECK_FALSE(r.checks.empty());
    for (const auto& c : r.checks) {
      CAPTURE(c.name);
      CHECK(c.status != CheckStatus::Fail);
    }
  }
}

TEST_CASE("unknown suites are rejected")
{
  try {
    run_suite("thm9-9");
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UnknownSuite);
  }
}

TEST_CASE("reports are reproducible apart from timings")
{
  Config cfg;
  cfg.set("thm3-1.maps", "10");
  cfg.set("thm3-1.seed", "77");
  const auto a = json_of(run_suite("thm3-1", cfg));
  const auto b = json_of(run_suite("thm3-1", cfg));
  CHECK(a == b);

  std::istringstream lines(a);
  std::string first;
  std::getline(lines, first);
  auto head = nlohmann::json::parse(first);
  CHECK(head["record"] == "suite");
  CHECK(head["config"]["maps"] == "10");
  CHECK(head["config"]["seed"] == "77");
}

TEST_CASE("bad config values raise BAD_CONFIG")
{
  Config cfg;
  cfg.set("ex3-2.N_values", "4,x");
  try {
    run_suite("ex3-2", cfg);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::BadConfig);
  }
}

TEST_CASE("check relations")
{
  CHECK(make_check("eq", {1.0}, {1.0 + 1e-13}, 1e-12).status == CheckStatus::Pass);
  CHECK(make_check("eq", {1.0}, {1.1}, 1e-12).status == CheckStatus::Fail);
  CHECK(make_check("inf", {INFINITY}, {INFINITY}, 0.0).status == CheckStatus::Pass);
  CHECK(make_check("nan", {NAN}, {0.0}, 1.0).status == CheckStatus::Fail);
  CHECK(make_check("le", {0.5, 1.0}, {1.0}, 0.0, Relation::Le).status == CheckStatus::Pass);
  CHECK(make_check("lt", {1.0}, {1.0}, 0.5, Relation::Lt).status == CheckStatus::Fail);
  CHECK(make_check("gt", {2.0}, {1.0}, 0.0, Relation::Gt).status == CheckStatus::Pass);
  CHECK(make_check("ge", {0.9}, {1.0}, 0.2, Relation::Ge).status == CheckStatus::Pass);
  CHECK(make_check("pairwise", {1.0, 2.0}, {1.0, 3.0}, 0.0).status == CheckStatus::Fail);
  CHECK_THROWS_AS(make_check("shape", {1.0, 2.0, 3.0}, {1.0, 2.0}, 0.0), Error);
  CHECK(flag_check("flag", false).status == CheckStatus::Fail);
}

TEST_CASE("CSV layout and exit codes")
{
  SuiteResult ok{"demo", {make_check("a,b", {1.0}, {2.0}, 0.0, Relation::Le), skip_check("later", "too big")}, 5, {}};
  std::ostringstream os;
  write_csv_report(os, {ok});
  CHECK(os.str() == "suite,check,status,measured,expected,tolerance,wall_ns\n"
                    "demo,\"a,b\",PASS,1,<=2,0,5\n"
                    "demo,later,SKIP,,,0,5\n");
  CHECK(exit_code({ok}) == 0);
  SuiteResult bad{"demo", {flag_check("f", false)}, 0, {}};
  CHECK(exit_code({ok, bad}) == 1);
  CHECK(parse_report_format("CSV") == ReportFormat::Csv);
  CHECK_THROWS_AS(parse_report_format("xml"), Error);

  std::ostringstream js;
  write_json_report(js, {SuiteResult{"demo", {make_check("inf", {INFINITY}, {INFINITY}, 0.0)}, 0, {}}});
  CHECK(js.str().find("\"measured\":[\"inf\"]") != std::string::npos);
}

TEST_CASE("bench on a small cloud")
{
  BenchConfig cfg;
  cfg.sizes = {400};
  cfg.seeds = {1, 2};
  cfg.workers = 2;
  auto records = run_bench(cfg);
  REQUIRE(records.size() == 4);
  CHECK(records[0].kernel == "naive");
  CHECK(records[1].kernel == "early_break");
  CHECK(records[0].value == records[1].value);
  CHECK(records[0].inner_visits == 2u * 400u * 400u);
  CHECK(records[1].inner_visits < records[0].inner_visits);

  std::ostringstream os;
  write_bench_records(os, records);
  std::istringstream lines(os.str());
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    auto rec = nlohmann::json::parse(line);
    CHECK(rec.contains("inner_visits"));
    ++count;
  }
  CHECK(count == 4);

  auto cloud = two_blob_cloud(10, 3);
  CHECK(cloud.size() == 10);
  CHECK(cloud.dim() == 2);
}
