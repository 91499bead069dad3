// Runs the thirteen acceptance criteria against their stated tolerances and
// prints one PASS/FAIL line per criterion. Exit status is nonzero if any fails.

#include "hyperlab/bench.hpp"
#include "hyperlab/io.hpp"
#include "hyperlab/suites.hpp"

#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

using namespace hyperlab;

namespace {

std::map<std::string, SuiteResult> cache;

const SuiteResult& suite(const std::string& name)
{
  auto it = cache.find(name);
  if (it == cache.end()) {
    it = cache.emplace(name, run_suite(name)).first;
  }
  return it->second;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

using CheckFilter = std::function<bool(const std::string&)>;

bool any_name(const std::string&) { return true; }

CheckFilter containing(std::string part)
{
  return [part](const std::string& name) { return name.find(part) != std::string::npos; };
}

CheckFilter not_containing(std::string part)
{
  return [part](const std::string& name) { return name.find(part) == std::string::npos; };
}

std::string measured_text(const Check& c)
{
  std::string s;
  for (std::size_t i = 0; i < c.measured.size() && i < 4; ++i) {
    s += (i ? ";" : "") + format_double(c.measured[i]);
  }
  return c.measured.size() > 4 ? s + ";..." : s;
}

// Every selected check must pass; a selection with nothing in it fails.
Outcome from_checks(const std::vector<std::pair<std::string, CheckFilter>>& picks)
{
  int passed = 0;
  for (const auto& [name, keep] : picks) {
    for (const auto& c : suite(name).checks) {
      if (!keep(c.name)) {
        continue;
      }
      if (c.status != CheckStatus::Pass) {
        return {false, name + " / " + c.name + ": " + std::string(check_status_name(c.status)) + " measured " +
                         measured_text(c)};
      }
      ++passed;
    }
  }
  if (passed == 0) {
    return {false, "no checks selected"};
  }
  return {true, std::to_string(passed) + (passed == 1 ? " check passed" : " checks passed")};
}

Outcome oracle_equivalence()
{
  auto out = from_checks({{"hausdorff-oracle", any_name}});
  const double seconds = static_cast<double>(suite("hausdorff-oracle").wall_ns) * 1e-9;
  out.detail += ", runtime " + format_double(seconds) + " s (limit 10 s)";
  out.pass = out.pass && seconds < 10.0;
  return out;
}

Outcome performance_report()
{
  const auto records = run_bench(BenchConfig{});
  const auto result = bench_checks(records, 0.25);
  double naive = 0;
  double early = 0;
  for (const auto& r : records) {
    (r.kernel == "naive" ? naive : early) += static_cast<double>(r.inner_visits);
  }
  Outcome out{!result.failed(), "visit ratio " + format_double(early / naive)};
  for (const auto& c : result.checks) {
    if (c.name.find("speedup") != std::string::npos) {
      out.detail += ", speedup " + measured_text(c);
    }
    if (c.status == CheckStatus::Fail) {
      out.detail += ", failed: " + c.name;
    }
  }
  return out;
}

} // namespace

int main()
{
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
    {"Hausdorff oracle equivalence", oracle_equivalence},
    {"metric axioms of H",
     [] { return from_checks({{"metric-axioms", not_containing("singleton embedding")}}); }},
    {"singleton isometry", [] { return from_checks({{"metric-axioms", containing("singleton embedding")}}); }},
    {"modulus transfer f -> F", [] { return from_checks({{"thm3-1", any_name}}); }},
    {"tangent grid moduli", [] { return from_checks({{"ex3-2", any_name}}); }},
    {"naturals and reciprocals discreteness", [] { return from_checks({{"ex4-2", any_name}}); }},
    {"orthogonal pairs and radial Cauchy sequence", [] { return from_checks({{"ex4-4", any_name}}); }},
    {"point-finite cluster check", [] { return from_checks({{"thm4-6-shadow", any_name}}); }},
    {"singleton hyperspace packing", [] { return from_checks({{"thm4-5-shadow", any_name}}); }},
    {"joint continuity of d(x, A)", [] { return from_checks({{"lemma5-1", any_name}}); }},
    {"staged fixed-point searches",
     [] {
       return from_checks({{"thm5-2", any_name}, {"cor5-3", any_name}, {"thm5-4", any_name}});
     }},
    {"convex range demo", [] { return from_checks({{"thm5-5-demo", any_name}}); }},
    {"early-break performance", performance_report},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("error: ") + e.what()};
    }
    failures += out.pass ? 0 : 1;
    std::printf("%s [%zu] %s: %s\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                out.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
