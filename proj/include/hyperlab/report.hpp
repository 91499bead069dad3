#pragma once

#include "hyperlab/common.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hyperlab {

enum class CheckStatus { Pass, Fail, Skip };
enum class Relation { Eq, Le, Lt, Ge, Gt };

std::string_view check_status_name(CheckStatus s) noexcept;
std::string_view relation_name(Relation r) noexcept;

/// One verified quantity. `expected` holds either one value (compared
/// against every measured entry) or one value per measured entry.
struct Check {
  std::string name;
  CheckStatus status = CheckStatus::Skip;
  std::vector<double> measured;
  std::vector<double> expected;
  double tolerance = 0.0;
  Relation relation = Relation::Eq;
  std::string note;
};

/// measured[i] REL expected[i]:
///   eq  |m - e| <= tol (equal infinities pass)
///   le  m <= e + tol      lt  m < e
///   ge  m >= e - tol      gt  m > e
bool satisfies(double measured, double expected, double tolerance, Relation relation) noexcept;

/// Status is FAIL exactly when some measured entry violates the relation.
Check make_check(std::string name, std::vector<double> measured, std::vector<double> expected, double tolerance,
                 Relation relation = Relation::Eq, std::string note = {});

/// A PASS/FAIL check on a yes/no outcome (measured 1 for true).
Check flag_check(std::string name, bool holds, std::string note = {});

Check skip_check(std::string name, std::string note);

struct SuiteResult {
  std::string suite;
  std::vector<Check> checks;
  std::int64_t wall_ns = 0;
  std::vector<std::pair<std::string, std::string>> config;

  bool failed() const noexcept;
};

enum class ReportFormat { Json, Csv };

ReportFormat parse_report_format(std::string_view name);

/// JSON lines: one `suite` record per suite followed by one `check` record
/// per check. Non-finite numbers are written as the strings "inf"/"-inf"/"nan".
void write_json_report(std::ostream& os, const std::vector<SuiteResult>& results);

/// Header `suite,check,status,measured,expected,tolerance,wall_ns`; list
/// values are ';'-joined and non-eq relations prefix the expected field.
void write_csv_report(std::ostream& os, const std::vector<SuiteResult>& results);

void emit_report(std::ostream& os, const std::vector<SuiteResult>& results, ReportFormat format);

/// 0 when no check failed, 1 otherwise.
int exit_code(const std::vector<SuiteResult>& results) noexcept;

} // namespace hyperlab
