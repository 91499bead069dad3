#include "hyperlab/report.hpp"

#include "hyperlab/io.hpp"

#include "json.hpp"

#include <cctype>
#include <cmath>
#include <ostream>

namespace hyperlab {

std::string_view check_status_name(CheckStatus s) noexcept
{
  switch (s) {
  case CheckStatus::Pass: return "PASS";
  case CheckStatus::Fail: return "FAIL";
  case CheckStatus::Skip: return "SKIP";
  }
  return "UNKNOWN";
}

std::string_view relation_name(Relation r) noexcept
{
  switch (r) {
  case Relation::Eq: return "eq";
  case Relation::Le: return "le";
  case Relation::Lt: return "lt";
  case Relation::Ge: return "ge";
  case Relation::Gt: return "gt";
  }
  return "eq";
}

bool satisfies(double m, double e, double tol, Relation relation) noexcept
{
  if (std::isnan(m) || std::isnan(e)) {
    return false;
  }
  switch (relation) {
  case Relation::Eq:
    if (std::isinf(m) || std::isinf(e)) {
      return m == e;
    }
    return std::abs(m - e) <= tol;
  case Relation::Le: return m <= e + tol;
  case Relation::Lt: return m < e;
  case Relation::Ge: return m >= e - tol;
  case Relation::Gt: return m > e;
  }
  return false;
}

Check make_check(std::string name, std::vector<double> measured, std::vector<double> expected, double tolerance,
                 Relation relation, std::string note)
{
  if (measured.empty() || expected.empty() || (expected.size() != 1 && expected.size() != measured.size())) {
    throw Error(Errc::InvalidArgument, "check '" + name + "': expected values must be one or one per measured value");
  }
  Check c{std::move(name), CheckStatus::Pass, std::move(measured), std::move(expected), tolerance, relation,
          std::move(note)};
  for (std::size_t i = 0; i < c.measured.size(); ++i) {
    const double e = c.expected.size() == 1 ? c.expected.front() : c.expected[i];
    if (!satisfies(c.measured[i], e, tolerance, relation)) {
      c.status = CheckStatus::Fail;
      break;
    }
  }
  return c;
}

Check flag_check(std::string name, bool holds, std::string note)
{
  return make_check(std::move(name), {holds ? 1.0 : 0.0}, {1.0}, 0.0, Relation::Eq, std::move(note));
}

Check skip_check(std::string name, std::string note)
{
  Check c;
  c.name = std::move(name);
  c.status = CheckStatus::Skip;
  c.note = std::move(note);
  return c;
}

bool SuiteResult::failed() const noexcept
{
  for (const auto& c : checks) {
    if (c.status == CheckStatus::Fail) {
      return true;
    }
  }
  return false;
}

ReportFormat parse_report_format(std::string_view name)
{
  std::string key;
  for (char ch : name) {
    key += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  }
  if (key == "json" || key == "jsonl") {
    return ReportFormat::Json;
  }
  if (key == "csv") {
    return ReportFormat::Csv;
  }
  throw Error(Errc::BadConfig, "unknown report format '" + std::string(name) + "'");
}

namespace {

nlohmann::ordered_json number(double v)
{
  if (std::isfinite(v)) {
    return v;
  }
  return format_double(v);
}

nlohmann::ordered_json numbers(const std::vector<double>& values)
{
  auto arr = nlohmann::ordered_json::array();
  for (double v : values) {
    arr.push_back(number(v));
  }
  return arr;
}

std::string joined(const std::vector<double>& values)
{
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out += (i ? ";" : "") + format_double(values[i]);
  }
  return out;
}

std::string csv_field(const std::string& s)
{
  if (s.find_first_of(",\"\n") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char c : s) {
    out += c == '"' ? std::string("\"\"") : std::string(1, c);
  }
  return out + "\"";
}

std::string_view relation_prefix(Relation r) noexcept
{
  switch (r) {
  case Relation::Eq: return "";
  case Relation::Le: return "<=";
  case Relation::Lt: return "<";
  case Relation::Ge: return ">=";
  case Relation::Gt: return ">";
  }
  return "";
}

} // namespace

void write_json_report(std::ostream& os, const std::vector<SuiteResult>& results)
{
  for (const auto& r : results) {
    nlohmann::ordered_json head;
    head["record"] = "suite";
    head["suite"] = r.suite;
    head["status"] = r.failed() ? "FAIL" : "PASS";
    auto cfg = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.config) {
      cfg[k] = v;
    }
    head["config"] = std::move(cfg);
    head["wall_ns"] = r.wall_ns;
    os << head.dump() << '\n';

    for (const auto& c : r.checks) {
      nlohmann::ordered_json rec;
      rec["record"] = "check";
      rec["suite"] = r.suite;
      rec["check"] = c.name;
      rec["status"] = check_status_name(c.status);
      rec["measured"] = numbers(c.measured);
      rec["expected"] = numbers(c.expected);
      rec["tolerance"] = number(c.tolerance);
      rec["relation"] = relation_name(c.relation);
      if (!c.note.empty()) {
        rec["note"] = c.note;
      }
      rec["wall_ns"] = r.wall_ns;
      os << rec.dump() << '\n';
    }
  }
}

void write_csv_report(std::ostream& os, const std::vector<SuiteResult>& results)
{
  os << "suite,check,status,measured,expected,tolerance,wall_ns\n";
  for (const auto& r : results) {
    for (const auto& c : r.checks) {
      os << csv_field(r.suite) << ',' << csv_field(c.name) << ',' << check_status_name(c.status) << ','
         << csv_field(joined(c.measured)) << ','
         << csv_field(std::string(relation_prefix(c.relation)) + joined(c.expected)) << ','
         << format_double(c.tolerance) << ',' << r.wall_ns << '\n';
    }
  }
}

void emit_report(std::ostream& os, const std::vector<SuiteResult>& results, ReportFormat format)
{
  if (format == ReportFormat::Csv) {
    write_csv_report(os, results);
  } else {
    write_json_report(os, results);
  }
}

int exit_code(const std::vector<SuiteResult>& results) noexcept
{
  for (const auto& r : results) {
    if (r.failed()) {
      return 1;
    }
  }
  return 0;
}

} // namespace hyperlab
