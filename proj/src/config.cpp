#include "hyperlab/config.hpp"

#include "hyperlab/io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace hyperlab {

namespace {

std::string trimmed(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value)
{
  std::vector<std::string> out;
  std::stringstream ss(value);
  for (std::string item; std::getline(ss, item, ',');) {
    out.push_back(trimmed(item));
  }
  return out;
}

long long to_int(const std::string& key, const std::string& text)
{
  long long v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(Errc::BadConfig, key + ": expected an integer, got '" + text + "'");
  }
  return v;
}

double to_double(const std::string& key, const std::string& text)
{
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw Error(Errc::BadConfig, key + ": expected a finite number, got '" + text + "'");
  }
  return v;
}

template <typename T, typename Fmt>
std::string join(const std::vector<T>& values, Fmt&& fmt)
{
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out += (i ? "," : "") + fmt(values[i]);
  }
  return out;
}

} // namespace

Config Config::parse(std::string_view text)
{
  Config cfg;
  std::istringstream in{std::string(text)};
  int number = 0;
  for (std::string line; std::getline(in, line);) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    const auto body = trimmed(line);
    if (body.empty()) {
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw Error(Errc::BadConfig, "line " + std::to_string(number) + ": expected key=value");
    }
    auto key = trimmed(std::string_view(body).substr(0, eq));
    if (key.empty()) {
      throw Error(Errc::BadConfig, "line " + std::to_string(number) + ": empty key");
    }
    cfg.set(key, trimmed(std::string_view(body).substr(eq + 1)));
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) { return parse(read_text_file(path)); }

void Config::set(const std::string& key, std::string value) { entries_[key] = std::move(value); }

std::optional<std::string> Config::lookup(std::string_view scope, std::string_view key) const
{
  if (!scope.empty()) {
    auto it = entries_.find(std::string(scope) + "." + std::string(key));
    if (it != entries_.end()) {
      return it->second;
    }
  }
  auto it = entries_.find(std::string(key));
  if (it != entries_.end()) {
    return it->second;
  }
  return std::nullopt;
}

std::optional<std::string> SuiteParams::raw(const std::string& key) const { return config_->lookup(scope_, key); }

void SuiteParams::remember(const std::string& key, std::string value)
{
  for (const auto& [k, v] : echo_) {
    if (k == key) {
      return;
    }
  }
  echo_.emplace_back(key, std::move(value));
}

long long SuiteParams::get_int(const std::string& key, long long fallback)
{
  const auto text = raw(key);
  const long long v = text ? to_int(key, *text) : fallback;
  remember(key, std::to_string(v));
  return v;
}

double SuiteParams::get_double(const std::string& key, double fallback)
{
  const auto text = raw(key);
  const double v = text ? to_double(key, *text) : fallback;
  remember(key, format_double(v));
  return v;
}

std::uint64_t SuiteParams::get_seed(const std::string& key, std::uint64_t fallback)
{
  const auto text = raw(key);
  std::uint64_t v = fallback;
  if (text) {
    auto [ptr, ec] = std::from_chars(text->data(), text->data() + text->size(), v);
    if (text->empty() || ec != std::errc() || ptr != text->data() + text->size()) {
      throw Error(Errc::BadConfig, key + ": expected a nonnegative integer seed, got '" + *text + "'");
    }
  }
  remember(key, std::to_string(v));
  return v;
}

std::string SuiteParams::get_string(const std::string& key, const std::string& fallback)
{
  auto v = raw(key).value_or(fallback);
  remember(key, v);
  return v;
}

std::vector<long long> SuiteParams::get_int_list(const std::string& key, const std::vector<long long>& fallback)
{
  std::vector<long long> v = fallback;
  if (const auto text = raw(key)) {
    v.clear();
    for (const auto& item : split_list(*text)) {
      v.push_back(to_int(key, item));
    }
    if (v.empty()) {
      throw Error(Errc::BadConfig, key + ": empty list");
    }
  }
  remember(key, join(v, [](long long x) { return std::to_string(x); }));
  return v;
}

std::vector<double> SuiteParams::get_double_list(const std::string& key, const std::vector<double>& fallback)
{
  std::vector<double> v = fallback;
  if (const auto text = raw(key)) {
    v.clear();
    for (const auto& item : split_list(*text)) {
      v.push_back(to_double(key, item));
    }
    if (v.empty()) {
      throw Error(Errc::BadConfig, key + ": empty list");
    }
  }
  remember(key, join(v, [](double x) { return format_double(x); }));
  return v;
}

} // namespace hyperlab
