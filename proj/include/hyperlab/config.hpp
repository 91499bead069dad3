#pragma once

#include "hyperlab/common.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hyperlab {

/// Flat key=value configuration. Keys may be qualified by suite name
/// (`ex3-2.N_values = 4,8,16`); a qualified key wins over the bare one.
class Config {
public:
  Config() = default;

  /// Parses `key = value` lines; '#' starts a comment. BAD_CONFIG on
  /// malformed lines.
  static Config parse(std::string_view text);
  static Config load(const std::filesystem::path& path);

  /// Later calls override earlier ones (flag overrides go here).
  void set(const std::string& key, std::string value);

  std::optional<std::string> lookup(std::string_view scope, std::string_view key) const;
  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }

private:
  std::map<std::string, std::string> entries_;
};

/// Typed view of a Config for one suite. Every read records the effective
/// value so reports can echo the configuration that actually ran.
class SuiteParams {
public:
  SuiteParams(const Config& config, std::string scope) : config_(&config), scope_(std::move(scope)) {}

  long long get_int(const std::string& key, long long fallback);
  double get_double(const std::string& key, double fallback);
  std::uint64_t get_seed(const std::string& key, std::uint64_t fallback);
  std::string get_string(const std::string& key, const std::string& fallback);
  std::vector<long long> get_int_list(const std::string& key, const std::vector<long long>& fallback);
  std::vector<double> get_double_list(const std::string& key, const std::vector<double>& fallback);

  /// Effective (key, value) pairs in first-read order.
  const std::vector<std::pair<std::string, std::string>>& echo() const noexcept { return echo_; }

private:
  std::optional<std::string> raw(const std::string& key) const;
  void remember(const std::string& key, std::string value);

  const Config* config_;
  std::string scope_;
  std::vector<std::pair<std::string, std::string>> echo_;
};

} // namespace hyperlab
