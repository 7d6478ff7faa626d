#pragma once

#include <istream>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace peristab {

/// Flat key=value configuration with optional [section] headers. Lookups in
/// the active section fall back to the global (unsectioned) keys. Every value
/// read, explicit or defaulted, is recorded for the metadata echo.
class Config {
 public:
  static Config parse(std::istream& in, const std::string& origin = "<config>");
  static Config load(const std::string& path);

  void use_section(const std::string& name) { section_ = name; }
  const std::string& section() const { return section_; }
  bool has(const std::string& key) const;

  double get_double(const std::string& key, double def);
  int get_int(const std::string& key, int def);
  bool get_bool(const std::string& key, bool def);
  std::string get_string(const std::string& key, const std::string& def);
  std::vector<double> get_list(const std::string& key, const std::vector<double>& def);

  /// (key, value) for every key read, in first-use order.
  const std::vector<std::pair<std::string, std::string>>& echo() const { return echo_; }
  /// Keys that took their default value.
  const std::vector<std::string>& defaulted() const { return defaulted_; }
  /// Throws ConfigError naming keys of the active section (or global) never read.
  void check_unused() const;

 private:
  const std::string* find(const std::string& key) const;
  void record(const std::string& key, const std::string& value, bool dflt);

  std::map<std::string, std::map<std::string, std::string>> data_;
  std::string section_;
  std::string origin_;
  std::vector<std::pair<std::string, std::string>> echo_;
  std::vector<std::string> defaulted_;
  std::map<std::string, bool> used_;
};

std::string format_double(double v);

/// Writes `key=value` lines.
void write_meta(const std::string& path, const std::vector<std::pair<std::string, std::string>>& kv);

}  // namespace peristab
