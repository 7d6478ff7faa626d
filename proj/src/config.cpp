#include "peristab/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "peristab/errors.hpp"

namespace peristab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  const char* p = v.c_str();
  char* end = nullptr;
  errno = 0;
  const double d = std::strtod(p, &end);
  if (end == p || *end != '\0' || errno == ERANGE) throw ConfigError("key '" + key + "': not a number: '" + v + "'");
  return d;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Config Config::parse(std::istream& in, const std::string& origin) {
  Config c;
  c.origin_ = origin;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError(where + ": empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    auto& sec = c.data_[section];
    if (sec.count(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
    sec[key] = val;
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  return parse(f, path);
}

const std::string* Config::find(const std::string& key) const {
  if (auto s = data_.find(section_); s != data_.end())
    if (auto it = s->second.find(key); it != s->second.end()) return &it->second;
  if (auto g = data_.find(""); g != data_.end())
    if (auto it = g->second.find(key); it != g->second.end()) return &it->second;
  return nullptr;
}

bool Config::has(const std::string& key) const { return find(key) != nullptr; }

void Config::record(const std::string& key, const std::string& value, bool dflt) {
  if (used_.count(key)) return;
  used_[key] = true;
  echo_.push_back({key, value});
  if (dflt) defaulted_.push_back(key);
}

double Config::get_double(const std::string& key, double def) {
  const std::string* v = find(key);
  const double d = v ? to_double(key, *v) : def;
  record(key, format_double(d), v == nullptr);
  return d;
}

int Config::get_int(const std::string& key, int def) {
  const std::string* v = find(key);
  int i = def;
  if (v) {
    const double d = to_double(key, *v);
    if (d != std::floor(d) || std::abs(d) > 2e9) throw ConfigError("key '" + key + "': expected an integer");
    i = static_cast<int>(d);
  }
  record(key, std::to_string(i), v == nullptr);
  return i;
}

bool Config::get_bool(const std::string& key, bool def) {
  const std::string* v = find(key);
  bool b = def;
  if (v) {
    std::string s = *v;
    std::transform(s.begin(), s.end(), s.begin(), ::tolower);
    if (s == "true" || s == "1" || s == "yes") b = true;
    else if (s == "false" || s == "0" || s == "no") b = false;
    else throw ConfigError("key '" + key + "': expected a boolean");
  }
  record(key, b ? "true" : "false", v == nullptr);
  return b;
}

std::string Config::get_string(const std::string& key, const std::string& def) {
  const std::string* v = find(key);
  const std::string s = v ? *v : def;
  record(key, s, v == nullptr);
  return s;
}

std::vector<double> Config::get_list(const std::string& key, const std::vector<double>& def) {
  const std::string* v = find(key);
  std::vector<double> out = def;
  if (v) {
    out.clear();
    std::stringstream ss(*v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (!item.empty()) out.push_back(to_double(key, item));
    }
    if (out.empty()) throw ConfigError("key '" + key + "': empty list");
  }
  std::string echo;
  for (std::size_t i = 0; i < out.size(); ++i) echo += (i ? "," : "") + format_double(out[i]);
  record(key, echo, v == nullptr);
  return out;
}

void Config::check_unused() const {
  std::vector<std::string> unknown;
  for (const auto& name : {std::string(), section_}) {
    auto s = data_.find(name);
    if (s == data_.end()) continue;
    for (const auto& [k, v] : s->second)
      if (!used_.count(k)) unknown.push_back((name.empty() ? "" : "[" + name + "] ") + k);
    if (section_.empty()) break;
  }
  if (!unknown.empty()) {
    std::string msg = "unknown configuration keys:";
    for (const auto& k : unknown) msg += " " + k;
    throw ConfigError(msg);
  }
}

void write_meta(const std::string& path, const std::vector<std::pair<std::string, std::string>>& kv) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  for (const auto& [k, v] : kv) f << k << '=' << v << '\n';
}

}  // namespace peristab
