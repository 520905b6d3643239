#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace mwcli {

/// Bad configuration or unreadable/unwritable files (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat `key = value` configuration; `#` starts a comment.
class Config {
 public:
  static Config parse(std::istream& in, const std::string& origin = "<config>");
  static Config load(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  std::string str(const std::string& key, const std::string& fallback) const;
  int integer(const std::string& key, int fallback) const;
  std::uint64_t u64(const std::string& key, std::uint64_t fallback) const;
  /// Accepts `inf`.
  double real(const std::string& key, double fallback) const;
  std::vector<double> reals(const std::string& key, const std::vector<double>& fallback) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace mwcli
