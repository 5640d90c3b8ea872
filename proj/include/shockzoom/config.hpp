#pragma once

#include <map>
#include <string>
#include <vector>

namespace shockzoom {

/// Flat key-value configuration with dotted keys. Every key must be declared
/// in the defaults table; values are kept as text and parsed on access so the
/// effective configuration can be echoed exactly.
class Config {
 public:
  /// Configuration holding every default.
  static Config defaults();

  /// Parses `key = value` lines; `[section]` prefixes later keys with
  /// `section.`; `#` starts a comment. Throws Config on malformed lines and
  /// unknown keys.
  void merge_text(const std::string& text, const std::string& origin);
  void merge_file(const std::string& path);
  /// Applies one `key=value` assignment.
  void set(const std::string& assignment);
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& text(const std::string& key) const;
  double number(const std::string& key) const;
  long integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  /// Comma- or whitespace-separated numbers; empty text gives an empty list.
  std::vector<double> numbers(const std::string& key) const;
  std::vector<long> integers(const std::string& key) const;
  /// Exactly two numbers.
  std::pair<double, double> range(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const { return values_; }
  /// `key = value` lines in key order, with the description of each key as a
  /// preceding comment when `with_help` is set.
  std::string dump(bool with_help) const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace shockzoom
