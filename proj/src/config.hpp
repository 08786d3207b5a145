#pragma once

#include <map>
#include <stdexcept>
#include <string>

namespace aggsolve {

struct ConfigError : std::runtime_error {
  ConfigError(const std::string& msg, int line_number = 0)
      : std::runtime_error(msg), line(line_number) {}
  int line = 0;
};

/// Flat experiment configuration: one dotted key per line, `key = value`,
/// '#' comments, blank lines ignored. Later assignments (including CLI flag
/// overrides) win.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;
  static KeyValueConfig from_file(const std::string& path);
  static KeyValueConfig from_string(const std::string& text);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const { return values_.count(key) > 0; }
  std::string get(const std::string& key, const std::string& fallback = "") const;
  double get_double(const std::string& key, double fallback) const;
  long get_long(const std::string& key, long fallback) const;

  const std::map<std::string, std::string>& values() const { return values_; }
  std::string to_string() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace aggsolve
