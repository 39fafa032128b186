#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ethics {

/// Flat key-value configuration with [section] headers. Keys are addressed
/// as "section.key"; every known key has a default, unknown keys are
/// rejected, and all values are echoed by to_ini().
///
/// Environment variables ETHICS_<SECTION>_<KEY> (upper case) override file
/// values, e.g. ETHICS_LEARNER_ALPHA=0.2.
class Config {
 public:
  /// All known keys at their defaults.
  Config();

  static Config load(const std::string& path);
  static Config parse(const std::string& text, std::string base_dir = ".");

  using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
  void apply_env_overrides(const EnvLookup& lookup);
  void apply_process_env();

  void set(const std::string& key, std::string value);
  const std::string& get(const std::string& key) const;

  double get_real(const std::string& key) const;
  std::size_t get_count(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  /// "on"/"off" (also true/false, yes/no, 1/0).
  bool get_switch(const std::string& key) const;
  /// Comma-separated reals; empty value yields an empty list.
  std::vector<double> get_real_list(const std::string& key) const;
  /// Path value resolved against the directory of the config file.
  std::string get_path(const std::string& key) const;

  const std::string& base_dir() const { return base_dir_; }
  std::string to_ini() const;

  static std::string env_var_name(const std::string& key);
  static const std::vector<std::pair<std::string, std::string>>& known_keys();

 private:
  std::map<std::string, std::string> values_;
  std::string base_dir_ = ".";
};

/// Raised for a bad configuration value; the message names the key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ethics
