#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ghzkey/analysis.hpp"

namespace ghzkey::cli {

/// Bad configuration. The message is prefixed with where the value came from
/// ("run.cfg:12", "--set", ...). Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SweepAxis {
  std::vector<std::string> keys;  // "a+b" in the config sweeps both together
  double from = 0.0;
  double to = 0.0;
  int steps = 2;
  bool log_scale = false;

  std::vector<double> values() const;
  std::string label() const;
};

/// Typed view of a configuration.
struct RunConfig {
  Scenario scenario;
  ProtocolSpec protocol;
  bool optimise_pkey = true;
  std::optional<SweepAxis> sweep;
  ThresholdQuery threshold;
  std::string output_path;
  unsigned threads = 0;
};

/// Flat key=value store with a fixed key set and per-key origins.
class Config {
 public:
  Config();

  /// Throws ConfigError for unknown keys.
  void set(const std::string& key, const std::string& value, const std::string& origin);
  /// "key = value" lines, '#' starts a comment.
  void load(std::istream& in, const std::string& source);
  void load_file(const std::string& path);
  /// "key=value" from the command line.
  void apply_override(const std::string& assignment);

  const std::string& get(const std::string& key) const;
  /// Sorted (key, value) pairs.
  std::vector<std::pair<std::string, std::string>> entries() const;
  RunConfig resolve() const;

  static const std::vector<std::string>& known_keys();

 private:
  struct Entry {
    std::string value;
    std::string origin;
  };
  std::map<std::string, Entry> values_;

  [[noreturn]] void fail(const std::string& key, const std::string& message) const;
  double number(const std::string& key) const;
  std::uint64_t count(const std::string& key) const;
  bool flag(const std::string& key) const;
  bool is_auto(const std::string& key) const;
};

/// Locale-independent shortest-round-trip-at-12-digits formatting.
std::string format_number(double v);

}  // namespace ghzkey::cli
