#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>

namespace eigensafe::cli {

// Flat key=value run configuration: entries from an optional config file plus
// command-line overrides, with every key checked against the command's
// allowed set before any work starts.
class RunConfig {
 public:
  RunConfig() = default;

  static RunConfig load(const std::optional<std::filesystem::path>& path);

  // Command-line values take precedence over file entries.
  void set(const std::string& key, const std::string& value);

  void require_known_keys(std::initializer_list<const char*> allowed) const;

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;  // required
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::size_t get_size(const std::string& key, std::size_t fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;

  // sigma / dt entries, when present, as environment overrides.
  std::map<std::string, double> env_overrides() const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace eigensafe::cli
