#include "run_config.hpp"

#include <fstream>

#include "eigensafe/error.hpp"
#include "eigensafe/format.hpp"

namespace eigensafe::cli {

RunConfig RunConfig::load(const std::optional<std::filesystem::path>& path) {
  RunConfig config;
  if (!path) return config;
  std::ifstream in(*path);
  if (!in) throw UsageError("cannot open config file " + path->string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(path->string() + ":" + std::to_string(line_no) +
                       ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw UsageError(path->string() + ":" + std::to_string(line_no) +
                       ": empty key");
    config.entries_[key] = value;
  }
  return config;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  entries_[key] = value;
}

void RunConfig::require_known_keys(
    std::initializer_list<const char*> allowed) const {
  for (const auto& [key, value] : entries_) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw UsageError("unknown config key '" + key + "'");
  }
}

bool RunConfig::has(const std::string& key) const {
  return entries_.count(key) != 0;
}

std::string RunConfig::get_string(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end())
    throw UsageError("missing required config key '" + key + "'");
  return it->second;
}

std::string RunConfig::get_string(const std::string& key,
                                  const std::string& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

double RunConfig::get_double(const std::string& key, double fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  try {
    return parse_double(it->second);
  } catch (const Error&) {
    throw UsageError("config key '" + key + "' is not a number: '" +
                     it->second + "'");
  }
}

std::size_t RunConfig::get_size(const std::string& key,
                                std::size_t fallback) const {
  return static_cast<std::size_t>(get_u64(key, fallback));
}

std::uint64_t RunConfig::get_u64(const std::string& key,
                                 std::uint64_t fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  try {
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument(it->second);
    return v;
  } catch (const std::exception&) {
    throw UsageError("config key '" + key + "' is not an unsigned integer: '" +
                     it->second + "'");
  }
}

std::map<std::string, double> RunConfig::env_overrides() const {
  std::map<std::string, double> overrides;
  if (has("sigma")) overrides["sigma"] = get_double("sigma", 0.0);
  if (has("dt")) overrides["dt"] = get_double("dt", 0.0);
  return overrides;
}

}  // namespace eigensafe::cli
