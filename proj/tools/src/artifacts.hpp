#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

namespace eigensafe::cli {

// Atomic artifact emission: content goes to a dot-temp file in the output
// directory and is renamed into place, so a failed run leaves no partial
// artifacts behind.
void atomic_write_text(const std::filesystem::path& path,
                       const std::string& content);

// Rename `source` (a directory) onto `target`, replacing it.
void atomic_replace_dir(const std::filesystem::path& source,
                        const std::filesystem::path& target);

std::uint64_t fnv1a_file(const std::filesystem::path& path);
std::string checksum_hex(const std::filesystem::path& path);

// Run manifest: command, fully resolved configuration, seed, duration, and a
// checksum per artifact. Written last and atomically.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> config;
  std::uint64_t seed = 0;
  double duration_seconds = 0.0;
  std::map<std::string, std::string> artifact_checksums;

  void add_artifact(const std::filesystem::path& path);
  void write(const std::filesystem::path& out_dir) const;
};

}  // namespace eigensafe::cli
