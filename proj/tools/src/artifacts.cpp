#include "artifacts.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "eigensafe/error.hpp"

namespace eigensafe::cli {

void atomic_write_text(const std::filesystem::path& path,
                       const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp =
      path.parent_path() / ("." + path.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out) throw IoError("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void atomic_replace_dir(const std::filesystem::path& source,
                        const std::filesystem::path& target) {
  std::filesystem::remove_all(target);
  std::filesystem::rename(source, target);
}

std::uint64_t fnv1a_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 0x100000001b3ULL;
    }
    if (!in) break;
  }
  return hash;
}

std::string checksum_hex(const std::filesystem::path& path) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a:%016llx",
                static_cast<unsigned long long>(fnv1a_file(path)));
  return buf;
}

void RunManifest::add_artifact(const std::filesystem::path& path) {
  artifact_checksums[path.filename().string()] = checksum_hex(path);
}

void RunManifest::write(const std::filesystem::path& out_dir) const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["config"] = config;
  j["seed"] = seed;
  j["duration_seconds"] = duration_seconds;
  j["artifacts"] = artifact_checksums;
  atomic_write_text(out_dir / "manifest.json", j.dump(2) + "\n");
}

}  // namespace eigensafe::cli
