#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace scout::app {

inline constexpr const char* kVersion = "0.1.0";

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

struct StageRecord {
  std::string name;
  std::vector<std::pair<std::string, std::string>> inputs;   // (label, digest)
  std::vector<std::pair<std::string, std::string>> outputs;  // (file name, digest)
};

/// Provenance record of one command invocation. Holds no timestamps, paths
/// outside the output directory, or thread counts, so identical runs produce
/// identical manifests.
class Manifest {
 public:
  Manifest(std::string command, std::string config_json, std::uint64_t seed);

  StageRecord& stage(const std::string& name);
  void warn(std::string message);
  [[nodiscard]] const std::string& config_hash() const { return config_hash_; }
  [[nodiscard]] const std::vector<StageRecord>& stages() const { return stages_; }
  [[nodiscard]] const std::vector<std::string>& warnings() const { return warnings_; }

  [[nodiscard]] std::string to_json() const;
  /// Writes manifest_<command>.json into `dir`; returns its path.
  std::filesystem::path write(const std::filesystem::path& dir) const;

 private:
  std::string command_;
  std::string config_json_;
  std::string config_hash_;
  std::uint64_t seed_;
  std::vector<StageRecord> stages_;
  std::vector<std::string> warnings_;
};

/// Library versions compiled into the binary.
std::map<std::string, std::string> artifact_versions();

}  // namespace scout::app
