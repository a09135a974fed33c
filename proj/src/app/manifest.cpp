#include "scout/app/manifest.hpp"

#include <array>
#include <fstream>
#include <memory>
#include <stdexcept>

#include <Eigen/Core>
#include <boost/version.hpp>
#include <openssl/evp.h>
#include <openssl/opensslv.h>

#include "json.hpp"
#include "tomlplusplus/toml.hpp"

namespace scout::app {

namespace {

struct DigestContext {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx{EVP_MD_CTX_new(), &EVP_MD_CTX_free};

  DigestContext() {
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 init failed");
  }
  void update(const void* data, std::size_t n) {
    if (EVP_DigestUpdate(ctx.get(), data, n) != 1) throw std::runtime_error("sha256 update failed");
  }
  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1) throw std::runtime_error("sha256 final failed");
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
      out += digits[md[i] >> 4];
      out += digits[md[i] & 15];
    }
    return out;
  }
};

}  // namespace

std::string sha256_hex(std::string_view data) {
  DigestContext d;
  d.update(data.data(), data.size());
  return d.hex();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  DigestContext d;
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    d.update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return d.hex();
}

std::map<std::string, std::string> artifact_versions() {
  return {
      {"scout", kVersion},
      {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                    std::to_string(EIGEN_MINOR_VERSION)},
      {"boost", std::to_string(BOOST_VERSION / 100000) + "." + std::to_string(BOOST_VERSION / 100 % 1000) + "." +
                    std::to_string(BOOST_VERSION % 100)},
      {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_MINOR) +
                            "." + std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
      {"tomlplusplus", std::to_string(TOML_LIB_MAJOR) + "." + std::to_string(TOML_LIB_MINOR) + "." +
                           std::to_string(TOML_LIB_PATCH)},
      {"openssl", OPENSSL_VERSION_TEXT},
  };
}

Manifest::Manifest(std::string command, std::string config_json, std::uint64_t seed)
    : command_(std::move(command)),
      config_json_(std::move(config_json)),
      config_hash_(sha256_hex(config_json_)),
      seed_(seed) {}

StageRecord& Manifest::stage(const std::string& name) {
  for (auto& s : stages_) {
    if (s.name == name) return s;
  }
  stages_.push_back({name, {}, {}});
  return stages_.back();
}

void Manifest::warn(std::string message) { warnings_.push_back(std::move(message)); }

std::string Manifest::to_json() const {
  using nlohmann::ordered_json;
  ordered_json j;
  j["command"] = command_;
  j["config_hash"] = config_hash_;
  j["seeds"] = {{"master", seed_}};
  ordered_json versions = ordered_json::object();
  for (const auto& [k, v] : artifact_versions()) versions[k] = v;
  j["versions"] = versions;
  ordered_json stages = ordered_json::array();
  for (const auto& s : stages_) {
    ordered_json in = ordered_json::object(), out = ordered_json::object();
    for (const auto& [k, v] : s.inputs) in[k] = v;
    for (const auto& [k, v] : s.outputs) out[k] = v;
    stages.push_back({{"name", s.name}, {"inputs", in}, {"outputs", out}});
  }
  j["stages"] = stages;
  j["warnings"] = warnings_;
  j["config"] = ordered_json::parse(config_json_);
  return j.dump(2) + "\n";
}

std::filesystem::path Manifest::write(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  const auto path = dir / ("manifest_" + command_ + ".json");
  std::ofstream out(path, std::ios::binary);
  out << to_json();
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return path;
}

}  // namespace scout::app
