#include "output_set.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <memory>

#include <json.hpp>
#include <openssl/evp.h>

#include "bessbid/error.hpp"

namespace bessbid::cli {

std::string sha256_hex(const std::string& bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1) {
    throw DataError("SHA-256 computation failed");
  }
  std::string hex;
  hex.reserve(2 * len);
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

OutputSet::OutputSet(std::filesystem::path root) : root_(std::move(root)) {}

void OutputSet::write(const std::string& relative, const std::string& content) {
  const auto path = root_ / relative;
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw DataError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.close();
  if (!out) throw DataError("cannot write " + path.string());
  auto it = std::find_if(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.path == relative; });
  if (it == entries_.end()) it = entries_.insert(entries_.end(), Entry{relative, 0, {}});
  it->bytes = content.size();
  it->sha256 = sha256_hex(content);
}

void OutputSet::write_manifest(const std::string& command, const std::string& config_json) {
  auto sorted = entries_;
  std::sort(sorted.begin(), sorted.end(), [](const Entry& a, const Entry& b) { return a.path < b.path; });
  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  for (const auto& e : sorted) files.push_back({{"path", e.path}, {"bytes", e.bytes}, {"sha256", e.sha256}});
  nlohmann::ordered_json m;
  m["command"] = command;
  m["config_sha256"] = sha256_hex(config_json);
  m["files"] = files;
  const std::string text = m.dump(2) + "\n";
  const auto path = root_ / "manifest.json";
  std::filesystem::create_directories(root_);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw DataError("cannot write " + path.string());
}

}  // namespace bessbid::cli
