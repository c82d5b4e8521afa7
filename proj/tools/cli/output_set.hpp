#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace bessbid::cli {

std::string sha256_hex(const std::string& bytes);

// Collects the files a command writes so that the run manifest can list
// them with their hashes. Writes are serialized by the caller.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  // Writes `content` to root/relative, creating directories; throws DataError.
  void write(const std::string& relative, const std::string& content);
  // manifest.json: command, config hash and every written file sorted by path.
  void write_manifest(const std::string& command, const std::string& config_json);

 private:
  struct Entry {
    std::string path;
    std::size_t bytes = 0;
    std::string sha256;
  };
  std::filesystem::path root_;
  std::vector<Entry> entries_;
};

}  // namespace bessbid::cli
