#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace pwlab::attack {

// Append-only crack journal: one "key<TAB>plaintext" line per solved target,
// where key is the digest hex or the bcrypt record text. Safe to re-read at
// any time; later entries for the same key win.
class Potfile {
 public:
  explicit Potfile(std::filesystem::path path) : path_(std::move(path)) {}

  std::map<std::string, std::string> load() const;  // missing file -> empty
  void append(std::string_view key, std::string_view plaintext) const;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace pwlab::attack
