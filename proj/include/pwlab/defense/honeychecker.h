#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pwlab::defense {

enum class CheckResult { real, decoy };

// A sweetword index can never exceed this; the wire protocol rejects more.
constexpr std::uint32_t kMaxSweetwords = 64;

class CheckerError : public std::runtime_error {
 public:
  CheckerError(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

struct CheckerAlert {
  std::string user_id;
  std::int64_t timestamp = 0;
  std::string detail;
};

// The main system only ever talks to this interface; which side of a process
// boundary the state lives on is the implementation's business.
class Honeychecker {
 public:
  virtual ~Honeychecker() = default;
  virtual void set_index(const std::string& user_id, std::uint32_t real_index) = 0;
  virtual CheckResult check(const std::string& user_id, std::uint32_t index,
                            std::int64_t now) = 0;
};

// In-process checker state. Indexes are sealed at rest with a checker-local
// key: blob = nonce || (index ^ keyed pad) || truncated keyed tag. Without
// the key the blob reveals nothing about the index, and tampering fails the
// tag check.
class LocalHoneychecker : public Honeychecker {
 public:
  explicit LocalHoneychecker(std::uint64_t key_seed);

  void set_index(const std::string& user_id, std::uint32_t real_index) override;
  CheckResult check(const std::string& user_id, std::uint32_t index,
                    std::int64_t now) override;

  std::vector<CheckerAlert> alerts() const;
  std::map<std::string, std::string> sealed_blobs_hex() const;  // state sans key

  void save_state(const std::filesystem::path& path) const;
  void load_state(const std::filesystem::path& path);

 private:
  std::array<std::uint8_t, 32> key_;
  mutable std::mutex mu_;
  std::mt19937_64 nonce_rng_;
  std::map<std::string, std::vector<std::uint8_t>> sealed_;
  std::vector<CheckerAlert> alerts_;

  std::vector<std::uint8_t> seal(const std::string& user_id, std::uint32_t index);
  std::uint32_t unseal(const std::string& user_id,
                       const std::vector<std::uint8_t>& blob) const;
};

}  // namespace pwlab::defense
