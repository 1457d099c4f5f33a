#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pwlab/crypto/bcrypt.h"
#include "pwlab/defense/honeychecker.h"
#include "pwlab/defense/policy.h"

namespace pwlab::defense {

// One account's credential row: k salted bcrypt records, exactly one of
// which hashes the real password. Which one is the honeychecker's secret;
// nothing here marks it.
struct CredentialRecord {
  std::string user_id;
  std::vector<crypto::BcryptRecord> sweetwords;
  std::int64_t created_at = 0;
};

class CredentialStore {
 public:
  CredentialStore() = default;

  bool contains(const std::string& user_id) const;
  std::optional<CredentialRecord> find(const std::string& user_id) const;
  void insert(const CredentialRecord& record);  // throws on duplicate
  std::size_t size() const;
  std::vector<std::string> user_ids() const;

  void save(const std::filesystem::path& path) const;
  void load(const std::filesystem::path& path);

 private:
  mutable std::mutex mu_;
  std::map<std::string, CredentialRecord> records_;
};

struct RegistrationOptions {
  std::size_t sweetword_count = 8;  // k, real password plus k-1 decoys
  int cost = 10;
  PasswordPolicy policy = PasswordPolicy::defaults();
};

// Full enrollment: policy gate, decoy generation, independent salts, a
// seed-driven shuffle of the real password among the decoys, and handing
// the real index to the checker. The store ends up with no plaintext and
// no index.
CredentialRecord register_user(CredentialStore& store, Honeychecker& checker,
                               const std::string& user_id, std::string_view password,
                               const RegistrationOptions& options, std::uint64_t seed,
                               std::int64_t now);

}  // namespace pwlab::defense
