#include "pwlab/defense/honeychecker.h"

#include <fstream>
#include <random>

#include "pwlab/crypto/digest.h"
#include "pwlab/crypto/hash.h"

namespace pwlab::defense {

namespace {

// Keystream and tag both come from one sha256 over (key, nonce, user, label).
std::array<std::uint8_t, 32> keyed_block(const std::array<std::uint8_t, 32>& key,
                                         std::span<const std::uint8_t> nonce,
                                         const std::string& user_id, char label) {
  std::vector<std::uint8_t> buf;
  buf.reserve(key.size() + nonce.size() + user_id.size() + 1);
  buf.insert(buf.end(), key.begin(), key.end());
  buf.insert(buf.end(), nonce.begin(), nonce.end());
  buf.insert(buf.end(), user_id.begin(), user_id.end());
  buf.push_back(static_cast<std::uint8_t>(label));
  std::array<std::uint8_t, 32> out;
  crypto::sha256_raw(buf.data(), buf.size(), out.data());
  return out;
}

constexpr std::size_t kNonceLen = 16;
constexpr std::size_t kTagLen = 8;
constexpr std::size_t kBlobLen = kNonceLen + 4 + kTagLen;

}  // namespace

LocalHoneychecker::LocalHoneychecker(std::uint64_t key_seed) {
  std::mt19937_64 rng(key_seed);
  for (std::size_t i = 0; i < key_.size(); i += 8) {
    std::uint64_t w = rng();
    for (std::size_t j = 0; j < 8; ++j)
      key_[i + j] = static_cast<std::uint8_t>(w >> (8 * j));
  }
  nonce_rng_.seed(rng());
}

std::vector<std::uint8_t> LocalHoneychecker::seal(const std::string& user_id,
                                                  std::uint32_t index) {
  std::vector<std::uint8_t> blob(kBlobLen);
  std::uint64_t lo = nonce_rng_();
  std::uint64_t hi = nonce_rng_();
  for (std::size_t i = 0; i < 8; ++i) {
    blob[i] = static_cast<std::uint8_t>(lo >> (8 * i));
    blob[8 + i] = static_cast<std::uint8_t>(hi >> (8 * i));
  }
  auto pad = keyed_block(key_, {blob.data(), kNonceLen}, user_id, 'p');
  for (int i = 0; i < 4; ++i)
    blob[kNonceLen + i] = static_cast<std::uint8_t>(index >> (8 * i)) ^ pad[i];
  auto tag = keyed_block(key_, {blob.data(), kNonceLen + 4}, user_id, 't');
  for (std::size_t i = 0; i < kTagLen; ++i) blob[kNonceLen + 4 + i] = tag[i];
  return blob;
}

std::uint32_t LocalHoneychecker::unseal(const std::string& user_id,
                                        const std::vector<std::uint8_t>& blob) const {
  if (blob.size() != kBlobLen) throw CheckerError("corrupt-state", "bad blob size");
  auto tag = keyed_block(key_, {blob.data(), kNonceLen + 4}, user_id, 't');
  unsigned diff = 0;
  for (std::size_t i = 0; i < kTagLen; ++i) diff |= tag[i] ^ blob[kNonceLen + 4 + i];
  if (diff != 0) throw CheckerError("corrupt-state", "tag mismatch");
  auto pad = keyed_block(key_, {blob.data(), kNonceLen}, user_id, 'p');
  std::uint32_t index = 0;
  for (int i = 0; i < 4; ++i)
    index |= static_cast<std::uint32_t>(blob[kNonceLen + i] ^ pad[i]) << (8 * i);
  return index;
}

void LocalHoneychecker::set_index(const std::string& user_id, std::uint32_t real_index) {
  if (real_index >= kMaxSweetwords)
    throw CheckerError("bad-index", "index out of range");
  std::lock_guard lock(mu_);
  sealed_[user_id] = seal(user_id, real_index);
}

CheckResult LocalHoneychecker::check(const std::string& user_id, std::uint32_t index,
                                     std::int64_t now) {
  if (index >= kMaxSweetwords) throw CheckerError("bad-index", "index out of range");
  std::lock_guard lock(mu_);
  auto it = sealed_.find(user_id);
  if (it == sealed_.end()) throw CheckerError("unknown-user", "user not registered");
  std::uint32_t real = unseal(user_id, it->second);

  // Same work on both outcomes; only the verdict differs.
  std::uint32_t diff = real ^ index;
  bool is_real = diff == 0;
  if (!is_real)
    alerts_.push_back({user_id, now, "sweetword index mismatch"});
  return is_real ? CheckResult::real : CheckResult::decoy;
}

std::vector<CheckerAlert> LocalHoneychecker::alerts() const {
  std::lock_guard lock(mu_);
  return alerts_;
}

std::map<std::string, std::string> LocalHoneychecker::sealed_blobs_hex() const {
  std::lock_guard lock(mu_);
  std::map<std::string, std::string> out;
  for (const auto& [user, blob] : sealed_) out[user] = crypto::to_hex(blob);
  return out;
}

void LocalHoneychecker::save_state(const std::filesystem::path& path) const {
  std::lock_guard lock(mu_);
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write checker state: " + path.string());
  for (const auto& [user, blob] : sealed_)
    out << user << '\t' << crypto::to_hex(blob) << '\n';
}

void LocalHoneychecker::load_state(const std::filesystem::path& path) {
  std::lock_guard lock(mu_);
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read checker state: " + path.string());
  sealed_.clear();
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error("malformed checker state line");
    sealed_[line.substr(0, tab)] = crypto::from_hex(line.substr(tab + 1));
  }
}

}  // namespace pwlab::defense
