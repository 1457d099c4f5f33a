#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pwlab::crypto {

class BcryptParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Modular-crypt record: $2a$NN$ then 22 salt chars and 31 ciphertext chars.
// Hashing fills all 24 ciphertext bytes; parsing recovers only the 23 that
// the text encodes, so the last byte is zero and comparisons ignore it.
struct BcryptRecord {
  std::string version = "2a";  // "2a" or "2b"; records are emitted as 2a
  int cost = 0;
  std::array<std::uint8_t, 16> salt{};
  std::array<std::uint8_t, 24> ciphertext{};
};

constexpr int kBcryptMinCost = 4;
constexpr int kBcryptMaxCost = 31;
constexpr std::size_t kBcryptMaxKeyBytes = 72;

BcryptRecord bcrypt_hash(std::string_view password,
                         std::span<const std::uint8_t> salt, int cost);

std::string format_bcrypt(const BcryptRecord& record);
BcryptRecord parse_bcrypt(std::string_view text);

// Constant-time comparison over the 23 serialized ciphertext bytes.
bool bcrypt_verify(std::string_view password, std::string_view record_text);
bool bcrypt_verify(std::string_view password, const BcryptRecord& record);

std::array<std::uint8_t, 16> random_bcrypt_salt();
std::array<std::uint8_t, 16> random_bcrypt_salt(std::uint64_t seed);

}  // namespace pwlab::crypto
