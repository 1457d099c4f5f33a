#include "pwlab/crypto/digest.h"

#include <vector>

namespace pwlab::crypto {

namespace {

int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

constexpr char kHexDigits[] = "0123456789abcdef";

}  // namespace

const char* algorithm_name(HashAlgorithm alg) {
  return alg == HashAlgorithm::md5 ? "md5" : "sha256";
}

HashAlgorithm algorithm_from_name(std::string_view name) {
  if (name == "md5") return HashAlgorithm::md5;
  if (name == "sha256") return HashAlgorithm::sha256;
  throw std::invalid_argument("unknown hash algorithm: " + std::string(name));
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kHexDigits[b >> 4]);
    out.push_back(kHexDigits[b & 0x0f]);
  }
  return out;
}

std::vector<std::uint8_t> from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw std::invalid_argument("odd hex length");
  std::vector<std::uint8_t> out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = hex_nibble(hex[2 * i]);
    int lo = hex_nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw std::invalid_argument("invalid hex digit");
    out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return out;
}

Digest Digest::from_hex(std::string_view hex) {
  if (hex.size() != 32 && hex.size() != 64)
    throw std::invalid_argument("digest hex must be 32 or 64 chars");
  auto raw = crypto::from_hex(hex);
  HashAlgorithm alg = raw.size() == 16 ? HashAlgorithm::md5 : HashAlgorithm::sha256;
  return Digest(alg, raw);
}

std::string Digest::hex() const { return to_hex(bytes()); }

}  // namespace pwlab::crypto
