#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pwlab::crypto {

enum class HashAlgorithm { md5, sha256 };

constexpr std::size_t digest_size(HashAlgorithm alg) {
  return alg == HashAlgorithm::md5 ? 16 : 32;
}

const char* algorithm_name(HashAlgorithm alg);
HashAlgorithm algorithm_from_name(std::string_view name);

// Fixed-capacity digest value. Width depends on the algorithm (16 or 32
// bytes); unused tail bytes are zero so equality and hashing stay cheap.
class Digest {
 public:
  Digest() : alg_(HashAlgorithm::md5), width_(0) { bytes_.fill(0); }

  Digest(HashAlgorithm alg, std::span<const std::uint8_t> raw)
      : alg_(alg), width_(digest_size(alg)) {
    if (raw.size() != width_) throw std::invalid_argument("digest width mismatch");
    bytes_.fill(0);
    for (std::size_t i = 0; i < width_; ++i) bytes_[i] = raw[i];
  }

  // Accepts 32 or 64 lowercase/uppercase hex chars; width picks the algorithm.
  static Digest from_hex(std::string_view hex);

  HashAlgorithm algorithm() const { return alg_; }
  std::span<const std::uint8_t> bytes() const { return {bytes_.data(), width_}; }
  std::size_t size() const { return width_; }
  std::string hex() const;

  friend bool operator==(const Digest& a, const Digest& b) {
    return a.alg_ == b.alg_ && a.width_ == b.width_ && a.bytes_ == b.bytes_;
  }

 private:
  HashAlgorithm alg_;
  std::size_t width_;
  std::array<std::uint8_t, 32> bytes_;
};

struct DigestHasher {
  std::size_t operator()(const Digest& d) const {
    auto b = d.bytes();
    std::uint64_t x = 0;
    for (std::size_t i = 0; i < 8 && i < b.size(); ++i)
      x |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return static_cast<std::size_t>(x);
  }
};

std::string to_hex(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> from_hex(std::string_view hex);

}  // namespace pwlab::crypto
