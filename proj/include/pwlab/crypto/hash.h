#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "pwlab/crypto/digest.h"

namespace pwlab::crypto {

enum class LengthEncoding { little_endian, big_endian };

// Appends 0x80, zero fill, then the 64-bit message bit length, so the result
// is a whole number of 64-byte blocks. MD5 stores the length little-endian,
// SHA-256 big-endian.
std::vector<std::uint8_t> pad_message(std::span<const std::uint8_t> message,
                                      LengthEncoding length_encoding);

Digest md5(std::span<const std::uint8_t> message);
Digest sha256(std::span<const std::uint8_t> message);
Digest md5(std::string_view text);
Digest sha256(std::string_view text);
Digest compute_digest(HashAlgorithm alg, std::string_view text);

// Raw 16/32-byte one-shot variants used by the guessing loops; `out` must
// point at enough room for the digest. No allocation.
void md5_raw(const std::uint8_t* data, std::size_t len, std::uint8_t out[16]);
void sha256_raw(const std::uint8_t* data, std::size_t len, std::uint8_t out[32]);

}  // namespace pwlab::crypto
