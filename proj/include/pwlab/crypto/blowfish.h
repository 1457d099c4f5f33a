#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace pwlab::crypto {

// 64-bit block cipher with key-dependent subkeys. Fresh instances start from
// the hexadecimal expansion of pi; the expensive-key-schedule variant below
// reuses one instance across thousands of rekeying rounds.
class Blowfish {
 public:
  Blowfish();

  void encipher(std::uint32_t& left, std::uint32_t& right) const;

  // Standard key schedule: XOR the cyclic key stream into P, then regenerate
  // P and the S-boxes by enciphering a running block.
  void expand_key(std::span<const std::uint8_t> key);

  // Salted variant: like expand_key but the running block is XORed with the
  // cyclic salt stream before each encipherment.
  void expand_key_salted(std::span<const std::uint8_t> salt,
                         std::span<const std::uint8_t> key);

  std::uint32_t subkey(std::size_t i) const { return p_[i]; }
  std::uint32_t sbox(std::size_t box, std::size_t i) const { return s_[box][i]; }

  static const std::array<std::uint32_t, 18>& initial_subkeys();
  static const std::array<std::array<std::uint32_t, 256>, 4>& initial_sboxes();

 private:
  std::uint32_t round_f(std::uint32_t x) const;

  std::array<std::uint32_t, 18> p_;
  std::array<std::array<std::uint32_t, 256>, 4> s_;
};

// Cost-parameterized key schedule: one salted expansion followed by
// 2^cost alternating key-only and salt-only expansions.
Blowfish eks_blowfish_setup(std::span<const std::uint8_t> password,
                            std::span<const std::uint8_t> salt, int cost);

}  // namespace pwlab::crypto
