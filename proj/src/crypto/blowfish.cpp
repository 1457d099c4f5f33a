#include "pwlab/crypto/blowfish.h"

#include <stdexcept>

namespace pwlab::crypto {

namespace {

// Cyclic big-endian word stream over a byte buffer, the OpenBSD
// stream2word: wraps around and keeps going.
struct WordStream {
  std::span<const std::uint8_t> data;
  std::size_t pos = 0;

  std::uint32_t next() {
    std::uint32_t w = 0;
    for (int i = 0; i < 4; ++i) {
      w = w << 8 | data[pos];
      pos = pos + 1 == data.size() ? 0 : pos + 1;
    }
    return w;
  }
};

}  // namespace

Blowfish::Blowfish() : p_(initial_subkeys()), s_(initial_sboxes()) {}

std::uint32_t Blowfish::round_f(std::uint32_t x) const {
  return ((s_[0][x >> 24] + s_[1][(x >> 16) & 0xff]) ^ s_[2][(x >> 8) & 0xff]) +
         s_[3][x & 0xff];
}

void Blowfish::encipher(std::uint32_t& left, std::uint32_t& right) const {
  std::uint32_t l = left, r = right;
  for (int i = 0; i < 16; i += 2) {
    l ^= p_[i];
    r ^= round_f(l);
    r ^= p_[i + 1];
    l ^= round_f(r);
  }
  l ^= p_[16];
  left = r ^ p_[17];
  right = l;
}

void Blowfish::expand_key(std::span<const std::uint8_t> key) {
  if (key.empty()) throw std::invalid_argument("empty blowfish key");
  WordStream ks{key};
  for (auto& p : p_) p ^= ks.next();

  std::uint32_t l = 0, r = 0;
  for (std::size_t i = 0; i < p_.size(); i += 2) {
    encipher(l, r);
    p_[i] = l;
    p_[i + 1] = r;
  }
  for (auto& box : s_) {
    for (std::size_t i = 0; i < box.size(); i += 2) {
      encipher(l, r);
      box[i] = l;
      box[i + 1] = r;
    }
  }
}

void Blowfish::expand_key_salted(std::span<const std::uint8_t> salt,
                                 std::span<const std::uint8_t> key) {
  if (key.empty()) throw std::invalid_argument("empty blowfish key");
  if (salt.empty()) throw std::invalid_argument("empty blowfish salt");
  WordStream ks{key};
  for (auto& p : p_) p ^= ks.next();

  WordStream ss{salt};
  std::uint32_t l = 0, r = 0;
  for (std::size_t i = 0; i < p_.size(); i += 2) {
    l ^= ss.next();
    r ^= ss.next();
    encipher(l, r);
    p_[i] = l;
    p_[i + 1] = r;
  }
  for (auto& box : s_) {
    for (std::size_t i = 0; i < box.size(); i += 2) {
      l ^= ss.next();
      r ^= ss.next();
      encipher(l, r);
      box[i] = l;
      box[i + 1] = r;
    }
  }
}

Blowfish eks_blowfish_setup(std::span<const std::uint8_t> password,
                            std::span<const std::uint8_t> salt, int cost) {
  if (cost < 4 || cost > 31) throw std::invalid_argument("cost out of range");
  Blowfish bf;
  bf.expand_key_salted(salt, password);
  std::uint64_t rounds = std::uint64_t{1} << cost;
  for (std::uint64_t i = 0; i < rounds; ++i) {
    bf.expand_key(password);
    bf.expand_key(salt);
  }
  return bf;
}

}  // namespace pwlab::crypto
