#include <bit>
#include <cstring>

#include "pwlab/crypto/hash.h"

namespace pwlab::crypto {

namespace {

// Fractional parts of the cube roots of the first 64 primes; the derivation
// is re-checked by the test suite in extended precision.
constexpr std::uint32_t kRoundConstants[64] = {
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1,
    0x923f82a4, 0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3,
    0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786,
    0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
    0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147,
    0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13,
    0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
    0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
    0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a,
    0x5b9cca4f, 0x682e6ff3, 0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208,
    0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2};

inline std::uint32_t load_be32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) << 24 | static_cast<std::uint32_t>(p[1]) << 16 |
         static_cast<std::uint32_t>(p[2]) << 8 | static_cast<std::uint32_t>(p[3]);
}

struct Sha256State {
  std::uint32_t h[8] = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                        0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
};

void sha256_block(Sha256State& st, const std::uint8_t* block) {
  std::uint32_t w[64];
  for (int i = 0; i < 16; ++i) w[i] = load_be32(block + 4 * i);
  for (int i = 16; i < 64; ++i) {
    std::uint32_t s0 = std::rotr(w[i - 15], 7) ^ std::rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
    std::uint32_t s1 = std::rotr(w[i - 2], 17) ^ std::rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
    w[i] = w[i - 16] + s0 + w[i - 7] + s1;
  }

  std::uint32_t a = st.h[0], b = st.h[1], c = st.h[2], d = st.h[3];
  std::uint32_t e = st.h[4], f = st.h[5], g = st.h[6], h = st.h[7];
  for (int i = 0; i < 64; ++i) {
    std::uint32_t big_s1 = std::rotr(e, 6) ^ std::rotr(e, 11) ^ std::rotr(e, 25);
    std::uint32_t ch = (e & f) ^ (~e & g);
    std::uint32_t t1 = h + big_s1 + ch + kRoundConstants[i] + w[i];
    std::uint32_t big_s0 = std::rotr(a, 2) ^ std::rotr(a, 13) ^ std::rotr(a, 22);
    std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
    std::uint32_t t2 = big_s0 + maj;
    h = g;
    g = f;
    f = e;
    e = d + t1;
    d = c;
    c = b;
    b = a;
    a = t1 + t2;
  }
  st.h[0] += a;
  st.h[1] += b;
  st.h[2] += c;
  st.h[3] += d;
  st.h[4] += e;
  st.h[5] += f;
  st.h[6] += g;
  st.h[7] += h;
}

}  // namespace

void sha256_raw(const std::uint8_t* data, std::size_t len, std::uint8_t out[32]) {
  Sha256State st;
  std::size_t off = 0;
  for (; off + 64 <= len; off += 64) sha256_block(st, data + off);

  std::uint8_t tail[128];
  std::size_t rem = len - off;
  if (rem > 0) std::memcpy(tail, data + off, rem);
  tail[rem] = 0x80;
  std::size_t padded = rem + 1 <= 56 ? 64 : 128;
  std::memset(tail + rem + 1, 0, padded - 8 - (rem + 1));
  std::uint64_t bits = static_cast<std::uint64_t>(len) * 8;
  for (int i = 0; i < 8; ++i)
    tail[padded - 1 - i] = static_cast<std::uint8_t>(bits >> (8 * i));
  sha256_block(st, tail);
  if (padded == 128) sha256_block(st, tail + 64);

  for (int i = 0; i < 8; ++i) {
    out[4 * i] = static_cast<std::uint8_t>(st.h[i] >> 24);
    out[4 * i + 1] = static_cast<std::uint8_t>(st.h[i] >> 16);
    out[4 * i + 2] = static_cast<std::uint8_t>(st.h[i] >> 8);
    out[4 * i + 3] = static_cast<std::uint8_t>(st.h[i]);
  }
}

Digest sha256(std::span<const std::uint8_t> message) {
  std::uint8_t out[32];
  sha256_raw(message.data(), message.size(), out);
  return Digest(HashAlgorithm::sha256, {out, 32});
}

Digest sha256(std::string_view text) {
  return sha256(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

Digest compute_digest(HashAlgorithm alg, std::string_view text) {
  return alg == HashAlgorithm::md5 ? md5(text) : sha256(text);
}

std::vector<std::uint8_t> pad_message(std::span<const std::uint8_t> message,
                                      LengthEncoding length_encoding) {
  std::size_t padded = ((message.size() + 8) / 64 + 1) * 64;
  std::vector<std::uint8_t> out(padded, 0);
  if (!message.empty()) std::memcpy(out.data(), message.data(), message.size());
  out[message.size()] = 0x80;
  std::uint64_t bits = static_cast<std::uint64_t>(message.size()) * 8;
  for (int i = 0; i < 8; ++i) {
    std::uint8_t byte = static_cast<std::uint8_t>(bits >> (8 * i));
    if (length_encoding == LengthEncoding::little_endian)
      out[padded - 8 + i] = byte;
    else
      out[padded - 1 - i] = byte;
  }
  return out;
}

}  // namespace pwlab::crypto
