#include <bit>
#include <cstring>

#include "pwlab/crypto/hash.h"

namespace pwlab::crypto {

namespace {

// T[i] = floor(2^32 * |sin(i + 1)|); the sine derivation is re-checked by the
// test suite against long-double recomputation.
constexpr std::uint32_t kSineTable[64] = {
    0xd76aa478, 0xe8c7b756, 0x242070db, 0xc1bdceee, 0xf57c0faf, 0x4787c62a,
    0xa8304613, 0xfd469501, 0x698098d8, 0x8b44f7af, 0xffff5bb1, 0x895cd7be,
    0x6b901122, 0xfd987193, 0xa679438e, 0x49b40821, 0xf61e2562, 0xc040b340,
    0x265e5a51, 0xe9b6c7aa, 0xd62f105d, 0x02441453, 0xd8a1e681, 0xe7d3fbc8,
    0x21e1cde6, 0xc33707d6, 0xf4d50d87, 0x455a14ed, 0xa9e3e905, 0xfcefa3f8,
    0x676f02d9, 0x8d2a4c8a, 0xfffa3942, 0x8771f681, 0x6d9d6122, 0xfde5380c,
    0xa4beea44, 0x4bdecfa9, 0xf6bb4b60, 0xbebfbc70, 0x289b7ec6, 0xeaa127fa,
    0xd4ef3085, 0x04881d05, 0xd9d4d039, 0xe6db99e5, 0x1fa27cf8, 0xc4ac5665,
    0xf4292244, 0x432aff97, 0xab9423a7, 0xfc93a039, 0x655b59c3, 0x8f0ccc92,
    0xffeff47d, 0x85845dd1, 0x6fa87e4f, 0xfe2ce6e0, 0xa3014314, 0x4e0811a1,
    0xf7537e82, 0xbd3af235, 0x2ad7d2bb, 0xeb86d391};

constexpr int kShift[64] = {7, 12, 17, 22, 7, 12, 17, 22, 7, 12, 17, 22, 7,
                            12, 17, 22, 5, 9,  14, 20, 5, 9,  14, 20, 5, 9,
                            14, 20, 5,  9,  14, 20, 4, 11, 16, 23, 4, 11, 16,
                            23, 4,  11, 16, 23, 4,  11, 16, 23, 6,  10, 15,
                            21, 6,  10, 15, 21, 6,  10, 15, 21, 6,  10, 15, 21};

inline std::uint32_t load_le32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

struct Md5State {
  std::uint32_t a = 0x67452301;
  std::uint32_t b = 0xefcdab89;
  std::uint32_t c = 0x98badcfe;
  std::uint32_t d = 0x10325476;
};

void md5_block(Md5State& st, const std::uint8_t* block) {
  std::uint32_t m[16];
  for (int i = 0; i < 16; ++i) m[i] = load_le32(block + 4 * i);

  std::uint32_t a = st.a, b = st.b, c = st.c, d = st.d;
  for (int i = 0; i < 64; ++i) {
    std::uint32_t f;
    int k;
    if (i < 16) {
      f = (b & c) | (~b & d);
      k = i;
    } else if (i < 32) {
      f = (d & b) | (~d & c);
      k = (5 * i + 1) & 15;
    } else if (i < 48) {
      f = b ^ c ^ d;
      k = (3 * i + 5) & 15;
    } else {
      f = c ^ (b | ~d);
      k = (7 * i) & 15;
    }
    std::uint32_t tmp = d;
    d = c;
    c = b;
    b += std::rotl(a + f + m[k] + kSineTable[i], kShift[i]);
    a = tmp;
  }
  st.a += a;
  st.b += b;
  st.c += c;
  st.d += d;
}

}  // namespace

void md5_raw(const std::uint8_t* data, std::size_t len, std::uint8_t out[16]) {
  Md5State st;
  std::size_t off = 0;
  for (; off + 64 <= len; off += 64) md5_block(st, data + off);

  // Tail plus padding fits in at most two blocks.
  std::uint8_t tail[128];
  std::size_t rem = len - off;
  if (rem > 0) std::memcpy(tail, data + off, rem);
  tail[rem] = 0x80;
  std::size_t padded = rem + 1 <= 56 ? 64 : 128;
  std::memset(tail + rem + 1, 0, padded - 8 - (rem + 1));
  std::uint64_t bits = static_cast<std::uint64_t>(len) * 8;
  for (int i = 0; i < 8; ++i)
    tail[padded - 8 + i] = static_cast<std::uint8_t>(bits >> (8 * i));
  md5_block(st, tail);
  if (padded == 128) md5_block(st, tail + 64);

  const std::uint32_t words[4] = {st.a, st.b, st.c, st.d};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      out[4 * i + j] = static_cast<std::uint8_t>(words[i] >> (8 * j));
}

Digest md5(std::span<const std::uint8_t> message) {
  std::uint8_t out[16];
  md5_raw(message.data(), message.size(), out);
  return Digest(HashAlgorithm::md5, {out, 16});
}

Digest md5(std::string_view text) {
  return md5(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

}  // namespace pwlab::crypto
