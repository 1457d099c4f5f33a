#include "pwlab/crypto/bcrypt.h"

#include <charconv>
#include <cstring>
#include <random>
#include <vector>

#include "pwlab/crypto/blowfish.h"

namespace pwlab::crypto {

namespace {

constexpr char kAlphabet[] =
    "./ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789";

int alphabet_index(char c) {
  const char* p = std::strchr(kAlphabet, c);
  return p && c != '\0' ? static_cast<int>(p - kAlphabet) : -1;
}

std::string encode_radix64(std::span<const std::uint8_t> bytes) {
  std::string out;
  out.reserve((bytes.size() * 8 + 5) / 6);
  std::uint32_t acc = 0;
  int bits = 0;
  for (std::uint8_t b : bytes) {
    acc = acc << 8 | b;
    bits += 8;
    while (bits >= 6) {
      bits -= 6;
      out.push_back(kAlphabet[(acc >> bits) & 0x3f]);
    }
  }
  if (bits > 0) out.push_back(kAlphabet[(acc << (6 - bits)) & 0x3f]);
  return out;
}

// Strict decode: exact char count for the byte count, alphabet-only chars,
// and the dangling bits of the last char must be zero.
std::vector<std::uint8_t> decode_radix64(std::string_view text, std::size_t n_bytes,
                                         const char* what) {
  if (text.size() != (n_bytes * 8 + 5) / 6)
    throw BcryptParseError(std::string(what) + ": wrong field length");
  std::vector<std::uint8_t> out;
  out.reserve(n_bytes);
  std::uint32_t acc = 0;
  int bits = 0;
  for (char c : text) {
    int v = alphabet_index(c);
    if (v < 0) throw BcryptParseError(std::string(what) + ": invalid character");
    acc = acc << 6 | static_cast<std::uint32_t>(v);
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      if (out.size() < n_bytes) out.push_back(static_cast<std::uint8_t>((acc >> bits) & 0xff));
    }
  }
  if ((acc & ((1u << bits) - 1)) != 0)
    throw BcryptParseError(std::string(what) + ": non-canonical trailing bits");
  return out;
}

constexpr char kMagic[24] = {'O', 'r', 'p', 'h', 'e', 'a', 'n', 'B',
                             'e', 'h', 'o', 'l', 'd', 'e', 'r', 'S',
                             'c', 'r', 'y', 'D', 'o', 'u', 'b', 't'};

bool equal_constant_time(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  unsigned diff = 0;
  for (std::size_t i = 0; i < n; ++i) diff |= static_cast<unsigned>(a[i] ^ b[i]);
  return diff == 0;
}

}  // namespace

BcryptRecord bcrypt_hash(std::string_view password,
                         std::span<const std::uint8_t> salt, int cost) {
  if (salt.size() != 16) throw std::invalid_argument("bcrypt salt must be 16 bytes");
  if (cost < kBcryptMinCost || cost > kBcryptMaxCost)
    throw std::invalid_argument("bcrypt cost out of range");

  // Key = password bytes capped at 72, plus the terminating zero. The key
  // stream cycles over this buffer, so the zero participates in mixing.
  std::vector<std::uint8_t> key;
  std::size_t n = std::min(password.size(), kBcryptMaxKeyBytes);
  key.reserve(n + 1);
  key.insert(key.end(), password.begin(), password.begin() + n);
  key.push_back(0);

  Blowfish bf = eks_blowfish_setup(key, salt, cost);

  std::uint32_t block[6];
  for (int i = 0; i < 6; ++i) {
    block[i] = 0;
    for (int j = 0; j < 4; ++j)
      block[i] = block[i] << 8 | static_cast<std::uint8_t>(kMagic[4 * i + j]);
  }
  for (int round = 0; round < 64; ++round)
    for (int i = 0; i < 6; i += 2) bf.encipher(block[i], block[i + 1]);

  BcryptRecord rec;
  rec.cost = cost;
  std::copy(salt.begin(), salt.end(), rec.salt.begin());
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 4; ++j)
      rec.ciphertext[4 * i + j] = static_cast<std::uint8_t>(block[i] >> (8 * (3 - j)));
  return rec;
}

std::string format_bcrypt(const BcryptRecord& record) {
  if (record.version != "2a" && record.version != "2b")
    throw std::invalid_argument("unsupported bcrypt version");
  if (record.cost < kBcryptMinCost || record.cost > kBcryptMaxCost)
    throw std::invalid_argument("bcrypt cost out of range");
  std::string out = "$" + record.version + "$";
  out.push_back(static_cast<char>('0' + record.cost / 10));
  out.push_back(static_cast<char>('0' + record.cost % 10));
  out.push_back('$');
  out += encode_radix64(record.salt);
  out += encode_radix64(std::span(record.ciphertext.data(), 23));
  return out;
}

BcryptRecord parse_bcrypt(std::string_view text) {
  if (text.size() != 60) throw BcryptParseError("record must be 60 chars");
  if (text[0] != '$') throw BcryptParseError("missing leading $");
  std::string_view version = text.substr(1, 2);
  if (version != "2a" && version != "2b")
    throw BcryptParseError("unsupported version tag");
  if (text[3] != '$') throw BcryptParseError("malformed cost separator");
  if (text[4] < '0' || text[4] > '9' || text[5] < '0' || text[5] > '9')
    throw BcryptParseError("cost must be two digits");
  int cost = (text[4] - '0') * 10 + (text[5] - '0');
  if (cost < kBcryptMinCost || cost > kBcryptMaxCost)
    throw BcryptParseError("cost out of range");
  if (text[6] != '$') throw BcryptParseError("malformed salt separator");

  auto salt = decode_radix64(text.substr(7, 22), 16, "salt");
  auto ct = decode_radix64(text.substr(29, 31), 23, "ciphertext");

  BcryptRecord rec;
  rec.version = std::string(version);
  rec.cost = cost;
  std::copy(salt.begin(), salt.end(), rec.salt.begin());
  std::copy(ct.begin(), ct.end(), rec.ciphertext.begin());
  rec.ciphertext[23] = 0;
  return rec;
}

bool bcrypt_verify(std::string_view password, const BcryptRecord& record) {
  BcryptRecord fresh = bcrypt_hash(password, record.salt, record.cost);
  return equal_constant_time(fresh.ciphertext.data(), record.ciphertext.data(), 23);
}

bool bcrypt_verify(std::string_view password, std::string_view record_text) {
  return bcrypt_verify(password, parse_bcrypt(record_text));
}

std::array<std::uint8_t, 16> random_bcrypt_salt() {
  std::random_device rd;
  std::array<std::uint8_t, 16> salt;
  for (std::size_t i = 0; i < salt.size(); i += 4) {
    std::uint32_t w = rd();
    for (std::size_t j = 0; j < 4; ++j)
      salt[i + j] = static_cast<std::uint8_t>(w >> (8 * j));
  }
  return salt;
}

std::array<std::uint8_t, 16> random_bcrypt_salt(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::array<std::uint8_t, 16> salt;
  for (std::size_t i = 0; i < salt.size(); i += 8) {
    std::uint64_t w = rng();
    for (std::size_t j = 0; j < 8; ++j)
      salt[i + j] = static_cast<std::uint8_t>(w >> (8 * j));
  }
  return salt;
}

}  // namespace pwlab::crypto
