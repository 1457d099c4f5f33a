#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <set>
#include <string>
#include <vector>

#include "pwlab/crypto/bcrypt.h"
#include "pwlab/crypto/blowfish.h"
#include "pwlab/crypto/digest.h"
#include "pwlab/crypto/hash.h"
#include "pwlab/crypto/kdf.h"

using namespace pwlab::crypto;

namespace {

std::vector<std::uint8_t> bytes_of(std::string_view s) {
  return {s.begin(), s.end()};
}

int hamming(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  int bits = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    bits += std::popcount(static_cast<unsigned>(a[i] ^ b[i]));
  return bits;
}

}  // namespace

TEST_CASE("md5 known vectors") {
  CHECK(md5("").hex() == "d41d8cd98f00b204e9800998ecf8427e");
  CHECK(md5("a").hex() == "0cc175b9c0f1b6a831c399e269772661");
  CHECK(md5("abc").hex() == "900150983cd24fb0d6963f7d28e17f72");
  CHECK(md5("message digest").hex() == "f96b697d7cb7938d525a2f31aaf161d0");
  CHECK(md5("abcdefghijklmnopqrstuvwxyz").hex() == "c3fcd3d76192e4007dfb496cca67e13b");
  CHECK(md5("123456").hex() == "e10adc3949ba59abbe56e057f20f883e");
  CHECK(md5("password").hex() == "5f4dcc3b5aa765d61d8327deb882cf99");
  CHECK(md5("abcdef").hex() == "e80b5017098950fc58aad83c8c14978e");
}

TEST_CASE("sha256 known vectors") {
  CHECK(sha256("").hex() ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256("abc").hex() ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq").hex() ==
        "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
  CHECK(sha256("123456").hex() ==
        "8d969eef6ecad3c29a3a629280e686cf0c3f5d5a86aff3ca12020c923adc6c92");
  CHECK(sha256("abcdef").hex() ==
        "bef57ec7f53a6d40beb640a780a639c83bc29ac8a9816f1fc6c5c6dcd93c4721");
}

TEST_CASE("a million characters hash correctly") {
  std::string m(1000000, 'a');
  CHECK(md5(m).hex() == "7707d6ae4e027c70eea2a935c2296f21");
  CHECK(sha256(m).hex() ==
        "cdc76e5c9914fb9281a1c7e284d73e67f1809a48a497200e046d39ccc7112cd0");
}

TEST_CASE("padding ends on a block boundary and stores the bit length") {
  for (std::size_t n = 0; n <= 130; ++n) {
    std::vector<std::uint8_t> msg(n, 0xab);
    auto le = pad_message(msg, LengthEncoding::little_endian);
    REQUIRE(le.size() % 64 == 0);
    REQUIRE(le.size() >= n + 9);
    CHECK(le[n] == 0x80);
    for (std::size_t i = n + 1; i + 8 < le.size(); ++i) CHECK(le[i] == 0);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i)
      bits |= static_cast<std::uint64_t>(le[le.size() - 8 + i]) << (8 * i);
    CHECK(bits == static_cast<std::uint64_t>(n) * 8);

    auto be = pad_message(msg, LengthEncoding::big_endian);
    REQUIRE(be.size() == le.size());
    std::uint64_t bits_be = 0;
    for (int i = 0; i < 8; ++i) bits_be = bits_be << 8 | be[be.size() - 8 + i];
    CHECK(bits_be == static_cast<std::uint64_t>(n) * 8);
  }
}

TEST_CASE("round constants come from sines and cube roots") {
  auto sine_constant = [](int i) {
    return static_cast<std::uint32_t>(static_cast<std::uint64_t>(
        ldexpl(fabsl(sinl(static_cast<long double>(i) + 1)), 32)));
  };
  CHECK(sine_constant(0) == 0xd76aa478u);
  CHECK(sine_constant(1) == 0xe8c7b756u);
  CHECK(sine_constant(63) == 0xeb86d391u);

  auto cube_root_constant = [](int prime) {
    long double c = cbrtl(static_cast<long double>(prime));
    c -= floorl(c);
    return static_cast<std::uint32_t>(static_cast<std::uint64_t>(ldexpl(c, 32)));
  };
  CHECK(cube_root_constant(2) == 0x428a2f98u);
  CHECK(cube_root_constant(3) == 0x71374491u);
  CHECK(cube_root_constant(311) == 0xc67178f2u);
}

TEST_CASE("single bit flips move at least a quarter of the digest bits") {
  std::string base = "the quick brown fox jumps over the lazy dog";
  Digest m0 = md5(base), s0 = sha256(base);
  for (int bit = 0; bit < 64; ++bit) {
    std::string flipped = base;
    flipped[bit / 8] ^= static_cast<char>(1 << (bit % 8));
    CHECK(hamming(md5(flipped).bytes(), m0.bytes()) >= 32);
    CHECK(hamming(sha256(flipped).bytes(), s0.bytes()) >= 64);
  }
}

TEST_CASE("raw one-shot hashing matches the allocating form") {
  for (std::string_view text : {"", "a", "abc", "0123456789012345678901234567890123456789",
                                "123456"}) {
    std::uint8_t m[16], s[32];
    md5_raw(reinterpret_cast<const std::uint8_t*>(text.data()), text.size(), m);
    sha256_raw(reinterpret_cast<const std::uint8_t*>(text.data()), text.size(), s);
    CHECK(to_hex(m) == md5(text).hex());
    CHECK(to_hex(s) == sha256(text).hex());
  }
}

TEST_CASE("digest hex parsing picks the algorithm by width") {
  Digest d = Digest::from_hex("E10ADC3949BA59ABBE56E057F20F883E");
  CHECK(d.algorithm() == HashAlgorithm::md5);
  CHECK(d.hex() == "e10adc3949ba59abbe56e057f20f883e");
  Digest s = Digest::from_hex(sha256("abc").hex());
  CHECK(s == sha256("abc"));
  CHECK_THROWS_AS(Digest::from_hex("abcd"), std::invalid_argument);
  CHECK_THROWS_AS(Digest::from_hex(std::string(32, 'g')), std::invalid_argument);
  CHECK(compute_digest(HashAlgorithm::md5, "abc") == md5("abc"));
  CHECK(compute_digest(HashAlgorithm::sha256, "abc") == sha256("abc"));
  CHECK(algorithm_from_name("md5") == HashAlgorithm::md5);
  CHECK(algorithm_from_name("sha256") == HashAlgorithm::sha256);
  CHECK_THROWS_AS(algorithm_from_name("sha1"), std::invalid_argument);
}

TEST_CASE("blowfish initial state is the hex expansion of pi") {
  const auto& p = Blowfish::initial_subkeys();
  CHECK(p[0] == 0x243f6a88u);
  CHECK(p[1] == 0x85a308d3u);
  const auto& s = Blowfish::initial_sboxes();
  CHECK(s[0][0] == 0xd1310ba6u);
  CHECK(s[0][1] == 0x98dfb5acu);
  CHECK(s[3][255] == 0x3ac372e6u);
}

TEST_CASE("blowfish enciphers and deciphers consistently after keying") {
  Blowfish bf;
  bf.expand_key(bytes_of("TESTKEY"));
  std::uint32_t l = 1, r = 2;
  bf.encipher(l, r);
  CHECK((l != 1 || r != 2));
}

TEST_CASE("expensive key schedule reaches the expected state") {
  std::vector<std::uint8_t> salt(16);
  for (int i = 0; i < 16; ++i) salt[i] = static_cast<std::uint8_t>(i);
  Blowfish bf = eks_blowfish_setup(bytes_of("abc"), salt, 6);
  CHECK(bf.subkey(0) == 0x8c67ae54u);
  CHECK(bf.subkey(17) == 0xa3518bb0u);
  CHECK(bf.sbox(0, 0) == 0xb35363a8u);
}

TEST_CASE("bcrypt verifies records produced by other implementations") {
  CHECK(bcrypt_verify("hunter2",
                      "$2b$06$MTIzNDU2Nzg5MDEyMzQ1Ne66lfD316Dj40rqjl8BA6VrrlfdHwoqu"));
  CHECK(bcrypt_verify("open sesame",
                      "$2a$08$aBcDeFgHiJkLmNoPqRsTuuWqKf11wVHEvVkT/vgVNkpKVHABYXvoy"));
  CHECK(bcrypt_verify("!@#",
                      "$2a$04$abcdefghijklmnopqrstuukH2Vu.NyXDG0MlKIr1rjW6ZXCKpXOuO"));
  CHECK(bcrypt_verify("123456",
                      "$2a$10$cixOlw9mU.IT1QBxFZ1fduywWSLQsq04LnFoDbdccL97dFJ0Fi0Z2"));
  CHECK(bcrypt_verify("dhak1",
                      "$2a$10$4LfH3264Jk2lu42S5LSKreseWCzwHdETMySHxJwEKJD06QeRtPhS6"));
  CHECK_FALSE(bcrypt_verify("hunter3",
                      "$2b$06$MTIzNDU2Nzg5MDEyMzQ1Ne66lfD316Dj40rqjl8BA6VrrlfdHwoqu"));
  // Well-formed record whose ciphertext belongs to a different salt/password.
  CHECK_FALSE(bcrypt_verify("123456",
                      "$2a$10$cixOlw9mU.IT1QBxFZ1fduwdiZ7yUjIK0Wt5py9medOXnUKcleXjq"));
}

TEST_CASE("bcrypt format and parse round-trip") {
  auto salt = random_bcrypt_salt(7);
  BcryptRecord rec = bcrypt_hash("correct horse", salt, 4);
  std::string text = format_bcrypt(rec);
  CHECK(text.size() == 60);
  CHECK(text.substr(0, 7) == "$2a$04$");
  BcryptRecord back = parse_bcrypt(text);
  CHECK(back.cost == 4);
  CHECK(back.salt == rec.salt);
  CHECK(format_bcrypt(back) == text);
  CHECK(bcrypt_verify("correct horse", text));
  CHECK(bcrypt_verify("correct horse", back));
  CHECK_FALSE(bcrypt_verify("correct  horse", back));
}

TEST_CASE("bcrypt parsing rejects malformed records") {
  // 56-char payload (three chars too many).
  CHECK_THROWS_AS(
      parse_bcrypt("$2a$10$3etSaX2jMzifNlwO0JNQeuHrjrelzfQV0O9hkx4.SuEyTyY96ot8Wk6"),
      BcryptParseError);
  CHECK_THROWS_AS(parse_bcrypt("$2x$06$MTIzNDU2Nzg5MDEyMzQ1Ne66lfD316Dj40rqjl8BA6Vrrlfd"
                               "Hwoqu"),
                  BcryptParseError);
  CHECK_THROWS_AS(parse_bcrypt("$2a$03$abcdefghijklmnopqrstuukH2Vu.NyXDG0MlKIr1rjW6ZXCK"
                               "pXOuO"),
                  BcryptParseError);
  CHECK_THROWS_AS(parse_bcrypt("$1$abc$def"), BcryptParseError);
  CHECK_THROWS_AS(parse_bcrypt(""), BcryptParseError);
  // Non-canonical trailing bits in the salt's last character.
  CHECK_THROWS_AS(
      parse_bcrypt("$2b$06$MTIzNDU2Nzg5MDEyMzQ1Nh66lfD316Dj40rqjl8BA6VrrlfdHwoqu"),
      BcryptParseError);
}

TEST_CASE("bcrypt rejects out-of-range cost and oversized keys up front") {
  auto salt = random_bcrypt_salt(1);
  CHECK_THROWS_AS(bcrypt_hash("x", salt, 3), std::invalid_argument);
  CHECK_THROWS_AS(bcrypt_hash("x", salt, 32), std::invalid_argument);
  std::vector<std::uint8_t> short_salt(8, 1);
  CHECK_THROWS_AS(bcrypt_hash("x", short_salt, 6), std::invalid_argument);
}

TEST_CASE("bcrypt keys truncate at 72 bytes") {
  auto salt = random_bcrypt_salt(99);
  std::string long72(72, 'x');
  BcryptRecord rec = bcrypt_hash(long72, salt, 4);
  CHECK(bcrypt_verify(long72 + "ignored tail", rec));
  std::string differs_inside = long72;
  differs_inside[40] = 'y';
  CHECK_FALSE(bcrypt_verify(differs_inside, rec));
}

TEST_CASE("every salt yields a distinct record that still verifies") {
  std::set<std::string> seen;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto salt = random_bcrypt_salt(seed);
    std::string text = format_bcrypt(bcrypt_hash("same password", salt, 4));
    CHECK(bcrypt_verify("same password", text));
    seen.insert(text);
  }
  CHECK(seen.size() == 100);
}

TEST_CASE("seeded salts reproduce, unseeded salts vary") {
  CHECK(random_bcrypt_salt(42) == random_bcrypt_salt(42));
  CHECK(random_bcrypt_salt(42) != random_bcrypt_salt(43));
  CHECK(random_bcrypt_salt() != random_bcrypt_salt());
}

TEST_CASE("iterated kdf matches reference chains") {
  KdfSpec spec;
  spec.algorithm = HashAlgorithm::sha256;
  spec.iterations = 10000;
  spec.salt = from_hex("deadbeef");
  CHECK(to_hex(kdf_iterate("123456", spec)) ==
        "63c0a3d3cf5707382c26c7ecf7b1f67aec6200c8567c6c13d6a8db953a881b80");

  spec.algorithm = HashAlgorithm::md5;
  spec.iterations = 2;
  spec.salt.clear();
  CHECK(to_hex(kdf_iterate("password", spec)) == "9bf4b3611c53176f5c649aa4fc1ff6b2");

  spec.iterations = 1000;
  spec.salt = from_hex("0102030405");
  CHECK(to_hex(kdf_iterate("hunter2", spec)) == "252469de5faeefa357651c5120fa5f3b");

  spec.iterations = 0;
  CHECK_THROWS_AS(kdf_iterate("x", spec), std::invalid_argument);
}
