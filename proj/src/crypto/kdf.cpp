#include "pwlab/crypto/kdf.h"

#include <stdexcept>

#include "pwlab/crypto/hash.h"

namespace pwlab::crypto {

std::vector<std::uint8_t> kdf_iterate(std::string_view password, const KdfSpec& spec) {
  if (spec.iterations == 0) throw std::invalid_argument("kdf iterations must be >= 1");

  std::vector<std::uint8_t> buf;
  buf.reserve(password.size() + spec.salt.size());
  buf.insert(buf.end(), password.begin(), password.end());
  buf.insert(buf.end(), spec.salt.begin(), spec.salt.end());

  std::size_t width = digest_size(spec.algorithm);
  std::vector<std::uint8_t> state(32);
  if (spec.algorithm == HashAlgorithm::md5)
    md5_raw(buf.data(), buf.size(), state.data());
  else
    sha256_raw(buf.data(), buf.size(), state.data());
  state.resize(width);

  for (std::uint64_t i = 1; i < spec.iterations; ++i) {
    std::uint8_t next[32];
    if (spec.algorithm == HashAlgorithm::md5)
      md5_raw(state.data(), width, next);
    else
      sha256_raw(state.data(), width, next);
    std::copy(next, next + width, state.begin());
  }
  return state;
}

}  // namespace pwlab::crypto
