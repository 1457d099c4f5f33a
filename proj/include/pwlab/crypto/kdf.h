#pragma once

#include <cstdint>
#include <vector>

#include "pwlab/crypto/digest.h"

namespace pwlab::crypto {

struct KdfSpec {
  HashAlgorithm algorithm = HashAlgorithm::sha256;
  std::uint64_t iterations = 1;
  std::vector<std::uint8_t> salt;  // may be empty
};

// D_1 = H(password || salt), D_i = H(D_{i-1}); returns D_iterations.
std::vector<std::uint8_t> kdf_iterate(std::string_view password, const KdfSpec& spec);

}  // namespace pwlab::crypto
