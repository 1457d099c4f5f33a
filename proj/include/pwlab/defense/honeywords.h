#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pwlab::defense {

enum class HoneywordStrategy {
  keyboard_adjacent,      // swap one char for a QWERTY neighbor, class-preserving
  digit_suffix_mutation,  // change (or add) a trailing digit
  case_perturbation,      // flip the case of one or two letters
};

class StrategyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Neighboring keys on the same or adjacent QWERTY rows, restricted to the
// same character class (letters map to letters, digits to digits, shifted
// digit-row specials to specials) so decoys keep the original's shape.
std::string keyboard_neighbors(char c);

// Deterministic under (password, count, strategies, seed). Every decoy is
// distinct, differs from the password, and shares its strength class.
std::vector<std::string> generate_honeywords(std::string_view password,
                                             std::size_t count,
                                             const std::set<HoneywordStrategy>& strategies,
                                             std::uint64_t seed);

// Strategy subset that keeps decoys shape-indistinguishable for this
// particular password (used by registration).
std::set<HoneywordStrategy> default_strategies_for(std::string_view password);

}  // namespace pwlab::defense
