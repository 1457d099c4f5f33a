#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace pwlab::defense {

enum class LengthClass { low, medium, high };

const char* length_class_name(LengthClass c);
LengthClass length_class_from_name(std::string_view name);

enum class CharClass { lower, upper, digit, special };

const char* char_class_name(CharClass c);

struct PasswordPolicy {
  std::size_t min_length = 8;
  std::size_t max_length = 64;
  bool reject_banned = true;
  std::set<std::string> extra_banned;    // merged with the built-in list
  std::set<CharClass> require_classes;   // empty = no forced mixing

  static PasswordPolicy defaults() { return {}; }
};

struct StrengthReport {
  bool accepted = false;
  LengthClass length_class = LengthClass::low;
  std::vector<std::string> reasons;  // machine-readable codes
  std::string feedback;              // human sentence
};

// Composition rubric, independent of acceptance:
//   low:    shorter than 6, or a single character class (any length < 7),
//           or only digits / only specials at any length
//   high:   4 classes, or 3 classes at length >= 8
//   medium: everything else
LengthClass classify_strength(std::string_view password);

// Acceptance combines the length bounds and the banned list; the strength
// class is advisory and does not affect acceptance.
StrengthReport evaluate_policy(std::string_view password, const PasswordPolicy& policy);

const std::vector<std::string>& builtin_banned_passwords();
bool is_banned(std::string_view password, const PasswordPolicy& policy);

}  // namespace pwlab::defense
