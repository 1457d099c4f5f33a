#include "pwlab/defense/policy.h"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace pwlab::defense {

namespace {

struct ClassCounts {
  bool lower = false, upper = false, digit = false, special = false;
  int count() const { return lower + upper + digit + special; }
};

ClassCounts count_classes(std::string_view s) {
  ClassCounts c;
  for (unsigned char ch : s) {
    if (std::islower(ch)) c.lower = true;
    else if (std::isupper(ch)) c.upper = true;
    else if (std::isdigit(ch)) c.digit = true;
    else c.special = true;
  }
  return c;
}

// Rough top-of-the-breach-lists sample; enough to catch the classics.
const std::vector<std::string> kBannedList = {
    "123456", "password", "12345678", "qwerty", "123456789", "12345", "1234",
    "111111", "1234567", "dragon", "123123", "baseball", "abc123", "football",
    "monkey", "letmein", "696969", "shadow", "master", "666666", "qwertyuiop",
    "123321", "mustang", "1234567890", "michael", "654321", "superman", "1qaz2wsx",
    "7777777", "fuckyou", "121212", "000000", "qazwsx", "123qwe", "killer",
    "trustno1", "jordan", "jennifer", "zxcvbnm", "asdfgh", "hunter", "buster",
    "soccer", "harley", "batman", "andrew", "tigger", "sunshine", "iloveyou",
    "fuckme", "2000", "charlie", "robert", "thomas", "hockey", "ranger",
    "daniel", "starwars", "klaster", "112233", "george", "asshole", "computer",
    "michelle", "jessica", "pepper", "1111", "zxcvbn", "555555", "11111111",
    "131313", "freedom", "777777", "pass", "fuck", "maggie", "159753",
    "aaaaaa", "ginger", "princess", "joshua", "cheese", "amanda", "summer",
    "love", "ashley", "6969", "nicole", "chelsea", "biteme", "matthew",
    "access", "yankees", "987654321", "dallas", "austin", "thunder", "taylor",
    "matrix", "admin", "welcome", "monitor", "password1", "password123",
    "qwerty123", "abcdef", "letmein1", "login", "passw0rd", "hello", "whatever",
    "secret", "flower", "hottie", "loveme", "zaq1zaq1", "test", "root",
};

}  // namespace

const char* length_class_name(LengthClass c) {
  switch (c) {
    case LengthClass::low: return "Low";
    case LengthClass::medium: return "Medium";
    case LengthClass::high: return "High";
  }
  return "?";
}

LengthClass length_class_from_name(std::string_view name) {
  if (name == "Low") return LengthClass::low;
  if (name == "Medium") return LengthClass::medium;
  if (name == "High") return LengthClass::high;
  throw std::invalid_argument("unknown complexity label: " + std::string(name));
}

const char* char_class_name(CharClass c) {
  switch (c) {
    case CharClass::lower: return "lowercase";
    case CharClass::upper: return "uppercase";
    case CharClass::digit: return "digit";
    case CharClass::special: return "special";
  }
  return "?";
}

const std::vector<std::string>& builtin_banned_passwords() { return kBannedList; }

bool is_banned(std::string_view password, const PasswordPolicy& policy) {
  if (!policy.reject_banned) return false;
  std::string lowered(password);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (std::find(kBannedList.begin(), kBannedList.end(), lowered) != kBannedList.end())
    return true;
  return policy.extra_banned.contains(lowered) ||
         policy.extra_banned.contains(std::string(password));
}

LengthClass classify_strength(std::string_view password) {
  ClassCounts c = count_classes(password);
  std::size_t len = password.size();
  int classes = c.count();

  bool single_class_only_digits = c.digit && classes == 1;
  bool single_class_only_specials = c.special && classes == 1;
  if (len < 6 || single_class_only_digits || single_class_only_specials ||
      (classes <= 1 && len < 7))
    return LengthClass::low;
  if (classes >= 4 || (classes >= 3 && len >= 8)) return LengthClass::high;
  return LengthClass::medium;
}

StrengthReport evaluate_policy(std::string_view password, const PasswordPolicy& policy) {
  StrengthReport report;
  report.length_class = classify_strength(password);

  if (password.size() < policy.min_length) report.reasons.push_back("too-short");
  if (password.size() > policy.max_length) report.reasons.push_back("too-long");
  if (is_banned(password, policy)) report.reasons.push_back("banned");
  ClassCounts have = count_classes(password);
  for (CharClass required : policy.require_classes) {
    bool present = (required == CharClass::lower && have.lower) ||
                   (required == CharClass::upper && have.upper) ||
                   (required == CharClass::digit && have.digit) ||
                   (required == CharClass::special && have.special);
    if (!present)
      report.reasons.push_back(std::string("missing-class:") + char_class_name(required));
  }

  report.accepted = report.reasons.empty();
  if (report.accepted) {
    report.feedback = std::string("Acceptable; estimated strength is ") +
                      length_class_name(report.length_class) + ".";
  } else {
    report.feedback = "Rejected:";
    for (const auto& r : report.reasons) {
      if (r == "too-short")
        report.feedback += " shorter than the required " +
                           std::to_string(policy.min_length) + " characters;";
      else if (r == "too-long")
        report.feedback += " longer than " + std::to_string(policy.max_length) +
                           " characters;";
      else if (r == "banned")
        report.feedback += " appears on the blocked common-password list;";
      else if (r.starts_with("missing-class:"))
        report.feedback += " needs at least one " + r.substr(14) + " character;";
    }
    report.feedback.pop_back();
    report.feedback += ".";
  }
  return report;
}

}  // namespace pwlab::defense
