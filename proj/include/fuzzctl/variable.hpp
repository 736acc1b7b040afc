#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzctl/membership.hpp"

namespace fuzzctl {

inline bool iequals(std::string_view a, std::string_view b) noexcept {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](char x, char y) {
    return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
  });
}

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

enum class Role { input, output };

inline const char* to_string(Role role) noexcept { return role == Role::input ? "INPUT" : "OUTPUT"; }

struct Universe {
  double lo = 0.0;
  double hi = 1.0;
  std::string unit;  // empty when the quantity is unitless

  double clamp(double x) const noexcept { return std::clamp(x, lo, hi); }
  bool operator==(const Universe&) const = default;
};

struct Term {
  std::string name;
  MembershipFunction shape;
  bool operator==(const Term&) const = default;
};

// Second name for an existing term, e.g. `small` for saturation `low`.
struct Alias {
  std::string name;
  std::string term;
  bool operator==(const Alias&) const = default;
};

struct LinguisticVariable {
  std::string name;
  Role role = Role::input;
  Universe universe;
  std::vector<Term> terms;
  std::vector<Alias> aliases;

  // Looks a term up by name or alias, case-insensitively.
  const Term* find_term(std::string_view term_or_alias) const noexcept {
    for (const auto& t : terms) {
      if (iequals(t.name, term_or_alias)) return &t;
    }
    for (const auto& a : aliases) {
      if (iequals(a.name, term_or_alias)) {
        for (const auto& t : terms) {
          if (iequals(t.name, a.term)) return &t;
        }
      }
    }
    return nullptr;
  }

  // Display name for a term: its first alias if it has one.
  std::string_view label(std::string_view term) const noexcept {
    for (const auto& a : aliases) {
      if (iequals(a.term, term)) return a.name;
    }
    return term;
  }

  bool operator==(const LinguisticVariable&) const = default;
};

}  // namespace fuzzctl
