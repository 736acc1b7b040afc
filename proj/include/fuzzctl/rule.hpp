#pragma once

#include <string>
#include <vector>

namespace fuzzctl {

enum class Connective { all_of, any_of };  // AND, OR

inline const char* to_string(Connective c) noexcept { return c == Connective::all_of ? "AND" : "OR"; }

// `variable IS term`
struct Clause {
  std::string variable;
  std::string term;
  bool operator==(const Clause&) const = default;
};

/// IF <antecedents joined by one connective> THEN <consequent>.
struct Rule {
  std::vector<Clause> antecedents;
  Connective connective = Connective::all_of;
  Clause consequent;
  bool operator==(const Rule&) const = default;
};

using RuleBase = std::vector<Rule>;

}  // namespace fuzzctl
