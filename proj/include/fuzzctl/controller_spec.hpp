#pragma once

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzctl/inference.hpp"
#include "fuzzctl/rule.hpp"
#include "fuzzctl/variable.hpp"

namespace fuzzctl {

/// A whole controller definition: variables, rules, and the optional
/// physical output ranges used by paper-mode defuzzification.
struct ControllerSpec {
  std::string name;
  std::vector<LinguisticVariable> variables;
  RuleBase rules;
  std::vector<OutputRange> output_ranges;  // empty when no RANGES block

  const LinguisticVariable* find_variable(std::string_view var) const noexcept {
    auto it = std::find_if(variables.begin(), variables.end(),
                           [&](const LinguisticVariable& v) { return iequals(v.name, var); });
    return it == variables.end() ? nullptr : &*it;
  }

  std::vector<const LinguisticVariable*> inputs() const {
    std::vector<const LinguisticVariable*> out;
    for (const auto& v : variables) {
      if (v.role == Role::input) out.push_back(&v);
    }
    return out;
  }

  // First output variable, or nullptr. A valid spec has exactly one.
  const LinguisticVariable* output() const noexcept {
    for (const auto& v : variables) {
      if (v.role == Role::output) return &v;
    }
    return nullptr;
  }

  bool operator==(const ControllerSpec&) const = default;
};

}  // namespace fuzzctl
