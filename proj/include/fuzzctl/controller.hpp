#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fuzzctl/controller_spec.hpp"
#include "fuzzctl/errors.hpp"
#include "fuzzctl/inference.hpp"

namespace fuzzctl {

enum class DefuzzMode { centroid, paper };

inline const char* to_string(DefuzzMode mode) noexcept { return mode == DefuzzMode::centroid ? "centroid" : "paper"; }

struct CrispInput {
  std::string variable;
  double value = 0.0;
};

struct Decision {
  double value = 0.0;  // crisp output, unrounded
  TermStrengths fired;
  std::string dominant_term;
  DefuzzMode mode = DefuzzMode::centroid;
};

// One rule's contribution at a given input point.
struct RuleFiring {
  std::size_t rule_index = 0;
  std::vector<double> antecedent_degrees;  // in antecedent order
  double strength = 0.0;
};

/// Runs the fuzzify / infer / defuzzify pipeline over a ControllerSpec.
/// Immutable once constructed.
class Controller {
 public:
  static constexpr std::size_t kDefaultSamples = 1001;

  explicit Controller(ControllerSpec spec) : spec_(std::move(spec)) {
    output_ = spec_.output();
    if (output_ == nullptr) throw ConfigError("controller '" + spec_.name + "' has no output variable");
    inputs_ = spec_.inputs();
  }

  Controller(const Controller& other) : Controller(other.spec_) {}
  Controller& operator=(const Controller&) = delete;

  const ControllerSpec& spec() const noexcept { return spec_; }
  const LinguisticVariable& output() const noexcept { return *output_; }
  std::span<const LinguisticVariable* const> inputs() const noexcept { return inputs_; }

  // Every declared input must be assigned exactly once.
  std::vector<FuzzifiedInput> fuzzify_all(std::span<const CrispInput> values) const {
    for (const auto& v : values) {
      const LinguisticVariable* var = spec_.find_variable(v.variable);
      if (var == nullptr || var->role != Role::input) throw InputError("unknown input variable '" + v.variable + "'");
    }
    std::vector<FuzzifiedInput> out;
    out.reserve(inputs_.size());
    for (const LinguisticVariable* var : inputs_) {
      auto it = std::find_if(values.begin(), values.end(),
                             [&](const CrispInput& c) { return iequals(c.variable, var->name); });
      if (it == values.end()) throw InputError("no value for input '" + var->name + "'");
      if (std::count_if(values.begin(), values.end(), [&](const CrispInput& c) { return iequals(c.variable, var->name); }) > 1) {
        throw InputError("input '" + var->name + "' assigned more than once");
      }
      out.push_back(fuzzify(*var, it->value));
    }
    return out;
  }

  Decision evaluate(std::span<const CrispInput> values, DefuzzMode mode = DefuzzMode::centroid,
                    std::size_t samples = kDefaultSamples) const {
    const auto fuzzified = fuzzify_all(values);
    Decision d;
    d.mode = mode;
    d.fired = infer(spec_.rules, fuzzified, *output_);
    if (mode == DefuzzMode::centroid) {
      d.value = defuzzify_centroid(*output_, d.fired, samples);
    } else {
      if (spec_.output_ranges.empty()) throw ConfigError("paper mode needs a RANGES block");
      d.value = defuzzify_paper_range(spec_.output_ranges, d.fired);
    }
    d.dominant_term = dominant_term(d.fired, mode);
    return d;
  }

  /// Rules with positive strength at the given point, strongest first;
  /// ties keep rule order.
  std::vector<RuleFiring> trace(std::span<const CrispInput> values) const {
    const auto fuzzified = fuzzify_all(values);
    std::vector<RuleFiring> out;
    for (std::size_t i = 0; i < spec_.rules.size(); ++i) {
      const Rule& rule = spec_.rules[i];
      RuleFiring f{i, {}, evaluate_rule(rule, fuzzified)};
      if (!(f.strength > 0.0)) continue;
      for (const auto& clause : rule.antecedents) {
        auto in = std::find_if(fuzzified.begin(), fuzzified.end(),
                               [&](const FuzzifiedInput& x) { return iequals(x.variable, clause.variable); });
        f.antecedent_degrees.push_back(in->find(clause.term)->value);
      }
      out.push_back(std::move(f));
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const RuleFiring& a, const RuleFiring& b) { return a.strength > b.strength; });
    return out;
  }

  /// Term with the largest strength. Ties go to the term whose range
  /// midpoint (paper mode) or support midpoint (centroid mode) is larger.
  std::string dominant_term(const TermStrengths& fired, DefuzzMode mode) const {
    const TermValue* best = nullptr;
    double best_mid = 0.0;
    for (const auto& s : fired.strengths) {
      const double mid = midpoint_of(s.term, mode);
      if (best == nullptr || s.value > best->value || (s.value == best->value && mid > best_mid)) {
        best = &s;
        best_mid = mid;
      }
    }
    return best == nullptr ? std::string{} : best->term;
  }

 private:
  double midpoint_of(const std::string& term, DefuzzMode mode) const {
    if (mode == DefuzzMode::paper) {
      for (const auto& r : spec_.output_ranges) {
        if (iequals(r.term, term)) return r.midpoint();
      }
    }
    const Term* t = output_->find_term(term);
    return t == nullptr ? 0.0 : 0.5 * (t->shape.support_lo() + t->shape.support_hi());
  }

  ControllerSpec spec_;
  const LinguisticVariable* output_ = nullptr;
  std::vector<const LinguisticVariable*> inputs_;
};

}  // namespace fuzzctl
