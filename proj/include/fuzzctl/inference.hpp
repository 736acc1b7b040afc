#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzctl/errors.hpp"
#include "fuzzctl/membership.hpp"
#include "fuzzctl/rule.hpp"
#include "fuzzctl/variable.hpp"

namespace fuzzctl {

struct TermValue {
  std::string term;
  double value = 0.0;
  bool operator==(const TermValue&) const = default;
};

namespace detail {

inline const TermValue* find_value(const std::vector<TermValue>& values, std::string_view term) noexcept {
  for (const auto& v : values) {
    if (iequals(v.term, term)) return &v;
  }
  return nullptr;
}

}  // namespace detail

/// Membership degree of one crisp input in every term of its variable.
struct FuzzifiedInput {
  std::string variable;
  std::vector<TermValue> degrees;  // declaration order of the variable's terms

  const TermValue* find(std::string_view term) const noexcept { return detail::find_value(degrees, term); }
  bool operator==(const FuzzifiedInput&) const = default;
};

/// Aggregated firing strength per output term after inference.
struct TermStrengths {
  std::string variable;
  std::vector<TermValue> strengths;  // declaration order of the output terms

  const TermValue* find(std::string_view term) const noexcept { return detail::find_value(strengths, term); }

  double max_strength() const noexcept {
    double m = 0.0;
    for (const auto& s : strengths) m = std::max(m, s.value);
    return m;
  }
  bool operator==(const TermStrengths&) const = default;
};

// Maps term name to its [min, max] physical range for paper-mode defuzzification.
struct OutputRange {
  std::string term;
  double min = 0.0;
  double max = 0.0;

  double midpoint() const noexcept { return 0.5 * (min + max); }
  bool operator==(const OutputRange&) const = default;
};

/// Clamps x into the variable's universe and evaluates every term.
inline FuzzifiedInput fuzzify(const LinguisticVariable& var, double x) {
  if (var.role != Role::input) throw ConfigError("cannot fuzzify output variable '" + var.name + "'");
  if (std::isnan(x)) throw InputError("crisp value for '" + var.name + "' is NaN");
  const double clamped = var.universe.clamp(x);
  FuzzifiedInput out{var.name, {}};
  out.degrees.reserve(var.terms.size());
  for (const auto& t : var.terms) out.degrees.push_back({t.name, t.shape(clamped)});
  return out;
}

/// Firing strength of one rule: min over antecedents for AND, max for OR.
inline double evaluate_rule(const Rule& rule, std::span<const FuzzifiedInput> inputs) {
  if (rule.antecedents.empty()) throw ConfigError("rule has no antecedents");
  double strength = rule.connective == Connective::all_of ? 1.0 : 0.0;
  for (const auto& clause : rule.antecedents) {
    auto in = std::find_if(inputs.begin(), inputs.end(),
                           [&](const FuzzifiedInput& f) { return iequals(f.variable, clause.variable); });
    if (in == inputs.end()) throw ConfigError("unresolved variable '" + clause.variable + "'");
    const TermValue* degree = in->find(clause.term);
    if (degree == nullptr) {
      throw ConfigError("unresolved term '" + clause.term + "' of variable '" + clause.variable + "'");
    }
    strength = rule.connective == Connective::all_of ? std::min(strength, degree->value)
                                                     : std::max(strength, degree->value);
  }
  return strength;
}

/// Mamdani inference: each rule feeds its strength to its consequent term,
/// terms hit by several rules keep the maximum.
inline TermStrengths infer(std::span<const Rule> rules, std::span<const FuzzifiedInput> inputs,
                           const LinguisticVariable& output) {
  if (rules.empty()) throw ConfigError("empty rule base");
  TermStrengths out{output.name, {}};
  out.strengths.reserve(output.terms.size());
  for (const auto& t : output.terms) out.strengths.push_back({t.name, 0.0});

  for (const auto& rule : rules) {
    if (!iequals(rule.consequent.variable, output.name)) {
      throw ConfigError("rule consequent '" + rule.consequent.variable + "' is not output '" + output.name + "'");
    }
    const Term* term = output.find_term(rule.consequent.term);
    if (term == nullptr) throw ConfigError("unresolved output term '" + rule.consequent.term + "'");
    const double s = evaluate_rule(rule, inputs);
    auto slot = std::find_if(out.strengths.begin(), out.strengths.end(),
                             [&](const TermValue& v) { return v.term == term->name; });
    slot->value = std::max(slot->value, s);
  }
  return out;
}

namespace detail {

struct ClippedShape {
  const MembershipFunction* shape;
  double level;
  double operator()(double x) const noexcept { return std::min((*shape)(x), level); }
};

inline double aggregate(std::span<const ClippedShape> shapes, double x) noexcept {
  double y = 0.0;
  for (const auto& s : shapes) y = std::max(y, s(x));
  return y;
}

}  // namespace detail

/// Centroid of the max-aggregated, strength-clipped output terms over the
/// output universe.
///
/// The universe is cut into `samples` uniform cells. The aggregate is
/// piecewise linear, so every cell is further split at the shape corners,
/// the clip points and the crossings between clipped shapes; each piece is
/// then integrated in closed form. The result does not depend on `samples`
/// beyond rounding.
inline double defuzzify_centroid(const LinguisticVariable& var, const TermStrengths& strengths,
                                 std::size_t samples = 1001) {
  if (var.role != Role::output) throw ConfigError("cannot defuzzify input variable '" + var.name + "'");
  if (samples == 0) throw ConfigError("defuzzification needs at least one cell");

  std::vector<detail::ClippedShape> fired;
  for (const auto& s : strengths.strengths) {
    const Term* term = var.find_term(s.term);
    if (term == nullptr) throw ConfigError("unknown output term '" + s.term + "'");
    if (!(s.value >= 0.0 && s.value <= 1.0)) throw ConfigError("strength of '" + s.term + "' outside [0,1]");
    if (s.value > 0.0) fired.push_back({&term->shape, s.value});
  }
  if (fired.empty()) throw NoRuleFired();

  const double lo = var.universe.lo;
  const double hi = var.universe.hi;

  // Structural cuts: shape corners and clip points. Between two of them
  // every clipped shape is linear, so the upper envelope can only bend
  // where two shapes cross.
  std::vector<double> cuts{lo, hi};
  for (const auto& f : fired) {
    const auto c = f.shape->corners();
    cuts.insert(cuts.end(), c.begin(), c.end());
    if (c[1] > c[0]) cuts.push_back(c[0] + f.level * (c[1] - c[0]));
    if (c[3] > c[2]) cuts.push_back(c[3] - f.level * (c[3] - c[2]));
  }
  std::erase_if(cuts, [&](double x) { return x < lo || x > hi; });
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<double> crossings;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double p = cuts[k];
    const double q = cuts[k + 1];
    for (std::size_t i = 0; i < fired.size(); ++i) {
      for (std::size_t j = i + 1; j < fired.size(); ++j) {
        const double dp = fired[i](p) - fired[j](p);
        const double dq = fired[i](q) - fired[j](q);
        if ((dp < 0.0 && dq > 0.0) || (dp > 0.0 && dq < 0.0)) {
          crossings.push_back(p + (q - p) * dp / (dp - dq));
        }
      }
    }
  }
  if (!crossings.empty()) {
    cuts.insert(cuts.end(), crossings.begin(), crossings.end());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  }

  // Walk the uniform cells, merging in the structural cuts as they come.
  double area = 0.0;
  double moment = 0.0;
  double x0 = lo;
  double y0 = detail::aggregate(fired, x0);
  auto piece = [&](double x1) {
    if (!(x1 > x0)) return;
    const double y1 = detail::aggregate(fired, x1);
    const double h = x1 - x0;
    area += 0.5 * h * (y0 + y1);
    moment += h / 6.0 * (x0 * (2.0 * y0 + y1) + x1 * (y0 + 2.0 * y1));
    x0 = x1;
    y0 = y1;
  };
  std::size_t next_cut = 0;
  for (std::size_t i = 1; i <= samples; ++i) {
    const double edge =
        i == samples ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(samples);
    while (next_cut < cuts.size() && cuts[next_cut] < edge) piece(cuts[next_cut++]);
    piece(edge);
  }
  if (!(area > 0.0)) throw NoRuleFired("aggregated output of '" + var.name + "' has zero area");
  return std::clamp(moment / area, lo, hi);
}

/// Strength-scaled physical range of the strongest term:
/// range_min + strength * (range_max - range_min).
/// Ties go to the term whose range midpoint is larger.
inline double defuzzify_paper_range(std::span<const OutputRange> ranges, const TermStrengths& strengths) {
  const OutputRange* best = nullptr;
  double best_strength = 0.0;
  for (const auto& s : strengths.strengths) {
    if (!(s.value > 0.0)) continue;
    auto r = std::find_if(ranges.begin(), ranges.end(), [&](const OutputRange& o) { return iequals(o.term, s.term); });
    if (r == ranges.end()) throw ConfigError("no output range declared for fired term '" + s.term + "'");
    if (best == nullptr || s.value > best_strength ||
        (s.value == best_strength && r->midpoint() > best->midpoint())) {
      best = &*r;
      best_strength = s.value;
    }
  }
  if (best == nullptr) throw NoRuleFired();
  return best->min + best_strength * (best->max - best->min);
}

}  // namespace fuzzctl
