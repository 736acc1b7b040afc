#pragma once

// Line-oriented controller definition language (`.flc`):
//
//   CONTROLLER <name>
//   VAR (INPUT|OUTPUT) <name> RANGE <lo> <hi> [UNIT <label>]
//     TERM <name> (TRI <a> <b> <c> | TRAP <a> <b> <c> <d>)
//     ALIAS <name> = <term>
//   RANGES <output-var>
//     <term> <min> <max>
//   RULE IF <var> IS <term> (AND|OR <var> IS <term>)* THEN <var> IS <term>
//
// Keywords and identifiers are case-insensitive; identifiers are stored in
// lower case. `#` starts a comment.

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "fuzzctl/controller_spec.hpp"
#include "fuzzctl/membership.hpp"

namespace fuzzctl::dsl {

enum class Severity { error, warning };

struct Diagnostic {
  Severity severity = Severity::error;
  int line = 1;
  std::string message;
  bool operator==(const Diagnostic&) const = default;
};

inline std::string to_string(const Diagnostic& d) {
  return "line " + std::to_string(d.line) + ": " + (d.severity == Severity::error ? "error: " : "warning: ") +
         d.message;
}

inline bool has_errors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) { return d.severity == Severity::error; });
}

// Source lines of the declarations in a parsed document (1-based).
struct SourceMap {
  int controller_line = 1;
  std::vector<int> variable_lines;
  int ranges_line = 0;
  std::vector<int> rule_lines;
};

struct ParseResult {
  std::optional<ControllerSpec> spec;  // set iff there are no errors
  SourceMap source;
  std::vector<Diagnostic> diagnostics;

  bool ok() const noexcept { return spec.has_value(); }
};

/// Shortest decimal (no exponent) that reads back to the same double.
inline std::string format_number(double x) {
  std::array<char, 512> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::fixed);
  if (ec != std::errc{}) throw ConfigError("number not representable in fixed notation");
  return std::string(buf.data(), end);
}

namespace detail {

enum class Keyword {
  none, controller, var, input, output, range, unit, term, tri, trap, alias, ranges, rule, if_, is, and_, or_, then
};

inline Keyword keyword_of(std::string_view tok) {
  static constexpr std::pair<std::string_view, Keyword> table[] = {
      {"controller", Keyword::controller}, {"var", Keyword::var},     {"input", Keyword::input},
      {"output", Keyword::output},         {"range", Keyword::range}, {"unit", Keyword::unit},
      {"term", Keyword::term},             {"tri", Keyword::tri},     {"trap", Keyword::trap},
      {"alias", Keyword::alias},           {"ranges", Keyword::ranges}, {"rule", Keyword::rule},
      {"if", Keyword::if_},                {"is", Keyword::is},       {"and", Keyword::and_},
      {"or", Keyword::or_},                {"then", Keyword::then},
  };
  for (const auto& [word, kw] : table) {
    if (iequals(word, tok)) return kw;
  }
  return Keyword::none;
}

inline bool is_identifier(std::string_view tok) {
  if (tok.empty()) return false;
  const auto head = static_cast<unsigned char>(tok.front());
  if (!(std::isalpha(head) || head == '_')) return false;
  for (char c : tok) {
    const auto u = static_cast<unsigned char>(c);
    if (!(std::isalnum(u) || u == '_')) return false;
  }
  return keyword_of(tok) == Keyword::none;
}

// -?digits[.digits]
inline std::optional<double> parse_number(std::string_view tok) {
  std::size_t i = 0;
  if (i < tok.size() && tok[i] == '-') ++i;
  const std::size_t int_start = i;
  while (i < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i]))) ++i;
  if (i == int_start) return std::nullopt;
  if (i < tok.size() && tok[i] == '.') {
    const std::size_t frac_start = ++i;
    while (i < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i]))) ++i;
    if (i == frac_start) return std::nullopt;
  }
  if (i != tok.size()) return std::nullopt;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value, std::chars_format::fixed);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) return std::nullopt;
  return value;
}

inline std::vector<std::string_view> tokenize(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '=') {
      out.push_back(text.substr(i, 1));
      ++i;
    } else {
      const std::size_t start = i;
      while (i < text.size() && text[i] != '=' && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
      out.push_back(text.substr(start, i - start));
    }
  }
  return out;
}

inline std::string squote(std::string_view s) { return "'" + std::string(s) + "'"; }

class Parser {
 public:
  ParseResult run(std::string_view source) {
    if (source.starts_with("\xEF\xBB\xBF")) source.remove_prefix(3);
    int number = 0;
    std::size_t pos = 0;
    while (pos <= source.size()) {
      const std::size_t nl = source.find('\n', pos);
      std::string_view line = source.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
      ++number;
      if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      parse_line(number, tokenize(line));
      if (nl == std::string_view::npos) break;
      pos = nl + 1;
      if (pos == source.size()) break;  // trailing newline does not open a new line
    }
    last_line_ = std::max(number, 1);
    finish();
    return std::move(result_);
  }

 private:
  struct PendingClause {
    std::string variable;
    std::string term;
  };
  struct PendingRule {
    int line;
    std::vector<PendingClause> antecedents;
    Connective connective;
    PendingClause consequent;
  };
  struct PendingRange {
    int line;
    std::string term;
    double min;
    double max;
  };

  void error(int line, std::string message) {
    result_.diagnostics.push_back({Severity::error, line, std::move(message)});
  }

  void parse_line(int line, const std::vector<std::string_view>& tok) {
    if (tok.empty()) return;
    const Keyword kw = keyword_of(tok[0]);
    if (kw != Keyword::term && kw != Keyword::alias && kw != Keyword::none) in_ranges_ = false;
    switch (kw) {
      case Keyword::controller: return parse_controller(line, tok);
      case Keyword::var: return parse_var(line, tok);
      case Keyword::term: return parse_term(line, tok);
      case Keyword::alias: return parse_alias(line, tok);
      case Keyword::ranges: return parse_ranges_header(line, tok);
      case Keyword::rule: return parse_rule(line, tok);
      case Keyword::none:
        if (in_ranges_) return parse_range_entry(line, tok);
        return error(line, "syntax error: unexpected " + squote(tok[0]));
      default:
        return error(line, "syntax error: unexpected keyword " + squote(tok[0]) + " at start of line");
    }
  }

  void parse_controller(int line, const std::vector<std::string_view>& tok) {
    close_var_block();
    if (tok.size() != 2 || !is_identifier(tok[1])) return error(line, "syntax error: expected CONTROLLER <name>");
    if (controller_line_ != 0) return error(line, "duplicate CONTROLLER declaration");
    controller_line_ = line;
    spec_.name = to_lower(tok[1]);
  }

  void parse_var(int line, const std::vector<std::string_view>& tok) {
    close_var_block();
    skipping_block_ = true;
    if (tok.size() != 6 && tok.size() != 8) {
      return error(line, "syntax error: expected VAR (INPUT|OUTPUT) <name> RANGE <lo> <hi> [UNIT <label>]");
    }
    const Keyword role = keyword_of(tok[1]);
    if (role != Keyword::input && role != Keyword::output) {
      return error(line, "syntax error: expected INPUT or OUTPUT, found " + squote(tok[1]));
    }
    if (!is_identifier(tok[2])) return error(line, "syntax error: invalid variable name " + squote(tok[2]));
    if (keyword_of(tok[3]) != Keyword::range) return error(line, "syntax error: expected RANGE, found " + squote(tok[3]));
    const auto lo = parse_number(tok[4]);
    const auto hi = parse_number(tok[5]);
    if (!lo || !hi) return error(line, "syntax error: RANGE bounds must be decimal numbers");
    if (!(*lo < *hi)) return error(line, "RANGE lower bound must be below upper bound");
    std::string unit;
    if (tok.size() == 8) {
      if (keyword_of(tok[6]) != Keyword::unit) return error(line, "syntax error: expected UNIT, found " + squote(tok[6]));
      unit = std::string(tok[7]);
    }
    const std::string name = to_lower(tok[2]);
    if (spec_.find_variable(name) != nullptr) return error(line, "duplicate variable " + squote(name));

    LinguisticVariable var;
    var.name = name;
    var.role = role == Keyword::input ? Role::input : Role::output;
    var.universe = Universe{*lo, *hi, std::move(unit)};
    spec_.variables.push_back(std::move(var));
    result_.source.variable_lines.push_back(line);
    current_var_ = spec_.variables.size() - 1;
    skipping_block_ = false;
  }

  LinguisticVariable* block_var(int line, std::string_view what) {
    if (current_var_) return &spec_.variables[*current_var_];
    if (!skipping_block_) error(line, std::string(what) + " outside a VAR block");
    return nullptr;
  }

  bool name_taken(const LinguisticVariable& var, std::string_view name) const {
    return std::any_of(var.terms.begin(), var.terms.end(), [&](const Term& t) { return t.name == name; }) ||
           std::any_of(var.aliases.begin(), var.aliases.end(), [&](const Alias& a) { return a.name == name; });
  }

  void parse_term(int line, const std::vector<std::string_view>& tok) {
    LinguisticVariable* var = block_var(line, "TERM");
    if (var == nullptr) return;
    if (tok.size() < 3 || !is_identifier(tok[1])) return error(line, "syntax error: expected TERM <name> (TRI|TRAP) ...");
    const Keyword shape = keyword_of(tok[2]);
    const std::size_t arity = shape == Keyword::tri ? 3 : shape == Keyword::trap ? 4 : 0;
    if (arity == 0) return error(line, "syntax error: expected TRI or TRAP, found " + squote(tok[2]));
    if (tok.size() != 3 + arity) {
      return error(line, "syntax error: " + std::string(shape == Keyword::tri ? "TRI" : "TRAP") + " takes " +
                             std::to_string(arity) + " breakpoints");
    }
    std::array<double, 4> pts{};
    for (std::size_t i = 0; i < arity; ++i) {
      const auto v = parse_number(tok[3 + i]);
      if (!v) return error(line, "syntax error: breakpoint " + squote(tok[3 + i]) + " is not a decimal number");
      pts[i] = *v;
    }
    const std::string name = to_lower(tok[1]);
    if (name_taken(*var, name)) return error(line, "duplicate term " + squote(name) + " in variable " + squote(var->name));
    for (std::size_t i = 1; i < arity; ++i) {
      if (pts[i] < pts[i - 1]) return error(line, "breakpoints of term " + squote(name) + " must be non-decreasing");
    }
    for (std::size_t i = 0; i < arity; ++i) {
      if (pts[i] < var->universe.lo || pts[i] > var->universe.hi) {
        return error(line, "breakpoints of term " + squote(name) + " lie outside RANGE " +
                               format_number(var->universe.lo) + " " + format_number(var->universe.hi));
      }
    }
    auto mf = arity == 3 ? MembershipFunction::triangular(pts[0], pts[1], pts[2])
                         : MembershipFunction::trapezoidal(pts[0], pts[1], pts[2], pts[3]);
    var->terms.push_back(Term{name, mf});
  }

  void parse_alias(int line, const std::vector<std::string_view>& tok) {
    LinguisticVariable* var = block_var(line, "ALIAS");
    if (var == nullptr) return;
    if (tok.size() != 4 || tok[2] != "=" || !is_identifier(tok[1]) || !is_identifier(tok[3])) {
      return error(line, "syntax error: expected ALIAS <name> = <term>");
    }
    const std::string name = to_lower(tok[1]);
    const std::string target = to_lower(tok[3]);
    if (name_taken(*var, name)) return error(line, "duplicate term " + squote(name) + " in variable " + squote(var->name));
    auto it = std::find_if(var->terms.begin(), var->terms.end(), [&](const Term& t) { return t.name == target; });
    if (it == var->terms.end()) return error(line, "unknown term " + squote(target) + " in variable " + squote(var->name));
    var->aliases.push_back(Alias{name, target});
  }

  void parse_ranges_header(int line, const std::vector<std::string_view>& tok) {
    close_var_block();
    if (tok.size() != 2 || !is_identifier(tok[1])) return error(line, "syntax error: expected RANGES <output-var>");
    if (ranges_line_ != 0) return error(line, "duplicate RANGES block");
    ranges_line_ = line;
    ranges_var_ = to_lower(tok[1]);
    in_ranges_ = true;
  }

  void parse_range_entry(int line, const std::vector<std::string_view>& tok) {
    if (tok.size() != 3 || !is_identifier(tok[0])) return error(line, "syntax error: expected <term> <min> <max>");
    const auto lo = parse_number(tok[1]);
    const auto hi = parse_number(tok[2]);
    if (!lo || !hi) return error(line, "syntax error: range bounds must be decimal numbers");
    if (*lo > *hi) return error(line, "range minimum exceeds maximum");
    ranges_.push_back({line, to_lower(tok[0]), *lo, *hi});
  }

  void parse_rule(int line, const std::vector<std::string_view>& tok) {
    close_var_block();
    std::size_t i = 1;
    auto expect_kw = [&](Keyword kw, const char* what) {
      if (i < tok.size() && keyword_of(tok[i]) == kw) {
        ++i;
        return true;
      }
      error(line, std::string("syntax error: expected ") + what +
                      (i < tok.size() ? ", found " + squote(tok[i]) : std::string(" at end of line")));
      return false;
    };
    auto clause = [&](PendingClause& out) {
      if (i >= tok.size() || !is_identifier(tok[i])) {
        error(line, "syntax error: expected variable name" +
                        (i < tok.size() ? ", found " + squote(tok[i]) : std::string(" at end of line")));
        return false;
      }
      out.variable = to_lower(tok[i++]);
      if (!expect_kw(Keyword::is, "IS")) return false;
      if (i >= tok.size() || !is_identifier(tok[i])) {
        error(line, "syntax error: expected term name" +
                        (i < tok.size() ? ", found " + squote(tok[i]) : std::string(" at end of line")));
        return false;
      }
      out.term = to_lower(tok[i++]);
      return true;
    };

    if (!expect_kw(Keyword::if_, "IF")) return;
    PendingRule rule{line, {}, Connective::all_of, {}};
    std::optional<Connective> connective;
    for (;;) {
      PendingClause c;
      if (!clause(c)) return;
      rule.antecedents.push_back(std::move(c));
      if (i >= tok.size()) return error(line, "syntax error: expected AND, OR or THEN at end of line");
      const Keyword kw = keyword_of(tok[i]);
      if (kw == Keyword::then) {
        ++i;
        break;
      }
      if (kw != Keyword::and_ && kw != Keyword::or_) {
        return error(line, "syntax error: expected AND, OR or THEN, found " + squote(tok[i]));
      }
      const Connective next = kw == Keyword::and_ ? Connective::all_of : Connective::any_of;
      if (connective && *connective != next) return error(line, "mixed AND/OR in one rule");
      connective = next;
      ++i;
    }
    if (!clause(rule.consequent)) return;
    if (i != tok.size()) return error(line, "syntax error: unexpected " + squote(tok[i]) + " after consequent");
    rule.connective = connective.value_or(Connective::all_of);
    rules_.push_back(std::move(rule));
  }

  void close_var_block() {
    current_var_.reset();
    skipping_block_ = false;
  }

  // Resolves a clause against the declared variables; returns the canonical term name.
  std::optional<std::string> resolve(int line, const PendingClause& c, Role expected) {
    const LinguisticVariable* var = spec_.find_variable(c.variable);
    if (var == nullptr) {
      error(line, "unknown variable " + squote(c.variable));
      return std::nullopt;
    }
    if (var->role != expected) {
      error(line, squote(c.variable) + " is not an " + to_string(expected) + " variable");
      return std::nullopt;
    }
    const Term* term = var->find_term(c.term);
    if (term == nullptr) {
      error(line, "unknown term " + squote(c.term) + " for variable " + squote(c.variable));
      return std::nullopt;
    }
    return term->name;
  }

  void finish() {
    if (controller_line_ == 0) error(1, "missing CONTROLLER declaration");
    result_.source.controller_line = controller_line_ == 0 ? 1 : controller_line_;

    std::size_t outputs = 0;
    std::size_t inputs = 0;
    for (std::size_t v = 0; v < spec_.variables.size(); ++v) {
      const auto& var = spec_.variables[v];
      const int line = result_.source.variable_lines[v];
      if (var.terms.empty()) error(line, "variable " + squote(var.name) + " declares no terms");
      if (var.role == Role::output && ++outputs > 1) error(line, "only one OUTPUT variable is supported");
      if (var.role == Role::input) ++inputs;
    }
    if (outputs == 0) error(last_line_, "no OUTPUT variable declared");
    if (inputs == 0) error(last_line_, "no INPUT variable declared");

    if (ranges_line_ != 0) {
      result_.source.ranges_line = ranges_line_;
      const LinguisticVariable* out = spec_.find_variable(ranges_var_);
      if (out == nullptr || out->role != Role::output) {
        error(ranges_line_, "RANGES refers to " + squote(ranges_var_) + ", which is not an OUTPUT variable");
      } else {
        for (const auto& r : ranges_) {
          const Term* term = out->find_term(r.term);
          if (term == nullptr) {
            error(r.line, "unknown term " + squote(r.term) + " for variable " + squote(out->name));
            continue;
          }
          auto dup = std::find_if(spec_.output_ranges.begin(), spec_.output_ranges.end(),
                                  [&](const OutputRange& o) { return o.term == term->name; });
          if (dup != spec_.output_ranges.end()) {
            error(r.line, "duplicate range for term " + squote(term->name));
            continue;
          }
          spec_.output_ranges.push_back({term->name, r.min, r.max});
        }
        for (const auto& t : out->terms) {
          auto it = std::find_if(spec_.output_ranges.begin(), spec_.output_ranges.end(),
                                 [&](const OutputRange& o) { return o.term == t.name; });
          if (it == spec_.output_ranges.end()) error(ranges_line_, "RANGES has no entry for term " + squote(t.name));
        }
      }
    }

    for (const auto& pending : rules_) {
      Rule rule;
      rule.connective = pending.connective;
      bool ok = true;
      for (const auto& c : pending.antecedents) {
        auto term = resolve(pending.line, c, Role::input);
        if (!term) {
          ok = false;
          continue;
        }
        rule.antecedents.push_back({c.variable, *term});
      }
      auto term = resolve(pending.line, pending.consequent, Role::output);
      if (!term || !ok) continue;
      rule.consequent = {pending.consequent.variable, *term};
      spec_.rules.push_back(std::move(rule));
      result_.source.rule_lines.push_back(pending.line);
    }

    std::stable_sort(result_.diagnostics.begin(), result_.diagnostics.end(),
                     [](const Diagnostic& a, const Diagnostic& b) { return a.line < b.line; });
    if (result_.diagnostics.empty()) result_.spec = std::move(spec_);
  }

  ParseResult result_;
  ControllerSpec spec_;
  int controller_line_ = 0;
  int last_line_ = 1;
  std::optional<std::size_t> current_var_;
  bool skipping_block_ = false;
  bool in_ranges_ = false;
  int ranges_line_ = 0;
  std::string ranges_var_;
  std::vector<PendingRange> ranges_;
  std::vector<PendingRule> rules_;
};

}  // namespace detail

/// Parses a `.flc` document. On failure `spec` is empty and `diagnostics`
/// holds every error found, each with its source line.
inline ParseResult parse_document(std::string_view source) { return detail::Parser{}.run(source); }

/// Canonical text form: declarations, then RANGES, then rules; identifiers
/// in lower case; numbers in shortest exact decimal.
inline std::string serialize(const ControllerSpec& spec) {
  std::string out = "CONTROLLER " + spec.name + "\n";
  for (const auto& var : spec.variables) {
    out += "\nVAR ";
    out += to_string(var.role);
    out += " " + var.name + " RANGE " + format_number(var.universe.lo) + " " + format_number(var.universe.hi);
    if (!var.universe.unit.empty()) out += " UNIT " + var.universe.unit;
    out += "\n";
    for (const auto& t : var.terms) {
      out += "  TERM " + t.name + " " + to_string(t.shape.kind());
      const auto pts = t.shape.breakpoints();
      for (std::size_t i = 0; i < t.shape.breakpoint_count(); ++i) out += " " + format_number(pts[i]);
      out += "\n";
    }
    for (const auto& a : var.aliases) out += "  ALIAS " + a.name + " = " + a.term + "\n";
  }
  if (!spec.output_ranges.empty()) {
    const LinguisticVariable* output = spec.output();
    out += "\nRANGES " + (output != nullptr ? output->name : std::string{}) + "\n";
    for (const auto& r : spec.output_ranges) {
      out += "  " + r.term + " " + format_number(r.min) + " " + format_number(r.max) + "\n";
    }
  }
  if (!spec.rules.empty()) out += "\n";
  for (const auto& rule : spec.rules) {
    out += "RULE IF ";
    for (std::size_t i = 0; i < rule.antecedents.size(); ++i) {
      if (i > 0) out += std::string(" ") + to_string(rule.connective) + " ";
      out += rule.antecedents[i].variable + " IS " + rule.antecedents[i].term;
    }
    out += " THEN " + rule.consequent.variable + " IS " + rule.consequent.term + "\n";
  }
  return out;
}

namespace detail {

inline std::string short_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

// Canonical antecedent key: connective plus sorted clauses. A single clause
// reads the same under AND and OR.
inline std::pair<Connective, std::vector<std::pair<std::string, std::string>>> antecedent_key(const Rule& r) {
  std::vector<std::pair<std::string, std::string>> clauses;
  for (const auto& c : r.antecedents) clauses.emplace_back(to_lower(c.variable), to_lower(c.term));
  std::sort(clauses.begin(), clauses.end());
  clauses.erase(std::unique(clauses.begin(), clauses.end()), clauses.end());
  return {clauses.size() == 1 ? Connective::all_of : r.connective, std::move(clauses)};
}

inline bool covers(const Rule& rule, const std::vector<const LinguisticVariable*>& inputs,
                   const std::vector<std::size_t>& combo) {
  auto matches = [&](const Clause& c) {
    for (std::size_t v = 0; v < inputs.size(); ++v) {
      if (iequals(inputs[v]->name, c.variable)) return iequals(inputs[v]->terms[combo[v]].name, c.term);
    }
    return false;
  };
  return rule.connective == Connective::all_of
             ? std::all_of(rule.antecedents.begin(), rule.antecedents.end(), matches)
             : std::any_of(rule.antecedents.begin(), rule.antecedents.end(), matches);
}

}  // namespace detail

/// Semantic checks on a spec that already parses:
///  - warning for each universe stretch where every term is 0 (1001-point grid)
///  - warning for each input-term combination no rule covers
///  - error for rules with identical antecedents and different consequents
///  - warning for exact duplicate rules
/// Line numbers come from `source` when given, otherwise from the canonical
/// serialization of `spec`.
inline std::vector<Diagnostic> validate(const ControllerSpec& spec, const SourceMap* source = nullptr) {
  SourceMap canonical;
  if (source == nullptr) {
    auto reparsed = parse_document(serialize(spec));
    if (!reparsed.ok()) return reparsed.diagnostics;
    canonical = std::move(reparsed.source);
    source = &canonical;
  }
  auto var_line = [&](std::size_t v) {
    return v < source->variable_lines.size() ? source->variable_lines[v] : source->controller_line;
  };
  auto rule_line = [&](std::size_t r) {
    return r < source->rule_lines.size() ? source->rule_lines[r] : source->controller_line;
  };

  std::vector<Diagnostic> diags;

  constexpr int kGridPoints = 1001;
  for (std::size_t v = 0; v < spec.variables.size(); ++v) {
    const auto& var = spec.variables[v];
    const double lo = var.universe.lo;
    const double hi = var.universe.hi;
    std::optional<double> gap_start;
    double gap_end = lo;
    auto flush = [&] {
      if (gap_start) {
        diags.push_back({Severity::warning, var_line(v),
                         "coverage gap in " + detail::squote(var.name) + " over [" + detail::short_number(*gap_start) +
                             ", " + detail::short_number(gap_end) + "]"});
        gap_start.reset();
      }
    };
    for (int i = 0; i < kGridPoints; ++i) {
      const double x = i == kGridPoints - 1 ? hi : lo + (hi - lo) * i / (kGridPoints - 1);
      const bool covered = std::any_of(var.terms.begin(), var.terms.end(), [&](const Term& t) { return t.shape(x) > 0.0; });
      if (covered) {
        flush();
      } else {
        if (!gap_start) gap_start = x;
        gap_end = x;
      }
    }
    flush();
  }

  const auto inputs = spec.inputs();
  const bool enumerable = !inputs.empty() && std::none_of(inputs.begin(), inputs.end(), [](const LinguisticVariable* v) {
    return v->terms.empty();
  });
  if (enumerable) {
    std::vector<std::size_t> combo(inputs.size(), 0);
    bool done = false;
    while (!done) {
      const bool covered = std::any_of(spec.rules.begin(), spec.rules.end(),
                                       [&](const Rule& r) { return detail::covers(r, inputs, combo); });
      if (!covered) {
        std::string label;
        for (std::size_t v = 0; v < inputs.size(); ++v) {
          if (v > 0) label += "×";
          label += inputs[v]->label(inputs[v]->terms[combo[v]].name);
        }
        diags.push_back({Severity::warning, source->controller_line, "uncovered combination " + label});
      }
      // Last input varies fastest.
      for (std::size_t v = inputs.size();;) {
        if (v == 0) {
          done = true;
          break;
        }
        --v;
        if (++combo[v] < inputs[v]->terms.size()) break;
        combo[v] = 0;
      }
    }
  }

  for (std::size_t j = 1; j < spec.rules.size(); ++j) {
    const auto key_j = detail::antecedent_key(spec.rules[j]);
    for (std::size_t i = 0; i < j; ++i) {
      if (detail::antecedent_key(spec.rules[i]) != key_j) continue;
      const bool same = iequals(spec.rules[i].consequent.variable, spec.rules[j].consequent.variable) &&
                        iequals(spec.rules[i].consequent.term, spec.rules[j].consequent.term);
      if (same) {
        diags.push_back({Severity::warning, rule_line(j),
                         "duplicate rule (same as line " + std::to_string(rule_line(i)) + ")"});
      } else {
        diags.push_back({Severity::error, rule_line(j),
                         "conflicting consequents: line " + std::to_string(rule_line(i)) + " maps the same antecedents to " +
                             detail::squote(spec.rules[i].consequent.term)});
      }
      break;
    }
  }

  std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) { return a.line < b.line; });
  return diags;
}

}  // namespace fuzzctl::dsl
