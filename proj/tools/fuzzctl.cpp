// fuzzctl: evaluate, sweep, check, explain and simulate fuzzy controllers.
//
// Exit codes: 0 success, 1 input/file errors, 2 usage errors.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fuzzctl/fuzzctl.hpp"

namespace {

using namespace fuzzctl;

constexpr int kExitInput = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InputFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct LoadedSpec {
  std::string label;  // path or "<bundled>"
  ControllerSpec spec;
  std::vector<dsl::Diagnostic> diagnostics;  // validate() output
};

std::string diag_line(const std::string& label, const dsl::Diagnostic& d) {
  return label + ":" + std::to_string(d.line) + ": " + (d.severity == dsl::Severity::error ? "error: " : "warning: ") +
         d.message;
}

// Resolution order: explicit path, FUZZCTL_SPEC, bundled controller.
// `keep_parse_errors` returns syntax errors as diagnostics instead of failing.
LoadedSpec load_spec(const std::string& path_arg, bool keep_parse_errors = false) {
  std::string path = path_arg;
  if (path.empty()) {
    if (const char* env = std::getenv("FUZZCTL_SPEC"); env != nullptr && *env != '\0') path = env;
  }
  LoadedSpec out;
  if (path.empty()) {
    out.label = "<bundled>";
    out.spec = wash::build_washing_controller();
    out.diagnostics = dsl::validate(out.spec);
    return out;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputFailure("cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  out.label = path;
  auto parsed = dsl::parse_document(text.str());
  if (!parsed.ok() && keep_parse_errors) {
    out.diagnostics = std::move(parsed.diagnostics);
    return out;
  }
  if (!parsed.ok()) {
    std::string msg;
    for (const auto& d : parsed.diagnostics) msg += diag_line(path, d) + "\n";
    msg.pop_back();
    throw InputFailure(msg);
  }
  out.diagnostics = dsl::validate(*parsed.spec, &parsed.source);
  out.spec = std::move(*parsed.spec);
  return out;
}

// For commands that need a usable controller: validation errors are fatal.
Controller load_controller(const std::string& path) {
  auto loaded = load_spec(path);
  if (dsl::has_errors(loaded.diagnostics)) {
    std::string msg;
    for (const auto& d : loaded.diagnostics) {
      if (d.severity == dsl::Severity::error) msg += diag_line(loaded.label, d) + "\n";
    }
    msg.pop_back();
    throw InputFailure(msg);
  }
  return Controller(std::move(loaded.spec));
}

double parse_real(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw UsageError("invalid number for " + what + ": '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(v)) throw UsageError("invalid number for " + what + ": '" + text + "'");
  return v;
}

std::vector<CrispInput> parse_assignments(const Controller& controller, const std::vector<std::string>& sets) {
  std::vector<CrispInput> out;
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--set expects <variable>=<value>, got '" + s + "'");
    const std::string name = to_lower(s.substr(0, eq));
    const LinguisticVariable* var = controller.spec().find_variable(name);
    if (var == nullptr || var->role != Role::input) throw UsageError("--set names unknown input '" + name + "'");
    for (const auto& c : out) {
      if (c.variable == name) throw UsageError("input '" + name + "' set more than once");
    }
    out.push_back({name, parse_real(s.substr(eq + 1), name)});
  }
  for (const LinguisticVariable* var : controller.inputs()) {
    bool present = false;
    for (const auto& c : out) present = present || c.variable == var->name;
    if (!present) throw UsageError("missing --set " + var->name + "=<value>");
  }
  return out;
}

DefuzzMode parse_mode(const std::string& mode) { return mode == "paper" ? DefuzzMode::paper : DefuzzMode::centroid; }

std::string unit_suffix(const LinguisticVariable& var) { return var.universe.unit.empty() ? "" : " " + var.universe.unit; }

int cmd_eval(const std::string& spec_path, const std::vector<std::string>& sets, const std::string& mode) {
  const Controller controller = load_controller(spec_path);
  const auto inputs = parse_assignments(controller, sets);
  const Decision d = controller.evaluate(inputs, parse_mode(mode));
  const auto& out = controller.output();
  std::cout << fmt("%s = %.2f%s (%s)\n", out.name.c_str(), d.value, unit_suffix(out).c_str(), d.dominant_term.c_str());
  std::size_t width = 0;
  for (const auto& s : d.fired.strengths) width = std::max(width, s.term.size());
  for (const auto& s : d.fired.strengths) {
    std::cout << fmt("  %-*s %.2f\n", static_cast<int>(width), s.term.c_str(), s.value);
  }
  return 0;
}

struct Axis {
  const LinguisticVariable* var;
  double lo;
  double hi;
  int count;
  double at(int i) const { return i == count - 1 ? hi : lo + (hi - lo) * i / (count - 1); }
};

int cmd_sweep(const std::string& spec_path, const std::string& grid, const std::vector<std::string>& ranges,
              const std::string& mode, const std::string& out_path) {
  int n = 0;
  int m = 0;
  char tail = 0;
  if (std::sscanf(grid.c_str(), "%dx%d%c", &n, &m, &tail) != 2 || n < 2 || m < 2) {
    throw UsageError("--grid expects NxM with N, M >= 2, got '" + grid + "'");
  }
  const Controller controller = load_controller(spec_path);
  const auto inputs = controller.inputs();
  if (inputs.size() != 2) throw InputFailure("sweep needs a controller with exactly two inputs");
  std::array<Axis, 2> axes{Axis{inputs[0], inputs[0]->universe.lo, inputs[0]->universe.hi, n},
                           Axis{inputs[1], inputs[1]->universe.lo, inputs[1]->universe.hi, m}};
  for (const auto& r : ranges) {
    const auto eq = r.find('=');
    const auto colon = r.find(':', eq == std::string::npos ? 0 : eq);
    if (eq == std::string::npos || colon == std::string::npos) throw UsageError("--range expects <var>=<lo>:<hi>");
    const std::string name = to_lower(r.substr(0, eq));
    Axis* axis = nullptr;
    for (auto& a : axes) {
      if (a.var->name == name) axis = &a;
    }
    if (axis == nullptr) throw UsageError("--range names unknown input '" + name + "'");
    axis->lo = parse_real(r.substr(eq + 1, colon - eq - 1), name);
    axis->hi = parse_real(r.substr(colon + 1), name);
    if (!(axis->lo <= axis->hi)) throw UsageError("--range for '" + name + "' needs lo <= hi");
  }

  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!out_path.empty() && out_path != "-") {
    file.open(out_path, std::ios::binary | std::ios::trunc);
    if (!file) throw InputFailure("cannot write " + out_path);
    os = &file;
  }
  const DefuzzMode dm = parse_mode(mode);
  *os << axes[0].var->name << "," << axes[1].var->name << "," << controller.output().name << "\n";
  std::array<CrispInput, 2> point{CrispInput{axes[0].var->name, 0.0}, CrispInput{axes[1].var->name, 0.0}};
  for (int i = 0; i < n; ++i) {
    point[0].value = axes[0].at(i);
    for (int j = 0; j < m; ++j) {
      point[1].value = axes[1].at(j);
      const double y = controller.evaluate(point, dm).value;
      *os << fmt("%.6f,%.6f,%.6f\n", point[0].value, point[1].value, y);
    }
  }
  os->flush();
  if (!*os) throw InputFailure("write failed: " + (out_path.empty() ? std::string("stdout") : out_path));
  return 0;
}

int cmd_check(const std::string& spec_path) {
  const auto loaded = load_spec(spec_path, true);
  std::size_t errors = 0;
  std::size_t warnings = 0;
  for (const auto& d : loaded.diagnostics) {
    std::cout << diag_line(loaded.label, d) << "\n";
    (d.severity == dsl::Severity::error ? errors : warnings)++;
  }
  if (errors > 0) {
    std::cout << "FAILED: " << errors << " errors, " << warnings << " warnings\n";
    return kExitInput;
  }
  std::cout << "OK: " << loaded.spec.variables.size() << " variables, " << loaded.spec.rules.size() << " rules, "
            << warnings << " warnings\n";
  return 0;
}

int cmd_explain(const std::string& spec_path, const std::vector<std::string>& sets) {
  const Controller controller = load_controller(spec_path);
  const auto inputs = parse_assignments(controller, sets);
  const auto firings = controller.trace(inputs);
  if (firings.empty()) {
    std::cout << "no rules fired\n";
    return 0;
  }
  for (const auto& f : firings) {
    const Rule& rule = controller.spec().rules[f.rule_index];
    const char* join = rule.connective == Connective::all_of ? " & " : " | ";
    std::string lhs;
    std::string detail;
    for (std::size_t i = 0; i < rule.antecedents.size(); ++i) {
      if (i > 0) {
        lhs += join;
        detail += ", ";
      }
      lhs += rule.antecedents[i].term;
      detail += fmt("%s %s %.2f", rule.antecedents[i].variable.c_str(), rule.antecedents[i].term.c_str(),
                    f.antecedent_degrees[i]);
    }
    std::cout << lhs << " → " << rule.consequent.term << fmt(" @ %.2f", f.strength) << "  (" << detail << ")\n";
  }
  return 0;
}

struct SimulateOptions {
  double dirt = 5.0;
  double k = 0.7;
  std::optional<double> pressure;
  double gain = 1.0 / 30.0;
  std::optional<double> baseline;
  wash::SensorCalibration cal;
  sim::ResourceRates rates;
  bool csv = false;
};

int cmd_simulate(const std::string& spec_path, const SimulateOptions& opt, const std::string& mode) {
  sim::LoadProfile load = sim::LoadProfile::from_dirt(opt.dirt, opt.k, opt.cal);
  load.opacity_gain = opt.gain;
  if (opt.pressure) load.pressure_reading = *opt.pressure;
  try {
    load.check();
    opt.cal.check();
    opt.rates.check();
    if (opt.baseline && !(*opt.baseline > 0.0)) throw ConfigError("--baseline must be positive");
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
  const Controller controller = load_controller(spec_path);
  const DefuzzMode dm = parse_mode(mode);
  if (opt.baseline) {
    const auto c = sim::compare_baseline(load, opt.cal, *opt.baseline, dm, opt.rates, controller);
    if (opt.csv) {
      std::cout << sim::csv_row(c.controlled) << "\n" << sim::csv_row(c.baseline) << "\n";
    } else {
      std::cout << sim::format_comparison(c);
    }
    return 0;
  }
  const auto report = sim::run_cycle(load, opt.cal, dm, opt.rates, controller);
  std::cout << (opt.csv ? sim::csv_row(report) + "\n" : sim::format_report(report));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mamdani fuzzy controller toolkit (bundled: washing-machine wash time)"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string mode = "centroid";
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", spec_path, "Controller file (.flc); default $FUZZCTL_SPEC or the bundled controller");
    sub->add_option("--spec", spec_path, "Controller file (.flc)");
  };
  auto add_mode = [&](CLI::App* sub) {
    sub->add_option("--mode", mode, "Defuzzification: centroid or paper")
        ->check(CLI::IsMember({"centroid", "paper"}));
  };

  std::vector<std::string> sets;
  auto* eval = app.add_subcommand("eval", "Evaluate the controller at one input point");
  add_common(eval);
  add_mode(eval);
  eval->add_option("--set", sets, "Input assignment <variable>=<value> (repeatable)");

  std::string grid = "101x101";
  std::string out_path;
  std::vector<std::string> ranges;
  auto* sweep = app.add_subcommand("sweep", "Write the control surface as CSV");
  add_common(sweep);
  add_mode(sweep);
  sweep->add_option("--grid", grid, "Samples per input, NxM (default 101x101)");
  sweep->add_option("--range", ranges, "Sweep bounds <variable>=<lo>:<hi> (default: universe)");
  sweep->add_option("--out", out_path, "Output CSV path (default stdout)");

  auto* check = app.add_subcommand("check", "Parse and validate a controller file");
  add_common(check);

  auto* explain = app.add_subcommand("explain", "List the rules that fire at one input point");
  add_common(explain);
  explain->add_option("--set", sets, "Input assignment <variable>=<value> (repeatable)");

  SimulateOptions sim_opt;
  double baseline = 0.0;
  auto* simulate = app.add_subcommand("simulate", "Simulate a wash cycle");
  add_common(simulate);
  add_mode(simulate);
  simulate->add_option("--dirt", sim_opt.dirt, "Initial dirt on the load, 0-30");
  simulate->add_option("--k", sim_opt.k, "Dirt release rate per minute");
  simulate->add_option("--pressure", sim_opt.pressure, "Pressure sensor counts (default: calibrated from --dirt)");
  simulate->add_option("--gain", sim_opt.gain, "Opacity per dirt unit in the water");
  auto* baseline_opt = simulate->add_option("--baseline", baseline, "Also run a fixed-timer cycle of this many minutes");
  simulate->add_option("--fraction", sim_opt.cal.opacity_asymptote_fraction, "Opacity asymptote fraction for saturation");
  simulate->add_option("--pressure-min", sim_opt.cal.pressure_min, "Counts read as dirtiness 0");
  simulate->add_option("--pressure-max", sim_opt.cal.pressure_max, "Counts read as dirtiness 30");
  simulate->add_option("--fill-volume", sim_opt.rates.fill_volume_l, "Liters per fill");
  simulate->add_option("--power", sim_opt.rates.agitation_power_w, "Agitation power, watts");
  simulate->add_option("--clean-threshold", sim_opt.rates.clean_threshold, "Residual dirt regarded as clean");
  simulate->add_option("--max-reruns", sim_opt.rates.max_reruns, "Maximum re-run cycles");
  simulate->add_option("--probe-minutes", sim_opt.rates.probe_minutes, "Sensing agitation length");
  simulate->add_option("--dt", sim_opt.rates.dt, "Simulation step, minutes");
  simulate->add_flag("--csv", sim_opt.csv, "Print total_time,total_water,total_energy,final_dirt,reruns");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*eval) return cmd_eval(spec_path, sets, mode);
    if (*sweep) return cmd_sweep(spec_path, grid, ranges, mode, out_path);
    if (*check) return cmd_check(spec_path);
    if (*explain) return cmd_explain(spec_path, sets);
    if (*simulate) {
      if (*baseline_opt) sim_opt.baseline = baseline;
      return cmd_simulate(spec_path, sim_opt, mode);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\nrun with --help for usage\n";
    return kExitUsage;
  } catch (const InputFailure& e) {
    std::cerr << e.what() << "\n";
    return kExitInput;
  } catch (const fuzzctl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitUsage;
}
