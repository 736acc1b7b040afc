#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "fuzzctl/controller.hpp"
#include "fuzzctl/errors.hpp"
#include "fuzzctl/washctl.hpp"

namespace fuzzctl::sim {

// Physical stand-in for a laundry load.
struct LoadProfile {
  double initial_dirt = 5.0;            // dirt units, 0-30
  double release_rate = 0.7;            // k, per minute
  double opacity_gain = 1.0 / 30.0;     // opacity per dirt unit in the water
  double pressure_reading = 170.5;      // sensor counts

  // Load whose pressure reading is the calibrated image of its dirt.
  static LoadProfile from_dirt(double dirt, double release_rate, const wash::SensorCalibration& cal = {}) {
    LoadProfile load;
    load.initial_dirt = dirt;
    load.release_rate = release_rate;
    load.pressure_reading = cal.pressure_min + dirt / wash::kDirtinessMax * (cal.pressure_max - cal.pressure_min);
    return load;
  }

  void check() const {
    if (!(initial_dirt >= 0.0 && initial_dirt <= wash::kDirtinessMax)) throw ConfigError("initial dirt must lie in [0,30]");
    if (!(release_rate > 0.0) || !std::isfinite(release_rate)) throw ConfigError("release rate k must be positive");
    if (!(opacity_gain > 0.0) || !std::isfinite(opacity_gain)) throw ConfigError("opacity gain must be positive");
    if (!std::isfinite(pressure_reading)) throw ConfigError("pressure reading must be finite");
  }
};

struct ResourceRates {
  double fill_volume_l = 40.0;
  double agitation_power_w = 500.0;
  double clean_threshold = 1.0;  // residual dirt regarded as clean
  int max_reruns = 3;
  double probe_minutes = 3.0;
  double dt = 0.05;  // agitation step, minutes

  void check() const {
    auto positive = [](double x) { return x > 0.0 && std::isfinite(x); };
    if (!positive(fill_volume_l) || !positive(agitation_power_w) || !positive(clean_threshold) ||
        !positive(probe_minutes) || !positive(dt)) {
      throw ConfigError("resource rates must be positive");
    }
    if (max_reruns < 0) throw ConfigError("max_reruns must be non-negative");
  }
};

struct CycleState {
  double residual_dirt = 0.0;   // on the clothes
  double water_dirt = 0.0;      // in the current fill
  double water_opacity = 0.0;
  double elapsed = 0.0;         // minutes
  double water_used = 0.0;      // liters
  double energy_used = 0.0;     // watt-hours
  int reruns = 0;
};

/// Advances agitation by dt minutes: d(t+dt) = d(t) exp(-k dt), the released
/// dirt goes into the water and clouds it.
inline CycleState step(const CycleState& state, const LoadProfile& load, double dt, double agitation_power_w = 500.0) {
  if (!(dt > 0.0)) throw ConfigError("step needs dt > 0");
  CycleState next = state;
  next.residual_dirt = state.residual_dirt * std::exp(-load.release_rate * dt);
  const double transfer = state.residual_dirt - next.residual_dirt;
  next.water_dirt = state.water_dirt + transfer;
  next.water_opacity = std::min(1.0, load.opacity_gain * next.water_dirt);
  next.elapsed = state.elapsed + dt;
  next.energy_used = state.energy_used + agitation_power_w * dt / 60.0;
  return next;
}

enum class PhaseKind { fill, probe, wash, drain };

inline const char* to_string(PhaseKind kind) noexcept {
  switch (kind) {
    case PhaseKind::fill: return "fill";
    case PhaseKind::probe: return "probe";
    case PhaseKind::wash: return "wash";
    case PhaseKind::drain: return "drain";
  }
  return "?";
}

struct Phase {
  PhaseKind kind = PhaseKind::fill;
  double minutes = 0.0;
  double water = 0.0;
  double energy = 0.0;
  double dirt_removed = 0.0;
};

// Sensing and decision of one wash round.
struct WashRound {
  double dirtiness = 0.0;
  double saturation = 0.0;
  double wash_time = 0.0;
  std::string dominant_term;
};

// Dirt bookkeeping of one fill of water, closed when it is drained.
struct FillLedger {
  double removed_from_clothes = 0.0;
  double carried_by_water = 0.0;
};

struct CycleReport {
  double total_time = 0.0;
  double total_water = 0.0;
  double total_energy = 0.0;
  double final_dirt = 0.0;
  int reruns = 0;
  int fills = 0;
  bool clean = false;
  std::vector<Phase> phases;
  std::vector<WashRound> rounds;
  std::vector<FillLedger> fill_ledger;
};

namespace detail {

class CycleRun {
 public:
  CycleRun(const LoadProfile& load, const ResourceRates& rates) : load_(load), rates_(rates) {
    state_.residual_dirt = load.initial_dirt;
  }

  void fill() {
    state_.water_dirt = 0.0;
    state_.water_opacity = 0.0;
    state_.water_used += rates_.fill_volume_l;
    fill_start_dirt_ = state_.residual_dirt;
    report_.phases.push_back({PhaseKind::fill, 0.0, rates_.fill_volume_l, 0.0, 0.0});
    ++report_.fills;
  }

  void drain() {
    report_.fill_ledger.push_back({fill_start_dirt_ - state_.residual_dirt, state_.water_dirt});
    state_.water_dirt = 0.0;
    state_.water_opacity = 0.0;
    report_.phases.push_back({PhaseKind::drain, 0.0, 0.0, 0.0, 0.0});
  }

  // Agitates for `minutes`; samples the opacity after every step when asked.
  void agitate(PhaseKind kind, double minutes, std::vector<wash::OpacitySample>* series = nullptr) {
    const CycleState before = state_;
    if (series != nullptr) series->push_back({0.0, state_.water_opacity});
    double t = 0.0;
    while (t < minutes) {
      const double dt = std::min(rates_.dt, minutes - t);
      state_ = step(state_, load_, dt, rates_.agitation_power_w);
      t = (minutes - t - dt <= 0.0) ? minutes : t + dt;
      if (series != nullptr) series->push_back({t, state_.water_opacity});
    }
    report_.phases.push_back({kind, minutes, 0.0, state_.energy_used - before.energy_used,
                              before.residual_dirt - state_.residual_dirt});
  }

  CycleState& state() { return state_; }
  CycleReport& report() { return report_; }

  CycleReport finish() {
    for (const auto& p : report_.phases) {
      report_.total_time += p.minutes;
      report_.total_water += p.water;
      report_.total_energy += p.energy;
    }
    report_.final_dirt = state_.residual_dirt;
    report_.reruns = state_.reruns;
    report_.clean = state_.residual_dirt <= rates_.clean_threshold;
    return std::move(report_);
  }

 private:
  const LoadProfile& load_;
  const ResourceRates& rates_;
  CycleState state_;
  CycleReport report_;
  double fill_start_dirt_ = 0.0;
};

}  // namespace detail

/// One full controlled cycle: fill, probe (pressure and opacity sensing),
/// wash for the decided time, then drain/refill/re-sense/re-wash while the
/// load is above the clean threshold, at most `max_reruns` times.
inline CycleReport run_cycle(const LoadProfile& load, const wash::SensorCalibration& cal,
                             DefuzzMode mode = DefuzzMode::centroid, const ResourceRates& rates = {},
                             const Controller& controller = wash::washing_controller()) {
  load.check();
  cal.check();
  rates.check();

  detail::CycleRun run(load, rates);
  run.fill();
  for (;;) {
    // Pressure scales with the dirt still on the clothes.
    const double share = load.initial_dirt > 0.0 ? run.state().residual_dirt / load.initial_dirt : 0.0;
    const double counts = run.report().rounds.empty()
                              ? load.pressure_reading
                              : cal.pressure_min + (load.pressure_reading - cal.pressure_min) * share;
    WashRound round;
    round.dirtiness = wash::pressure_to_dirtiness(counts, cal);

    std::vector<wash::OpacitySample> series;
    run.agitate(PhaseKind::probe, rates.probe_minutes, &series);
    round.saturation = wash::opacity_to_saturation(series, cal);

    auto decision = wash::wash_time(round.dirtiness, round.saturation, mode, controller);
    round.wash_time = decision.wash_time;
    round.dominant_term = decision.dominant_term;
    run.report().rounds.push_back(round);
    run.agitate(PhaseKind::wash, decision.wash_time);

    if (run.state().residual_dirt <= rates.clean_threshold || run.state().reruns >= rates.max_reruns) break;
    run.drain();
    run.fill();
    ++run.state().reruns;
  }
  run.drain();
  return run.finish();
}

/// Timer-only cycle: one fill, one agitation of fixed length, no sensing.
inline CycleReport run_fixed_cycle(const LoadProfile& load, double fixed_minutes, const ResourceRates& rates = {}) {
  load.check();
  rates.check();
  if (!(fixed_minutes > 0.0) || !std::isfinite(fixed_minutes)) throw ConfigError("fixed wash time must be positive");
  detail::CycleRun run(load, rates);
  run.fill();
  run.agitate(PhaseKind::wash, fixed_minutes);
  run.drain();
  return run.finish();
}

struct BaselineComparison {
  CycleReport controlled;
  CycleReport baseline;
  // controlled minus baseline
  double delta_time = 0.0;
  double delta_water = 0.0;
  double delta_energy = 0.0;
  double delta_final_dirt = 0.0;
};

inline BaselineComparison compare_baseline(const LoadProfile& load, const wash::SensorCalibration& cal,
                                           double fixed_minutes, DefuzzMode mode = DefuzzMode::centroid,
                                           const ResourceRates& rates = {},
                                           const Controller& controller = wash::washing_controller()) {
  BaselineComparison c;
  c.controlled = run_cycle(load, cal, mode, rates, controller);
  c.baseline = run_fixed_cycle(load, fixed_minutes, rates);
  c.delta_time = c.controlled.total_time - c.baseline.total_time;
  c.delta_water = c.controlled.total_water - c.baseline.total_water;
  c.delta_energy = c.controlled.total_energy - c.baseline.total_energy;
  c.delta_final_dirt = c.controlled.final_dirt - c.baseline.final_dirt;
  return c;
}

namespace detail {

inline std::string printf_string(const char* fmt, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

}  // namespace detail

// Human-readable report, 2 decimals.
inline std::string format_report(const CycleReport& r) {
  using detail::printf_string;
  std::string out;
  out += printf_string("cycle: %s\n", r.clean ? "clean" : "not clean");
  out += printf_string("total_time   = %.2f min\n", r.total_time);
  out += printf_string("total_water  = %.2f L\n", r.total_water);
  out += printf_string("total_energy = %.2f Wh\n", r.total_energy);
  out += printf_string("final_dirt   = %.2f\n", r.final_dirt);
  out += printf_string("reruns       = %d\n", r.reruns);
  for (std::size_t i = 0; i < r.rounds.size(); ++i) {
    const auto& w = r.rounds[i];
    out += printf_string("round %zu: dirtiness %.2f, saturation %.2f min -> wash %.2f min (%s)\n", i + 1, w.dirtiness,
                         w.saturation, w.wash_time, w.dominant_term.c_str());
  }
  out += "phases:\n";
  for (const auto& p : r.phases) {
    out += printf_string("  %-5s %6.2f min %6.2f L %7.2f Wh  removed %.2f\n", to_string(p.kind), p.minutes, p.water,
                         p.energy, p.dirt_removed);
  }
  return out;
}

// Columns: total_time,total_water,total_energy,final_dirt,reruns
inline std::string csv_row(const CycleReport& r) {
  return detail::printf_string("%.6f,%.6f,%.6f,%.6f,%d", r.total_time, r.total_water, r.total_energy, r.final_dirt,
                               r.reruns);
}

inline std::string format_comparison(const BaselineComparison& c) {
  using detail::printf_string;
  std::string out = "controlled cycle:\n" + format_report(c.controlled);
  out += "\nfixed-timer baseline:\n" + format_report(c.baseline);
  out += "\ndeltas (controlled - baseline):\n";
  out += printf_string("  time   %+.2f min\n", c.delta_time);
  out += printf_string("  water  %+.2f L\n", c.delta_water);
  out += printf_string("  energy %+.2f Wh\n", c.delta_energy);
  out += printf_string("  dirt   %+.2f\n", c.delta_final_dirt);
  return out;
}

}  // namespace fuzzctl::sim
