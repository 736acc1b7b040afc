#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "fuzzctl/controller.hpp"
#include "fuzzctl/controller_spec.hpp"
#include "fuzzctl/errors.hpp"

namespace fuzzctl::wash {

inline constexpr double kDirtinessMax = 30.0;
inline constexpr double kSaturationMax = 10.0;
inline constexpr double kWashTimeMax = 15.0;

/// The washing-machine controller: dirtiness and saturation time in,
/// wash time out, with the 3x3 rule matrix
///
///                     dirtiness low   medium   high
///   saturation small  very_low        low      medium
///              medium low             medium   high
///              large  medium          high     very_high
inline ControllerSpec build_washing_controller() {
  using MF = MembershipFunction;
  ControllerSpec spec;
  spec.name = "washing_machine";

  spec.variables.push_back(LinguisticVariable{
      "dirtiness",
      Role::input,
      Universe{0.0, kDirtinessMax, ""},
      {{"low", MF::triangular(0, 0, 15)}, {"medium", MF::triangular(0, 15, 30)}, {"high", MF::triangular(15, 30, 30)}},
      {}});
  spec.variables.push_back(LinguisticVariable{
      "saturation_time",
      Role::input,
      Universe{0.0, kSaturationMax, "min"},
      {{"low", MF::triangular(0, 0, 5)}, {"medium", MF::triangular(0, 5, 10)}, {"high", MF::triangular(5, 10, 10)}},
      {{"small", "low"}, {"large", "high"}}});
  spec.variables.push_back(LinguisticVariable{"wash_time",
                                              Role::output,
                                              Universe{0.0, kWashTimeMax, "min"},
                                              {{"very_low", MF::triangular(0, 0, 4)},
                                               {"low", MF::triangular(0, 4, 8)},
                                               {"medium", MF::triangular(4, 7.5, 11)},
                                               {"high", MF::triangular(7, 11, 15)},
                                               {"very_high", MF::triangular(11, 15, 15)}},
                                              {}});

  static constexpr std::array<const char*, 3> kLevels = {"low", "medium", "high"};
  static constexpr const char* kMatrix[3][3] = {
      // rows: saturation low/medium/high, columns: dirtiness low/medium/high
      {"very_low", "low", "medium"},
      {"low", "medium", "high"},
      {"medium", "high", "very_high"},
  };
  for (std::size_t d = 0; d < 3; ++d) {
    for (std::size_t s = 0; s < 3; ++s) {
      spec.rules.push_back(Rule{{{"dirtiness", kLevels[d]}, {"saturation_time", kLevels[s]}},
                                Connective::all_of,
                                {"wash_time", kMatrix[s][d]}});
    }
  }

  spec.output_ranges = {
      {"very_low", 0, 4}, {"low", 0, 8}, {"medium", 4, 11}, {"high", 7, 15}, {"very_high", 11, 15},
  };
  return spec;
}

// Shared read-only instance of the bundled controller.
inline const Controller& washing_controller() {
  static const Controller controller(build_washing_controller());
  return controller;
}

struct SensorCalibration {
  double opacity_asymptote_fraction = 0.95;  // saturation = reaching this share of the final opacity
  double pressure_min = 0.0;                 // counts read as dirtiness 0
  double pressure_max = 1023.0;              // counts read as dirtiness 30

  void check() const {
    if (!(opacity_asymptote_fraction > 0.0 && opacity_asymptote_fraction < 1.0)) {
      throw ConfigError("opacity asymptote fraction must lie in (0,1)");
    }
    if (!std::isfinite(pressure_min) || !std::isfinite(pressure_max) || !(pressure_min < pressure_max)) {
      throw ConfigError("pressure calibration needs finite pressure_min < pressure_max");
    }
  }
};

struct WashDecision {
  double wash_time = 0.0;  // minutes, unrounded
  TermStrengths fired;
  std::string dominant_term;
  DefuzzMode mode = DefuzzMode::centroid;
};

inline WashDecision to_wash_decision(Decision d) {
  return WashDecision{d.value, std::move(d.fired), std::move(d.dominant_term), d.mode};
}

/// Wash time for a dirtiness (0-30) and saturation time (0-10 min) reading.
/// Out-of-range readings are clamped.
inline WashDecision wash_time(double dirtiness, double saturation, DefuzzMode mode = DefuzzMode::centroid,
                              const Controller& controller = washing_controller()) {
  const std::array<CrispInput, 2> in{CrispInput{"dirtiness", dirtiness}, CrispInput{"saturation_time", saturation}};
  try {
    return to_wash_decision(controller.evaluate(in, mode));
  } catch (const NoRuleFired& e) {
    throw std::logic_error(std::string("wash controller left a coverage gap: ") + e.what());
  }
}

/// Linear map of pressure counts onto dirtiness [0, 30], clamped.
inline double pressure_to_dirtiness(double counts, const SensorCalibration& cal) {
  cal.check();
  if (std::isnan(counts)) throw InputError("pressure reading is NaN");
  const double t = (counts - cal.pressure_min) / (cal.pressure_max - cal.pressure_min);
  return std::clamp(t * kDirtinessMax, 0.0, kDirtinessMax);
}

struct OpacitySample {
  double minutes = 0.0;
  double opacity = 0.0;  // [0,1]
};

/// First time the opacity reaches `opacity_asymptote_fraction` of the
/// series' final opacity, interpolated linearly between samples and
/// clamped to [0, 10]. A series that never clouds returns 10.
inline double opacity_to_saturation(std::span<const OpacitySample> series, const SensorCalibration& cal) {
  cal.check();
  if (series.empty()) throw InputError("opacity series is empty");
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (!std::isfinite(series[i].minutes) || !std::isfinite(series[i].opacity)) {
      throw InputError("opacity series contains a non-finite sample");
    }
    if (i > 0 && !(series[i].minutes > series[i - 1].minutes)) {
      throw InputError("opacity series time must be strictly increasing");
    }
  }
  const double final_opacity = series.back().opacity;
  if (!(final_opacity > 0.0)) return kSaturationMax;

  const double threshold = cal.opacity_asymptote_fraction * final_opacity;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (series[i].opacity < threshold) continue;
    if (i == 0) return std::clamp(series[0].minutes, 0.0, kSaturationMax);
    const auto& a = series[i - 1];
    const auto& b = series[i];
    const double t = a.minutes + (threshold - a.opacity) / (b.opacity - a.opacity) * (b.minutes - a.minutes);
    return std::clamp(t, 0.0, kSaturationMax);
  }
  return kSaturationMax;  // unreachable: the last sample meets its own threshold
}

}  // namespace fuzzctl::wash
