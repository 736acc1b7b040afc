#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "fuzzctl/washctl.hpp"

using namespace fuzzctl;
using namespace fuzzctl::wash;

namespace {

const Rule* rule_for(const ControllerSpec& spec, const char* dirt, const char* sat) {
  const auto* s = spec.find_variable("saturation_time");
  for (const auto& r : spec.rules) {
    if (r.antecedents[0].term == dirt && r.antecedents[1].term == s->find_term(sat)->name) return &r;
  }
  return nullptr;
}

std::vector<OpacitySample> exponential_series(double tau, double dt, double end) {
  std::vector<OpacitySample> out;
  for (int i = 0; i * dt <= end + 1e-12; ++i) {
    const double t = i * dt;
    out.push_back({t, 1.0 - std::exp(-t / tau)});
  }
  return out;
}

}  // namespace

TEST(BuildController, RuleMatrixCorners) {
  const auto spec = build_washing_controller();
  ASSERT_EQ(spec.rules.size(), 9u);
  EXPECT_EQ(rule_for(spec, "low", "small")->consequent.term, "very_low");
  EXPECT_EQ(rule_for(spec, "high", "large")->consequent.term, "very_high");
  EXPECT_EQ(rule_for(spec, "low", "medium")->consequent.term, "low");
  EXPECT_EQ(rule_for(spec, "medium", "medium")->consequent.term, "medium");
  EXPECT_EQ(rule_for(spec, "high", "small")->consequent.term, "medium");
}

TEST(BuildController, RangesAndUniverses) {
  const auto spec = build_washing_controller();
  ASSERT_EQ(spec.output_ranges.size(), 5u);
  EXPECT_EQ(spec.output_ranges[0], (OutputRange{"very_low", 0, 4}));
  EXPECT_EQ(spec.find_variable("dirtiness")->universe.hi, 30.0);
  EXPECT_EQ(spec.find_variable("saturation_time")->universe.hi, 10.0);
  EXPECT_EQ(spec.output()->universe.hi, 15.0);
  EXPECT_EQ(spec.find_variable("saturation_time")->find_term("large")->name, "high");
}

TEST(WashTime, ApexMediumMedium) {
  const auto d = wash_time(15, 5);
  EXPECT_NEAR(d.wash_time, 7.5, 1e-12);
  EXPECT_EQ(d.dominant_term, "medium");
  EXPECT_EQ(d.mode, DefuzzMode::centroid);
}

TEST(WashTime, CleanestCorner) {
  const auto d = wash_time(0, 0);
  EXPECT_NEAR(d.wash_time, 4.0 / 3.0, 1e-12);
  EXPECT_EQ(d.dominant_term, "very_low");
}

TEST(WashTime, DirtiestCorner) {
  const auto d = wash_time(30, 10);
  EXPECT_NEAR(d.wash_time, 41.0 / 3.0, 1e-12);
  EXPECT_EQ(d.dominant_term, "very_high");
}

TEST(WashTime, WorkedPointBothModes) {
  // Centroid frozen from an external 2e6-panel trapezoid brute force.
  const auto c = wash_time(7.2, 2.85);
  EXPECT_NEAR(c.wash_time, 5.133183441842636, 1e-8);
  EXPECT_EQ(c.dominant_term, "low");
  const auto p = wash_time(7.2, 2.85, DefuzzMode::paper);
  EXPECT_NEAR(p.wash_time, 0.52 * 8.0, 1e-12);
  EXPECT_EQ(p.dominant_term, "low");
}

TEST(WashTime, ClampsInputs) {
  EXPECT_EQ(wash_time(-5, 100).wash_time, wash_time(0, 10).wash_time);
}

TEST(WashTime, PrototypesReproduceRuleMatrix) {
  const char* expected[3][3] = {
      {"very_low", "low", "medium"}, {"low", "medium", "high"}, {"medium", "high", "very_high"}};
  const double dirt[3] = {0, 15, 30};
  const double sat[3] = {0, 5, 10};
  for (int s = 0; s < 3; ++s) {
    for (int d = 0; d < 3; ++d) {
      EXPECT_EQ(wash_time(dirt[d], sat[s]).dominant_term, expected[s][d]) << dirt[d] << "," << sat[s];
    }
  }
}

// Property: bounded, monotone in both inputs and free of jumps on a 301x301 grid.
TEST(WashTimeProperty, SurfaceShape) {
  constexpr int n = 301;
  std::vector<double> grid(n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) grid[i * n + j] = wash_time(30.0 * i / (n - 1), 10.0 * j / (n - 1)).wash_time;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double v = grid[i * n + j];
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 15.0);
      if (i > 0) {
        ASSERT_GE(v, grid[(i - 1) * n + j] - 1e-9) << i << "," << j;
        ASSERT_LT(std::abs(v - grid[(i - 1) * n + j]), 0.5);
      }
      if (j > 0) {
        ASSERT_GE(v, grid[i * n + j - 1] - 1e-9) << i << "," << j;
        ASSERT_LT(std::abs(v - grid[i * n + j - 1]), 0.5);
      }
    }
  }
}

TEST(PressureToDirtiness, EndpointsAndMidpoint) {
  const SensorCalibration cal;
  EXPECT_EQ(pressure_to_dirtiness(0, cal), 0.0);
  EXPECT_EQ(pressure_to_dirtiness(1023, cal), 30.0);
  EXPECT_DOUBLE_EQ(pressure_to_dirtiness(511.5, cal), 15.0);
  EXPECT_EQ(pressure_to_dirtiness(-40, cal), 0.0);
  EXPECT_EQ(pressure_to_dirtiness(5000, cal), 30.0);
}

TEST(PressureToDirtiness, IdempotentUnderIdentityCalibration) {
  const SensorCalibration identity{0.95, 0.0, 30.0};
  for (double x : {-3.0, 0.0, 7.2, 29.9, 30.0, 44.0}) {
    const double once = pressure_to_dirtiness(x, identity);
    EXPECT_EQ(pressure_to_dirtiness(once, identity), once);
  }
}

TEST(PressureToDirtiness, RejectsBadCalibration) {
  EXPECT_THROW(pressure_to_dirtiness(1, SensorCalibration{0.95, 10, 10}), ConfigError);
  EXPECT_THROW(pressure_to_dirtiness(1, SensorCalibration{1.0, 0, 10}), ConfigError);
  EXPECT_THROW(pressure_to_dirtiness(1, SensorCalibration{0.0, 0, 10}), ConfigError);
}

TEST(OpacityToSaturation, ExponentialCrossing) {
  // 1 - exp(-t/tau) reaches 0.95 at t = tau ln 20; pick tau so that is 2.85.
  const double tau = 2.85 / std::log(20.0);
  const auto series = exponential_series(tau, 0.05, 60.0);
  EXPECT_NEAR(opacity_to_saturation(series, SensorCalibration{}), 2.85, 1e-3);
}

TEST(OpacityToSaturation, ExactOnPiecewiseLinearSeries) {
  const std::vector<OpacitySample> series{{0, 0}, {1, 0.5}, {2, 0.9}, {3, 1.0}};
  // threshold 0.95 lies halfway between t=2 and t=3
  EXPECT_NEAR(opacity_to_saturation(series, SensorCalibration{}), 2.5, 1e-12);
}

TEST(OpacityToSaturation, NeverSaturates) {
  const std::vector<OpacitySample> series{{0, 0}, {1, 0}, {2, 0}};
  EXPECT_EQ(opacity_to_saturation(series, SensorCalibration{}), 10.0);
}

TEST(OpacityToSaturation, SingleSample) {
  EXPECT_EQ(opacity_to_saturation(std::vector<OpacitySample>{{0, 0.4}}, SensorCalibration{}), 0.0);
}

TEST(OpacityToSaturation, ClampsLateCrossing) {
  const std::vector<OpacitySample> series{{0, 0}, {20, 1.0}};
  EXPECT_EQ(opacity_to_saturation(series, SensorCalibration{}), 10.0);
}

TEST(OpacityToSaturation, InputErrors) {
  EXPECT_THROW(opacity_to_saturation(std::vector<OpacitySample>{}, SensorCalibration{}), InputError);
  const std::vector<OpacitySample> flat{{0, 0}, {1, 0.5}, {1, 0.7}};
  EXPECT_THROW(opacity_to_saturation(flat, SensorCalibration{}), InputError);
  const std::vector<OpacitySample> backwards{{2, 0}, {1, 0.5}};
  EXPECT_THROW(opacity_to_saturation(backwards, SensorCalibration{}), InputError);
}
