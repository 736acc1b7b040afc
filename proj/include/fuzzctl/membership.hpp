#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>

#include "fuzzctl/errors.hpp"

namespace fuzzctl {

enum class ShapeKind { triangular, trapezoidal };

/// Piecewise-linear membership shape over the real line.
///
/// A triangle (a, b, c) is stored as the trapezoid (a, b, b, c), so one
/// evaluation path serves both kinds. Coincident breakpoints are legal and
/// denote shoulders: tri(0, 0, 15) is 1 at 0 and falls to 0 at 15.
class MembershipFunction {
 public:
  static MembershipFunction triangular(double a, double b, double c) {
    return MembershipFunction(ShapeKind::triangular, {a, b, b, c});
  }

  static MembershipFunction trapezoidal(double a, double b, double c, double d) {
    return MembershipFunction(ShapeKind::trapezoidal, {a, b, c, d});
  }

  ShapeKind kind() const noexcept { return kind_; }

  /// The declared breakpoints: 3 for a triangle, 4 for a trapezoid.
  std::array<double, 4> breakpoints() const noexcept {
    if (kind_ == ShapeKind::triangular) return {pts_[0], pts_[1], pts_[3], 0.0};
    return pts_;
  }
  std::size_t breakpoint_count() const noexcept {
    return kind_ == ShapeKind::triangular ? 3 : 4;
  }

  // Trapezoid corners, always four.
  std::span<const double, 4> corners() const noexcept { return pts_; }

  double support_lo() const noexcept { return pts_[0]; }
  double support_hi() const noexcept { return pts_[3]; }

  double operator()(double x) const noexcept {
    const auto [a, b, c, d] = pts_;
    if (!(x >= a && x <= d)) return 0.0;  // also rejects NaN
    if (x >= b && x <= c) return 1.0;
    if (x < b) return (x - a) / (b - a);
    return (d - x) / (d - c);
  }

  bool operator==(const MembershipFunction&) const = default;

 private:
  MembershipFunction(ShapeKind kind, std::array<double, 4> pts) : kind_(kind), pts_(pts) {
    for (double p : pts_) {
      if (!std::isfinite(p)) throw ConfigError("membership breakpoints must be finite");
    }
    for (std::size_t i = 1; i < pts_.size(); ++i) {
      if (pts_[i] < pts_[i - 1]) throw ConfigError("membership breakpoints must be non-decreasing");
    }
  }

  ShapeKind kind_;
  std::array<double, 4> pts_;
};

inline double membership(const MembershipFunction& mf, double x) noexcept { return mf(x); }

inline const char* to_string(ShapeKind kind) noexcept {
  return kind == ShapeKind::triangular ? "TRI" : "TRAP";
}

}  // namespace fuzzctl
