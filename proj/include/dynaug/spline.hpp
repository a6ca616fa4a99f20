#pragma once

#include <vector>

namespace dynaug {

/// Natural cubic spline through (knot_x, knot_y): passes through every knot,
/// C2-continuous, second derivative zero at both ends. knot_x must be strictly
/// increasing with at least two entries; with exactly two knots the interpolant
/// is the straight line between them.
class CubicSpline {
 public:
  CubicSpline(std::vector<double> knot_x, std::vector<double> knot_y);

  /// Evaluate at x, which must lie within [knot_x.front(), knot_x.back()].
  double eval(double x) const;

  /// Evaluate at many query points.
  std::vector<double> eval(const std::vector<double>& xs) const;

 private:
  std::vector<double> x_, y_, m_;  // m_ = second derivatives at the knots
};

/// Convenience wrapper matching the functional form used by the augmentation
/// code: build the spline and evaluate it at query_x in one call.
std::vector<double> cubic_spline_eval(const std::vector<double>& knot_x,
                                      const std::vector<double>& knot_y,
                                      const std::vector<double>& query_x);

}  // namespace dynaug
