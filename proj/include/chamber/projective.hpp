// Chordal metric on real projective space: d(Rx, Ry) = min over signs of
// ||x -+ y|| for unit representatives.
#pragma once

#include "chamber/types.hpp"

#include <algorithm>
#include <cmath>

namespace chamber {

inline double proj_distance(const Vec& x, const Vec& y) {
  // evaluated as a genuine minimum over signs: stable near zero distance,
  // where the inner-product form loses half the digits
  return std::min((x - y).norm(), (x + y).norm());
}

// Distance from the line Rx to the projective hyperplane with unit normal n:
// the sine of the angle to the hyperplane is s = |<x,n>|, and the chordal
// distance is s * sqrt(2 / (1 + sqrt(1 - s^2))).
inline double proj_point_hyperplane_distance(const Vec& x, const Vec& n) {
  const double s = std::min(1.0, std::abs(x.dot(n)));
  const double c = std::sqrt(std::max(0.0, 1.0 - s * s));
  return s * std::sqrt(2.0 / (1.0 + c));
}

// Canonical sign representative: largest-magnitude coordinate positive.
inline Vec canonical_line(Vec v) {
  const double n = v.norm();
  if (n > 0) v /= n;
  int arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v(arg) < 0) v = -v;
  return v;
}

}  // namespace chamber
