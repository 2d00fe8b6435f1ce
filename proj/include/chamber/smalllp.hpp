// Tiny dense linear programming: two-phase simplex with Bland's rule, sized
// for the handful-of-variables feasibility checks this project needs.
#pragma once

#include "chamber/types.hpp"

#include <optional>

namespace chamber {

struct LpResult {
  bool feasible = false;
  Vec x;
  double value = 0.0;
};

// min c.x  s.t.  A x = b, x >= 0
LpResult lp_solve_eq(const Mat& a, const Vec& b, const Vec& c, double tol = 1e-9);

// Is `target` in the convex cone positively spanned by the columns?
bool in_cone(const Mat& columns, const Vec& target, double tol = 1e-9);

// Largest s >= 0 such that target = columns * x with x >= s (componentwise);
// nullopt when the target is not in the cone at all. s > 0 certifies a
// uniformly interior combination.
std::optional<double> cone_depth(const Mat& columns, const Vec& target, double tol = 1e-9);

}  // namespace chamber
