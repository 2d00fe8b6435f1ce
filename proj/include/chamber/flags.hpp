// Full flags in R^d represented by orthonormal frames modulo column signs
// (the M-quotient): the leading k columns of `frame` span the k-dimensional
// subspace of the flag. Distances and opposition margins are computed from
// orthogonal projectors and principal angles, which makes equality and
// transversality tests stable under the sign ambiguity.
#pragma once

#include "chamber/types.hpp"

#include <vector>

namespace chamber {

struct Flag {
  Mat frame;  // d x d, orthonormal columns

  int dim() const { return static_cast<int>(frame.rows()); }

  // Standard flag: span(e1) in span(e1,e2) in ...
  static Flag standard(int d);
  // Reversed standard flag: span(e_d) in span(e_d, e_{d-1}) in ...
  static Flag reversed_standard(int d);
  // Flag of the column filtration of an invertible matrix (QR orthonormalization).
  static Flag of_matrix(const Mat& a);

  void validate(double tol = 1e-10) const;
};

// Flag of g * (frame of f): the left action on the flag variety.
Flag act(const Mat& g, const Flag& f);

// max over k of the spectral-norm gap between the rank-k orthogonal projectors.
double flag_distance(const Flag& a, const Flag& b);

// min over k of the sine of the smallest principal angle between the
// k-subspace of `plus` and the (d-k)-subspace of `minus`; positive iff the
// pair is transverse at every level.
double opposition_margin(const Flag& plus, const Flag& minus);

struct FlagPair {
  Flag plus;
  Flag minus;
  double opposition_margin = 0.0;
};

FlagPair make_flag_pair(Flag plus, Flag minus);

}  // namespace chamber
