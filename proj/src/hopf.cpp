#include "chamber/hopf.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace chamber {

HopfPoint hopf_coordinates(const GroupElement& g) {
  const int d = g.dim();
  Flag plus = Flag::of_matrix(g.entries());
  Flag minus = Flag::of_matrix(g.entries() * Flag::reversed_standard(d).frame);
  CartanVector apart = iwasawa_cocycle(g, Flag::standard(d));
  return HopfPoint{make_flag_pair(std::move(plus), std::move(minus)), std::move(apart)};
}

namespace {

// Unit vector spanning the (one-dimensional) intersection of the span of the
// first ka columns of a with the span of the first kb columns of b.
Vec subspace_intersection_line(const Mat& a, int ka, const Mat& b, int kb) {
  const int d = static_cast<int>(a.rows());
  const Mat pa = a.leftCols(ka) * a.leftCols(ka).transpose();
  const Mat pb = b.leftCols(kb) * b.leftCols(kb).transpose();
  Mat stacked(2 * d, d);
  stacked.topRows(d) = Mat::Identity(d, d) - pa;
  stacked.bottomRows(d) = Mat::Identity(d, d) - pb;
  Eigen::JacobiSVD<Mat> svd(stacked, Eigen::ComputeFullV);
  const double smallest = svd.singularValues()(d - 1);
  if (smallest > 1e-7)
    fail(ErrorKind::opposition, "flag pair is not transverse enough to intersect", smallest);
  return svd.matrixV().col(d - 1);
}

}  // namespace

GroupElement hopf_representative(const HopfPoint& p) {
  if (!(p.pair.opposition_margin > 0))
    fail(ErrorKind::opposition, "flag pair must be transverse");
  const int d = p.pair.plus.dim();
  Mat basis(d, d);
  // column k lies in (k-subspace of plus) ∩ ((d-k+1)-subspace of minus)
  for (int k = 1; k <= d; ++k)
    basis.col(k - 1) =
        subspace_intersection_line(p.pair.plus.frame, k, p.pair.minus.frame, d - k + 1);
  if (basis.determinant() < 0) basis.col(d - 1) = -basis.col(d - 1);
  GroupElement rep{basis};
  const CartanVector sigma = iwasawa_cocycle(rep, Flag::standard(d));
  Mat shift = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i) shift(i, i) = std::exp(p.apart.coords(i) - sigma.coords(i));
  return GroupElement(rep.entries() * shift);
}

HopfPoint left_action(const GroupElement& h, const HopfPoint& p) {
  const CartanVector increment = iwasawa_cocycle(h, p.pair.plus);
  return HopfPoint{
      make_flag_pair(act(h.entries(), p.pair.plus), act(h.entries(), p.pair.minus)),
      p.apart + increment};
}

HopfPoint flow_action(const HopfPoint& p, const CartanVector& theta, double t, double wall_tol) {
  if (theta.dim() != p.apart.dim()) fail(ErrorKind::direction, "direction dimension mismatch");
  if (std::abs(theta.norm() - 1.0) > 1e-9)
    fail(ErrorKind::direction, "direction must be a unit vector");
  if (std::abs(theta.trace()) > 1e-9)
    fail(ErrorKind::direction, "direction must be trace-zero");
  if (!theta.strictly_dominant(wall_tol))
    fail(ErrorKind::direction, "direction lies on a chamber wall", theta.min_gap());
  HopfPoint out = p;
  out.apart = p.apart + theta * t;
  return out;
}

FlagPair lox_fixed_flags(const GroupElement& g, double gap_tol) {
  if (!is_loxodromic(g, gap_tol))
    fail(ErrorKind::precondition, "element is not loxodromic at this gap tolerance");
  const auto& dec = g.decomp();
  if (!dec.eigenbasis)
    fail(ErrorKind::precondition, "no real eigenbasis despite loxodromic spectrum");
  const Mat& basis = *dec.eigenbasis;
  const int d = g.dim();
  Flag plus = Flag::of_matrix(basis);
  Flag minus = Flag::of_matrix(basis * Flag::reversed_standard(d).frame);
  return make_flag_pair(std::move(plus), std::move(minus));
}

double check_lambda_sigma(const GroupElement& g) {
  const FlagPair fixed = lox_fixed_flags(g);
  const CartanVector sigma = iwasawa_cocycle(g, fixed.plus);
  return (jordan_projection(g) - sigma).norm();
}

std::vector<double> contraction_to_fixed_flag(const GroupElement& g, const Flag& eta,
                                              int n_max) {
  const FlagPair fixed = lox_fixed_flags(g);
  const double margin = opposition_margin(eta, fixed.minus);
  if (!(margin > 1e-10))
    fail(ErrorKind::opposition, "eta is not opposite to the repelling flag", margin);
  std::vector<double> dist;
  dist.reserve(static_cast<size_t>(n_max) + 1);
  Flag current = eta;
  dist.push_back(flag_distance(current, fixed.plus));
  for (int n = 1; n <= n_max; ++n) {
    current = act(g.entries(), current);
    dist.push_back(flag_distance(current, fixed.plus));
  }
  return dist;
}

}  // namespace chamber
