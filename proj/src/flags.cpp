#include "chamber/flags.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace chamber {

namespace {

// QR with the upper factor forced to a positive diagonal; the Q factor is
// then the canonical orthonormal frame of the column filtration.
Mat orthonormal_frame(const Mat& a) {
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  const int d = static_cast<int>(a.rows());
  for (int i = 0; i < d; ++i) {
    if (std::abs(r(i, i)) < 1e-13 * std::max(1.0, a.norm()))
      fail(ErrorKind::invalid_flag, "degenerate frame: column filtration not full rank");
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  }
  return q;
}

}  // namespace

Flag Flag::standard(int d) { return Flag{Mat::Identity(d, d)}; }

Flag Flag::reversed_standard(int d) {
  Mat f = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i) f(d - 1 - i, i) = 1.0;
  return Flag{f};
}

Flag Flag::of_matrix(const Mat& a) {
  if (!a.allFinite()) fail(ErrorKind::invalid_flag, "frame has non-finite entries");
  if (a.rows() != a.cols() || a.rows() < 2)
    fail(ErrorKind::invalid_flag, "frame must be square with dim >= 2");
  return Flag{orthonormal_frame(a)};
}

void Flag::validate(double tol) const {
  if (!frame.allFinite()) fail(ErrorKind::invalid_flag, "frame has non-finite entries");
  if (frame.rows() != frame.cols() || frame.rows() < 2)
    fail(ErrorKind::invalid_flag, "frame must be square with dim >= 2");
  const int d = dim();
  const double err = (frame.transpose() * frame - Mat::Identity(d, d)).norm();
  if (err > tol) fail(ErrorKind::invalid_flag, "frame is not orthonormal", err);
}

Flag act(const Mat& g, const Flag& f) { return Flag::of_matrix(g * f.frame); }

double flag_distance(const Flag& a, const Flag& b) {
  const int d = a.dim();
  if (b.dim() != d) fail(ErrorKind::invalid_flag, "flag dimension mismatch");
  double worst = 0.0;
  for (int k = 1; k < d; ++k) {
    const Mat pa = a.frame.leftCols(k) * a.frame.leftCols(k).transpose();
    const Mat pb = b.frame.leftCols(k) * b.frame.leftCols(k).transpose();
    Eigen::JacobiSVD<Mat> svd(pa - pb);
    worst = std::max(worst, svd.singularValues()(0));
  }
  return worst;
}

double opposition_margin(const Flag& plus, const Flag& minus) {
  const int d = plus.dim();
  if (minus.dim() != d) fail(ErrorKind::invalid_flag, "flag dimension mismatch");
  double margin = 1.0;
  for (int k = 1; k < d; ++k) {
    // Largest principal-angle cosine between the k-subspace of `plus` and the
    // (d-k)-subspace of `minus`; transversality means it stays below 1.
    const Mat m = plus.frame.leftCols(k).transpose() * minus.frame.leftCols(d - k);
    Eigen::JacobiSVD<Mat> svd(m);
    const double c = std::min(1.0, svd.singularValues()(0));
    margin = std::min(margin, std::sqrt(std::max(0.0, 1.0 - c * c)));
  }
  return margin;
}

FlagPair make_flag_pair(Flag plus, Flag minus) {
  const double margin = opposition_margin(plus, minus);
  return FlagPair{std::move(plus), std::move(minus), margin};
}

}  // namespace chamber
