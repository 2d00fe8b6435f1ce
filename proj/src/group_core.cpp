#include "chamber/group_core.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>

namespace chamber {

bool CartanVector::sorted_nonincreasing(double tol) const {
  for (int i = 0; i + 1 < dim(); ++i)
    if (coords(i) + tol < coords(i + 1)) return false;
  return true;
}

bool CartanVector::strictly_dominant(double gap) const { return min_gap() > gap; }

double CartanVector::min_gap() const {
  double g = std::numeric_limits<double>::infinity();
  for (int i = 0; i + 1 < dim(); ++i) g = std::min(g, coords(i) - coords(i + 1));
  return g;
}

CartanVector opposition_involution(const CartanVector& v) {
  return CartanVector(-v.coords.reverse());
}

namespace {

// descending modulus, ties broken by descending real then imaginary part
std::vector<int> spectral_order(const CVec& vals) {
  std::vector<int> order(vals.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    const double mi = std::abs(vals(i)), mj = std::abs(vals(j));
    if (mi != mj) return mi > mj;
    if (vals(i).real() != vals(j).real()) return vals(i).real() > vals(j).real();
    return vals(i).imag() > vals(j).imag();
  });
  return order;
}

// KAN factorisation with positive diagonal; det of the orthogonal factor is
// then +1 whenever det(m) > 0.
void kan(const Mat& m, Mat& k, Vec& a, Mat& n) {
  const int d = static_cast<int>(m.rows());
  Eigen::HouseholderQR<Mat> qr(m);
  k = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) {
    if (r(i, i) < 0) {
      k.col(i) = -k.col(i);
      r.row(i) = -r.row(i);
    }
    if (!(r(i, i) > 0)) fail(ErrorKind::invalid_input, "singular matrix in KAN factorisation");
  }
  a = r.diagonal().array().log();
  n = r;
  for (int i = 0; i < d; ++i) n.row(i) /= r(i, i);
}

DecompositionCache compute_decompositions(const Mat& m) {
  DecompositionCache c;
  const int d = static_cast<int>(m.rows());

  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  c.svd_u = svd.matrixU();
  c.svd_v = svd.matrixV();
  c.singular = svd.singularValues();

  kan(m, c.iwasawa_k, c.iwasawa_a, c.iwasawa_n);

  Eigen::EigenSolver<Mat> es(m);
  CVec vals = es.eigenvalues();
  const std::vector<int> order = spectral_order(vals);
  c.eigenvalues = CVec(d);
  for (int i = 0; i < d; ++i) c.eigenvalues(i) = vals(order[i]);

  bool real_spectrum = true;
  for (int i = 0; i < d; ++i)
    if (std::abs(c.eigenvalues(i).imag()) > 1e-8 * (1.0 + std::abs(c.eigenvalues(i))))
      real_spectrum = false;
  if (real_spectrum) {
    Mat basis(d, d);
    for (int i = 0; i < d; ++i) {
      Vec v = es.eigenvectors().col(order[i]).real();
      const double nv = v.norm();
      if (nv < 1e-12) { real_spectrum = false; break; }
      v /= nv;
      // canonical sign: largest-magnitude component positive
      int arg = 0;
      v.cwiseAbs().maxCoeff(&arg);
      if (v(arg) < 0) v = -v;
      basis.col(i) = v;
    }
    if (real_spectrum) {
      Eigen::FullPivLU<Mat> lu(basis);
      if (lu.isInvertible()) {
        const Mat rec = basis * c.eigenvalues.real().asDiagonal() * lu.inverse();
        if ((rec - m).norm() <= 1e-6 * std::max(1.0, m.norm())) c.eigenbasis = basis;
      }
    }
  }
  return c;
}

}  // namespace

namespace {

struct DetStats {
  double log_abs = 0.0;  // log|det|
  int sign = 0;
  double pivot_ratio = 1.0;  // max/min |pivot|: conditioning of the estimate
};

// Determinant in log form through LU, immune to overflow of the product form.
DetStats det_stats(const Mat& m) {
  Eigen::PartialPivLU<Mat> lu(m);
  DetStats s;
  s.sign = lu.permutationP().determinant() > 0 ? 1 : -1;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int i = 0; i < m.rows(); ++i) {
    const double u = lu.matrixLU()(i, i);
    if (u == 0.0 || !std::isfinite(u)) return DetStats{0.0, 0, 0.0};
    if (u < 0) s.sign = -s.sign;
    s.log_abs += std::log(std::abs(u));
    lo = std::min(lo, std::abs(u));
    hi = std::max(hi, std::abs(u));
  }
  s.pivot_ratio = hi / lo;
  return s;
}

}  // namespace

GroupElement::GroupElement(Mat entries) : entries_(std::move(entries)) {
  if (!entries_.allFinite()) fail(ErrorKind::invalid_input, "matrix has non-finite entries");
  if (entries_.rows() != entries_.cols())
    fail(ErrorKind::invalid_input, "group element must be square");
  const int d = static_cast<int>(entries_.rows());
  if (d < 2) fail(ErrorKind::invalid_input, "dim must be >= 2");

  const DetStats first = det_stats(entries_);
  if (first.sign == 0 || !std::isfinite(first.log_abs)) {
    // A vanishing pivot is either genuine singularity or the floating-point
    // rank collapse of an extremely hyperbolic product; only the former is an
    // input error.
    Eigen::JacobiSVD<Mat> svd(entries_);
    const double smin = svd.singularValues()(d - 1);
    const double smax = svd.singularValues()(0);
    if (!(smax > 0) || smin / smax < 1e-250)
      fail(ErrorKind::invalid_input, "determinant is zero or non-finite");
    return;  // unmeasurable determinant: keep the entries as given
  }
  if (first.sign < 0 && d % 2 == 0)
    fail(ErrorKind::invalid_input, "negative determinant cannot be scaled into SL(d) for even d");

  // The determinant of a strongly hyperbolic matrix is only measurable up to
  // the noise of its smallest pivot, and rescaling by a noise-dominated
  // estimate corrupts the element. Such inputs (long products of unimodular
  // factors, whose true determinant is one) are left untouched.
  if (first.pivot_ratio <= 1e10) {
    for (int pass = 0; pass < 2; ++pass) {
      const DetStats s = det_stats(entries_);
      entries_ /= (s.sign > 0 ? 1.0 : -1.0) * std::exp(s.log_abs / d);
    }
    const double res = std::abs(std::expm1(det_stats(entries_).log_abs));
    if (res > 1e-9) fail(ErrorKind::invalid_input, "determinant normalization failed", res);
  }
}

GroupElement GroupElement::identity(int d) { return GroupElement(Mat::Identity(d, d)); }

GroupElement GroupElement::inverse() const { return GroupElement(entries_.inverse()); }

GroupElement GroupElement::operator*(const GroupElement& o) const {
  return GroupElement(entries_ * o.entries_);
}

const DecompositionCache& GroupElement::decomp() const {
  auto cached = std::atomic_load_explicit(&cache_, std::memory_order_acquire);
  if (!cached) {
    auto fresh = std::make_shared<const DecompositionCache>(compute_decompositions(entries_));
    std::shared_ptr<const DecompositionCache> expected;
    if (std::atomic_compare_exchange_strong(&cache_, &expected, fresh))
      cached = std::move(fresh);
    else
      cached = std::move(expected);
  }
  return *cached;
}

CartanVector cartan_projection(const GroupElement& g) {
  return CartanVector(g.decomp().singular.array().log());
}

CartanVector cartan_projection(const ScaledMatrix& m) {
  Eigen::JacobiSVD<Mat> svd(m.mat);
  return CartanVector(svd.singularValues().array().log() + m.log_scale);
}

CVec spectrum(const Mat& m) {
  if (!m.allFinite()) fail(ErrorKind::invalid_input, "matrix has non-finite entries");
  Eigen::EigenSolver<Mat> es(m, /*computeEigenvectors=*/false);
  const CVec vals = es.eigenvalues();
  const std::vector<int> order = spectral_order(vals);
  CVec out(vals.size());
  for (int i = 0; i < vals.size(); ++i) out(i) = vals(order[i]);
  return out;
}

namespace {

Vec sorted_log_moduli(const CVec& eigenvalues, double shift) {
  Vec out(eigenvalues.size());
  for (int i = 0; i < eigenvalues.size(); ++i) {
    const double mod = std::abs(eigenvalues(i));
    out(i) = (mod > 0 ? std::log(mod) : -std::numeric_limits<double>::infinity()) + shift;
  }
  std::sort(out.data(), out.data() + out.size(), std::greater<double>());
  return out;
}

}  // namespace

CartanVector jordan_projection(const GroupElement& g) {
  return CartanVector(sorted_log_moduli(g.decomp().eigenvalues, 0.0));
}

CartanVector jordan_projection(const ScaledMatrix& m) {
  Eigen::EigenSolver<Mat> es(m.mat, /*computeEigenvectors=*/false);
  return CartanVector(sorted_log_moduli(es.eigenvalues(), m.log_scale));
}

CartanVector iwasawa_cocycle(const GroupElement& g, const Flag& eta) {
  return iwasawa_cocycle(ScaledMatrix{g.entries(), 0.0}, eta);
}

CartanVector iwasawa_cocycle(const ScaledMatrix& g, const Flag& eta) {
  eta.validate();
  if (eta.dim() != g.mat.rows()) fail(ErrorKind::invalid_flag, "flag dimension mismatch");
  Mat frame = eta.frame;
  // force the frame into SO(d); flipping one column stays in the same flag
  if (frame.determinant() < 0) frame.col(frame.cols() - 1) *= -1.0;
  Mat k;
  Vec a;
  Mat n;
  kan(g.mat * frame, k, a, n);
  return CartanVector(a.array() + g.log_scale);
}

bool is_loxodromic(const GroupElement& g, double gap_tol) {
  if (!(gap_tol > 0)) fail(ErrorKind::precondition, "gap_tol must be positive");
  const CVec& ev = g.decomp().eigenvalues;
  for (int i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i).imag()) > 1e-8 * (1.0 + std::abs(ev(i)))) return false;
  return jordan_projection(g).strictly_dominant(gap_tol);
}

std::vector<double> unipotent_contraction(const GroupElement& a, const GroupElement& h,
                                          int n_max) {
  const int d = a.dim();
  if (h.dim() != d) fail(ErrorKind::precondition, "dimension mismatch");
  if (n_max < 0) fail(ErrorKind::precondition, "n_max must be nonnegative");
  const Mat& am = a.entries();
  const Mat& hm = h.entries();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (i != j && std::abs(am(i, j)) > 1e-12)
        fail(ErrorKind::precondition, "a must be diagonal");
  for (int i = 0; i < d; ++i) {
    if (!(am(i, i) > 0)) fail(ErrorKind::precondition, "a must have positive diagonal");
    if (i + 1 < d && !(am(i, i) > am(i + 1, i + 1)))
      fail(ErrorKind::precondition, "a must be strictly dominant (in the open chamber)");
  }
  bool upper = true, lower = true;
  for (int i = 0; i < d; ++i) {
    if (std::abs(hm(i, i) - 1.0) > 1e-9) upper = lower = false;
    for (int j = 0; j < d; ++j) {
      if (j > i && std::abs(hm(i, j)) > 1e-12) lower = false;
      if (j < i && std::abs(hm(i, j)) > 1e-12) upper = false;
    }
  }
  if (!upper && !lower) fail(ErrorKind::precondition, "h must be unitriangular");

  std::vector<double> norms;
  norms.reserve(static_cast<size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    double sq = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        if (i == j) continue;
        // (a^{-n} h a^n)_{ij} = h_{ij} (a_j / a_i)^n
        const double v = hm(i, j) * std::pow(am(j, j) / am(i, i), n);
        sq += v * v;
      }
    norms.push_back(std::sqrt(sq));
  }
  return norms;
}

}  // namespace chamber
