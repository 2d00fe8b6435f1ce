#include "chamber/representations.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace chamber {

std::vector<std::vector<int>> ksubsets_lex(int d, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(k);
  for (int i = 0; i < k; ++i) cur[i] = i;
  for (;;) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[i] == d - k + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

Mat exterior_power(const Mat& g, int k) {
  const int d = static_cast<int>(g.rows());
  if (k < 1 || k > d - 1) fail(ErrorKind::precondition, "exterior power index out of range");
  const auto subsets = ksubsets_lex(d, k);
  const int m = static_cast<int>(subsets.size());
  Mat out(m, m);
  Mat minor(k, k);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) minor(i, j) = g(subsets[a][i], subsets[b][j]);
      out(a, b) = minor.determinant();
    }
  return out;
}

double top_weight(const CartanVector& v, int k) {
  if (k < 1 || k > v.dim()) fail(ErrorKind::precondition, "weight index out of range");
  return v.coords.head(k).sum();
}

WeightReport weight_identities_check(const GroupElement& g) {
  const int d = g.dim();
  const CartanVector mu = cartan_projection(g);
  const CartanVector lambda = jordan_projection(g);
  WeightReport report;
  for (int k = 1; k <= d - 1; ++k) {
    const Mat rep = exterior_power(g.entries(), k);
    Eigen::JacobiSVD<Mat> svd(rep);
    const double op_norm = svd.singularValues()(0);
    Eigen::EigenSolver<Mat> es(rep, /*computeEigenvectors=*/false);
    const double rho = es.eigenvalues().cwiseAbs().maxCoeff();
    WeightResidual r;
    r.k = k;
    r.mu_residual = std::abs(top_weight(mu, k) - std::log(op_norm));
    r.lambda_residual = std::abs(top_weight(lambda, k) - std::log(rho));
    report.max_residual = std::max({report.max_residual, r.mu_residual, r.lambda_residual});
    report.per_power.push_back(r);
  }
  return report;
}

CartanVector power_cartan(const GroupElement& g, long n) {
  const int d = g.dim();
  Vec partial = Vec::Zero(d + 1);
  for (int k = 1; k <= d - 1; ++k) {
    const ScaledMatrix s = ScaledMatrix::of(exterior_power(g.entries(), k)).power(n);
    Eigen::JacobiSVD<Mat> svd(s.mat);
    partial(k) = std::log(svd.singularValues()(0)) + s.log_scale;
  }
  Vec mu(d);
  for (int i = 1; i <= d; ++i) mu(i - 1) = partial(i) - partial(i - 1);
  return CartanVector(mu);
}

Mat weight_dual_basis(int d) {
  Mat w = Mat::Zero(d, d - 1);
  for (int k = 0; k < d - 1; ++k) {
    w(k, k) = 1.0;
    w(k + 1, k) = -1.0;
  }
  return w;
}

ProductBound cartan_product_bound(const GroupElement& h) {
  const int d = h.dim();
  const CartanVector mu = cartan_projection(h);
  const CartanVector mu_inv = cartan_projection(h.inverse());
  ProductBound bound;
  bound.per_root.resize(static_cast<size_t>(d - 1));
  for (int k = 1; k <= d - 1; ++k)
    bound.per_root[static_cast<size_t>(k - 1)] =
        std::max(top_weight(mu, k), top_weight(mu_inv, k));
  // smallest ball containing the symmetric box in dual coordinates: scan the
  // vertices (the norm is maximized at a vertex of the box)
  const Mat dual = weight_dual_basis(d);
  double radius = 0.0;
  const int corners = 1 << (d - 1);
  for (int mask = 0; mask < corners; ++mask) {
    Vec p = Vec::Zero(d);
    for (int k = 0; k < d - 1; ++k) {
      const double s = (mask >> k) & 1 ? 1.0 : -1.0;
      p += s * bound.per_root[static_cast<size_t>(k)] * dual.col(k);
    }
    radius = std::max(radius, p.norm());
  }
  bound.value = radius;
  return bound;
}

}  // namespace chamber
