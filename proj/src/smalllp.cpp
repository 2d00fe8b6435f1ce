#include "chamber/smalllp.hpp"

#include <cmath>
#include <vector>

namespace chamber {

namespace {

// Simplex on the tableau [A | b], basis tracked explicitly, Bland's rule.
// Returns false on unboundedness.
bool simplex(Mat& t, std::vector<int>& basis, Vec& cost, double tol) {
  const int rows = static_cast<int>(t.rows());
  const int cols = static_cast<int>(t.cols()) - 1;
  for (;;) {
    // reduced costs: c_j - c_B . B^{-1} A_j; the tableau is kept in
    // canonical form so reduced cost = cost(j) - sum_i cost(basis[i]) t(i,j)
    int enter = -1;
    for (int j = 0; j < cols; ++j) {
      double rc = cost(j);
      for (int i = 0; i < rows; ++i) rc -= cost(basis[static_cast<size_t>(i)]) * t(i, j);
      if (rc < -tol) {
        enter = j;
        break;  // Bland: smallest index
      }
    }
    if (enter < 0) return true;
    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < rows; ++i) {
      if (t(i, enter) > tol) {
        const double ratio = t(i, cols) / t(i, enter);
        if (leave < 0 || ratio < best_ratio - tol ||
            (std::abs(ratio - best_ratio) <= tol &&
             basis[static_cast<size_t>(i)] < basis[static_cast<size_t>(leave)])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) return false;  // unbounded
    // pivot
    t.row(leave) /= t(leave, enter);
    for (int i = 0; i < rows; ++i)
      if (i != leave && std::abs(t(i, enter)) > 0) t.row(i) -= t(i, enter) * t.row(leave);
    basis[static_cast<size_t>(leave)] = enter;
  }
}

}  // namespace

LpResult lp_solve_eq(const Mat& a, const Vec& b, const Vec& c, double tol) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  Mat t(m, n + m + 1);
  t.block(0, 0, m, n) = a;
  t.block(0, n, m, m) = Mat::Identity(m, m);
  t.col(n + m) = b;
  for (int i = 0; i < m; ++i)
    if (t(i, n + m) < 0) t.row(i) = -t.row(i);

  // phase 1: minimize the artificial sum
  Vec cost1 = Vec::Zero(n + m);
  cost1.tail(m).setOnes();
  std::vector<int> basis(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) basis[static_cast<size_t>(i)] = n + i;
  if (!simplex(t, basis, cost1, tol)) return LpResult{};
  double art = 0.0;
  for (int i = 0; i < m; ++i)
    if (basis[static_cast<size_t>(i)] >= n) art += t(i, n + m);
  if (art > 1e-7) return LpResult{};

  // drive leftover artificials out of the basis when possible
  for (int i = 0; i < m; ++i) {
    if (basis[static_cast<size_t>(i)] < n) continue;
    int enter = -1;
    for (int j = 0; j < n; ++j)
      if (std::abs(t(i, j)) > tol) {
        enter = j;
        break;
      }
    if (enter >= 0) {
      t.row(i) /= t(i, enter);
      for (int k = 0; k < m; ++k)
        if (k != i) t.row(k) -= t(k, enter) * t.row(i);
      basis[static_cast<size_t>(i)] = enter;
    }
  }

  // phase 2 on the original columns only (artificials pinned at zero cost and
  // blocked from re-entering by a prohibitive cost)
  Vec cost2(n + m);
  cost2.head(n) = c;
  cost2.tail(m).setConstant(1e30);
  if (!simplex(t, basis, cost2, tol)) return LpResult{};

  LpResult out;
  out.feasible = true;
  out.x = Vec::Zero(n);
  for (int i = 0; i < m; ++i)
    if (basis[static_cast<size_t>(i)] < n) out.x(basis[static_cast<size_t>(i)]) = t(i, n + m);
  out.value = c.dot(out.x);
  return out;
}

bool in_cone(const Mat& columns, const Vec& target, double tol) {
  return lp_solve_eq(columns, target, Vec::Zero(columns.cols()), tol).feasible;
}

std::optional<double> cone_depth(const Mat& columns, const Vec& target, double tol) {
  // target = columns * (s 1 + u), u >= 0, 0 <= s <= cap: variables (s, u, slack)
  const int m = static_cast<int>(columns.rows());
  const int n = static_cast<int>(columns.cols());
  const double cap = 1e6;
  Mat a = Mat::Zero(m + 1, n + 2);
  a.block(0, 0, m, 1) = columns.rowwise().sum();
  a.block(0, 1, m, n) = columns;
  a(m, 0) = 1.0;
  a(m, n + 1) = 1.0;
  Vec b(m + 1);
  b.head(m) = target;
  b(m) = cap;
  Vec c = Vec::Zero(n + 2);
  c(0) = -1.0;  // maximize s
  const LpResult res = lp_solve_eq(a, b, c, tol);
  if (!res.feasible) return std::nullopt;
  return res.x(0);
}

}  // namespace chamber
