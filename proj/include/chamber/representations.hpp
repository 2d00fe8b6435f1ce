// Exterior-power (fundamental) representations of SL(d,R): compound matrices
// of k x k minors in lexicographic basis order, the top-weight functionals
// they induce on the trace-zero diagonal space, and the K-invariant product
// bound on Cartan projections derived from them.
#pragma once

#include "chamber/group_core.hpp"
#include "chamber/types.hpp"

#include <vector>

namespace chamber {

// k-element subsets of {0..d-1} in lexicographic order; the basis order of
// the exterior power.
std::vector<std::vector<int>> ksubsets_lex(int d, int k);

// Compound matrix on Lambda^k R^d; entries are k x k minors of g.
Mat exterior_power(const Mat& g, int k);

// Top weight of the k-th fundamental representation evaluated on a diagonal
// coordinate vector: the sum of the first k coordinates.
double top_weight(const CartanVector& v, int k);

struct WeightResidual {
  int k = 0;
  double mu_residual = 0.0;      // |chi_k(mu(g)) - log ||Lambda^k g|| |
  double lambda_residual = 0.0;  // |chi_k(lambda(g)) - log spectral_radius|
};

struct WeightReport {
  std::vector<WeightResidual> per_power;
  double max_residual = 0.0;
};

WeightReport weight_identities_check(const GroupElement& g);

struct ProductBound {
  double value = 0.0;  // radius of the smallest ball containing the dual box
  std::vector<double> per_root;
};

// C_h with mu(g h) - mu(g), mu(h g) - mu(g) and sigma(h, .) all contained in
// the closed ball of radius `value`.
ProductBound cartan_product_bound(const GroupElement& h);

// Dual basis of the top-weight functionals inside the trace-zero space:
// column k-1 is e_k - e_{k+1}.
Mat weight_dual_basis(int d);

// mu(g^n) assembled from the exterior-power streams: the top singular value
// of (L^k g)^n is well-conditioned at any power, unlike the trailing singular
// values of a densified g^n.
CartanVector power_cartan(const GroupElement& g, long n);

}  // namespace chamber
