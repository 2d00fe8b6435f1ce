// Polyhedral inner approximation of the limit cone of a finitely generated
// semigroup: sample Jordan or Cartan rays over all words to a depth, build
// the conic hull by double description inside the trace-zero space, and test
// interior membership by facet slack. Fixed-flag clouds and the transitivity
// orbit search live here as well.
#pragma once

#include "chamber/flags.hpp"
#include "chamber/group_core.hpp"
#include "chamber/kernels.hpp"
#include "chamber/schottky.hpp"

#include <vector>

namespace chamber {

// Deterministic orthonormal basis of the trace-zero subspace (Helmert
// columns); rays and facets are stored in R^d but live in this subspace.
Mat trace_zero_basis(int d);

struct ConeModel {
  std::vector<Vec> rays;    // unit, trace-zero
  std::vector<Vec> facets;  // unit normals: hull = {v : <f, v> >= 0 for all f}
  std::vector<int> extreme_rays;
  int depth = 0;
  RayKind kind = RayKind::jordan;
  int hull_dim = 0;
  int ambient_dim = 0;  // d - 1
  bool truncated = false;
};

struct ConeOptions {
  long word_cap = 100000;
  double gap_tol = 1e-8;
  double dedupe_tol = 1e-9;
  Parallel parallel = Parallel::omp;
};

ConeModel sample_cone(const std::vector<GroupElement>& gens, int depth, RayKind kind,
                      const ConeOptions& opt = {});

// Conic hull of explicitly given trace-zero rays (used by the direction
// family construction).
ConeModel cone_of_rays(const std::vector<Vec>& rays, int d, const ConeOptions& opt = {});

// Smallest facet slack of the normalized direction; +inf when the hull has no
// facets (whole space). Throws degenerate_cone (payload = hull dimension)
// when the hull is lower-dimensional.
double interior_margin(const ConeModel& cone, const CartanVector& theta);

bool interior_contains(const ConeModel& cone, const CartanVector& theta, double slack);

// Symmetric Hausdorff distance between the unit cross-sections, evaluated at
// extreme rays against the opposite hull.
double hausdorff_ray_distance(const ConeModel& a, const ConeModel& b);

struct LimitPointCloud {
  std::vector<FlagPair> pairs;
  std::vector<std::vector<int>> source_words;  // generator digit strings
  double min_cross_opposition = 0.0;
};

LimitPointCloud limit_point_cloud(const SchottkyFamily& family, int depth,
                                  double gap_tol = 1e-9);

struct FlagPairBox {
  FlagPair center;
  double radius = 0.0;

  bool contains(const FlagPair& p) const;
};

struct TransitivityResult {
  bool found = false;
  std::vector<int> word;  // digits of gamma2 followed by n copies of gamma1's digits
  long n = 0;
  double best_margin = 0.0;  // smallest box slack achieved (negative: outside)
};

// Searches for a word moving the center of U into V following the
// two-loxodromic scheme: candidates gamma2 gamma1^n with both loxodromics
// taken from the cloud.
TransitivityResult transitivity_witness(const LimitPointCloud& cloud,
                                        const SchottkyFamily& family, const FlagPairBox& u_box,
                                        const FlagPairBox& v_box, long n_cap = 40);

}  // namespace chamber
