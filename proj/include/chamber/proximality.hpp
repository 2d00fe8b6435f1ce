// Quantified proximality on projective space: attractive/repulsive data from
// the spectrum, (r,eps) certification via the singular-gap sufficient
// condition or grid sampling, the Tits criterion, and the loxodromic variant
// running over every exterior power.
#pragma once

#include "chamber/group_core.hpp"
#include "chamber/kernels.hpp"
#include "chamber/projective.hpp"
#include "chamber/types.hpp"

#include <cstdint>
#include <vector>

namespace chamber {

struct ProjPoint {
  Vec v;  // unit, canonical sign
  static ProjPoint of(const Vec& raw) { return ProjPoint{canonical_line(raw)}; }
};

struct ProjHyperplane {
  Vec normal;  // unit, canonical sign
  static ProjHyperplane of(const Vec& raw) { return ProjHyperplane{canonical_line(raw)}; }
};

inline double proj_distance(const ProjPoint& a, const ProjPoint& b) {
  return proj_distance(a.v, b.v);
}
inline double proj_distance(const ProjPoint& a, const ProjHyperplane& h) {
  return proj_point_hyperplane_distance(a.v, h.normal);
}

struct AttractRepel {
  ProjPoint attract;
  ProjHyperplane repel;
  double modulus_gap = 0.0;  // |l1|/|l2| - 1
};

// Dominant eigendirection and invariant complement (from the dominant left
// eigenvector). Throws a proximality error carrying the modulus gap found
// when the top eigenvalue is not simple-real-dominant.
AttractRepel attract_repel(const Mat& g, double gap_tol = 1e-6);

enum class CertifyMethod { gap_bound, grid_sample };

struct ProximalityCertificate {
  double r = 0.0;
  double eps = 0.0;
  ProjPoint attract;
  ProjHyperplane repel;
  double lipschitz_bound = 0.0;  // <= eps by construction
  CertifyMethod method = CertifyMethod::gap_bound;
  double singular_gap = 0.0;  // a2/a1 actually measured
  int grid_n = 0;             // trust level of the grid route (0 for gap route)
};

struct CertifyOptions {
  std::uint64_t seed = 0;
  Parallel parallel = Parallel::omp;
  double eigen_gap_tol = 1e-6;
};

// Issues a certificate when (a) the attract/repel separation is >= 2r and
// (b) either the singular-gap route (a2/a1 <= eps^3 plus alignment of the
// singular frame with the eigendata, which makes the Breuillard-Gelander
// bound land inside B(attract, eps)) or the grid route (sampled containment
// and empirical Lipschitz constant <= eps) goes through. Refusals name the
// failing condition.
Certified<ProximalityCertificate> certify_proximal(const Mat& g, double r, double eps,
                                                   int grid_n,
                                                   const CertifyOptions& opt = {});

struct PowerProximality {
  long n0 = 0;
  double r = 0.0;
};

// Least n0 (up to `cap`) such that g^n certifies at (r, eps_target) for both
// n = n0 and n = 2 n0, where r = d(attract, repel)/2.
PowerProximality power_proximality(const Mat& g, double eps_target, int grid_n,
                                   long cap = 10000, const CertifyOptions& opt = {});

// Grid verification of the two Tits hypotheses at (x, Y): containment of the
// complement of the eps-neighbourhood of Y into B(x, eps), and the
// eps-Lipschitz property there. Requires d(x, Y) >= 6r.
bool tits_criterion(const Mat& g, const ProjPoint& x, const ProjHyperplane& y, double r,
                    double eps, int grid_n, const CertifyOptions& opt = {});

struct LoxodromicCertificate {
  double r = 0.0;
  double eps = 0.0;
  std::vector<ProximalityCertificate> per_power;  // k = 1..d-1
};

// (r,eps)-loxodromic: every exterior power certifies (r,eps)-proximal.
Certified<LoxodromicCertificate> certify_loxodromic(const GroupElement& g, double r,
                                                    double eps, int grid_n,
                                                    const CertifyOptions& opt = {});

}  // namespace chamber
