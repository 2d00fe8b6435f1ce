// Constructive density of additive subgroups: resolution-relative covering
// certification (targets reduced modulo a designated basis, bounded integer
// combinations explored breadth-first on the torus), epsilon-dense completion
// with at most 2d extra generators by the short-vector/quotient induction,
// and nonnegative integer approximation deep inside the positive cone.
#pragma once

#include "chamber/types.hpp"

#include <cstdint>
#include <vector>

namespace chamber {

struct GeneratorSet {
  std::vector<Vec> vectors;
  std::vector<int> basis_idx;     // indices of the designated basis
  double basis_condition = 0.0;   // condition number of the basis matrix
};

// Greedy max-volume basis designation (column-pivoted QR order).
GeneratorSet designate_basis(std::vector<Vec> vectors);

struct DenseOptions {
  std::uint64_t seed = 0;
  long cell_cap = 64000000;  // torus occupancy cells (one byte each)
  long depth_cap = 4000000;  // breadth-first layers over the extra generators
  Parallel parallel = Parallel::omp;
};

struct DensityReport {
  double eps = 0.0;
  double covering_radius_estimate = 0.0;
  long samples = 0;
  bool certified = false;
  // cap hit while the closure was still growing: the negative answer is not
  // trustworthy (distinct from a refusal)
  bool inconclusive = false;
  bool saturated = false;
  long cells_visited = 0;
};

DensityReport eps_density_check(const GeneratorSet& gens, double eps, double domain_radius,
                                int grid_n, const DenseOptions& opt = {});
DensityReport eps_density_check(const std::vector<Vec>& gens, double eps, double domain_radius,
                                int grid_n, const DenseOptions& opt = {});

// Returns indices into e.vectors of at most 2d elements F such that the
// designated basis together with F certifies eps-density. Throws
// precondition when E itself does not certify at eps/4, and
// insufficient_generators when the pigeonhole runs out of elements.
std::vector<int> dense_completion(const GeneratorSet& e, double eps,
                                  const DenseOptions& opt = {});

struct ApproxOptions {
  long coeff_radius = 4096;  // deviation-box ladder limit for non-basis coefficients
  long budget = 80000000;
  double lp_tol = 1e-9;
  Parallel parallel = Parallel::omp;
};

struct ApproxResult {
  bool ok = false;
  std::vector<long> coefficients;
  double error = 0.0;
};

// || sum n_i ls_i - target || <= eta over nonnegative integers, via LP
// relaxation rounding plus bounded local search (lexicographically smallest
// optimum). Throws precondition/infeasible when the target is outside the
// positive cone of the generators.
ApproxResult nonneg_integer_approx(const std::vector<Vec>& ls, const Vec& target, double eta,
                                   const ApproxOptions& opt = {});

}  // namespace chamber
