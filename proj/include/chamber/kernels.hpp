// Data-parallel inner loops, each available as an OpenMP kernel and as a
// serial reference implementation. Both variants produce bitwise-identical
// results: per-item work writes to private slots and reductions are
// order-independent (max with exact-compare lexicographic tie-breaking).
#pragma once

#include "chamber/group_core.hpp"
#include "chamber/types.hpp"

#include <cstdint>
#include <vector>

namespace chamber {

// ---- projective grid verification ------------------------------------------

struct GridVerifyResult {
  // sup over domain samples of d(g.x, attract)
  double max_image_dist = 0.0;
  // sup over probe pairs (both endpoints in the domain) of d(g.x, g.y)/d(x, y)
  double max_lipschitz = 0.0;
  long domain_samples = 0;
};

// Sweeps a deterministic grid on the projective sphere restricted to the
// complement of the `exclusion`-neighbourhood of the hyperplane with unit
// normal `region_normal`, recording image concentration around `attract` and
// an empirical Lipschitz constant of the projective action of g.
GridVerifyResult grid_verify(const Mat& g, const Vec& attract, const Vec& region_normal,
                             double exclusion, int grid_n, std::uint64_t seed,
                             Parallel par = Parallel::omp);

// ---- semigroup word sampling ------------------------------------------------

enum class RayKind { jordan, cartan };

struct WordRaySample {
  // unit rays in the trace-zero space, one per loxodromic word, enumeration order
  std::vector<Vec> rays;
  std::vector<long> word_index;
  long words_enumerated = 0;
  bool truncated = false;
};

// Number of nonempty words over `gens` of length <= depth.
long word_count(int gens, int depth);

// Decodes a word index (enumeration: by length, then lexicographically) into
// generator digits.
std::vector<int> decode_word(long index, int gens, int depth);

// Evaluates all words up to `depth` (capped at `cap`) and keeps the Jordan or
// Cartan ray of every loxodromic product.
WordRaySample word_rays(const std::vector<GroupElement>& gens, int depth, RayKind kind,
                        long cap, double gap_tol, Parallel par = Parallel::omp);

// ---- bounded integer least squares ------------------------------------------

struct BoxSearchResult {
  bool found = false;
  std::vector<long> coefficients;
  double distance = 0.0;
  long evaluated = 0;
};

// Minimizes ||columns * n - target|| over integer vectors n with
// lo_i <= n_i <= hi_i, deterministic lexicographically-smallest tie-breaking.
// Gives up (found = false) when the box volume exceeds `budget`.
BoxSearchResult integer_box_search(const Mat& columns, const Vec& target,
                                   const std::vector<long>& lo, const std::vector<long>& hi,
                                   long budget, Parallel par = Parallel::omp);

struct BabaiSearchResult {
  bool found = false;
  std::vector<long> extra;
  std::vector<long> basis;
  double distance = 0.0;
  long evaluated = 0;
};

// Minimizes ||extras * ne + basis * nb - target|| with ne enumerated over the
// box and nb obtained by rounding the basis coordinates of the residual
// (clamped from below at basis_lo). Unbounded basis corrections come for
// free; only the non-basis deviations are enumerated.
BabaiSearchResult babai_box_search(const Mat& extras, const Mat& basis, const Vec& target,
                                   const std::vector<long>& lo, const std::vector<long>& hi,
                                   const std::vector<long>& basis_lo, long budget,
                                   Parallel par = Parallel::omp);

}  // namespace chamber
