// Products of proximal elements: overlap coefficients, the cyclic correction
// term entering the product spectral estimate, word evaluation with
// re-factorization, and strong Schottky certification for families of
// loxodromic elements.
//
// Long words are never densified: the Jordan projection of a word is read off
// the dominant eigenvalue of every exterior-power stream, which stays
// well-conditioned however large the dynamic range of the product gets.
#pragma once

#include "chamber/group_core.hpp"
#include "chamber/proximality.hpp"
#include "chamber/types.hpp"

#include <cstdint>
#include <vector>

namespace chamber {

struct WordBlock {
  int gen = 0;
  long power = 1;
  bool operator==(const WordBlock&) const = default;
};
using Word = std::vector<WordBlock>;

// |alpha(g, h)|: the absolute coefficient of the attractive vector of g in
// the decomposition of the attractive vector of h along the repelling
// hyperplane of g. Throws degenerate_configuration when the attractive point
// of h lies on the repelling hyperplane of g.
double overlap_coefficient(const Mat& g, const Mat& h, double gap_tol = 1e-6,
                           double degeneracy_tol = 1e-9);

// Sum of log|alpha(a_j, a_{j+1})| over the cyclic consecutive pairs of the
// list, taken in product (left-to-right) order. Invariant under rotation.
double cycle_log_overlap(const std::vector<Mat>& blocks, double gap_tol = 1e-6,
                         double degeneracy_tol = 1e-9);

// The correction vector of the product spectral estimate: its top-weight
// coordinates are the cyclic overlap sums of the exterior-power images of the
// blocks, again in product order.
CartanVector product_correction(const std::vector<GroupElement>& blocks,
                                double gap_tol = 1e-6, double degeneracy_tol = 1e-9);

// Word product evaluated in scaled form with a QR re-factorization every
// eight multiplications.
ScaledMatrix evaluate_word(const std::vector<GroupElement>& gens, const Word& w);

// Spectral data of a word product assembled from the exterior-power streams.
struct WordSpectralData {
  CartanVector lambda;
  bool real_dominant = false;        // every power has a real dominant eigenvalue
  std::vector<Vec> plus_lines;       // dominant right eigendirections, k = 1..d-1
  std::vector<Vec> minus_normals;    // dominant left eigendirections, k = 1..d-1
  std::vector<ScaledMatrix> powers;  // the streamed exterior-power products
};
WordSpectralData word_spectral_data(const std::vector<GroupElement>& gens, const Word& w);

struct SchottkyFamily {
  std::vector<GroupElement> gens;
  // the certified semigroup is generated by gens[i]^powers[i]; a word block
  // (i, m) denotes gens[i]^(powers[i] * m)
  std::vector<long> powers;
  double r = 0.0;
  double eps = 0.0;
  // margins[k-1](i, j) = d(attract(L^k g_i), repel(L^k g_j)); all >= 6r
  std::vector<Mat> margins;
  Mat min_margins;  // entrywise min over k
  std::vector<LoxodromicCertificate> certificates;

  long power_of(int gen) const { return powers.empty() ? 1 : powers[static_cast<size_t>(gen)]; }
  // word over the certified generators expanded to base-element powers
  Word expand(const Word& w) const;
  Vec block_lambda(int gen) const;  // lambda of gens[gen]^powers[gen]
};

struct SchottkyOptions {
  int grid_n = 400;
  CertifyOptions certify = {};
};

// Certifies every generator power (r,eps)-loxodromic and every ordered pair
// (including i == j) at margin >= 6r in every exterior power. All spectral
// data comes from per-power scaled streams, so arbitrarily strong powers stay
// accurate.
Certified<SchottkyFamily> certify_schottky(const std::vector<GroupElement>& gens, double r,
                                           double eps, const SchottkyOptions& opt = {},
                                           const std::vector<long>& powers = {});

struct ProductEstimate {
  CartanVector lambda_actual;
  CartanVector predicted;  // sum n_i lambda(g_i) + correction
  double residual = 0.0;
  double per_block = 0.0;  // residual / number of blocks
  bool loxodromic_certified = false;  // (2r, 2eps) on every power
  double plus_flag_dist = 0.0;   // to the leftmost block's attractive data
  double minus_flag_dist = 0.0;  // to the rightmost block's repulsive data
};

// Checks the product spectral estimate on one alternating word and certifies
// the product (2r,2eps)-loxodromic with flags near the outer blocks.
ProductEstimate product_estimate_check(const SchottkyFamily& family, const Word& w,
                                       const SchottkyOptions& opt = {});

// Empirical spectral constant of the family: max over a seeded corpus of
// alternating words of residual / blocks.
double measured_spectral_constant(const SchottkyFamily& family, int corpus_size,
                                  int max_blocks, long max_power, std::uint64_t seed,
                                  const SchottkyOptions& opt = {});

}  // namespace chamber
