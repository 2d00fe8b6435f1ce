// End-to-end construction of mixing witnesses: select a direction-adapted
// Schottky family whose Jordan rays bracket theta, complete its length data
// to an eta/2-dense subgroup, solve the nonnegative integer approximation for
// the shifted target, and assemble gamma_t = h^n g_l^{m_l} ... g_1^{m_1} h^n
// with independently recomputed spectral data.
//
// Every block is represented as a word over a small base list (the family
// generators and h); all spectral data flows through per-exterior-power
// scaled streams, so arbitrarily strong powers stay accurate.
#pragma once

#include "chamber/dense_subgroup.hpp"
#include "chamber/hopf.hpp"
#include "chamber/limit_cone.hpp"
#include "chamber/schottky.hpp"

#include <string>
#include <vector>

namespace chamber {

struct MixOptions {
  int grid_n = 400;
  CertifyOptions certify = {};
  std::uint64_t seed = 1;
  double direction_margin = 0.02;  // required interior margin of theta
  long max_family_power = 64;      // powers tried when certifying families
  int pool_depth = 3;              // completion pool: block words up to this length
  int corpus_size = 32;            // measured-C corpus size
  int corpus_blocks = 4;
  long corpus_power = 3;
  double lp_margin = 1e-7;  // required cone depth of the shifted target
  ApproxOptions approx = {};
  DenseOptions dense = {};
};

struct DirectionFamily {
  SchottkyFamily family;  // d-1 certified generator powers
  CartanVector theta;
  double cone_margin = 0.0;
  std::vector<std::vector<int>> source_words;  // digits in the original generators
};

DirectionFamily build_direction_family(const std::vector<GroupElement>& gens,
                                       const CartanVector& theta, int depth,
                                       const MixOptions& opt = {});

struct MixingWitness {
  Word word;            // blocks over the scaffold base (family gens, then h)
  ScaledMatrix gamma;   // assembled product (scaled form)
  CartanVector lambda;  // independently recomputed Jordan projection
  double lambda_err = 0.0;
  double flag_err = 0.0;  // exterior-embedding distance to the h flags
  double t = 0.0;
};

// One block of the product: a word over the scaffold base together with its
// streamed spectral data.
struct ScaffoldBlock {
  Word word;  // over base, block powers already absorbed
  Vec lambda;
  std::vector<Vec> plus_lines;
  std::vector<Vec> minus_normals;
};

// Data shared by every t on a grid: the extended block family S' (family
// generators plus the density completion), the bracketing power of h, the
// cyclic correction and the measured spectral constant.
struct WitnessScaffold {
  std::vector<GroupElement> base;  // family generators followed by h
  int h_base = 0;
  std::vector<ScaffoldBlock> blocks;  // S', used with index order l-1 .. 0
  ScaffoldBlock h_block;              // h^n
  CartanVector correction;            // cyclic correction of (h^n, g_l..g_1, h^n)
  Vec lambda_sum;                      // sum of block lambdas (for the >= 1 shift)
  double measured_c = 0.0;
  double c_budget = 0.0;  // (3(d-1)+2) * measured_c, must be <= eta/2
  long power = 1;         // bracketing power applied to h and the family
  double working_r = 0.0;
  double working_eps = 0.0;
};

WitnessScaffold prepare_witness(const DirectionFamily& df, const GroupElement& h, double eta,
                                const MixOptions& opt = {});

// Smallest t (within 1/2) whose shifted target sits in the cone at depth
// >= lp_margin.
double discover_min_t(const WitnessScaffold& sc, const DirectionFamily& df,
                      const CartanVector& x, double t_hint, const MixOptions& opt = {});

// First t at which the full witness construction succeeds: the integer
// search may need targets deeper than LP feasibility alone, and the caller
// keeps pushing t until the approximation lands (the retry-deeper policy).
double discover_practical_t(const WitnessScaffold& sc, const DirectionFamily& df,
                            const CartanVector& x, double eta, const MixOptions& opt = {});

// Witness at one t; throws needs_larger_t (payload: minimal feasible T) when
// the shifted target is infeasible, search_exhausted (payload: best
// lambda_err) when the integer search cannot reach eta.
MixingWitness witness_at(const WitnessScaffold& sc, const DirectionFamily& df,
                         const CartanVector& x, double t, double eta,
                         const MixOptions& opt = {});

MixingWitness make_witness(const DirectionFamily& df, const GroupElement& h,
                           const CartanVector& x, double t, double eta,
                           const MixOptions& opt = {});

struct HopfBox {
  FlagPair flags;
  double flag_radius = 0.0;  // exterior-embedding metric
  Vec center;                // trace-zero ball center
  double radius = 0.0;
};

struct OverlapEntry {
  double t = 0.0;
  bool ok = false;
  std::string error;
  MixingWitness witness;
  CartanVector overlap_apart;  // u_center + lambda(gamma_t)
  double overlap_slack = 0.0;  // min slack against both boxes
};

// For each t in the grid past the discovered T: a witness gamma_t and the
// explicit point (gamma_t flags; u + sigma(gamma_t, gamma_t^+)) lying in both
// gamma_t U and the time-t translate of V, verified within the box radii.
std::vector<OverlapEntry> mixing_overlap_demo(const DirectionFamily& df, const GroupElement& h,
                                              const HopfBox& u_box, const HopfBox& v_box,
                                              const std::vector<double>& t_grid,
                                              const MixOptions& opt = {});

}  // namespace chamber
