// SL(d,R) arithmetic and the three projections: Cartan (sorted log singular
// values), Jordan (sorted log eigenvalue moduli) and the Iwasawa cocycle
// (diagonal of the KAN decomposition of g * k_eta). The trace-zero diagonal
// space is modelled by CartanVector.
#pragma once

#include "chamber/flags.hpp"
#include "chamber/types.hpp"

#include <complex>
#include <memory>
#include <vector>

namespace chamber {

// Element of the trace-zero diagonal Cartan space (log-eigenvalue scale).
struct CartanVector {
  Vec coords;

  CartanVector() = default;
  explicit CartanVector(Vec c) : coords(std::move(c)) {}

  int dim() const { return static_cast<int>(coords.size()); }
  double norm() const { return coords.norm(); }
  double trace() const { return coords.sum(); }

  bool sorted_nonincreasing(double tol = 1e-12) const;
  // strictly decreasing coordinates with all consecutive gaps > gap
  bool strictly_dominant(double gap) const;
  // smallest consecutive gap (+inf for dim < 2)
  double min_gap() const;

  CartanVector operator+(const CartanVector& o) const { return CartanVector(coords + o.coords); }
  CartanVector operator-(const CartanVector& o) const { return CartanVector(coords - o.coords); }
  CartanVector operator*(double s) const { return CartanVector(coords * s); }
};

// -w0 . v : reverse coordinates and negate (the opposition involution).
CartanVector opposition_involution(const CartanVector& v);

struct DecompositionCache {
  // Cartan / SVD: g = svd_u * diag(singular) * svd_v^T, singular values
  // positive and non-increasing.
  Mat svd_u;
  Mat svd_v;
  Vec singular;
  // Iwasawa / QR in KAN order: g = k * diag(exp(a)) * n with k special
  // orthogonal and n unit upper triangular.
  Mat iwasawa_k;
  Vec iwasawa_a;
  Mat iwasawa_n;
  // Spectrum, ordered by descending modulus, ties by descending real then
  // descending imaginary part.
  CVec eigenvalues;
  // Real eigenbasis (columns ordered like the eigenvalues) when g is
  // real-diagonalizable with real spectrum; empty otherwise.
  std::optional<Mat> eigenbasis;
};

class GroupElement {
 public:
  // Validates finiteness and dim >= 2, then rescales so det == 1 (exactly
  // representable determinant drift is tolerated up to 1e-9).
  explicit GroupElement(Mat entries);

  static GroupElement identity(int d);

  const Mat& entries() const { return entries_; }
  int dim() const { return static_cast<int>(entries_.rows()); }

  GroupElement inverse() const;
  GroupElement operator*(const GroupElement& o) const;

  // Lazily computed, shared between copies; safe for concurrent use.
  const DecompositionCache& decomp() const;

 private:
  Mat entries_;
  mutable std::shared_ptr<const DecompositionCache> cache_;
};

// ---- projections ----------------------------------------------------------

CartanVector cartan_projection(const GroupElement& g);
CartanVector jordan_projection(const GroupElement& g);

// Scaled variants (used for long word products that cannot be densified).
CartanVector cartan_projection(const ScaledMatrix& m);
CartanVector jordan_projection(const ScaledMatrix& m);
CVec spectrum(const Mat& m);  // ordering as in DecompositionCache

// Iwasawa cocycle: the diagonal log of the KAN decomposition of g * k_eta.
// Satisfies the cocycle relation sigma(g1 g2, eta) = sigma(g1, g2 eta) + sigma(g2, eta).
CartanVector iwasawa_cocycle(const GroupElement& g, const Flag& eta);
CartanVector iwasawa_cocycle(const ScaledMatrix& g, const Flag& eta);

// Jordan projection strictly inside the chamber: all consecutive gaps
// > gap_tol and real spectrum (imaginary parts below 1e-8 relatively).
bool is_loxodromic(const GroupElement& g, double gap_tol);

// ||a^{-n} h a^n - id||_F for n = 0..n_max; a strictly dominant positive
// diagonal, h upper or lower unitriangular.
std::vector<double> unipotent_contraction(const GroupElement& a, const GroupElement& h,
                                          int n_max);

}  // namespace chamber
