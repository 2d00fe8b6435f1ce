// Hopf coordinates on the space of Weyl chambers: a chamber is the pair of
// opposite flags it is asymptotic to plus a trace-zero translation part. The
// translation flow fixes the flag pair and translates the vector part; the
// left group action moves flags and increments the vector part by the Iwasawa
// cocycle at the forward flag.
#pragma once

#include "chamber/flags.hpp"
#include "chamber/group_core.hpp"

#include <vector>

namespace chamber {

struct HopfPoint {
  FlagPair pair;
  CartanVector apart;
};

HopfPoint hopf_coordinates(const GroupElement& g);

// A group element reproducing the given coordinates (unique modulo the sign
// group M); requires a transverse flag pair.
GroupElement hopf_representative(const HopfPoint& p);

// h . (xi, eta; v) = (h xi, h eta; v + sigma(h, xi))
HopfPoint left_action(const GroupElement& h, const HopfPoint& p);

// Translation flow in direction theta (unit, strictly dominant): fixes the
// pair, apart += t theta.
HopfPoint flow_action(const HopfPoint& p, const CartanVector& theta, double t,
                      double wall_tol = 1e-9);

// Attracting/repelling flags of a loxodromic element (sorted real eigenbasis
// and its reversal).
FlagPair lox_fixed_flags(const GroupElement& g, double gap_tol = 1e-9);

// || jordan(g) - iwasawa_cocycle(g, g_plus) ||
double check_lambda_sigma(const GroupElement& g);

// Flag distances d(g^n eta, g_plus) for n = 0..n_max; eta must be opposite to
// the repelling flag.
std::vector<double> contraction_to_fixed_flag(const GroupElement& g, const Flag& eta,
                                              int n_max);

}  // namespace chamber
