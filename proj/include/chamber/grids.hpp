// Deterministic low-discrepancy sampling of the projective sphere. Points are
// a Halton sequence pushed through the inverse normal CDF and normalized; a
// Cranley-Patterson rotation derived from the seed keeps every grid fully
// reproducible while letting independent reruns decorrelate.
#pragma once

#include "chamber/types.hpp"

#include <cstdint>

namespace chamber {

// SplitMix64 step; the basis of all seed-derived constants.
std::uint64_t splitmix64(std::uint64_t& state);

// Uniform double in [0,1) from (seed, stream, index), stateless.
double seeded_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

// Inverse standard normal CDF (Acklam's rational approximation, ~1e-9).
double inverse_normal_cdf(double p);

// Radical-inverse Halton value in the base of the dim-th prime (dim < 20).
double halton_sequence(std::int64_t index, int dim);

// index-th point of the seed-rotated Halton sphere grid on S^{d-1}.
Vec sphere_grid_point(int dim, std::int64_t index, std::uint64_t seed);

// Deterministic unit tangent at v (for local Lipschitz probes).
Vec sphere_grid_tangent(const Vec& v, std::int64_t index, std::uint64_t seed);

}  // namespace chamber
