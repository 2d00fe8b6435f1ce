#include "chamber/grids.hpp"

#include <cmath>

namespace chamber {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double seeded_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t s = seed ^ (stream * 0xd1342543de82ef95ull) ^ (index * 0xaf251af3b0f025b5ull);
  const std::uint64_t bits = splitmix64(s);
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

double inverse_normal_cdf(double p) {
  // Acklam 2003; relative error below 1.15e-9 over (0,1).
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1 - plow;
  if (p <= 0.0) p = 1e-300;
  if (p >= 1.0) p = 1.0 - 1e-16;
  if (p < plow) {
    const double q = std::sqrt(-2 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  if (p > phigh) {
    const double q = std::sqrt(-2 * std::log(1 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  const double q = p - 0.5, r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
}

namespace {

constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                           31, 37, 41, 43, 47, 53, 59, 61, 67, 71};

double halton(std::int64_t index, int base) {
  double f = 1.0, r = 0.0;
  for (std::int64_t i = index; i > 0; i /= base) {
    f /= base;
    r += f * static_cast<double>(i % base);
  }
  return r;
}

}  // namespace

double halton_sequence(std::int64_t index, int dim) {
  return halton(index, kPrimes[dim % 20]);
}

Vec sphere_grid_point(int dim, std::int64_t index, std::uint64_t seed) {
  Vec v(dim);
  for (;;) {
    for (int j = 0; j < dim; ++j) {
      double u = halton(index + 1, kPrimes[j % 20]) + seeded_uniform(seed, j, 0);
      u -= std::floor(u);  // Cranley-Patterson rotation
      u = std::min(std::max(u, 1e-12), 1.0 - 1e-12);
      v(j) = inverse_normal_cdf(u);
    }
    const double n = v.norm();
    if (n > 1e-8) return v / n;
    ++index;  // astronomically unlikely; keep determinism by walking forward
  }
}

Vec sphere_grid_tangent(const Vec& v, std::int64_t index, std::uint64_t seed) {
  const int dim = static_cast<int>(v.size());
  for (std::uint64_t attempt = 0;; ++attempt) {
    Vec w(dim);
    for (int j = 0; j < dim; ++j) {
      const double u =
          std::min(std::max(seeded_uniform(seed ^ 0x7c5f9d1eull, j + 101 * attempt,
                                           static_cast<std::uint64_t>(index)),
                            1e-12),
                   1.0 - 1e-12);
      w(j) = inverse_normal_cdf(u);
    }
    Vec t = w - v.dot(w) * v;
    const double n = t.norm();
    if (n > 1e-8) return t / n;
  }
}

}  // namespace chamber
