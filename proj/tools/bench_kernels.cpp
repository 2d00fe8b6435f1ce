// Times the OpenMP kernels against their serial reference implementations on
// representative workloads and checks that both produce identical results.

#include "chamber/dense_subgroup.hpp"
#include "chamber/kernels.hpp"

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

using namespace chamber;

namespace {

double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

Mat random_sl(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  for (;;) {
    Mat m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = normal(rng);
    if (std::abs(m.determinant()) > 0.1) return GroupElement(m).entries();
  }
}

struct Row {
  const char* name;
  double serial_ms;
  double omp_ms;
  bool equal;
};

void print(const Row& r) {
  std::printf("%-28s %10.2f ms %10.2f ms   speedup %5.2fx   identical: %s\n", r.name,
              r.serial_ms, r.omp_ms, r.serial_ms / r.omp_ms, r.equal ? "yes" : "NO");
}

}  // namespace

int main() {
  std::mt19937_64 rng(20240811);
  std::printf("%-28s %13s %13s\n", "kernel", "serial", "openmp");

  {
    const Mat g = Mat((Vec(3) << 50.0, 1.0, 0.02).finished().asDiagonal());
    const Vec attract = Vec::Unit(3, 0);
    const Vec normal = Vec::Unit(3, 0);
    const int grid_n = 60000;
    auto t0 = std::chrono::steady_clock::now();
    const auto serial = grid_verify(g, attract, normal, 0.05, grid_n, 7, Parallel::serial);
    const double serial_ms = ms_since(t0);
    t0 = std::chrono::steady_clock::now();
    const auto omp = grid_verify(g, attract, normal, 0.05, grid_n, 7, Parallel::omp);
    const double omp_ms = ms_since(t0);
    print(Row{"grid_verify", serial_ms, omp_ms,
              serial.max_image_dist == omp.max_image_dist &&
                  serial.max_lipschitz == omp.max_lipschitz &&
                  serial.domain_samples == omp.domain_samples});
  }

  {
    std::vector<GroupElement> gens;
    gens.emplace_back(random_sl(3, rng));
    gens.emplace_back(random_sl(3, rng));
    gens.emplace_back(random_sl(3, rng));
    auto t0 = std::chrono::steady_clock::now();
    const auto serial = word_rays(gens, 9, RayKind::jordan, 100000, 1e-8, Parallel::serial);
    const double serial_ms = ms_since(t0);
    t0 = std::chrono::steady_clock::now();
    const auto omp = word_rays(gens, 9, RayKind::jordan, 100000, 1e-8, Parallel::omp);
    const double omp_ms = ms_since(t0);
    bool equal = serial.rays.size() == omp.rays.size();
    for (size_t i = 0; equal && i < serial.rays.size(); ++i)
      equal = serial.rays[i] == omp.rays[i] && serial.word_index[i] == omp.word_index[i];
    print(Row{"word_rays depth 9", serial_ms, omp_ms, equal});
  }

  {
    const int l = 6;
    Mat cols(2, l);
    std::normal_distribution<double> normal;
    for (int i = 0; i < l; ++i) cols.col(i) = Vec::NullaryExpr(2, [&](int) { return normal(rng); });
    const Vec target = Vec::NullaryExpr(2, [&](int) { return 10 * normal(rng); });
    std::vector<long> lo(l, 0), hi(l, 14);
    auto t0 = std::chrono::steady_clock::now();
    const auto serial = integer_box_search(cols, target, lo, hi, 1L << 30, Parallel::serial);
    const double serial_ms = ms_since(t0);
    t0 = std::chrono::steady_clock::now();
    const auto omp = integer_box_search(cols, target, lo, hi, 1L << 30, Parallel::omp);
    const double omp_ms = ms_since(t0);
    print(Row{"integer_box_search 15^6", serial_ms, omp_ms,
              serial.distance == omp.distance && serial.coefficients == omp.coefficients});
  }

  return 0;
}
