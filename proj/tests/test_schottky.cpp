#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chamber/schottky.hpp"
#include "test_util.hpp"

#include <cmath>

using namespace chamber;
using namespace chamber::testing;

namespace {

SchottkyFamily certified_bundled_family(long power = 8) {
  auto gens = bundled_sl3_pair();
  SchottkyOptions opt;
  opt.grid_n = 1200;
  auto fam = certify_schottky(gens, 0.12, 0.12, opt, {power, power});
  REQUIRE(static_cast<bool>(fam));
  return *fam;
}

}  // namespace

TEST_CASE("overlap coefficient") {
  SUBCASE("h = g gives 1") {
    Mat g = Mat::Zero(2, 2);
    g(0, 0) = 4.0;
    g(1, 1) = 0.25;
    CHECK(overlap_coefficient(g, g) == doctest::Approx(1.0));
  }
  SUBCASE("45-degree conjugate gives 1/sqrt(2)") {
    Mat g = Mat::Zero(2, 2);
    g(0, 0) = 4.0;
    g(1, 1) = 0.25;
    const Mat rot = rotation_pair(2, 0, 1, M_PI / 4.0);
    const Mat h = rot * g * rot.transpose();
    CHECK(overlap_coefficient(g, h) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
  }
  SUBCASE("degenerate configuration is an error") {
    Mat g = Mat::Zero(2, 2);
    g(0, 0) = 4.0;
    g(1, 1) = 0.25;
    const Mat rot = rotation_pair(2, 0, 1, M_PI / 2.0);
    const Mat h = rot * g * rot.transpose();  // attract of h on repel of g
    CHECK_THROWS_AS(overlap_coefficient(g, h), Error);
  }
}

TEST_CASE("cyclic overlap sums") {
  Mat g = Mat::Zero(2, 2);
  g(0, 0) = 4.0;
  g(1, 1) = 0.25;

  SUBCASE("singleton vanishes") { CHECK(std::abs(cycle_log_overlap({g})) <= 1e-12); }
  SUBCASE("commuting diagonal family vanishes") {
    Mat g2 = Mat::Zero(2, 2);
    g2(0, 0) = 9.0;
    g2(1, 1) = 1.0 / 9.0;
    CHECK(std::abs(cycle_log_overlap({g, g2})) <= 1e-12);
  }
  SUBCASE("the 45-degree pair gives -log 2") {
    const Mat rot = rotation_pair(2, 0, 1, M_PI / 4.0);
    const Mat h = rot * g * rot.transpose();
    CHECK(cycle_log_overlap({g, h}) == doctest::Approx(-std::log(2.0)).epsilon(1e-10));
  }
  SUBCASE("rotation invariance") {
    std::mt19937_64 rng(601);
    const Mat h1 = random_gl(3, rng) + 4.0 * Mat::Identity(3, 3);
    const Mat h2 = random_gl(3, rng) + 4.0 * Mat::Identity(3, 3);
    Vec diag = (Vec(3) << 5.0, 1.0, 0.2).finished();
    const Mat a = h1 * diag.asDiagonal() * h1.inverse();
    const Mat b = h2 * diag.asDiagonal() * h2.inverse();
    const Mat c = a * b;  // generic third proximal element
    const double abc = cycle_log_overlap({a, b, c});
    const double bca = cycle_log_overlap({b, c, a});
    CHECK(abc == doctest::Approx(bca).epsilon(1e-9));
  }
}

TEST_CASE("product correction vector") {
  SUBCASE("singleton and commuting families vanish") {
    Mat g = Mat::Zero(3, 3);
    g(0, 0) = 4;
    g(1, 1) = 1;
    g(2, 2) = 0.25;
    Mat g2 = Mat::Zero(3, 3);
    g2(0, 0) = 9;
    g2(1, 1) = 1;
    g2(2, 2) = 1.0 / 9;
    CHECK(product_correction({GroupElement(g)}).norm() <= 1e-10);
    CHECK(product_correction({GroupElement(g), GroupElement(g2)}).norm() <= 1e-10);
  }
  SUBCASE("SL(2) pair matches the single-root pattern") {
    Mat g = Mat::Zero(2, 2);
    g(0, 0) = 4.0;
    g(1, 1) = 0.25;
    const Mat rot = rotation_pair(2, 0, 1, M_PI / 4.0);
    const GroupElement a(g), b(rot * g * rot.transpose());
    const CartanVector nu = product_correction({a, b});
    const double nu1 = cycle_log_overlap({a.entries(), b.entries()});
    CHECK(nu.coords(0) == doctest::Approx(nu1).epsilon(1e-9));
    CHECK(nu.coords(1) == doctest::Approx(-nu1).epsilon(1e-9));
  }
  SUBCASE("independent of eigenvector sign choices") {
    // hand-rolled overlap chain with deliberately flipped unit eigenvectors
    // agrees with the canonical computation
    std::mt19937_64 rng(602);
    const Mat hc = random_gl(3, rng) + 3.0 * Mat::Identity(3, 3);
    Vec diag = (Vec(3) << 6.0, 1.0, 1.0 / 6.0).finished();
    const GroupElement a = conjugated_diagonal(diag, hc);
    const GroupElement c = conjugated_diagonal(diag, hc + 0.4 * Mat::Identity(3, 3));
    const double canonical = cycle_log_overlap({a.entries(), c.entries()});
    const AttractRepel da = attract_repel(a.entries());
    const AttractRepel dc = attract_repel(c.entries());
    const Vec va = -da.attract.v, na = -da.repel.normal;  // flipped signs
    const Vec vc = dc.attract.v, nc = -dc.repel.normal;
    const double flipped = std::log(std::abs(na.dot(vc)) / std::abs(na.dot(va))) +
                           std::log(std::abs(nc.dot(va)) / std::abs(nc.dot(vc)));
    CHECK(canonical == doctest::Approx(flipped).epsilon(1e-10));
  }
}

TEST_CASE("schottky certification") {
  SUBCASE("bundled pair certifies at power 8") {
    const SchottkyFamily fam = certified_bundled_family();
    CHECK(fam.min_margins.minCoeff() >= 6 * fam.r);
    CHECK(fam.powers == std::vector<long>{8, 8});
  }
  SUBCASE("single strongly contracting conjugate certifies alone") {
    std::mt19937_64 rng(603);
    const Mat h = random_gl(3, rng) + 2.0 * Mat::Identity(3, 3);
    REQUIRE(std::abs(h.determinant()) > 0.1);
    Vec diag = (Vec(3) << 1e3, 1.0, 1e-3).finished();
    SchottkyOptions opt;
    opt.grid_n = 800;
    auto fam = certify_schottky({conjugated_diagonal(diag, h)}, 0.1, 0.1, opt);
    CHECK(static_cast<bool>(fam));
  }
  SUBCASE("pair with touching flags refuses") {
    Mat g = Mat::Zero(3, 3);
    g(0, 0) = 1e4;
    g(1, 1) = 1;
    g(2, 2) = 1e-4;
    // conjugating by the (0 1) rotation by pi/2 puts the attractor of h on
    // the repelling hyperplane of g
    const Mat rot = rotation_pair(3, 0, 1, M_PI / 2.0);
    SchottkyOptions opt;
    opt.grid_n = 400;
    auto fam = certify_schottky({GroupElement(g), GroupElement(rot * g * rot.transpose())}, 0.2,
                                0.2, opt);
    CHECK_FALSE(static_cast<bool>(fam));
    CHECK(fam.refusal.find("margin") != std::string::npos);
  }
  SUBCASE("eps > r is rejected") {
    CHECK_THROWS_AS(certify_schottky({GroupElement::identity(2)}, 0.1, 0.2, {}), Error);
  }
}

TEST_CASE("word evaluation matches dense products on moderate words") {
  const auto gens = bundled_sl3_pair();
  const Word w{{0, 2}, {1, 1}, {0, 1}};
  const ScaledMatrix prod = evaluate_word(gens, w);
  const Mat dense = gens[0].entries() * gens[0].entries() * gens[1].entries() * gens[0].entries();
  CHECK((prod.value() - dense).norm() <= 1e-9 * dense.norm());
}

TEST_CASE("product spectral estimate") {
  const SchottkyFamily fam = certified_bundled_family();
  SchottkyOptions opt;
  opt.grid_n = 1200;

  SUBCASE("single block words have near-zero residual at any power") {
    for (long p : {1L, 3L, 9L}) {
      const ProductEstimate est = product_estimate_check(fam, {{0, p}}, opt);
      CHECK(est.residual <= 1e-8);
      CHECK(est.loxodromic_certified);
    }
  }
  SUBCASE("commuting diagonal pair gives exactly additive spectra") {
    Mat a = Mat::Zero(3, 3);
    a(0, 0) = 1000;
    a(1, 1) = 1;
    a(2, 2) = 1e-3;
    Mat b = Mat::Zero(3, 3);
    b(0, 0) = 400;
    b(1, 1) = 2.5;
    b(2, 2) = 1e-3;
    auto diag_fam = certify_schottky({GroupElement(a), GroupElement(b)}, 0.2, 0.2, opt);
    REQUIRE(static_cast<bool>(diag_fam));
    const ProductEstimate est = product_estimate_check(*diag_fam, {{0, 2}, {1, 3}}, opt);
    CHECK(est.residual <= 1e-9);
  }
  SUBCASE("alternating words certify with flags near the outer blocks") {
    const ProductEstimate est = product_estimate_check(fam, {{0, 2}, {1, 1}, {0, 1}}, opt);
    CHECK(est.loxodromic_certified);
    CHECK(est.plus_flag_dist <= fam.eps);
    CHECK(est.minus_flag_dist <= fam.eps);
    CHECK(est.residual <= 2e-3);
  }
  SUBCASE("closure: random alternating words certify at (2r, 2eps)") {
    std::mt19937_64 rng(604);
    for (int trial = 0; trial < 20; ++trial) {
      Word w;
      int prev = -1;
      const int blocks = 1 + static_cast<int>(rng() % 4);
      for (int b = 0; b < blocks; ++b) {
        int gen = static_cast<int>(rng() % 2);
        if (gen == prev) gen = 1 - gen;
        w.push_back(WordBlock{gen, 1 + static_cast<long>(rng() % 3)});
        prev = gen;
      }
      CHECK(product_estimate_check(fam, w, opt).loxodromic_certified);
    }
  }
  SUBCASE("residual grows at most linearly in the block count") {
    double per_block_min = std::numeric_limits<double>::infinity();
    double per_block_max = 0.0;
    for (int blocks = 1; blocks <= 5; ++blocks) {
      Word w;
      for (int b = 0; b < blocks; ++b) w.push_back(WordBlock{b % 2, 2});
      const ProductEstimate est = product_estimate_check(fam, w, opt);
      if (blocks >= 2) {
        per_block_min = std::min(per_block_min, est.per_block);
        per_block_max = std::max(per_block_max, est.per_block);
      }
    }
    CHECK(per_block_max <= 3.0 * per_block_min + 1e-9);
  }
}

TEST_CASE("empirical spectral constant decreases under fourth powers") {
  const auto gens = bundled_sl3_pair();
  SchottkyOptions opt;
  opt.grid_n = 1200;
  auto base = certify_schottky(gens, 0.12, 0.12, opt, {8, 8});
  auto fourth = certify_schottky(gens, 0.12, 0.12, opt, {32, 32});
  REQUIRE(static_cast<bool>(base));
  REQUIRE(static_cast<bool>(fourth));
  const double c_base = measured_spectral_constant(*base, 50, 4, 3, 99, opt);
  const double c_fourth = measured_spectral_constant(*fourth, 50, 4, 3, 99, opt);
  CHECK(c_fourth < c_base);
  CHECK(c_base > 0);
}
