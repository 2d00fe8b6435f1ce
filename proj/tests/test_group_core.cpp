#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chamber/group_core.hpp"
#include "chamber/representations.hpp"
#include "test_util.hpp"

#include <cmath>

using namespace chamber;
using namespace chamber::testing;

TEST_CASE("cartan projection on frozen inputs") {
  CHECK(cartan_projection(GroupElement::identity(3)).norm() <= 1e-12);

  Mat d3 = Mat::Zero(3, 3);
  d3(0, 0) = std::exp(1.0);
  d3(1, 1) = 1.0;
  d3(2, 2) = std::exp(-1.0);
  const CartanVector mu = cartan_projection(GroupElement(d3));
  CHECK(mu.coords(0) == doctest::Approx(1.0));
  CHECK(mu.coords(1) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(mu.coords(2) == doctest::Approx(-1.0));
}

TEST_CASE("cartan projection of the shear: characteristic polynomial oracle") {
  // g^T g = [[1,1],[1,2]] has eigenvalues (3 +- sqrt(5))/2; the log singular
  // values are half their logs (computed here, not assumed)
  Mat shear(2, 2);
  shear << 1, 1, 0, 1;
  const double top = (3.0 + std::sqrt(5.0)) / 2.0;
  const double expected = 0.5 * std::log(top);
  const CartanVector mu = cartan_projection(GroupElement(shear));
  CHECK(mu.coords(0) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(mu.coords(1) == doctest::Approx(-expected).epsilon(1e-12));
  // and (3+sqrt 5)/2 is the square of the golden ratio
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  CHECK(mu.coords(0) == doctest::Approx(std::log(phi)).epsilon(1e-12));
}

TEST_CASE("cartan projection is K-bi-invariant") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    const GroupElement g = random_sl(3, rng);
    const GroupElement kgk(random_so(3, rng) * g.entries() * random_so(3, rng));
    CHECK((cartan_projection(kgk) - cartan_projection(g)).norm() <= 1e-8);
  }
}

TEST_CASE("cartan projection of the inverse is the opposition involution") {
  std::mt19937_64 rng(102);
  for (int trial = 0; trial < 50; ++trial) {
    const GroupElement g = random_sl(4, rng);
    const CartanVector lhs = cartan_projection(g.inverse());
    const CartanVector rhs = opposition_involution(cartan_projection(g));
    CHECK((lhs - rhs).norm() <= 1e-8);
  }
}

TEST_CASE("jordan projection on frozen inputs") {
  Mat d3 = Mat::Zero(3, 3);
  d3(0, 0) = 2.0;
  d3(1, 1) = 1.0;
  d3(2, 2) = 0.5;
  const CartanVector lam = jordan_projection(GroupElement(d3));
  CHECK(lam.coords(0) == doctest::Approx(std::log(2.0)));
  CHECK(lam.coords(1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(lam.coords(2) == doctest::Approx(-std::log(2.0)));

  const CartanVector elliptic = jordan_projection(GroupElement(rotation_pair(2, 0, 1, 0.8)));
  CHECK(elliptic.norm() <= 1e-10);
}

TEST_CASE("jordan projection is conjugation invariant") {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 50; ++trial) {
    const GroupElement g = random_sl(3, rng);
    const GroupElement h = random_sl(3, rng);
    const GroupElement conj(h.entries() * g.entries() * h.entries().inverse());
    CHECK((jordan_projection(conj) - jordan_projection(g)).norm() <= 1e-7);
  }
}

TEST_CASE("spectral radius formula: (1/n) mu(g^n) -> lambda(g)") {
  // squared samples keep the translation length away from zero; the O(1/n)
  // constant depends on the diagonalizer, not on ||lambda||
  std::mt19937_64 rng(104);
  for (int trial = 0; trial < 20; ++trial) {
    const GroupElement g0 = random_loxodromic(3, rng, 0.2);
    const GroupElement g = g0 * g0;
    const CartanVector lam = jordan_projection(g);
    const CartanVector approx = power_cartan(g, 64) * (1.0 / 64.0);
    CHECK((approx - lam).norm() <= 0.05 * lam.norm() + 1e-6);
    // convergence: n = 64 beats n = 8
    const CartanVector coarse = power_cartan(g, 8) * (1.0 / 8.0);
    CHECK((approx - lam).norm() <= (coarse - lam).norm() + 1e-9);
  }
}

TEST_CASE("iwasawa cocycle on frozen inputs") {
  // sigma(exp(v), standard flag) = v
  Mat ev = Mat::Zero(3, 3);
  ev(0, 0) = std::exp(0.4);
  ev(1, 1) = std::exp(-0.1);
  ev(2, 2) = std::exp(-0.3);
  const CartanVector sigma = iwasawa_cocycle(GroupElement(ev), Flag::standard(3));
  CHECK(sigma.coords(0) == doctest::Approx(0.4));
  CHECK(sigma.coords(1) == doctest::Approx(-0.1));
  CHECK(sigma.coords(2) == doctest::Approx(-0.3));
}

TEST_CASE("iwasawa cocycle relation") {
  std::mt19937_64 rng(105);
  for (int trial = 0; trial < 100; ++trial) {
    const GroupElement g1 = random_sl(3, rng);
    const GroupElement g2 = random_sl(3, rng);
    const Flag eta = Flag::of_matrix(random_gl(3, rng));
    const CartanVector lhs = iwasawa_cocycle(g1 * g2, eta);
    const CartanVector rhs =
        iwasawa_cocycle(g1, act(g2.entries(), eta)) + iwasawa_cocycle(g2, eta);
    CHECK((lhs - rhs).norm() <= 1e-7);
  }
  // identity second factor: sigma(g1 * id, eta) = sigma(g1, eta)
  const GroupElement g1 = random_sl(3, rng);
  const Flag eta = Flag::of_matrix(random_gl(3, rng));
  const CartanVector with_id =
      iwasawa_cocycle(g1 * GroupElement::identity(3), eta);
  CHECK((with_id - iwasawa_cocycle(g1, eta)).norm() <= 1e-9);
}

TEST_CASE("iwasawa cocycle against the exterior-power norm oracle") {
  // chi_k(sigma(g, eta)) = log ||L^k g . v_eta|| for the unit decomposable
  // vector of the flag's k-subspace
  std::mt19937_64 rng(106);
  for (int trial = 0; trial < 25; ++trial) {
    const GroupElement g = random_sl(4, rng);
    const Flag eta = Flag::of_matrix(random_gl(4, rng));
    const CartanVector sigma = iwasawa_cocycle(g, eta);
    for (int k = 1; k <= 3; ++k) {
      const auto subsets = ksubsets_lex(4, k);
      Vec pluecker(static_cast<int>(subsets.size()));
      Mat minor(k, k);
      for (size_t s = 0; s < subsets.size(); ++s) {
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j) minor(i, j) = eta.frame(subsets[s][static_cast<size_t>(i)], j);
        pluecker(static_cast<int>(s)) = minor.determinant();
      }
      const Vec image = exterior_power(g.entries(), k) * pluecker;
      const double oracle = std::log(image.norm() / pluecker.norm());
      CHECK(top_weight(sigma, k) == doctest::Approx(oracle).epsilon(1e-9));
    }
  }
}

TEST_CASE("iwasawa cocycle rejects degenerate flags") {
  Mat bad = Mat::Identity(3, 3);
  bad(0, 0) = 2.0;  // not orthonormal
  const Flag eta{bad};
  CHECK_THROWS_AS(iwasawa_cocycle(GroupElement::identity(3), eta), Error);
}

TEST_CASE("loxodromic predicate") {
  Mat d3 = Mat::Zero(3, 3);
  d3(0, 0) = 4;
  d3(1, 1) = 1;
  d3(2, 2) = 0.25;
  CHECK(is_loxodromic(GroupElement(d3), 1e-6));
  CHECK_FALSE(is_loxodromic(GroupElement::identity(3), 1e-6));
  Mat shear(2, 2);
  shear << 1, 1, 0, 1;
  CHECK_FALSE(is_loxodromic(GroupElement(shear), 1e-6));  // lambda on the wall
}

TEST_CASE("unipotent contraction") {
  Mat a2 = Mat::Zero(2, 2);
  a2(0, 0) = 2.0;
  a2(1, 1) = 0.5;
  const GroupElement a(a2);

  SUBCASE("identity h gives zeros") {
    const auto norms = unipotent_contraction(a, GroupElement::identity(2), 8);
    for (double n : norms) CHECK(n <= 1e-14);
  }
  SUBCASE("upper shear decays like 4^{-n}") {
    Mat shear(2, 2);
    shear << 1, 1, 0, 1;
    const auto norms = unipotent_contraction(a, GroupElement(shear), 10);
    for (int n = 0; n <= 10; ++n)
      CHECK(norms[static_cast<size_t>(n)] == doctest::Approx(std::pow(0.25, n)).epsilon(1e-12));
  }
  SUBCASE("lower shear grows; the n -> -infinity mode is the transpose") {
    Mat lower(2, 2);
    lower << 1, 0, 1, 1;
    const auto grow = unipotent_contraction(a, GroupElement(lower), 6);
    CHECK(grow.back() > grow.front());
    // a^{n} h a^{-n} -> id is the transpose of the contraction of h^T
    const auto shrink = unipotent_contraction(a, GroupElement(Mat(lower.transpose())), 6);
    CHECK(shrink.back() < 1e-3);
  }
  SUBCASE("rejects a outside the open chamber") {
    CHECK_THROWS_AS(unipotent_contraction(GroupElement::identity(2),
                                          GroupElement::identity(2), 4),
                    Error);
  }
}

TEST_CASE("group element validation") {
  Mat bad(2, 2);
  bad << 1, 0, 0, std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(GroupElement{bad}, Error);
  Mat singular = Mat::Zero(2, 2);
  CHECK_THROWS_AS(GroupElement{singular}, Error);
  // determinant normalization
  Mat scaled = 3.0 * Mat::Identity(3, 3);
  CHECK(std::abs(GroupElement(scaled).entries().determinant() - 1.0) <= 1e-9);
}
