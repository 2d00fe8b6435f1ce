#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chamber/hopf.hpp"
#include "chamber/representations.hpp"
#include "chamber/schottky.hpp"
#include "test_util.hpp"

#include <cmath>

using namespace chamber;
using namespace chamber::testing;

namespace {

CartanVector unit_interior_direction(int d) {
  Vec v(d);
  for (int i = 0; i < d; ++i) v(i) = static_cast<double>(d - 1 - 2 * i);
  v.array() -= v.mean();
  return CartanVector(v / v.norm());
}

}  // namespace

TEST_CASE("flag basics") {
  const Flag std3 = Flag::standard(3);
  std3.validate();
  CHECK(flag_distance(std3, std3) <= 1e-14);
  const Flag rev = Flag::reversed_standard(3);
  CHECK(opposition_margin(std3, rev) == doctest::Approx(1.0));
  // sign flips of frame columns do not move the flag
  Mat flipped = std3.frame;
  flipped.col(1) *= -1.0;
  CHECK(flag_distance(std3, Flag{flipped}) <= 1e-14);
  CHECK_THROWS_AS(Flag::of_matrix(Mat::Zero(3, 3)), Error);
}

TEST_CASE("hopf coordinates on frozen inputs") {
  SUBCASE("identity") {
    const HopfPoint p = hopf_coordinates(GroupElement::identity(3));
    CHECK(flag_distance(p.pair.plus, Flag::standard(3)) <= 1e-12);
    CHECK(flag_distance(p.pair.minus, Flag::reversed_standard(3)) <= 1e-12);
    CHECK(p.apart.norm() <= 1e-12);
  }
  SUBCASE("diagonal exp(v)") {
    Vec v = (Vec(3) << 0.7, -0.2, -0.5).finished();
    Mat ev = Mat::Zero(3, 3);
    for (int i = 0; i < 3; ++i) ev(i, i) = std::exp(v(i));
    const HopfPoint p = hopf_coordinates(GroupElement(ev));
    CHECK(flag_distance(p.pair.plus, Flag::standard(3)) <= 1e-12);
    CHECK(flag_distance(p.pair.minus, Flag::reversed_standard(3)) <= 1e-12);
    CHECK((p.apart.coords - v).norm() <= 1e-10);
  }
}

TEST_CASE("hopf equivariance under the left action") {
  std::mt19937_64 rng(501);
  for (int trial = 0; trial < 30; ++trial) {
    const GroupElement g = random_sl(3, rng);
    const GroupElement h = random_sl(3, rng);
    const HopfPoint direct = hopf_coordinates(h * g);
    const HopfPoint acted = left_action(h, hopf_coordinates(g));
    CHECK(flag_distance(direct.pair.plus, acted.pair.plus) <= 1e-7);
    CHECK(flag_distance(direct.pair.minus, acted.pair.minus) <= 1e-7);
    CHECK((direct.apart - acted.apart).norm() <= 1e-7);
  }
}

TEST_CASE("hopf round-trip through a representative") {
  std::mt19937_64 rng(502);
  for (int trial = 0; trial < 20; ++trial) {
    const GroupElement g = random_sl(3, rng);
    const HopfPoint p = hopf_coordinates(g);
    const GroupElement rep = hopf_representative(p);
    const HopfPoint q = hopf_coordinates(rep);
    CHECK(flag_distance(p.pair.plus, q.pair.plus) <= 1e-7);
    CHECK(flag_distance(p.pair.minus, q.pair.minus) <= 1e-7);
    CHECK((p.apart - q.apart).norm() <= 1e-7);
  }
}

TEST_CASE("translation flow") {
  std::mt19937_64 rng(503);
  const GroupElement g = random_sl(3, rng);
  const HopfPoint p = hopf_coordinates(g);
  const CartanVector theta = unit_interior_direction(3);

  SUBCASE("t = 0 is the identity") {
    const HopfPoint q = flow_action(p, theta, 0.0);
    CHECK((q.apart - p.apart).norm() <= 1e-15);
    CHECK(flag_distance(q.pair.plus, p.pair.plus) <= 1e-15);
  }
  SUBCASE("flow composes additively") {
    const HopfPoint q = flow_action(flow_action(p, theta, 1.3), theta, 0.9);
    const HopfPoint r = flow_action(p, theta, 2.2);
    CHECK((q.apart - r.apart).norm() <= 1e-12);
  }
  SUBCASE("group compatibility: right multiplication by exp(t theta)") {
    const double t = 1.7;
    Mat ev = Mat::Zero(3, 3);
    for (int i = 0; i < 3; ++i) ev(i, i) = std::exp(t * theta.coords(i));
    const HopfPoint direct = hopf_coordinates(GroupElement(g.entries() * ev));
    const HopfPoint flowed = flow_action(p, theta, t);
    CHECK(flag_distance(direct.pair.plus, flowed.pair.plus) <= 1e-7);
    CHECK(flag_distance(direct.pair.minus, flowed.pair.minus) <= 1e-7);
    CHECK((direct.apart - flowed.apart).norm() <= 1e-7);
  }
  SUBCASE("walls are rejected") {
    Vec wall = (Vec(3) << 1.0, 1.0, -2.0).finished();
    CHECK_THROWS_AS(flow_action(p, CartanVector(wall / wall.norm()), 1.0), Error);
  }
}

TEST_CASE("fixed flags of loxodromic elements") {
  SUBCASE("diagonal") {
    Mat d3 = Mat::Zero(3, 3);
    d3(0, 0) = 4;
    d3(1, 1) = 1;
    d3(2, 2) = 0.25;
    const FlagPair pair = lox_fixed_flags(GroupElement(d3));
    CHECK(flag_distance(pair.plus, Flag::standard(3)) <= 1e-10);
    CHECK(flag_distance(pair.minus, Flag::reversed_standard(3)) <= 1e-10);
  }
  SUBCASE("conjugated diagonal and inverse swap") {
    std::mt19937_64 rng(504);
    const Mat h = random_gl(3, rng) + 2.0 * Mat::Identity(3, 3);
    REQUIRE(std::abs(h.determinant()) > 0.1);
    Vec d = (Vec(3) << 5.0, 1.0, 0.2).finished();
    const GroupElement g = conjugated_diagonal(d, h);
    const FlagPair pair = lox_fixed_flags(g);
    CHECK(flag_distance(pair.plus, Flag::of_matrix(h)) <= 1e-7);
    // invariance: g . plus = plus flagwise
    CHECK(flag_distance(act(g.entries(), pair.plus), pair.plus) <= 1e-7);
    const FlagPair inv = lox_fixed_flags(g.inverse());
    CHECK(flag_distance(inv.plus, pair.minus) <= 1e-7);
    CHECK(flag_distance(inv.minus, pair.plus) <= 1e-7);
  }
  SUBCASE("non-loxodromic input is an error") {
    CHECK_THROWS_AS(lox_fixed_flags(GroupElement::identity(3)), Error);
  }
}

TEST_CASE("jordan projection equals the cocycle at the attracting flag") {
  std::mt19937_64 rng(505);
  SUBCASE("diagonal is exact") {
    Mat d3 = Mat::Zero(3, 3);
    d3(0, 0) = 3;
    d3(1, 1) = 1;
    d3(2, 2) = 1.0 / 3;
    CHECK(check_lambda_sigma(GroupElement(d3)) <= 1e-12);
  }
  SUBCASE("conjugated diagonals") {
    for (int trial = 0; trial < 50; ++trial) {
      const Mat h = random_gl(3, rng) + 2.0 * Mat::Identity(3, 3);
      if (std::abs(h.determinant()) < 0.1) continue;
      Vec d = (Vec(3) << 4.0, 1.1, 1.0 / 4.4).finished();
      CHECK(check_lambda_sigma(conjugated_diagonal(d, h)) <= 1e-7);
    }
  }
  SUBCASE("schottky products") {
    const auto gens = bundled_sl3_pair();
    const GroupElement w = gens[0] * gens[1] * gens[0] * gens[0] * gens[1];
    CHECK(check_lambda_sigma(w) <= 1e-6);
  }
}

TEST_CASE("contraction toward the attracting flag") {
  Mat d3 = Mat::Zero(3, 3);
  d3(0, 0) = 4;
  d3(1, 1) = 1;
  d3(2, 2) = 0.25;
  const GroupElement g(d3);
  const FlagPair fixed = lox_fixed_flags(g);

  SUBCASE("starting at the fixed flag stays at zero") {
    const auto dist = contraction_to_fixed_flag(g, fixed.plus, 6);
    for (double v : dist) CHECK(v <= 1e-9);
  }
  SUBCASE("generic start decays geometrically at the spectral ratio") {
    std::mt19937_64 rng(506);
    const Flag eta = Flag::of_matrix(random_gl(3, rng) + 1.5 * Mat::Identity(3, 3));
    const auto dist = contraction_to_fixed_flag(g, eta, 30);
    CHECK(dist.back() < 1e-6);
    // eigenvalue ratio 1/4 drives the tail
    for (size_t n = 10; n + 1 < dist.size() && dist[n + 1] > 1e-12; ++n) {
      CHECK(dist[n + 1] / dist[n] <= 0.26);
      CHECK(dist[n + 1] / dist[n] >= 0.24);
    }
  }
  SUBCASE("reverse mode runs on the inverse") {
    std::mt19937_64 rng(507);
    const Flag eta = Flag::of_matrix(random_gl(3, rng) + 1.5 * Mat::Identity(3, 3));
    const auto dist = contraction_to_fixed_flag(g.inverse(), eta, 30);
    CHECK(dist.back() < 1e-6);
  }
  SUBCASE("non-opposite start is rejected") {
    CHECK_THROWS_AS(contraction_to_fixed_flag(g, fixed.minus, 5), Error);
  }
}

TEST_CASE("busemann limit diagnostic stabilizes at finite time") {
  // mu(g k_eta e^{tu}) - mu(k_eta e^{tu}) approaches sigma(g, eta)
  std::mt19937_64 rng(508);
  const GroupElement g = random_sl(3, rng);
  const Flag eta = Flag::of_matrix(random_gl(3, rng));
  const CartanVector sigma = iwasawa_cocycle(g, eta);
  const CartanVector u = unit_interior_direction(3);
  Mat frame = eta.frame;
  if (frame.determinant() < 0) frame.col(2) *= -1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (double t : {10.0, 20.0, 40.0}) {
    Mat et = Mat::Zero(3, 3);
    for (int i = 0; i < 3; ++i) et(i, i) = std::exp(t * u.coords(i));
    const CartanVector diff = cartan_projection(GroupElement(g.entries() * frame * et)) -
                              cartan_projection(GroupElement(frame * et));
    const double err = (diff - sigma).norm();
    CHECK(err <= prev + 1e-12);
    prev = err;
  }
  CHECK(prev <= 1e-4);
}

TEST_CASE("orbit of the base pair stays in general position") {
  std::mt19937_64 rng(509);
  for (int trial = 0; trial < 50; ++trial) {
    const GroupElement g = random_sl(3, rng);
    const HopfPoint p = hopf_coordinates(g);
    CHECK(p.pair.opposition_margin > 0);
    const HopfPoint q = left_action(random_sl(3, rng), p);
    CHECK(q.pair.opposition_margin > 0);
  }
}

TEST_CASE("exterior attractive points match the plus flag lines") {
  std::mt19937_64 rng(510);
  const Mat h = random_gl(3, rng) + 2.0 * Mat::Identity(3, 3);
  REQUIRE(std::abs(h.determinant()) > 0.1);
  Vec d = (Vec(3) << 6.0, 1.0, 1.0 / 6.0).finished();
  const GroupElement g = conjugated_diagonal(d, h);
  const FlagPair fixed = lox_fixed_flags(g);
  for (int k = 1; k <= 2; ++k) {
    const AttractRepel ar = attract_repel(exterior_power(g.entries(), k));
    // decomposable vector of the leading k columns of the plus frame
    const auto subsets = ksubsets_lex(3, k);
    Vec pluecker(static_cast<int>(subsets.size()));
    Mat minor(k, k);
    for (size_t s = 0; s < subsets.size(); ++s) {
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
          minor(i, j) = fixed.plus.frame(subsets[s][static_cast<size_t>(i)], j);
      pluecker(static_cast<int>(s)) = minor.determinant();
    }
    CHECK(proj_distance(ar.attract.v, pluecker.normalized()) <= 1e-7);
  }
}
