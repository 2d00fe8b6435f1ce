#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chamber/hopf.hpp"
#include "chamber/limit_cone.hpp"
#include "chamber/representations.hpp"
#include "test_util.hpp"

using namespace chamber;
using namespace chamber::testing;

TEST_CASE("single diagonal generator gives one ray") {
  Mat g = Mat::Zero(3, 3);
  g(0, 0) = 4;
  g(1, 1) = 1;
  g(2, 2) = 0.25;
  const ConeModel model = sample_cone({GroupElement(g)}, 3, RayKind::jordan);
  CHECK(model.rays.size() == 1);
  CHECK(model.hull_dim == 1);
  const Vec expected = jordan_projection(GroupElement(g)).coords.normalized();
  CHECK((model.rays[0] - expected).norm() <= 1e-10);
}

TEST_CASE("commuting diagonal pair spans the cone of its two rays") {
  Mat a = Mat::Zero(3, 3);
  a(0, 0) = 8;
  a(1, 1) = 1;
  a(2, 2) = 1.0 / 8;
  Mat b = Mat::Zero(3, 3);
  b(0, 0) = 4;
  b(1, 1) = 2;
  b(2, 2) = 1.0 / 8;
  const std::vector<GroupElement> gens{GroupElement(a), GroupElement(b)};
  const ConeModel model = sample_cone(gens, 5, RayKind::jordan);
  CHECK(model.hull_dim == 2);
  // every sampled ray satisfies the facets
  for (const auto& ray : model.rays)
    for (const auto& f : model.facets) CHECK(f.dot(ray) >= -1e-9);
  // the hull is exactly the cone of the generator rays: both extreme
  REQUIRE(model.extreme_rays.size() == 2);
  const Vec ra = jordan_projection(gens[0]).coords.normalized();
  const Vec rb = jordan_projection(gens[1]).coords.normalized();
  double match = 0;
  for (int idx : model.extreme_rays)
    match += std::min((model.rays[static_cast<size_t>(idx)] - ra).norm(),
                      (model.rays[static_cast<size_t>(idx)] - rb).norm());
  CHECK(match <= 1e-9);
}

TEST_CASE("interior membership") {
  const auto gens = bundled_sl3_pair();
  const ConeModel model = sample_cone(gens, 4, RayKind::jordan);
  REQUIRE(model.hull_dim == 2);
  REQUIRE(model.extreme_rays.size() >= 2);

  SUBCASE("normalized sum of two hull rays is interior") {
    const Vec sum = model.rays[static_cast<size_t>(model.extreme_rays[0])] +
                    model.rays[static_cast<size_t>(model.extreme_rays[1])];
    CHECK(interior_contains(model, CartanVector(sum), 1e-3));
  }
  SUBCASE("extreme rays are boundary") {
    for (int idx : model.extreme_rays)
      CHECK_FALSE(interior_contains(model, CartanVector(model.rays[static_cast<size_t>(idx)]), 1e-3));
  }
  SUBCASE("negated interior directions are outside") {
    const Vec sum = model.rays[static_cast<size_t>(model.extreme_rays[0])] +
                    model.rays[static_cast<size_t>(model.extreme_rays[1])];
    CHECK_FALSE(interior_contains(model, CartanVector(Vec(-sum)), 1e-3));
    CHECK(interior_margin(model, CartanVector(Vec(-sum))) < 0);
  }
  SUBCASE("degenerate cones report their dimension") {
    Mat g = Mat::Zero(3, 3);
    g(0, 0) = 4;
    g(1, 1) = 1;
    g(2, 2) = 0.25;
    const ConeModel line = sample_cone({GroupElement(g)}, 2, RayKind::jordan);
    try {
      interior_margin(line, CartanVector(line.rays[0]));
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.kind == ErrorKind::degenerate_cone);
      CHECK(e.payload == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("hull grows monotonically with depth") {
  const auto gens = bundled_sl3_pair();
  const ConeModel shallow = sample_cone(gens, 3, RayKind::jordan);
  const ConeModel deep = sample_cone(gens, 4, RayKind::jordan);
  for (const auto& ray : shallow.rays)
    for (const auto& f : deep.facets) CHECK(f.dot(ray) >= -1e-9);
}

TEST_CASE("cone model is conjugation invariant") {
  std::mt19937_64 rng(701);
  const auto gens = bundled_sl3_pair();
  const Mat h = random_gl(3, rng) + 2.5 * Mat::Identity(3, 3);
  REQUIRE(std::abs(h.determinant()) > 0.1);
  std::vector<GroupElement> conj;
  for (const auto& g : gens) conj.emplace_back(h * g.entries() * h.inverse());
  const ConeModel original = sample_cone(gens, 3, RayKind::jordan);
  const ConeModel moved = sample_cone(conj, 3, RayKind::jordan);
  REQUIRE(original.rays.size() == moved.rays.size());
  for (size_t i = 0; i < original.rays.size(); ++i)
    CHECK((original.rays[i] - moved.rays[i]).norm() <= 1e-7);
}

TEST_CASE("jordan and cartan rays agree on powers") {
  const auto gens = bundled_sl3_pair();
  // ray of mu(w^n)/n approaches the ray of lambda(w)
  const GroupElement w = gens[0] * gens[1];
  const Vec lam_ray = jordan_projection(w).coords.normalized();
  for (long n : {8L, 16L}) {
    const Vec mu_ray = power_cartan(w, n).coords.normalized();
    CHECK((mu_ray - lam_ray).norm() <= 0.05);
  }
}

TEST_CASE("jordan and cartan hulls agree at depth 6") {
  const auto gens = bundled_sl3_pair();
  const ConeModel jordan = sample_cone(gens, 6, RayKind::jordan);
  const ConeModel cartan = sample_cone(gens, 6, RayKind::cartan);
  CHECK(jordan.hull_dim == 2);
  CHECK(cartan.hull_dim == 2);
  CHECK(hausdorff_ray_distance(jordan, cartan) <= 0.05);
}

TEST_CASE("limit point cloud") {
  const auto gens = bundled_sl3_pair();
  SchottkyOptions opt;
  opt.grid_n = 1200;
  auto fam = certify_schottky(gens, 0.12, 0.12, opt, {8, 8});
  REQUIRE(static_cast<bool>(fam));

  SUBCASE("single generator cloud is its fixed pair") {
    auto single = certify_schottky({gens[0]}, 0.2, 0.2, opt, {8});
    REQUIRE(static_cast<bool>(single));
    const LimitPointCloud cloud = limit_point_cloud(*single, 2);
    REQUIRE(cloud.pairs.size() >= 1);
    const FlagPair direct = lox_fixed_flags(gens[0]);
    for (const auto& p : cloud.pairs) {
      CHECK(flag_distance(p.plus, direct.plus) <= 1e-8);
      CHECK(flag_distance(p.minus, direct.minus) <= 1e-8);
    }
  }
  SUBCASE("depth-2 cloud contains all four length-2 words") {
    const LimitPointCloud cloud = limit_point_cloud(*fam, 2);
    int length2 = 0;
    for (const auto& wrd : cloud.source_words)
      if (wrd.size() == 2) ++length2;
    CHECK(length2 == 4);
    CHECK(cloud.min_cross_opposition > 0);
  }
  SUBCASE("stronger contraction pulls the cloud toward the generator flags") {
    auto strong = certify_schottky(gens, 0.12, 0.12, opt, {16, 16});
    REQUIRE(static_cast<bool>(strong));
    const LimitPointCloud weak_cloud = limit_point_cloud(*fam, 2);
    const LimitPointCloud strong_cloud = limit_point_cloud(*strong, 2);
    auto spread = [&](const LimitPointCloud& cloud) {
      double worst = 0;
      const FlagPair f0 = lox_fixed_flags(gens[0]);
      const FlagPair f1 = lox_fixed_flags(gens[1]);
      for (const auto& p : cloud.pairs)
        worst = std::max(worst, std::min(flag_distance(p.plus, f0.plus),
                                         flag_distance(p.plus, f1.plus)));
      return worst;
    };
    CHECK(spread(strong_cloud) < spread(weak_cloud));
  }
}

TEST_CASE("transitivity witness") {
  const auto gens = bundled_sl3_pair();
  SchottkyOptions opt;
  opt.grid_n = 1200;
  auto fam = certify_schottky(gens, 0.12, 0.12, opt, {8, 8});
  REQUIRE(static_cast<bool>(fam));
  const LimitPointCloud cloud = limit_point_cloud(*fam, 2);
  const FlagPair pair0 = lox_fixed_flags(gens[0]);
  const FlagPair pair1 = lox_fixed_flags(gens[1]);

  SUBCASE("identical boxes at a generator pair have a trivial witness") {
    const FlagPairBox box{pair0, 0.05};
    const TransitivityResult res = transitivity_witness(cloud, *fam, box, box);
    CHECK(res.found);
    CHECK(res.best_margin >= 0);
  }
  SUBCASE("distinct generator boxes are connected within the power cap") {
    const FlagPairBox u{pair0, 0.08};
    const FlagPairBox v{pair1, 0.08};
    const TransitivityResult res = transitivity_witness(cloud, *fam, u, v, 40);
    CHECK(res.found);
    CHECK(res.n <= 40);
  }
  SUBCASE("boxes missing the cloud report failure") {
    std::mt19937_64 rng(702);
    const FlagPairBox far_box{make_flag_pair(Flag::of_matrix(random_gl(3, rng)),
                                             Flag::of_matrix(random_gl(3, rng))),
                              1e-6};
    const TransitivityResult res = transitivity_witness(cloud, *fam, far_box, far_box);
    CHECK_FALSE(res.found);
  }
}
