#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>
#include <menger/constants.hpp>
#include <menger/grassmann.hpp>

#include "oracles.hpp"

using namespace menger;

namespace {

Vec vec2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

Subspace line_at_angle(double phi) {
  Mat f(2, 1);
  f << std::cos(phi), std::sin(phi);
  return Subspace::from_orthonormal(f);
}

}  // namespace

TEST_CASE("projections") {
  const Subspace e1 = Subspace::coordinate(2, {0});
  const Vec v = vec2(3, 4);
  CHECK(e1.project(v) == vec2(3, 0));
  CHECK(e1.project_perp(v) == vec2(0, 4));
  CHECK(e1.project(vec2(5, 0)) == vec2(5, 0));

  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    const Subspace sub = Subspace::random(5, 2, t);
    const Vec w = oracle::random_point(5, rng);
    const Vec p = sub.project(w), q = sub.project_perp(w);
    CHECK((p + q - w).norm() <= 1e-12 * std::max(1.0, w.norm()));
    CHECK(std::abs(p.dot(q)) <= 1e-12 * std::max(1.0, w.squaredNorm()));
    CHECK(std::abs(w.squaredNorm() - p.squaredNorm() - q.squaredNorm()) <=
          1e-12 * std::max(1.0, w.squaredNorm()));
    CHECK(sub.project_perp(sub.project(w)).norm() <= 1e-12 * std::max(1.0, w.norm()));
  }
  CHECK_THROWS_AS(e1.project(Vec::Zero(3)), std::invalid_argument);
}

TEST_CASE("grassmann distance closed forms") {
  const Subspace e1 = Subspace::coordinate(2, {0});
  const Subspace e2 = Subspace::coordinate(2, {1});
  CHECK(grassmann_distance(e1, e1) == doctest::Approx(0.0));
  CHECK(grassmann_distance(e1, e2) == doctest::Approx(1.0));
  for (double phi = 0.05; phi < 1.6; phi += 0.15)
    CHECK(grassmann_distance(line_at_angle(0), line_at_angle(phi)) ==
          doctest::Approx(std::abs(std::sin(phi))).epsilon(1e-12));
  CHECK_THROWS_AS(grassmann_distance(e1, Subspace::coordinate(3, {0})), std::invalid_argument);
}

TEST_CASE("grassmann distance is a metric and equals the perp form") {
  for (int t = 0; t < 60; ++t) {
    const Subspace u = Subspace::random(4, 2, 3 * t);
    const Subspace v = Subspace::random(4, 2, 3 * t + 1);
    const Subspace w = Subspace::random(4, 2, 3 * t + 2);
    const double duv = grassmann_distance(u, v);
    const double dvu = grassmann_distance(v, u);
    CHECK(std::abs(duv - dvu) <= 1e-10);
    CHECK(grassmann_distance(u, u) <= 1e-12);
    CHECK(duv <= grassmann_distance(u, w) + grassmann_distance(w, v) + 1e-10);

    // || pi_U - pi_V || computed from the perpendicular projectors
    const Mat perp_diff = (Mat::Identity(4, 4) - v.projector()) -
                          (Mat::Identity(4, 4) - u.projector());
    Eigen::SelfAdjointEigenSolver<Mat> es(perp_diff, Eigen::EigenvaluesOnly);
    CHECK(std::abs(duv - es.eigenvalues().cwiseAbs().maxCoeff()) <= 1e-12);
  }
}

TEST_CASE("tracked Gram-Schmidt") {
  {
    const std::vector<Vec> ortho{vec2(1, 0), vec2(0, 1)};
    const auto r = orthonormalize_tracked(ortho);
    CHECK(r.max_deviation == doctest::Approx(0.0));
    CHECK((r.frame.frame() - Mat::Identity(2, 2)).norm() <= 1e-14);
  }
  {
    const double eps = 1e-3;
    const auto r = orthonormalize_tracked({vec2(1, 0), vec2(eps, 1)});
    CHECK(r.max_deviation == doctest::Approx(eps).epsilon(1e-9));
  }
  {
    std::vector<Vec> dep{vec2(1, 0), vec2(2, 0)};
    CHECK_THROWS_WITH_AS(orthonormalize_tracked(dep),
                         doctest::Contains("index 1"), std::invalid_argument);
  }
}

TEST_CASE("rho-eps basis predicate") {
  const std::vector<Vec> ortho{vec2(1, 0), vec2(0, 1)};
  CHECK(is_rho_eps_basis(ortho, 1.0, 1e-9));
  CHECK_FALSE(is_rho_eps_basis({vec2(1, 0), vec2(1, 0)}, 1.0, 0.5));
  for (double rho : {0.1, 2.0, 7.5}) {
    std::vector<Vec> scaled{vec2(rho, 0), vec2(0, rho)};
    CHECK(is_rho_eps_basis(scaled, rho, 1e-12));
  }
}

TEST_CASE("Gram-Schmidt deviation stays within the calibrated constant") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int t = 0; t < 400; ++t) {
    const int m = 1 + t % 4;
    const int n = m + 2;
    const double eps = 1e-4 + 0.01 * std::abs(uni(rng));
    // perturbed orthonormal frame -> rho-eps basis with rho = 1
    const Subspace base = Subspace::random(n, m, 1000 + t);
    std::vector<Vec> vectors;
    for (int i = 0; i < m; ++i) {
      Vec v = base.frame().col(i);
      Vec noise = oracle::random_point(n, rng);
      v += noise * (0.3 * eps / std::max(1e-12, noise.norm()));
      vectors.push_back(v);
    }
    const double eps0 = rho_eps_distortion(vectors, 1.0);
    if (eps0 > 0.01) continue;
    const auto r = orthonormalize_tracked(vectors);
    CHECK(r.max_deviation <= 10.0 * m * std::max(eps0, 1e-15));
    CHECK(r.max_deviation <= calib::c_gs(m) * std::max(eps0, 1e-15));
  }
}

TEST_CASE("angle perturbation bound certifies d_Gr") {
  {
    // identical bases, theta = 0
    const std::vector<Vec> u{vec2(1, 0), vec2(0, 1)};
    CHECK(angle_perturbation_bound(u, u, 1.0, 0.0) >= 0.0);
  }
  {
    // rotated orthonormal pair in R^3
    const double ang = 0.01;
    Mat f0(3, 2), f1(3, 2);
    f0 << 1, 0, 0, 1, 0, 0;
    f1 << std::cos(ang), 0, 0, 1, std::sin(ang), 0;
    std::vector<Vec> u{f0.col(0), f0.col(1)};
    std::vector<Vec> v{f1.col(0), f1.col(1)};
    const double theta = std::max((u[0] - v[0]).norm(), (u[1] - v[1]).norm());
    const double bound = angle_perturbation_bound(u, v, 1.0, theta);
    const double actual =
        grassmann_distance(Subspace::from_orthonormal(f0), Subspace::from_basis(f1));
    CHECK(actual == doctest::Approx(std::abs(std::sin(ang))).epsilon(1e-6));
    CHECK(bound >= actual);
  }

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int t = 0; t < 500; ++t) {
    const int m = 1 + t % 3;
    const int n = m + 2;
    const Subspace base = Subspace::random(n, m, 555 + t);
    std::vector<Vec> u, v;
    const double theta = 1e-4 + 0.01 * uni(rng);
    for (int i = 0; i < m; ++i) {
      u.push_back(base.frame().col(i));
      Vec noise = oracle::random_point(n, rng);
      v.push_back(u.back() + noise * (theta / std::max(1e-12, noise.norm()) * uni(rng)));
    }
    Mat vf(n, m);
    for (int i = 0; i < m; ++i) vf.col(i) = v[static_cast<std::size_t>(i)];
    const double bound = angle_perturbation_bound(u, v, 1.0, theta);
    const double actual = grassmann_distance(base, Subspace::from_basis(vf));
    CHECK(bound >= actual);
  }
}

TEST_CASE("orthonormal perturbation surrogate bound") {
  // orthonormal basis of V with |perp_U(vhat_i)| <= t gives
  // d_Gr(U,V) <= 2 m (1 + c_gs) t
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const int m = 1 + t % 3;
    const int n = m + 2;
    const Subspace u = Subspace::random(n, m, 777 + t);
    // small random rotation of u
    Mat g(n, m);
    for (int i = 0; i < m; ++i) g.col(i) = u.frame().col(i) + 0.02 * uni(rng) * oracle::random_point(n, rng);
    const Subspace v = Subspace::from_basis(g);
    double worst = 0.0;
    for (int i = 0; i < m; ++i) worst = std::max(worst, u.project_perp(v.frame().col(i)).norm());
    CHECK(grassmann_distance(u, v) <= 2.0 * m * (1.0 + calib::c_gs(m)) * worst + 1e-12);
  }
}

TEST_CASE("cones and conical caps") {
  const Subspace h = Subspace::coordinate(2, {0});
  const Cone cone(0.5, h);
  CHECK(cone_contains(cone, vec2(0, 1)));
  CHECK_FALSE(cone_contains(cone, vec2(1, 0.1)));
  CHECK(cone_contains(cone, vec2(0, 0)));  // the origin is in every cone

  const Cone cap(0.5, h, std::make_pair(1.0, 2.0));
  CHECK(cone_contains(cap, vec2(0, 1.5)));
  CHECK_FALSE(cone_contains(cap, vec2(0, 0.5)));
  CHECK_FALSE(cone_contains(cap, vec2(0, 0)));  // no cap with r > 0 contains 0

  CHECK_THROWS_AS(Cone(1.5, h), std::invalid_argument);
  CHECK_THROWS_AS(Cone(0.5, h, std::make_pair(2.0, 1.0)), std::invalid_argument);
}

TEST_CASE("cone inclusion check") {
  const Subspace h0 = Subspace::coordinate(4, {0, 1});
  SUBCASE("same axis holds") {
    const auto res = cone_inclusion_check(0.2, 0.2, h0, h0, 0.05, 20000, 1);
    CHECK(res.holds);
  }
  SUBCASE("parameter inequality enforced") {
    CHECK_THROWS_AS(cone_inclusion_check(0.8, 0.7, h0, h0, 0.05, 100, 1),
                    std::invalid_argument);
  }
  SUBCASE("small rotation within the hypothesis") {
    // rotate H0 slightly in the (e1, e3) plane
    const double ang = 0.05;
    Mat f(4, 2);
    f.setZero();
    f(0, 0) = std::cos(ang);
    f(2, 0) = std::sin(ang);
    f(1, 1) = 1.0;
    const Subspace h1 = Subspace::from_orthonormal(f);
    // alpha large enough to absorb the rotation angle
    const auto res = cone_inclusion_check(0.3, 0.3, h0, h1, 0.05, 100000, 2);
    CHECK(res.holds);
    CHECK(res.n_tested == 100000);
  }
}
