#include <cmath>
#include <random>

#include <doctest.h>
#include <menger/geometry.hpp>
#include <menger/grassmann.hpp>

#include "oracles.hpp"

using namespace menger;

namespace {

Point pt2(double x, double y) {
  Point p(2);
  p << x, y;
  return p;
}

Point pt3(double x, double y, double z) {
  Point p(3);
  p << x, y, z;
  return p;
}

Simplex unit_equilateral() {
  return Simplex({pt2(0, 0), pt2(1, 0), pt2(0.5, std::sqrt(3.0) / 2.0)});
}

}  // namespace

TEST_CASE("simplex volume: closed forms and degeneracies") {
  CHECK(simplex_volume(unit_equilateral()) == doctest::Approx(std::sqrt(3.0) / 4.0).epsilon(1e-12));
  CHECK(simplex_volume(Simplex({pt2(0, 0), pt2(1, 0), pt2(2, 0)})) == 0.0);
  CHECK(simplex_volume(Simplex({pt2(0.3, -0.2)})) == 1.0);
  // coincident vertices
  CHECK(simplex_volume(Simplex({pt2(1, 1), pt2(1, 1), pt2(0, 0)})) == 0.0);
}

TEST_CASE("simplex volume matches the Cayley-Menger oracle") {
  std::mt19937_64 rng(123);
  std::uniform_int_distribution<int> kdist(1, 5), ndist(1, 8);
  int tested = 0;
  while (tested < 200) {
    const int k = kdist(rng);
    const int n = ndist(rng);
    if (k > n) continue;
    const auto v = oracle::random_simplex_vertices(k, n, rng);
    const double got = simplex_volume(Simplex(v));
    const double want = oracle::cayley_menger_volume(v);
    if (want > 1e-12) {
      CHECK(std::abs(got - want) / want <= 1e-10);
    } else {
      CHECK(got <= 1e-8);
    }
    ++tested;
  }
}

TEST_CASE("diameter") {
  CHECK(simplex_diameter(unit_equilateral()) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(simplex_diameter(Simplex({pt2(0, 0), pt2(3, 4)})) == doctest::Approx(5.0));
  CHECK_THROWS_AS(simplex_diameter(Simplex({pt2(0, 0)})), std::invalid_argument);

  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    const auto v = oracle::random_simplex_vertices(4, 5, rng);
    CHECK(simplex_diameter(Simplex(v)) == doctest::Approx(oracle::pairwise_max_distance(v)));
  }
}

TEST_CASE("faces") {
  const Simplex tetra({pt3(0, 0, 0), pt3(1, 0, 0), pt3(0, 1, 0), pt3(0, 0, 1)});
  const Simplex f0 = face(tetra, 0);
  REQUIRE(f0.order() == 2);
  CHECK(f0.vertex(0) == pt3(1, 0, 0));
  CHECK(f0.vertex(1) == pt3(0, 1, 0));
  CHECK(f0.vertex(2) == pt3(0, 0, 1));

  const Simplex seg({pt2(0, 0), pt2(2, 0)});
  CHECK(face(seg, 1).order() == 0);
  CHECK_THROWS_AS(face(seg, 5), std::out_of_range);

  std::mt19937_64 rng(11);
  for (int t = 0; t < 30; ++t) {
    const auto v = oracle::random_simplex_vertices(3, 4, rng);
    const Simplex s(v);
    for (int i = 0; i <= 3; ++i) {
      std::vector<Point> sub;
      for (int j = 0; j <= 3; ++j)
        if (j != i) sub.push_back(v[static_cast<std::size_t>(j)]);
      CHECK(simplex_volume(face(s, i)) == doctest::Approx(simplex_volume(Simplex(sub))));
    }
  }
}

TEST_CASE("heights") {
  for (int i = 0; i < 3; ++i)
    CHECK(height(unit_equilateral(), i) == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));
  // right triangle, apex at the right angle
  const Simplex right({pt2(0, 0), pt2(1, 0), pt2(0, 1)});
  CHECK(height(right, 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

  // volume-ratio identity  H^k = h_i * H^{k-1}(face_i) / k
  std::mt19937_64 rng(42);
  int tested = 0;
  while (tested < 100) {
    std::uniform_int_distribution<int> kdist(1, 5);
    const int k = kdist(rng);
    const auto v = oracle::random_simplex_vertices(k, 6, rng);
    const Simplex s(v);
    const double vol = simplex_volume(s);
    if (vol < 1e-10) continue;
    for (int i = 0; i <= k; ++i) {
      const double fvol = k >= 2 ? simplex_volume(face(s, i)) : 1.0;
      if (fvol < 1e-10) continue;
      const double expect = k * vol / fvol;
      CHECK(std::abs(height(s, i) - expect) / expect <= 1e-10);
    }
    ++tested;
  }
}

TEST_CASE("min height") {
  CHECK(min_height(unit_equilateral()) == doctest::Approx(std::sqrt(3.0) / 2.0));
  CHECK(min_height(Simplex({pt2(0, 0), pt2(1, 0), pt2(2, 0)})) == doctest::Approx(0.0));

  std::mt19937_64 rng(5);
  for (int t = 0; t < 40; ++t) {
    const auto v = oracle::random_simplex_vertices(3, 5, rng);
    const Simplex s(v);
    double brute = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 3; ++i) {
      std::vector<Point> rest;
      for (int j = 0; j <= 3; ++j)
        if (j != i) rest.push_back(v[static_cast<std::size_t>(j)]);
      brute = std::min(brute, oracle::affine_distance_lsq(v[static_cast<std::size_t>(i)], rest));
    }
    CHECK(min_height(s) == doctest::Approx(brute).epsilon(1e-9));
  }
}

TEST_CASE("distance to affine subspace") {
  const Subspace xy = Subspace::coordinate(3, {0, 1});
  CHECK(dist_to_affine(pt3(0.3, -2, 0), Point::Zero(3), xy) == doctest::Approx(0.0));
  CHECK(dist_to_affine(pt3(0, 0, 1), Point::Zero(3), xy) == doctest::Approx(1.0));

  std::mt19937_64 rng(9);
  for (int t = 0; t < 50; ++t) {
    const int n = 5;
    const auto base_pts = oracle::random_simplex_vertices(2, n, rng);
    Mat raw(n, 2);
    raw.col(0) = base_pts[1] - base_pts[0];
    raw.col(1) = base_pts[2] - base_pts[0];
    const Subspace sub = Subspace::from_basis(raw);
    const Point p = oracle::random_point(n, rng);
    const double want = oracle::affine_distance_lsq(p, base_pts);
    CHECK(std::abs(dist_to_affine(p, base_pts[0], sub) - want) <= 1e-12 * std::max(1.0, want));
  }
}

TEST_CASE("voluminous predicate and volume bounds") {
  CHECK(is_voluminous(unit_equilateral(), {0.5, 1.0}));
  CHECK_FALSE(is_voluminous(unit_equilateral(), {0.9, 1.0}));

  std::mt19937_64 rng(31);
  for (int t = 0; t < 100; ++t) {
    std::uniform_int_distribution<int> kdist(1, 4);
    const int k = kdist(rng);
    const auto s = oracle::random_voluminous(k, k + 2, 0.1, 0.9, rng);
    REQUIRE(is_voluminous(s.simplex, {s.eta * (1 - 1e-12), s.d * (1 + 1e-12)}));
    const double vol = simplex_volume(s.simplex);
    const double lo = std::pow(s.eta * s.d, k) / factorial(k);
    const double hi = std::pow(s.d, k) / factorial(k);
    CHECK(vol >= lo * (1 - 1e-9));
    CHECK(vol <= hi * (1 + 1e-9));
  }
}

TEST_CASE("varsigma") {
  // k=1 near eta = 1: (1 + 1/4) - 1 -> 1/4
  CHECK(varsigma(1, 1.0 - 1e-13) == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(varsigma(2, 0.5) == doctest::Approx(std::sqrt(1.03125) - 1.0).epsilon(1e-12));
  CHECK(varsigma(2, 0.5) == doctest::Approx(0.015504).epsilon(1e-4));
  CHECK_THROWS_AS(varsigma(2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(varsigma(2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(varsigma(0, 0.5), std::invalid_argument);

  for (int k = 1; k <= 5; ++k)
    for (double eta = 0.05; eta < 1.0; eta += 0.05) {
      const double s = varsigma(k, eta);
      CHECK(s > 0.0);
      CHECK(s <= 0.25 + 1e-12);
      // eta^k asymptotics: (1+t)^(1/k)-1 lies in [t/(2k), t] for t <= 1
      const double ek = std::pow(eta, k);
      CHECK(s <= 1.0 * ek);
      CHECK(s >= ek / (8.0 * k * factorial(k)));
    }
}

TEST_CASE("volume invariances") {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 60; ++t) {
    std::uniform_int_distribution<int> kdist(1, 4);
    const int k = kdist(rng);
    const int n = 6;
    const auto v = oracle::random_simplex_vertices(k, n, rng);
    const Simplex s(v);
    const double vol = simplex_volume(s);

    auto shuffled = v;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(simplex_volume(Simplex(shuffled)) == doctest::Approx(vol).epsilon(1e-10));

    const Mat q = oracle::random_orthogonal(n, rng);
    const Point shift = oracle::random_point(n, rng);
    CHECK(simplex_volume(s.transformed(q).translated(shift)) ==
          doctest::Approx(vol).epsilon(1e-10));

    const double alpha = 0.3 + 2.0 * (t % 7) / 7.0;
    CHECK(simplex_volume(s.scaled(alpha)) ==
          doctest::Approx(std::pow(alpha, k) * vol).epsilon(1e-10));
  }
}

TEST_CASE("volume stability under vertex perturbation within varsigma") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int t = 0; t < 500; ++t) {
    std::uniform_int_distribution<int> kdist(1, 4);
    const int k = kdist(rng);
    const int n = k + 2;
    const auto sample = oracle::random_voluminous(k, n, 0.1, 0.9, rng);
    const double sig = varsigma(k, sample.eta);
    auto vertices = sample.simplex.vertices();
    // vertex 0 stays put; the others move by at most varsigma * d
    for (std::size_t i = 1; i < vertices.size(); ++i) {
      Point dir = oracle::random_point(n, rng);
      dir.normalize();
      vertices[i] += dir * (sig * sample.d * uni(rng));
    }
    const double v0 = simplex_volume(sample.simplex);
    const double v1 = simplex_volume(Simplex(vertices));
    CHECK(v1 >= 0.75 * v0 * (1 - 1e-9));
    CHECK(v1 <= 1.25 * v0 * (1 + 1e-9));
  }
}
