#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <doctest.h>
#include <menger/shapes.hpp>

using namespace menger;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("menger_test_" + name);
}

}  // namespace

TEST_CASE("circle generator") {
  GeneratorSpec spec;
  spec.kind = GeneratorSpec::Kind::Circle;
  spec.n_samples = 1000;
  const WeightedCloud c = generate(spec);
  CHECK(c.size() == 1000);
  CHECK(c.intrinsic_dim == 1);
  CHECK(std::abs(c.total_weight() - 2 * kPi) <= 1e-10);
  CHECK(c.covering_radius > 0.0);
  // all points on the unit circle
  for (Eigen::Index i = 0; i < c.size(); ++i)
    CHECK(c.points.col(i).norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sphere generator") {
  GeneratorSpec spec;
  spec.kind = GeneratorSpec::Kind::Sphere;
  spec.n_samples = 4000;
  const WeightedCloud c = generate(spec);
  CHECK(c.intrinsic_dim == 2);
  CHECK(c.ambient_dim() == 3);
  CHECK(c.total_weight() == doctest::Approx(4 * kPi).epsilon(1e-12));
  for (Eigen::Index i = 0; i < c.size(); i += 97)
    CHECK(c.points.col(i).norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("koch generator length recursion") {
  GeneratorSpec spec;
  spec.kind = GeneratorSpec::Kind::Koch;
  spec.koch_level = 5;
  spec.n_samples = 3000;
  const WeightedCloud c = generate(spec);
  CHECK(c.total_weight() == doctest::Approx(3.0 * std::pow(4.0 / 3.0, 5)).epsilon(1e-9));
}

TEST_CASE("torus generator exact area") {
  GeneratorSpec spec;
  spec.kind = GeneratorSpec::Kind::Torus;
  spec.torus_major = 2.0;
  spec.torus_minor = 0.5;
  spec.n_samples = 2000;
  const WeightedCloud c = generate(spec);
  CHECK(c.total_weight() == doctest::Approx(4 * kPi * kPi * 2.0 * 0.5).epsilon(1e-9));
  // on-surface check: (sqrt(x^2+y^2) - R)^2 + z^2 = r^2
  for (Eigen::Index i = 0; i < c.size(); i += 53) {
    const double rho = std::hypot(c.points(0, i), c.points(1, i));
    CHECK(std::hypot(rho - 2.0, c.points(2, i)) == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("graph generator arc length vs fine quadrature") {
  GeneratorSpec spec;
  spec.kind = GeneratorSpec::Kind::Graph;
  spec.graph_profile = GeneratorSpec::GraphProfile::AbsPow;
  spec.graph_exponent = 1.5;
  spec.n_samples = 5000;
  const WeightedCloud c = generate(spec);
  // independent fine quadrature (trapezoid at 4e6 nodes)
  const auto speed = [](double t) { return std::hypot(1.0, 1.5 * std::sqrt(std::abs(t))); };
  const int nq = 4000000;
  double acc = 0.0;
  for (int i = 0; i < nq; ++i) {
    const double a = -1.0 + 2.0 * i / nq;
    const double b = -1.0 + 2.0 * (i + 1) / nq;
    acc += 0.5 * (speed(a) + speed(b)) * (b - a);
  }
  CHECK(std::abs(c.total_weight() - acc) / acc <= 1e-7);

  GeneratorSpec par = spec;
  par.graph_profile = GeneratorSpec::GraphProfile::Pow;
  par.graph_exponent = 2.0;
  const WeightedCloud cp = generate(par);
  // closed form for the parabola arc length over [-1,1]
  const double want = std::sqrt(5.0) + std::asinh(2.0) / 2.0;
  CHECK(cp.total_weight() == doctest::Approx(want).epsilon(1e-9));
}

TEST_CASE("plane with hole") {
  GeneratorSpec spec;
  spec.kind = GeneratorSpec::Kind::PlaneWithHole;
  spec.plane_m = 2;
  spec.hole_radius = 0.3;
  spec.n_samples = 3000;
  const WeightedCloud c = generate(spec);
  CHECK(c.total_weight() == doctest::Approx(kPi * (1.0 - 0.09)).epsilon(1e-9));
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    const double rho = c.points.col(i).head(2).norm();
    CHECK(rho >= 0.3);
    CHECK(rho <= 1.0 + 1e-12);
  }

  GeneratorSpec line = spec;
  line.plane_m = 1;
  line.hole_radius = 0.25;
  const WeightedCloud cl = generate(line);
  CHECK(cl.total_weight() == doctest::Approx(2.0 * 0.75).epsilon(1e-12));
}

TEST_CASE("generators are deterministic") {
  GeneratorSpec spec;
  spec.kind = GeneratorSpec::Kind::Sphere;
  spec.n_samples = 500;
  spec.seed = 9;
  const WeightedCloud a = generate(spec);
  const WeightedCloud b = generate(spec);
  CHECK((a.points - b.points).norm() == 0.0);
  CHECK((a.weights - b.weights).norm() == 0.0);
}

TEST_CASE("generator spec json round trip") {
  GeneratorSpec spec;
  spec.kind = GeneratorSpec::Kind::Graph;
  spec.graph_profile = GeneratorSpec::GraphProfile::AbsPow;
  spec.graph_exponent = 1.5;
  spec.n_samples = 777;
  spec.seed = 4;
  const GeneratorSpec back = GeneratorSpec::from_json(spec.to_json());
  CHECK(back.kind == spec.kind);
  CHECK(back.n_samples == spec.n_samples);
  CHECK(back.graph_exponent == spec.graph_exponent);
  CHECK_THROWS(GeneratorSpec::from_json("{\"kind\":\"klein_bottle\",\"n_samples\":10}"));
}

TEST_CASE("mesh: two-triangle unit square") {
  const fs::path path = temp_file("square.off");
  {
    std::ofstream out(path);
    out << "OFF\n4 2 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n3 0 1 2\n3 0 2 3\n";
  }
  const MeshSurface mesh = load_mesh(path.string());
  CHECK(mesh.triangles.size() == 2);
  CHECK(mesh.total_area() == doctest::Approx(1.0));

  const WeightedCloud c = sample_mesh(mesh, 100, 11);
  CHECK(c.total_weight() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(c.size() >= 100);
  fs::remove(path);
}

TEST_CASE("mesh: icosahedron area and OBJ loader") {
  // regular icosahedron with circumradius 1
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  const double s = 1.0 / std::sqrt(1.0 + phi * phi);
  std::vector<std::array<double, 3>> verts = {
      {-s, phi * s, 0}, {s, phi * s, 0},  {-s, -phi * s, 0}, {s, -phi * s, 0},
      {0, -s, phi * s}, {0, s, phi * s},  {0, -s, -phi * s}, {0, s, -phi * s},
      {phi * s, 0, -s}, {phi * s, 0, s},  {-phi * s, 0, -s}, {-phi * s, 0, s}};
  std::vector<std::array<int, 3>> faces = {
      {0, 11, 5},  {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9},  {5, 11, 4},
      {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6},  {3, 6, 8},
      {3, 8, 9},   {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  const fs::path path = temp_file("ico.obj");
  {
    std::ofstream out(path);
    out.precision(17);
    for (const auto& v : verts) out << "v " << v[0] << " " << v[1] << " " << v[2] << "\n";
    for (const auto& f : faces) out << "f " << f[0] + 1 << " " << f[1] + 1 << " " << f[2] + 1 << "\n";
  }
  const MeshSurface mesh = load_mesh(path.string());
  REQUIRE(mesh.triangles.size() == 20);
  // icosahedron with circumradius R: edge a = R / sin(2pi/5), area = 5 sqrt(3) a^2
  const double a = 1.0 / std::sin(2.0 * kPi / 5.0);
  CHECK(mesh.total_area() == doctest::Approx(5.0 * std::sqrt(3.0) * a * a).epsilon(1e-9));
  const WeightedCloud c = sample_mesh(mesh, 400, 3);
  CHECK(c.total_weight() == doctest::Approx(mesh.total_area()).epsilon(1e-12));
  fs::remove(path);
}

TEST_CASE("mesh: malformed files name the line") {
  const fs::path path = temp_file("bad.off");
  {
    std::ofstream out(path);
    out << "OFF\n3 1 0\n0 0 0\n1 0 0\nnot_a_number 1 0\n3 0 1 2\n";
  }
  CHECK_THROWS_WITH_AS(load_mesh(path.string()), doctest::Contains(":5:"), std::runtime_error);
  fs::remove(path);

  const fs::path path2 = temp_file("bad_idx.obj");
  {
    std::ofstream out(path2);
    out << "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 9\n";
  }
  CHECK_THROWS_WITH_AS(load_mesh(path2.string()), doctest::Contains(":4:"), std::runtime_error);
  fs::remove(path2);
}

TEST_CASE("cloud csv round trip is bit-faithful") {
  GeneratorSpec spec;
  spec.kind = GeneratorSpec::Kind::Sphere;
  spec.n_samples = 257;
  WeightedCloud c = generate(spec);
  // salt with awkward values
  c.points(0, 0) = 0.1;
  c.points(1, 0) = -1.0 / 3.0;
  c.points(2, 0) = 4.9406564584124654e-324;  // denormal min
  c.weights(0) = 1.7976931348623157e308 / 1e300;

  const fs::path path = temp_file("cloud.csv");
  save_cloud_csv(path.string(), c);
  const WeightedCloud back = load_cloud_csv(path.string());
  REQUIRE(back.size() == c.size());
  CHECK(back.intrinsic_dim == c.intrinsic_dim);
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    for (int j = 0; j < 3; ++j) CHECK(back.points(j, i) == c.points(j, i));
    CHECK(back.weights(i) == c.weights(i));
  }
  fs::remove(path);
}
