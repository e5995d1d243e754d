#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "menger/cloud.hpp"
#include "menger/types.hpp"

namespace menger {

struct MeshSurface {
  Mat vertices;  // 3 x V
  std::vector<std::array<int, 3>> triangles;
  std::vector<double> areas;
  int n_degenerate = 0;

  double total_area() const;
};

/// Loads OFF, or the minimal v/f subset of OBJ (chosen by file extension).
/// Parse errors name the offending line.
MeshSurface load_mesh(const std::string& path);

/// Area-stratified sampling: triangle t receives ceil(N * area_t / total)
/// uniform barycentric samples of weight area_t / count_t, so the weights sum
/// to the mesh area exactly.
WeightedCloud sample_mesh(const MeshSurface& mesh, std::size_t n, std::uint64_t seed);

struct GeneratorSpec {
  enum class Kind { Circle, Sphere, Torus, Graph, Koch, PlaneWithHole };
  enum class GraphProfile { AbsPow, Pow };

  Kind kind = Kind::Circle;
  std::size_t n_samples = 1000;
  std::uint64_t seed = 0;

  // sphere: S^m in R^(m+1); m in {1, 2}
  int sphere_m = 2;
  // torus
  double torus_major = 2.0;
  double torus_minor = 0.5;
  // graph of f over [domain_lo, domain_hi]: f(t) = |t|^e or t^e
  GraphProfile graph_profile = GraphProfile::AbsPow;
  double graph_exponent = 1.5;
  double domain_lo = -1.0;
  double domain_hi = 1.0;
  // koch
  int koch_level = 5;
  // plane with hole: unit m-disk minus the open hole of radius hole_radius
  int plane_m = 2;
  double hole_radius = 0.0;

  static GeneratorSpec from_json(const std::string& text);
  std::string to_json() const;
};

/// Deterministic synthetic cloud with quadrature weights whose sum equals the
/// generator's H^m measure, and an attached covering-radius estimate.
WeightedCloud generate(const GeneratorSpec& spec);

/// CSV cloud format: "# n=<n> m=<m>" header, then per point the n coordinates
/// and the weight, shortest round-trip decimal, comma separated.  Bit-faithful
/// for finite doubles.
void save_cloud_csv(const std::string& path, const WeightedCloud& cloud);
WeightedCloud load_cloud_csv(const std::string& path);

}  // namespace menger
