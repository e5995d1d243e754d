#pragma once

#include <vector>

#include "menger/types.hpp"

namespace menger {

class Subspace;

/// An ordered tuple of k+1 points of R^n, k = order().  Degenerate tuples
/// (coincident or affinely dependent vertices) are allowed; volumes are 0 then.
class Simplex {
 public:
  explicit Simplex(std::vector<Point> vertices);

  int order() const { return static_cast<int>(vertices_.size()) - 1; }
  int ambient_dim() const { return static_cast<int>(vertices_.front().size()); }
  const std::vector<Point>& vertices() const { return vertices_; }
  const Point& vertex(int i) const { return vertices_.at(static_cast<std::size_t>(i)); }

  Simplex scaled(double alpha) const;
  Simplex translated(const Vec& t) const;
  Simplex transformed(const Mat& q) const;

 private:
  std::vector<Point> vertices_;
};

struct VoluminousParams {
  double eta;  // in (0,1)
  double d;    // > 0
};

/// k-dimensional Hausdorff measure of the simplex hull, via the Gram
/// determinant of the edge matrix.  Ratios det/prod(|e_i|^2) below 1e-14 are
/// clamped to zero so near-singular Gram matrices cannot go negative under
/// the square root.
double simplex_volume(const Simplex& s);

/// Max pairwise vertex distance.  Needs at least 2 vertices.
double simplex_diameter(const Simplex& s);

/// The simplex with vertex i removed, order of the rest preserved.
Simplex face(const Simplex& s, int i);

/// Distance from vertex i to the affine hull of the remaining vertices,
/// evaluated at their actual affine rank (degenerate faces allowed).
double height(const Simplex& s, int i);

/// Minimum of height(s, i) over all vertices.  Needs at least 2 vertices.
double min_height(const Simplex& s);

/// |projection of (p - base) onto the orthogonal complement of frame|.
double dist_to_affine(const Point& p, const Point& base, const Subspace& frame);

/// diam <= d and min height >= eta * d.
bool is_voluminous(const Simplex& s, const VoluminousParams& params);

/// Safe vertex-perturbation radius, as a fraction of d, preserving the volume
/// of an (eta,d)-voluminous order-k simplex within [3/4, 5/4]:
///   varsigma_k(eta) = (1 + eta^k/(4 k!))^(1/k) - 1.
double varsigma(int k, double eta);

double factorial(int k);

}  // namespace menger
