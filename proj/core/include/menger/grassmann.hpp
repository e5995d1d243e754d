#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "menger/types.hpp"

namespace menger {

/// An m-dimensional linear subspace of R^n stored as an orthonormal n x m
/// frame.  Raw bases are re-orthonormalized on entry; every stored frame
/// satisfies F^T F = I within 1e-12.
class Subspace {
 public:
  /// Orthonormalizes the columns of `raw` (Householder QR).  Throws on rank
  /// deficiency.
  static Subspace from_basis(const Mat& raw);

  /// Accepts an already orthonormal frame; validated within 1e-12.
  static Subspace from_orthonormal(Mat frame);

  /// span{e_{axes[0]+1}, ...} in R^n.
  static Subspace coordinate(int n, const std::vector<int>& axes);

  /// Haar-uniform random subspace (QR of a Gaussian matrix).
  static Subspace random(int n, int m, std::uint64_t seed);

  int ambient_dim() const { return static_cast<int>(frame_.rows()); }
  int dim() const { return static_cast<int>(frame_.cols()); }
  const Mat& frame() const { return frame_; }

  Vec project(const Vec& v) const;
  Vec project_perp(const Vec& v) const;
  Mat projector() const { return frame_ * frame_.transpose(); }

  /// Orthonormal basis of the orthogonal complement, n x (n-m).
  Mat complement_frame() const;

 private:
  explicit Subspace(Mat frame) : frame_(std::move(frame)) {}
  Mat frame_;
};

/// Operator-norm distance between the orthogonal projectors of U and V.
double grassmann_distance(const Subspace& u, const Subspace& v);

struct TrackedFrame {
  Subspace frame;
  double max_deviation;  // max_i |v_i - vhat_i|
};

/// Classical Gram-Schmidt that keeps track of how far each input vector moved.
/// Throws on rank deficiency, naming the offending index.
TrackedFrame orthonormalize_tracked(const std::vector<Vec>& vectors);

/// Checks (delta_ij - eps) rho^2 <= |<v_i, v_j>| <= (delta_ij + eps) rho^2
/// for all pairs.
bool is_rho_eps_basis(const std::vector<Vec>& vectors, double rho, double eps);

/// Smallest eps for which `vectors` is a rho-eps basis.
double rho_eps_distortion(const std::vector<Vec>& vectors, double rho);

/// Certified upper bound on d_Gr(span U, span V) when V's basis is an
/// entrywise theta*rho perturbation of a rho-eps basis of U.  Preconditions
/// (distortion <= eps_red(m), |u_i - v_i| <= theta*rho) are verified, not
/// clamped.
double angle_perturbation_bound(const std::vector<Vec>& u_basis,
                                const std::vector<Vec>& v_vectors, double rho, double theta);

/// { x : |perp_H(x)| >= delta |x| }, optionally intersected with the open
/// shell r < |x| < R.
struct Cone {
  double delta;
  Subspace axis_complement;  // the H of the definition; the cone opens around H^perp
  std::optional<std::pair<double, double>> radii;

  Cone(double delta_, Subspace h, std::optional<std::pair<double, double>> rr = std::nullopt);
};

bool cone_contains(const Cone& c, const Point& x);

struct ConeInclusionResult {
  bool holds;
  std::optional<Point> witness;
  std::size_t n_tested;
};

/// Randomized one-sided refutation of the inclusion
///   C((alpha+beta)/sqrt(1-beta^2) + eps, H0)  subset of  C(eps, H1).
/// Samples unit vectors of the left cone by rejection; returns the first
/// counterexample found, or holds=true if none of n_samples violates.
ConeInclusionResult cone_inclusion_check(double alpha, double beta, const Subspace& h0,
                                         const Subspace& h1, double eps, std::size_t n_samples,
                                         std::uint64_t seed);

}  // namespace menger
