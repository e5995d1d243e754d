#pragma once

#include <string>
#include <vector>

#include "menger/types.hpp"

namespace menger {

/// Volume of the unit ball in R^m (Gamma-function formula for m >= 4).
double unit_ball_volume(int m);

/// A finite sample of an m-dimensional set in R^n with quadrature weights
/// approximating the m-dimensional Hausdorff measure.  covering_radius is the
/// sample's max-gap estimate; flatness values below ~10x that scale are
/// resolution-limited.
struct WeightedCloud {
  Mat points;  // n x N, one column per point
  Vec weights;
  int intrinsic_dim = 1;
  std::string provenance;
  double covering_radius = 0.0;

  WeightedCloud() = default;
  WeightedCloud(Mat pts, Vec w, int m, std::string tag = {});

  int ambient_dim() const { return static_cast<int>(points.rows()); }
  Eigen::Index size() const { return points.cols(); }
  Point point(Eigen::Index i) const { return points.col(i); }
  double total_weight() const { return weights.sum(); }

  std::vector<Eigen::Index> indices_in_closed_ball(const Point& x, double r) const;
  std::vector<Eigen::Index> indices_in_open_ball(const Point& x, double r) const;

  /// Scales the set by alpha; weights scale by alpha^m so they keep
  /// approximating the m-dimensional measure.
  WeightedCloud scaled(double alpha) const;

  WeightedCloud subset(const std::vector<Eigen::Index>& idx) const;

  /// Max nearest-neighbor distance, a covering-radius estimate.  O(N^2) for
  /// small clouds, grid-hashed otherwise.
  double estimate_covering_radius() const;

  void validate() const;
};

/// Nearest-neighbor lookups over a fixed point matrix.
class NeighborIndex {
 public:
  explicit NeighborIndex(const Mat& points);

  /// Indices of the k points nearest to `x` (excluding `exclude` if >= 0).
  std::vector<Eigen::Index> nearest(const Vec& x, int k, Eigen::Index exclude = -1) const;

  double max_nearest_neighbor_distance() const;

 private:
  const Mat& points_;
  Vec norms2_;
};

}  // namespace menger
