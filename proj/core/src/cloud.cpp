#include "menger/cloud.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace menger {

double unit_ball_volume(int m) {
  if (m < 0) throw std::invalid_argument("unit_ball_volume: m must be >= 0");
  switch (m) {
    case 0: return 1.0;
    case 1: return 2.0;
    case 2: return std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi / 3.0;
    default:
      return std::pow(std::numbers::pi, m / 2.0) / std::tgamma(m / 2.0 + 1.0);
  }
}

WeightedCloud::WeightedCloud(Mat pts, Vec w, int m, std::string tag)
    : points(std::move(pts)), weights(std::move(w)), intrinsic_dim(m), provenance(std::move(tag)) {
  validate();
}

void WeightedCloud::validate() const {
  if (points.cols() != weights.size())
    throw std::invalid_argument("WeightedCloud: points/weights length mismatch");
  if (points.cols() == 0) throw std::invalid_argument("WeightedCloud: empty cloud");
  if (intrinsic_dim < 1 || intrinsic_dim > ambient_dim())
    throw std::invalid_argument("WeightedCloud: need 1 <= m <= n");
  if ((weights.array() < 0.0).any())
    throw std::invalid_argument("WeightedCloud: negative weight");
  if (!(weights.sum() > 0.0)) throw std::invalid_argument("WeightedCloud: total weight is zero");
  if (!points.allFinite()) throw std::invalid_argument("WeightedCloud: non-finite coordinate");
}

std::vector<Eigen::Index> WeightedCloud::indices_in_closed_ball(const Point& x, double r) const {
  if (x.size() != points.rows())
    throw std::invalid_argument("WeightedCloud: ball center dimension mismatch");
  std::vector<Eigen::Index> out;
  const double r2 = r * r;
  for (Eigen::Index i = 0; i < points.cols(); ++i)
    if ((points.col(i) - x).squaredNorm() <= r2) out.push_back(i);
  return out;
}

std::vector<Eigen::Index> WeightedCloud::indices_in_open_ball(const Point& x, double r) const {
  if (x.size() != points.rows())
    throw std::invalid_argument("WeightedCloud: ball center dimension mismatch");
  std::vector<Eigen::Index> out;
  const double r2 = r * r;
  for (Eigen::Index i = 0; i < points.cols(); ++i)
    if ((points.col(i) - x).squaredNorm() < r2) out.push_back(i);
  return out;
}

WeightedCloud WeightedCloud::scaled(double alpha) const {
  if (!(alpha > 0.0)) throw std::invalid_argument("WeightedCloud::scaled: alpha must be > 0");
  WeightedCloud c = *this;
  c.points *= alpha;
  c.weights *= std::pow(alpha, intrinsic_dim);
  c.covering_radius *= alpha;
  return c;
}

WeightedCloud WeightedCloud::subset(const std::vector<Eigen::Index>& idx) const {
  if (idx.empty()) throw std::invalid_argument("WeightedCloud::subset: empty index set");
  Mat pts(points.rows(), static_cast<Eigen::Index>(idx.size()));
  Vec w(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) {
    pts.col(static_cast<Eigen::Index>(j)) = points.col(idx[j]);
    w(static_cast<Eigen::Index>(j)) = weights(idx[j]);
  }
  WeightedCloud c(std::move(pts), std::move(w), intrinsic_dim, provenance + "/subset");
  c.covering_radius = covering_radius;  // stale; caller may re-estimate
  return c;
}

double WeightedCloud::estimate_covering_radius() const {
  if (size() < 2) return 0.0;
  return NeighborIndex(points).max_nearest_neighbor_distance();
}

NeighborIndex::NeighborIndex(const Mat& points) : points_(points) {
  norms2_ = points.colwise().squaredNorm();
}

std::vector<Eigen::Index> NeighborIndex::nearest(const Vec& x, int k, Eigen::Index exclude) const {
  using Entry = std::pair<double, Eigen::Index>;
  std::vector<Entry> entries;
  entries.reserve(static_cast<std::size_t>(points_.cols()));
  for (Eigen::Index j = 0; j < points_.cols(); ++j) {
    if (j == exclude) continue;
    entries.emplace_back((points_.col(j) - x).squaredNorm(), j);
  }
  const int kk = std::min<int>(k, static_cast<int>(entries.size()));
  std::partial_sort(entries.begin(), entries.begin() + kk, entries.end());
  std::vector<Eigen::Index> out;
  out.reserve(static_cast<std::size_t>(kk));
  for (int i = 0; i < kk; ++i) out.push_back(entries[static_cast<std::size_t>(i)].second);
  return out;
}

double NeighborIndex::max_nearest_neighbor_distance() const {
  const Eigen::Index N = points_.cols();
  const Eigen::Index block = 256;
  double worst = 0.0;
  for (Eigen::Index lo = 0; lo < N; lo += block) {
    const Eigen::Index len = std::min(block, N - lo);
    // squared distances of the block against everything, via one gemm
    Mat g = points_.middleCols(lo, len).transpose() * points_;  // len x N
    for (Eigen::Index bi = 0; bi < len; ++bi) {
      double best = std::numeric_limits<double>::infinity();
      const Eigen::Index i = lo + bi;
      for (Eigen::Index j = 0; j < N; ++j) {
        if (j == i) continue;
        const double d2 = norms2_(i) + norms2_(j) - 2.0 * g(bi, j);
        best = std::min(best, d2);
      }
      worst = std::max(worst, best);
    }
  }
  return std::sqrt(std::max(0.0, worst));
}

}  // namespace menger
