// Test-side reference implementations, kept independent of the library's
// computation paths.
#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include <menger/cloud.hpp>
#include <menger/geometry.hpp>
#include <menger/types.hpp>

namespace oracle {

using menger::Mat;
using menger::Point;
using menger::Vec;

/// Simplex volume via the Cayley-Menger determinant.
inline double cayley_menger_volume(const std::vector<Point>& vertices) {
  const int k = static_cast<int>(vertices.size()) - 1;
  if (k == 0) return 1.0;
  Mat b(k + 2, k + 2);
  b.setZero();
  for (int i = 1; i <= k + 1; ++i) {
    b(0, i) = 1.0;
    b(i, 0) = 1.0;
  }
  for (int i = 0; i <= k; ++i)
    for (int j = 0; j <= k; ++j)
      b(i + 1, j + 1) = (vertices[static_cast<std::size_t>(i)] -
                         vertices[static_cast<std::size_t>(j)])
                            .squaredNorm();
  const double det = b.determinant();
  const double sign = (k % 2 == 0) ? -1.0 : 1.0;  // (-1)^(k+1)
  const double f = menger::factorial(k);
  const double v2 = sign * det / (std::pow(2.0, k) * f * f);
  return v2 <= 0.0 ? 0.0 : std::sqrt(v2);
}

/// Max pairwise distance by direct double loop over the raw points.
inline double pairwise_max_distance(const std::vector<Point>& pts) {
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j)
      best = std::max(best, (pts[i] - pts[j]).norm());
  return best;
}

/// Distance from p to the affine hull of pts via a least-squares solve of the
/// normal equations.
inline double affine_distance_lsq(const Point& p, const std::vector<Point>& pts) {
  const Point& base = pts.front();
  const int cols = static_cast<int>(pts.size()) - 1;
  if (cols == 0) return (p - base).norm();
  Mat a(base.size(), cols);
  for (int j = 0; j < cols; ++j) a.col(j) = pts[static_cast<std::size_t>(j) + 1] - base;
  const Vec rhs = p - base;
  const Vec sol = (a.transpose() * a).ldlt().solve(a.transpose() * rhs);
  return (rhs - a * sol).norm();
}

/// Random orthogonal matrix (QR of a Gaussian; includes reflections).
inline Mat random_orthogonal(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = gauss(rng);
  Mat q = Eigen::HouseholderQR<Mat>(g).householderQ() * Mat::Identity(n, n);
  return q;
}

inline Point random_point(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> gauss(0.0, scale);
  Point p(n);
  for (int i = 0; i < n; ++i) p(i) = gauss(rng);
  return p;
}

inline std::vector<Point> random_simplex_vertices(int k, int n, std::mt19937_64& rng) {
  std::vector<Point> v;
  v.reserve(static_cast<std::size_t>(k) + 1);
  for (int i = 0; i <= k; ++i) v.push_back(random_point(n, rng));
  return v;
}

/// Regular k-simplex (e_1 .. e_{k+1} of R^{k+1}, side sqrt(2)) embedded in
/// R^n, randomly rotated, optionally squashed along one axis, then placed at
/// a random offset.  Returns an (eta,d)-voluminous simplex with eta and d
/// measured exactly from the result.
struct VoluminousSample {
  menger::Simplex simplex;
  double eta;
  double d;
};

inline VoluminousSample random_voluminous(int k, int n, double eta_lo, double eta_hi,
                                          std::mt19937_64& rng) {
  if (n < k + 1) throw std::invalid_argument("random_voluminous: need n >= k+1");
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<Point> v;
    for (int i = 0; i <= k; ++i) {
      Point p = Point::Zero(n);
      p(i) = 1.0;
      v.push_back(std::move(p));
    }
    const double squash = 0.05 + 0.95 * uni(rng);
    const int axis = static_cast<int>(uni(rng) * k) % std::max(1, k);
    for (auto& p : v) p(axis) *= squash;
    const Mat q = random_orthogonal(n, rng);
    const Point shift = random_point(n, rng, 2.0);
    const double scale = 0.25 + 4.0 * uni(rng);
    for (auto& p : v) p = q * (scale * p) + shift;
    menger::Simplex s(v);
    const double d = menger::simplex_diameter(s);
    const double eta_max = menger::min_height(s) / d;
    // the simplex is (eta, d)-voluminous for every eta <= h_min/d; draw the
    // claimed regularity from the target window
    const double eta = eta_lo + (eta_hi - eta_lo) * uni(rng);
    if (eta <= eta_max) return VoluminousSample{std::move(s), eta, d};
  }
  throw std::runtime_error("random_voluminous: no sample hit the eta window");
}

/// Rotation-grid beta oracle for plane curves (m,n) = (1,2): 10^4 uniform
/// angles followed by golden-section refinement around the best one.
inline double beta_grid_oracle(const menger::WeightedCloud& cloud, const Point& x, double r,
                               int grid = 10000) {
  const auto idx = cloud.indices_in_closed_ball(x, r);
  if (idx.empty()) throw std::invalid_argument("beta_grid_oracle: empty ball");
  auto objective = [&](double phi) {
    const double nx = -std::sin(phi), ny = std::cos(phi);
    double worst = 0.0;
    for (auto i : idx) {
      const double dx = cloud.points(0, i) - x(0);
      const double dy = cloud.points(1, i) - x(1);
      worst = std::max(worst, std::abs(nx * dx + ny * dy));
    }
    return worst / r;
  };
  int best_i = 0;
  double best = std::numeric_limits<double>::infinity();
  const double step = std::numbers::pi / grid;
  for (int i = 0; i < grid; ++i) {
    const double v = objective(i * step);
    if (v < best) {
      best = v;
      best_i = i;
    }
  }
  double a = (best_i - 1) * step, b = (best_i + 1) * step;
  const double gold = 0.6180339887498949;
  double x1 = b - gold * (b - a), x2 = a + gold * (b - a);
  double f1 = objective(x1), f2 = objective(x2);
  for (int it = 0; it < 200 && (b - a) > 1e-14; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gold * (b - a);
      f1 = objective(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gold * (b - a);
      f2 = objective(x2);
    }
  }
  return std::min(best, std::min(f1, f2));
}

}  // namespace oracle
