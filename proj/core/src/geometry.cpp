#include "menger/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "menger/grassmann.hpp"

namespace menger {

namespace {

// Orthonormal basis of span{columns of M} at the numerically detected rank.
// Returns an n x r matrix; r may be 0.
Mat column_space_basis(const Mat& m) {
  if (m.cols() == 0) return Mat(m.rows(), 0);
  Eigen::ColPivHouseholderQR<Mat> qr(m);
  qr.setThreshold(1e-12);
  const auto rank = qr.rank();
  if (rank == 0) return Mat(m.rows(), 0);
  Mat q = qr.householderQ() * Mat::Identity(m.rows(), rank);
  return q;
}

}  // namespace

Simplex::Simplex(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw std::invalid_argument("Simplex: needs at least one vertex");
  const auto n = vertices_.front().size();
  if (n < 1) throw std::invalid_argument("Simplex: ambient dimension must be positive");
  for (const auto& v : vertices_) {
    if (v.size() != n) throw std::invalid_argument("Simplex: mixed ambient dimensions");
    if (!v.allFinite()) throw std::invalid_argument("Simplex: non-finite coordinate");
  }
  if (static_cast<Eigen::Index>(vertices_.size()) > n + 1)
    throw std::invalid_argument("Simplex: more than n+1 vertices");
}

Simplex Simplex::scaled(double alpha) const {
  std::vector<Point> v;
  v.reserve(vertices_.size());
  for (const auto& p : vertices_) v.push_back(alpha * p);
  return Simplex(std::move(v));
}

Simplex Simplex::translated(const Vec& t) const {
  std::vector<Point> v;
  v.reserve(vertices_.size());
  for (const auto& p : vertices_) v.push_back(p + t);
  return Simplex(std::move(v));
}

Simplex Simplex::transformed(const Mat& q) const {
  std::vector<Point> v;
  v.reserve(vertices_.size());
  for (const auto& p : vertices_) v.push_back(q * p);
  return Simplex(std::move(v));
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

double simplex_volume(const Simplex& s) {
  const int k = s.order();
  if (k == 0) return 1.0;  // 0-dimensional measure of a point
  const int n = s.ambient_dim();
  if (k > n) return 0.0;

  Mat edges(n, k);
  double hadamard = 1.0;  // product of squared edge norms, the Gram det scale
  for (int i = 0; i < k; ++i) {
    edges.col(i) = s.vertex(i + 1) - s.vertex(0);
    hadamard *= edges.col(i).squaredNorm();
  }
  if (hadamard <= 0.0) return 0.0;

  const Mat gram = edges.transpose() * edges;
  double det = gram.determinant();
  if (det < 1e-14 * hadamard) det = 0.0;
  return std::sqrt(det) / factorial(k);
}

double simplex_diameter(const Simplex& s) {
  if (s.order() < 1) throw std::invalid_argument("simplex_diameter: needs at least 2 vertices");
  double best = 0.0;
  const auto& v = s.vertices();
  for (std::size_t i = 0; i + 1 < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      best = std::max(best, (v[i] - v[j]).norm());
  return best;
}

Simplex face(const Simplex& s, int i) {
  if (i < 0 || i > s.order()) throw std::out_of_range("face: vertex index out of range");
  std::vector<Point> v;
  v.reserve(static_cast<std::size_t>(s.order()));
  for (int j = 0; j <= s.order(); ++j)
    if (j != i) v.push_back(s.vertex(j));
  return Simplex(std::move(v));
}

double height(const Simplex& s, int i) {
  if (s.order() < 1) throw std::invalid_argument("height: needs at least 2 vertices");
  if (i < 0 || i > s.order()) throw std::out_of_range("height: vertex index out of range");
  const int n = s.ambient_dim();
  Mat rest(n, s.order() - 0);
  int c = 0;
  const Point* base = nullptr;
  for (int j = 0; j <= s.order(); ++j) {
    if (j == i) continue;
    if (base == nullptr) {
      base = &s.vertex(j);
      continue;
    }
    rest.col(c++) = s.vertex(j) - *base;
  }
  const Vec diff = s.vertex(i) - *base;
  const Mat basis = column_space_basis(rest.leftCols(c));
  if (basis.cols() == 0) return diff.norm();
  return (diff - basis * (basis.transpose() * diff)).norm();
}

double min_height(const Simplex& s) {
  if (s.order() < 1) throw std::invalid_argument("min_height: needs at least 2 vertices");
  double best = height(s, 0);
  for (int i = 1; i <= s.order(); ++i) best = std::min(best, height(s, i));
  return best;
}

double dist_to_affine(const Point& p, const Point& base, const Subspace& frame) {
  if (p.size() != base.size() || p.size() != frame.ambient_dim())
    throw std::invalid_argument("dist_to_affine: dimension mismatch");
  return frame.project_perp(p - base).norm();
}

bool is_voluminous(const Simplex& s, const VoluminousParams& params) {
  if (s.order() < 1) throw std::invalid_argument("is_voluminous: needs at least 2 vertices");
  return simplex_diameter(s) <= params.d && min_height(s) >= params.eta * params.d;
}

double varsigma(int k, double eta) {
  if (k < 1) throw std::invalid_argument("varsigma: k must be >= 1");
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("varsigma: eta must lie in (0,1)");
  const double t = std::pow(eta, k) / (4.0 * factorial(k));
  return std::expm1(std::log1p(t) / k);
}

}  // namespace menger
