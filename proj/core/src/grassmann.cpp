#include "menger/grassmann.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "menger/constants.hpp"

namespace menger {

namespace {

void check_frame_shape(const Mat& f) {
  if (f.rows() < 1 || f.cols() < 1 || f.cols() > f.rows())
    throw std::invalid_argument("Subspace: need 1 <= m <= n");
}

}  // namespace

Subspace Subspace::from_basis(const Mat& raw) {
  check_frame_shape(raw);
  Eigen::ColPivHouseholderQR<Mat> qr(raw);
  qr.setThreshold(1e-12);
  if (qr.rank() < raw.cols())
    throw std::invalid_argument("Subspace::from_basis: rank-deficient basis");
  Mat q = Eigen::HouseholderQR<Mat>(raw).householderQ() * Mat::Identity(raw.rows(), raw.cols());
  return Subspace(std::move(q));
}

Subspace Subspace::from_orthonormal(Mat frame) {
  check_frame_shape(frame);
  const Mat gram = frame.transpose() * frame;
  if ((gram - Mat::Identity(frame.cols(), frame.cols())).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("Subspace::from_orthonormal: frame is not orthonormal");
  return Subspace(std::move(frame));
}

Subspace Subspace::coordinate(int n, const std::vector<int>& axes) {
  Mat f = Mat::Zero(n, static_cast<Eigen::Index>(axes.size()));
  for (std::size_t i = 0; i < axes.size(); ++i) {
    if (axes[i] < 0 || axes[i] >= n) throw std::out_of_range("Subspace::coordinate: axis");
    f(axes[i], static_cast<Eigen::Index>(i)) = 1.0;
  }
  return from_orthonormal(std::move(f));
}

Subspace Subspace::random(int n, int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat g(n, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = gauss(rng);
  return from_basis(g);
}

Vec Subspace::project(const Vec& v) const {
  if (v.size() != frame_.rows()) throw std::invalid_argument("Subspace::project: dim mismatch");
  return frame_ * (frame_.transpose() * v);
}

Vec Subspace::project_perp(const Vec& v) const {
  if (v.size() != frame_.rows())
    throw std::invalid_argument("Subspace::project_perp: dim mismatch");
  return v - frame_ * (frame_.transpose() * v);
}

Mat Subspace::complement_frame() const {
  const Eigen::Index n = frame_.rows();
  const Eigen::Index m = frame_.cols();
  Mat q = Eigen::HouseholderQR<Mat>(frame_).householderQ();
  return q.rightCols(n - m);
}

double grassmann_distance(const Subspace& u, const Subspace& v) {
  if (u.ambient_dim() != v.ambient_dim())
    throw std::invalid_argument("grassmann_distance: ambient dimension mismatch");
  const Mat diff = u.projector() - v.projector();
  Eigen::SelfAdjointEigenSolver<Mat> es(diff, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

TrackedFrame orthonormalize_tracked(const std::vector<Vec>& vectors) {
  if (vectors.empty()) throw std::invalid_argument("orthonormalize_tracked: empty input");
  const Eigen::Index n = vectors.front().size();
  const std::size_t m = vectors.size();
  if (static_cast<Eigen::Index>(m) > n)
    throw std::invalid_argument("orthonormalize_tracked: more vectors than ambient dimension");

  Mat frame(n, static_cast<Eigen::Index>(m));
  double max_dev = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (vectors[i].size() != n)
      throw std::invalid_argument("orthonormalize_tracked: mixed dimensions");
    Vec t = vectors[i];
    for (std::size_t j = 0; j < i; ++j)
      t -= vectors[i].dot(frame.col(static_cast<Eigen::Index>(j))) *
           frame.col(static_cast<Eigen::Index>(j));
    const double norm = t.norm();
    if (norm <= 1e-12 * std::max(1.0, vectors[i].norm()))
      throw std::invalid_argument("orthonormalize_tracked: rank deficiency at input index " +
                                  std::to_string(i));
    frame.col(static_cast<Eigen::Index>(i)) = t / norm;
    max_dev = std::max(max_dev, (vectors[i] - frame.col(static_cast<Eigen::Index>(i))).norm());
  }
  return TrackedFrame{Subspace::from_orthonormal(std::move(frame)), max_dev};
}

bool is_rho_eps_basis(const std::vector<Vec>& vectors, double rho, double eps) {
  if (vectors.empty()) throw std::invalid_argument("is_rho_eps_basis: empty input");
  if (rho <= 0.0) throw std::invalid_argument("is_rho_eps_basis: rho must be positive");
  const double r2 = rho * rho;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (std::size_t j = 0; j < vectors.size(); ++j) {
      const double ip = std::abs(vectors[i].dot(vectors[j]));
      const double delta = (i == j) ? 1.0 : 0.0;
      if (ip < (delta - eps) * r2 || ip > (delta + eps) * r2) return false;
    }
  }
  return true;
}

double rho_eps_distortion(const std::vector<Vec>& vectors, double rho) {
  if (vectors.empty()) throw std::invalid_argument("rho_eps_distortion: empty input");
  if (rho <= 0.0) throw std::invalid_argument("rho_eps_distortion: rho must be positive");
  const double r2 = rho * rho;
  double eps = 0.0;
  for (std::size_t i = 0; i < vectors.size(); ++i)
    for (std::size_t j = 0; j < vectors.size(); ++j) {
      const double ip = std::abs(vectors[i].dot(vectors[j]));
      const double delta = (i == j) ? 1.0 : 0.0;
      eps = std::max(eps, std::abs(ip / r2 - delta));
    }
  return eps;
}

double angle_perturbation_bound(const std::vector<Vec>& u_basis,
                                const std::vector<Vec>& v_vectors, double rho, double theta) {
  if (u_basis.size() != v_vectors.size())
    throw std::invalid_argument("angle_perturbation_bound: basis sizes differ");
  if (theta < 0.0) throw std::invalid_argument("angle_perturbation_bound: theta must be >= 0");
  const int m = static_cast<int>(u_basis.size());

  const double eps0 = rho_eps_distortion(u_basis, rho);
  if (eps0 > calib::eps_red(m))
    throw std::invalid_argument("angle_perturbation_bound: basis distortion " +
                                std::to_string(eps0) + " exceeds eps_red(m) = " +
                                std::to_string(calib::eps_red(m)));
  for (std::size_t i = 0; i < u_basis.size(); ++i) {
    const double dev = (u_basis[i] - v_vectors[i]).norm();
    if (dev > theta * rho * (1.0 + 1e-12))
      throw std::invalid_argument("angle_perturbation_bound: |u_i - v_i| = " +
                                  std::to_string(dev) + " exceeds theta*rho at index " +
                                  std::to_string(i));
  }
  const double cpi = calib::c_pi(m);
  return cpi / (1.0 - cpi * calib::c_gs(m) * eps0) * theta;
}

Cone::Cone(double delta_, Subspace h, std::optional<std::pair<double, double>> rr)
    : delta(delta_), axis_complement(std::move(h)), radii(std::move(rr)) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("Cone: delta must lie in (0,1)");
  if (radii) {
    if (!(radii->first >= 0.0 && radii->first < radii->second))
      throw std::invalid_argument("Cone: need 0 <= r < R");
  }
}

bool cone_contains(const Cone& c, const Point& x) {
  if (x.size() != c.axis_complement.ambient_dim())
    throw std::invalid_argument("cone_contains: dimension mismatch");
  const double norm = x.norm();
  if (c.radii && !(norm > c.radii->first && norm < c.radii->second)) return false;
  return c.axis_complement.project_perp(x).norm() >= c.delta * norm;
}

ConeInclusionResult cone_inclusion_check(double alpha, double beta, const Subspace& h0,
                                         const Subspace& h1, double eps, std::size_t n_samples,
                                         std::uint64_t seed) {
  if (h0.ambient_dim() != h1.ambient_dim() || h0.dim() != h1.dim())
    throw std::invalid_argument("cone_inclusion_check: subspace shape mismatch");
  if (!(alpha > 0.0 && beta > 0.0))
    throw std::invalid_argument("cone_inclusion_check: alpha, beta must be positive");
  const double root = std::sqrt(1.0 - beta * beta);
  if (!(alpha + beta < root))
    throw std::invalid_argument("cone_inclusion_check: requires alpha + beta < sqrt(1 - beta^2)");
  if (eps <= 0.0) throw std::invalid_argument("cone_inclusion_check: eps must be positive");

  const double delta0 = (alpha + beta) / root + eps;
  if (delta0 > 1.0) return ConeInclusionResult{true, std::nullopt, 0};  // left cone is empty
  const int n = h0.ambient_dim();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::size_t accepted = 0;
  std::size_t attempts = 0;
  const std::size_t max_attempts = 1000 * n_samples + 1000;
  Vec x(n);
  while (accepted < n_samples) {
    if (++attempts > max_attempts)
      throw std::runtime_error(
          "cone_inclusion_check: rejection sampling failed to hit the cone after " +
          std::to_string(max_attempts) + " attempts (delta = " + std::to_string(delta0) + ")");
    for (int i = 0; i < n; ++i) x(i) = gauss(rng);
    const double norm = x.norm();
    if (norm < 1e-12) continue;
    x /= norm;
    if (h0.project_perp(x).norm() < delta0) continue;  // outside the left cone
    ++accepted;
    if (h1.project_perp(x).norm() < eps) return ConeInclusionResult{false, x, accepted};
  }
  return ConeInclusionResult{true, std::nullopt, accepted};
}

}  // namespace menger
