#include "menger/flatness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace menger {

namespace {

constexpr double kGolden = 0.6180339887498949;

double golden_minimize(const std::function<double(double)>& f, double lo, double hi, double tol,
                       int max_iter, double* arg_out) {
  double a = lo, b = hi;
  double x1 = b - kGolden * (b - a);
  double x2 = a + kGolden * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = f(x2);
    }
  }
  const double xm = 0.5 * (a + b);
  const double fm = f(xm);
  double best = fm, arg = xm;
  if (f1 < best) { best = f1; arg = x1; }
  if (f2 < best) { best = f2; arg = x2; }
  if (arg_out) *arg_out = arg;
  return best;
}

/// Points of the closed ball around x, as vectors from x.
struct BallView {
  Mat v;       // n x P, columns z_i - x
  Vec norms2;  // squared norms of the columns
  Vec weights;
  std::vector<Eigen::Index> idx;
};

BallView ball_view(const WeightedCloud& cloud, const Point& x, double r) {
  BallView b;
  b.idx = cloud.indices_in_closed_ball(x, r);
  const Eigen::Index p = static_cast<Eigen::Index>(b.idx.size());
  b.v.resize(cloud.ambient_dim(), p);
  b.norms2.resize(p);
  b.weights.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    b.v.col(j) = cloud.points.col(b.idx[static_cast<std::size_t>(j)]) - x;
    b.norms2(j) = b.v.col(j).squaredNorm();
    b.weights(j) = cloud.weights(b.idx[static_cast<std::size_t>(j)]);
  }
  return b;
}

/// max_i dist(v_i, span F), normalized by r.
double beta_objective(const Mat& frame, const BallView& ball, double r) {
  if (ball.v.cols() == 0) return 0.0;
  const Mat p = frame.transpose() * ball.v;
  double worst = 0.0;
  for (Eigen::Index j = 0; j < ball.v.cols(); ++j)
    worst = std::max(worst, ball.norms2(j) - p.col(j).squaredNorm());
  return std::sqrt(std::max(0.0, worst)) / r;
}

/// Lattice of points of the m-disk of radius r, in plane coordinates.
Mat disk_lattice(int m, double r, int grid) {
  if (m == 1) {
    Mat c(1, 2 * grid + 1);
    for (int j = -grid; j <= grid; ++j) c(0, j + grid) = r * static_cast<double>(j) / grid;
    return c;
  }
  std::vector<Vec> pts;
  std::vector<int> cur(static_cast<std::size_t>(m), -grid);
  while (true) {
    double s2 = 0;
    for (int i = 0; i < m; ++i) s2 += static_cast<double>(cur[i]) * cur[i];
    if (s2 <= static_cast<double>(grid) * grid) {
      Vec c(m);
      for (int i = 0; i < m; ++i) c(i) = r * static_cast<double>(cur[i]) / grid;
      pts.push_back(std::move(c));
    }
    int axis = m - 1;
    while (axis >= 0 && ++cur[static_cast<std::size_t>(axis)] > grid) {
      cur[static_cast<std::size_t>(axis)] = -grid;
      --axis;
    }
    if (axis < 0) break;
  }
  Mat c(m, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t j = 0; j < pts.size(); ++j) c.col(static_cast<Eigen::Index>(j)) = pts[j];
  return c;
}

/// Sum-form Hausdorff defect between the ball points and the plane disk,
/// normalized by r.  `lattice` holds the disk sample in plane coordinates.
double theta_objective(const Mat& frame, const BallView& ball, double r, const Mat& lattice) {
  const Mat p = frame.transpose() * ball.v;  // m x P
  double cloud_to_disk = 0.0;
  for (Eigen::Index j = 0; j < ball.v.cols(); ++j) {
    const double inplane2 = p.col(j).squaredNorm();
    const double perp2 = std::max(0.0, ball.norms2(j) - inplane2);
    const double inplane = std::sqrt(inplane2);
    double d2 = perp2;
    if (inplane > r) d2 += (inplane - r) * (inplane - r);
    cloud_to_disk = std::max(cloud_to_disk, d2);
  }
  double disk_to_cloud = 0.0;
  if (ball.v.cols() == 0) return std::numeric_limits<double>::infinity();
  const Mat cross = lattice.transpose() * p;  // G x P
  for (Eigen::Index g = 0; g < lattice.cols(); ++g) {
    const double c2 = lattice.col(g).squaredNorm();
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < ball.v.cols(); ++j)
      best = std::min(best, ball.norms2(j) - 2.0 * cross(g, j) + c2);
    disk_to_cloud = std::max(disk_to_cloud, std::max(0.0, best));
  }
  return (std::sqrt(std::max(0.0, cloud_to_disk)) + std::sqrt(disk_to_cloud)) / r;
}

Mat frame_from_angle(double phi) {
  Mat f(2, 1);
  f(0, 0) = std::cos(phi);
  f(1, 0) = std::sin(phi);
  return f;
}

/// Weighted-PCA direction of the ball, as an angle.  On exactly flat data the
/// covariance is exactly rank one and this angle is exact, while the sampled
/// objective cannot resolve angles below its cancellation floor.
double pca_angle(const BallView& ball) {
  double sxx = 0, sxy = 0, syy = 0;
  for (Eigen::Index j = 0; j < ball.v.cols(); ++j) {
    const double w = ball.weights(j);
    sxx += w * ball.v(0, j) * ball.v(0, j);
    sxy += w * ball.v(0, j) * ball.v(1, j);
    syy += w * ball.v(1, j) * ball.v(1, j);
  }
  const double half_gap = 0.5 * (sxx - syy);
  const double lambda = 0.5 * (sxx + syy) + std::hypot(half_gap, sxy);
  // top eigenvector of [[sxx,sxy],[sxy,syy]]; pick the better-conditioned form
  const double vx1 = lambda - syy, vy1 = sxy;
  const double vx2 = sxy, vy2 = lambda - sxx;
  if (std::abs(vx1) + std::abs(vy1) >= std::abs(vx2) + std::abs(vy2))
    return std::atan2(vy1, vx1);
  return std::atan2(vy2, vx2);
}

/// Dense angle scan + golden refinement of the best few local minima.
double line_search_angles(const std::function<double(double)>& obj, int grid, double* phi_out) {
  std::vector<double> val(static_cast<std::size_t>(grid));
  const double step = std::numbers::pi / grid;
  for (int i = 0; i < grid; ++i) val[static_cast<std::size_t>(i)] = obj(i * step);
  // local minima of the periodic sample sequence
  std::vector<int> minima;
  for (int i = 0; i < grid; ++i) {
    const double prev = val[static_cast<std::size_t>((i + grid - 1) % grid)];
    const double next = val[static_cast<std::size_t>((i + 1) % grid)];
    if (val[static_cast<std::size_t>(i)] <= prev && val[static_cast<std::size_t>(i)] <= next)
      minima.push_back(i);
  }
  std::sort(minima.begin(), minima.end(), [&](int a, int b) {
    return val[static_cast<std::size_t>(a)] < val[static_cast<std::size_t>(b)];
  });
  if (minima.size() > 5) minima.resize(5);
  double best = std::numeric_limits<double>::infinity(), best_phi = 0.0;
  for (int i : minima) {
    double phi = 0.0;
    const double v =
        golden_minimize(obj, (i - 1) * step, (i + 1) * step, 1e-13, 200, &phi);
    if (v < best) {
      best = v;
      best_phi = phi;
    }
  }
  if (phi_out) *phi_out = best_phi;
  return best;
}

struct RefineResult {
  Mat frame;
  double value;
};

/// Projected-gradient descent with re-orthonormalization, then Givens
/// golden-section polish over all (plane, normal) rotation pairs.
RefineResult refine_frame(Mat frame, const BallView& ball, double r,
                          const std::function<double(const Mat&)>& obj,
                          const PlaneSearchOptions& opts) {
  const Eigen::Index n = frame.rows();
  const Eigen::Index m = frame.cols();
  double value = obj(frame);

  for (int it = 0; it < opts.pg_max_iters && ball.v.cols() > 0; ++it) {
    // subgradient tilt toward the worst residual point
    const Mat p = frame.transpose() * ball.v;
    Eigen::Index worst = 0;
    double wres = -1.0;
    for (Eigen::Index j = 0; j < ball.v.cols(); ++j) {
      const double res = ball.norms2(j) - p.col(j).squaredNorm();
      if (res > wres) {
        wres = res;
        worst = j;
      }
    }
    if (wres <= 0.0) break;
    const Vec u = ball.v.col(worst);
    Vec w = u - frame * (frame.transpose() * u);
    const double wn = w.norm();
    if (wn <= 1e-15 * std::max(1.0, u.norm())) break;
    w /= wn;
    Vec a = frame.transpose() * u;
    if (a.norm() <= 1e-15 * std::max(1.0, u.norm())) {
      a = Vec::Zero(m);
      a(0) = 1.0;
    } else {
      a.normalize();
    }
    const Mat tilt = w * a.transpose();
    double tau = 0.4;
    bool accepted = false;
    for (int bt = 0; bt < 24; ++bt) {
      Mat cand = frame + tau * tilt;
      Mat q = Eigen::HouseholderQR<Mat>(cand).householderQ() * Mat::Identity(n, m);
      // Householder QR may flip column signs; irrelevant for the span.
      const double v2 = obj(q);
      if (v2 < value) {
        frame = std::move(q);
        value = v2;
        accepted = true;
        break;
      }
      tau *= 0.5;
    }
    if (!accepted) break;
  }

  // Givens polish: exact 1-D minimization along plane/normal rotation pairs
  Mat full_q = Eigen::HouseholderQR<Mat>(frame).householderQ() * Mat::Identity(n, n);
  Mat comp = full_q.rightCols(n - m);
  for (int sweep = 0; sweep < opts.polish_sweeps; ++sweep) {
    double sweep_start = value;
    for (Eigen::Index a = 0; a < m; ++a) {
      for (Eigen::Index b = 0; b < n - m; ++b) {
        const Vec f0 = frame.col(a);
        const Vec q0 = comp.col(b);
        auto slice = [&](double phi) {
          Mat cand = frame;
          cand.col(a) = std::cos(phi) * f0 + std::sin(phi) * q0;
          return obj(cand);
        };
        double phi = 0.0;
        const double v = golden_minimize(slice, -0.5, 0.5, 1e-12, 160, &phi);
        if (v < value) {
          value = v;
          frame.col(a) = std::cos(phi) * f0 + std::sin(phi) * q0;
          comp.col(b) = -std::sin(phi) * f0 + std::cos(phi) * q0;
        }
      }
    }
    if (sweep_start - value <= 1e-15 * std::max(1.0, sweep_start)) break;
  }
  return RefineResult{std::move(frame), value};
}

/// Multistart candidate frames: weighted PCA, the max-volume-simplex base
/// plane, then seeded random frames.
std::vector<Mat> candidate_frames(const WeightedCloud& cloud, const Point& x, double r,
                                  const BallView& ball, const PlaneSearchOptions& opts);

struct PlaneOpt {
  double value;
  Mat frame;
  int candidate;
};

PlaneOpt minimize_over_planes(const WeightedCloud& cloud, const Point& x, double r,
                              const BallView& ball, const std::function<double(const Mat&)>& obj,
                              const PlaneSearchOptions& opts,
                              const std::vector<Mat>& extra_candidates) {
  std::vector<Mat> cands = candidate_frames(cloud, x, r, ball, opts);
  // exactly flat balls short-circuit to the PCA plane: below the cancellation
  // floor of the residuals the sampled objective cannot rank planes
  if (beta_objective(cands.front(), ball, r) <= 1e-12)
    return PlaneOpt{obj(cands.front()), cands.front(), 0};
  for (const auto& e : extra_candidates) cands.push_back(e);
  PlaneOpt best{std::numeric_limits<double>::infinity(), Mat(), -1};
  for (std::size_t c = 0; c < cands.size(); ++c) {
    RefineResult res = refine_frame(cands[c], ball, r, obj, opts);
    if (res.value < best.value) {
      best.value = res.value;
      best.frame = std::move(res.frame);
      best.candidate = static_cast<int>(c);
    }
  }
  return best;
}

bool use_rotation_path(const WeightedCloud& cloud, const PlaneSearchOptions& opts) {
  if (opts.method == PlaneSearchMethod::RotationGrid) return true;
  return opts.method == PlaneSearchMethod::Auto && cloud.intrinsic_dim == 1 &&
         cloud.ambient_dim() == 2;
}

int default_theta_grid(int m, const PlaneSearchOptions& opts) {
  if (opts.theta_grid > 0) return opts.theta_grid;
  return m == 1 ? 64 : 16;
}

}  // namespace

double hausdorff_defect(const std::vector<Point>& e, const std::vector<Point>& f) {
  if (e.empty() || f.empty()) throw std::invalid_argument("hausdorff_defect: empty set");
  auto directed = [](const std::vector<Point>& a, const std::vector<Point>& b) {
    double sup = 0.0;
    for (const auto& p : a) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : b) best = std::min(best, (p - q).norm());
      sup = std::max(sup, best);
    }
    return sup;
  };
  return directed(e, f) + directed(f, e);
}

BetaResult beta_rotation_grid(const WeightedCloud& cloud, const Point& x, double r, int grid) {
  if (cloud.intrinsic_dim != 1 || cloud.ambient_dim() != 2)
    throw std::invalid_argument("beta_rotation_grid: only valid for (m,n) = (1,2)");
  if (!(r > 0.0)) throw std::invalid_argument("beta: radius must be positive");
  const BallView ball = ball_view(cloud, x, r);
  if (ball.idx.empty()) throw std::invalid_argument("beta: empty ball");
  auto obj = [&](double phi) { return beta_objective(frame_from_angle(phi), ball, r); };
  // PCA incumbent first; the scan must strictly beat it
  double phi = pca_angle(ball);
  double val = obj(phi);
  double scan_phi = 0.0;
  const double scan_val = line_search_angles(obj, grid, &scan_phi);
  if (scan_val < val) {
    val = scan_val;
    phi = scan_phi;
  }
  return BetaResult{val, Subspace::from_orthonormal(frame_from_angle(phi)), 0};
}

BetaResult beta(const WeightedCloud& cloud, const Point& x, double r,
                const PlaneSearchOptions& opts) {
  if (!(r > 0.0)) throw std::invalid_argument("beta: radius must be positive");
  if (use_rotation_path(cloud, opts)) return beta_rotation_grid(cloud, x, r, opts.rotation_grid);
  const BallView ball = ball_view(cloud, x, r);
  if (ball.idx.empty()) throw std::invalid_argument("beta: empty ball");
  auto obj = [&](const Mat& f) { return beta_objective(f, ball, r); };
  PlaneOpt best = minimize_over_planes(cloud, x, r, ball, obj, opts, {});
  return BetaResult{best.value, Subspace::from_orthonormal(best.frame), best.candidate};
}

namespace {

ThetaResult theta_impl(const WeightedCloud& cloud, const Point& x, double r,
                       const PlaneSearchOptions& opts, const std::vector<Mat>& extra) {
  if (!(r > 0.0)) throw std::invalid_argument("theta: radius must be positive");
  const BallView ball = ball_view(cloud, x, r);
  if (ball.idx.empty()) throw std::invalid_argument("theta: empty ball");
  const int m = cloud.intrinsic_dim;
  const int grid = default_theta_grid(m, opts);
  const Mat lattice = disk_lattice(m, r, grid);
  const double pitch = r / grid;

  if (use_rotation_path(cloud, opts)) {
    auto obj = [&](double phi) { return theta_objective(frame_from_angle(phi), ball, r, lattice); };
    double phi = pca_angle(ball);
    double val = obj(phi);
    double scan_phi = 0.0;
    const double scan_val = line_search_angles(obj, std::max(64, opts.rotation_grid / 4), &scan_phi);
    if (scan_val < val) {
      val = scan_val;
      phi = scan_phi;
    }
    Mat f = frame_from_angle(phi);
    for (const auto& e : extra) {
      const double v = theta_objective(e, ball, r, lattice);
      if (v < val) {
        val = v;
        f = e;
      }
    }
    return ThetaResult{val, Subspace::from_orthonormal(f), 0, pitch};
  }

  auto obj = [&](const Mat& f) { return theta_objective(f, ball, r, lattice); };
  PlaneOpt best = minimize_over_planes(cloud, x, r, ball, obj, opts, extra);
  return ThetaResult{best.value, Subspace::from_orthonormal(best.frame), best.candidate, pitch};
}

}  // namespace

ThetaResult theta(const WeightedCloud& cloud, const Point& x, double r,
                  const PlaneSearchOptions& opts) {
  return theta_impl(cloud, x, r, opts, {});
}

Subspace best_approx_plane(const WeightedCloud& cloud, const Point& x, double r,
                           const PlaneSearchOptions& opts) {
  return theta(cloud, x, r, opts).plane;
}

double ahlfors_density(const WeightedCloud& cloud, const Point& x, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("ahlfors_density: radius must be positive");
  const auto idx = cloud.indices_in_open_ball(x, r);
  double w = 0.0;
  for (auto i : idx) w += cloud.weights(i);
  return w / (unit_ball_volume(cloud.intrinsic_dim) * std::pow(r, cloud.intrinsic_dim));
}

namespace {

double tuple_volume(const Mat& points, const std::vector<Eigen::Index>& tuple) {
  std::vector<Point> v;
  v.reserve(tuple.size());
  for (auto i : tuple) v.push_back(points.col(i));
  return simplex_volume(Simplex(std::move(v)));
}

Simplex tuple_simplex(const Mat& points, const std::vector<Eigen::Index>& tuple) {
  std::vector<Point> v;
  v.reserve(tuple.size());
  for (auto i : tuple) v.push_back(points.col(i));
  return Simplex(std::move(v));
}

/// Replaces the minimal-height vertex by any ball point farther from the
/// opposite face plane until no such point exists.  Each replacement strictly
/// increases the volume, so the loop terminates.
void saturate_apex(const WeightedCloud& cloud, const std::vector<Eigen::Index>& ball_idx,
                   std::vector<Eigen::Index>& tuple) {
  for (int guard = 0; guard < 256; ++guard) {
    Simplex s = tuple_simplex(cloud.points, tuple);
    if (simplex_volume(s) <= 0.0) return;
    int apex = 0;
    double hmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < static_cast<int>(tuple.size()); ++i) {
      const double h = height(s, i);
      if (h < hmin) {
        hmin = h;
        apex = i;
      }
    }
    // orthonormal basis of the base-face span
    const Simplex base = face(s, apex);
    const Point& origin = base.vertex(0);
    Mat edges(cloud.ambient_dim(), base.order());
    for (int i = 0; i < base.order(); ++i) edges.col(i) = base.vertex(i + 1) - origin;
    Eigen::ColPivHouseholderQR<Mat> qr(edges);
    qr.setThreshold(1e-12);
    const auto rank = qr.rank();
    if (rank == 0) return;
    const Mat basis = qr.householderQ() * Mat::Identity(cloud.ambient_dim(), rank);

    Eigen::Index best = -1;
    double best_d = hmin * (1.0 + 1e-12);
    for (auto j : ball_idx) {
      const Vec d = cloud.points.col(j) - origin;
      const double dist = (d - basis * (basis.transpose() * d)).norm();
      if (dist > best_d) {
        best_d = dist;
        best = j;
      }
    }
    if (best < 0) return;
    tuple[static_cast<std::size_t>(apex)] = best;
  }
}

}  // namespace

MaxSimplexResult max_volume_simplex(const WeightedCloud& cloud, const Point& x, double r,
                                    SimplexSearchMode mode) {
  const auto ball = cloud.indices_in_closed_ball(x, r);
  const int m = cloud.intrinsic_dim;
  const int k = m + 2;  // vertices
  if (static_cast<int>(ball.size()) < k)
    throw std::invalid_argument("max_volume_simplex: ball holds fewer than m+2 points");

  std::vector<Eigen::Index> best_tuple;
  double best_vol = -1.0;

  if (mode == SimplexSearchMode::Exact) {
    if (ball.size() > 60)
      throw std::invalid_argument("max_volume_simplex: exact mode limited to 60 candidates, got " +
                                  std::to_string(ball.size()));
    std::vector<int> c(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) c[static_cast<std::size_t>(i)] = i;
    const int p = static_cast<int>(ball.size());
    std::vector<Eigen::Index> tuple(static_cast<std::size_t>(k));
    while (true) {
      for (int i = 0; i < k; ++i)
        tuple[static_cast<std::size_t>(i)] = ball[static_cast<std::size_t>(c[static_cast<std::size_t>(i)])];
      const double vol = tuple_volume(cloud.points, tuple);
      if (vol > best_vol) {
        best_vol = vol;
        best_tuple = tuple;
      }
      int i = k - 1;
      while (i >= 0 && c[static_cast<std::size_t>(i)] == p - k + i) --i;
      if (i < 0) break;
      ++c[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < k; ++j)
        c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
    }
  } else {
    // seed: diameter pair
    Eigen::Index a = ball[0], b = ball[0];
    double best_d = -1.0;
    for (std::size_t i = 0; i + 1 < ball.size(); ++i)
      for (std::size_t j = i + 1; j < ball.size(); ++j) {
        const double d = (cloud.points.col(ball[i]) - cloud.points.col(ball[j])).squaredNorm();
        if (d > best_d) {
          best_d = d;
          a = ball[i];
          b = ball[j];
        }
      }
    std::vector<Eigen::Index> tuple{a, b};
    // grow: farthest point from the current affine hull
    while (static_cast<int>(tuple.size()) < k) {
      const Point origin = cloud.points.col(tuple[0]);
      Mat edges(cloud.ambient_dim(), static_cast<Eigen::Index>(tuple.size()) - 1);
      for (std::size_t i = 1; i < tuple.size(); ++i)
        edges.col(static_cast<Eigen::Index>(i - 1)) = cloud.points.col(tuple[i]) - origin;
      Eigen::ColPivHouseholderQR<Mat> qr(edges);
      qr.setThreshold(1e-12);
      const auto rank = qr.rank();
      Mat basis = rank > 0 ? Mat(qr.householderQ() * Mat::Identity(cloud.ambient_dim(), rank))
                           : Mat(cloud.ambient_dim(), 0);
      Eigen::Index pick = -1;
      double far = -1.0;
      for (auto j : ball) {
        const Vec d = cloud.points.col(j) - origin;
        const double dist =
            basis.cols() > 0 ? (d - basis * (basis.transpose() * d)).norm() : d.norm();
        if (dist > far) {
          far = dist;
          pick = j;
        }
      }
      tuple.push_back(pick);
    }
    best_vol = tuple_volume(cloud.points, tuple);
    // one swap-improvement pass
    for (std::size_t pos = 0; pos < tuple.size(); ++pos) {
      Eigen::Index keep = tuple[pos];
      Eigen::Index improved = keep;
      for (auto j : ball) {
        if (j == keep) continue;
        tuple[pos] = j;
        const double vol = tuple_volume(cloud.points, tuple);
        if (vol > best_vol * (1.0 + 1e-12)) {
          best_vol = vol;
          improved = j;
        }
      }
      tuple[pos] = improved;
    }
    saturate_apex(cloud, ball, tuple);
    best_vol = tuple_volume(cloud.points, tuple);
    best_tuple = tuple;
  }

  Simplex s = tuple_simplex(cloud.points, best_tuple);
  const bool degenerate = !(best_vol > 0.0);
  return MaxSimplexResult{std::move(best_tuple), std::move(s), std::max(best_vol, 0.0), degenerate,
                          mode == SimplexSearchMode::Exact};
}

double beta_upper_from_simplex(const WeightedCloud& cloud, const Point& x, double r) {
  const auto ball = cloud.indices_in_closed_ball(x, r);
  const SimplexSearchMode mode =
      ball.size() <= 30 ? SimplexSearchMode::Exact : SimplexSearchMode::Greedy;
  const MaxSimplexResult res = max_volume_simplex(cloud, x, r, mode);
  if (res.degenerate) return 0.0;
  return 2.0 * min_height(res.simplex) / r;
}

TangentEstimate tangent_estimate(const WeightedCloud& cloud, const Point& x,
                                 const std::vector<double>& radii,
                                 const PlaneSearchOptions& opts) {
  if (radii.empty()) throw std::invalid_argument("tangent_estimate: empty radius schedule");
  for (std::size_t i = 0; i + 1 < radii.size(); ++i)
    if (!(radii[i] > radii[i + 1]))
      throw std::invalid_argument("tangent_estimate: radii must be strictly descending");

  const int m = cloud.intrinsic_dim;
  TangentEstimate out{Subspace::coordinate(cloud.ambient_dim(), [&] {
                        std::vector<int> ax(static_cast<std::size_t>(m));
                        for (int i = 0; i < m; ++i) ax[static_cast<std::size_t>(i)] = i;
                        return ax;
                      }()),
                      {}, {}};
  bool have_plane = false;
  for (double r : radii) {
    const auto idx = cloud.indices_in_closed_ball(x, r);
    if (static_cast<int>(idx.size()) < m + 1) continue;
    Mat v(cloud.ambient_dim(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j)
      v.col(static_cast<Eigen::Index>(j)) = cloud.points.col(idx[j]) - x;
    Eigen::JacobiSVD<Mat> svd(v);
    const double scale = svd.singularValues()(0);
    int rank = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > 1e-10 * scale) ++rank;
    if (rank < m) continue;
    const Subspace plane = best_approx_plane(cloud, x, r, opts);
    if (have_plane) out.cauchy_increments.push_back(grassmann_distance(out.plane, plane));
    out.plane = plane;
    out.radii_used.push_back(r);
    have_plane = true;
  }
  if (!have_plane)
    throw std::invalid_argument("tangent_estimate: rank collapse at all radii");
  return out;
}

double tangent_oscillation(const WeightedCloud& cloud, const Point& x, const Point& y,
                           const std::vector<double>& radii, const PlaneSearchOptions& opts) {
  const TangentEstimate tx = tangent_estimate(cloud, x, radii, opts);
  const TangentEstimate ty = tangent_estimate(cloud, y, radii, opts);
  return grassmann_distance(tx.plane, ty.plane);
}

GraphPatchResult graph_patch_check(const WeightedCloud& cloud, const Point& x, double r,
                                   double fiber_tol, const PlaneSearchOptions& opts) {
  if (!(fiber_tol > 0.0)) throw std::invalid_argument("graph_patch_check: fiber_tol must be > 0");
  const TangentEstimate tan = tangent_estimate(cloud, x, {r / 2.0, r / 4.0, r / 8.0}, opts);
  const auto idx = cloud.indices_in_closed_ball(x, r);
  const int m = cloud.intrinsic_dim;

  struct Bin {
    std::vector<Eigen::Index> pts;
  };
  std::map<std::vector<long>, Bin> bins;
  for (auto i : idx) {
    const Vec d = cloud.points.col(i) - x;
    const Vec c = tan.plane.frame().transpose() * d;
    std::vector<long> key(static_cast<std::size_t>(m));
    for (int a = 0; a < m; ++a)
      key[static_cast<std::size_t>(a)] = static_cast<long>(std::floor(c(a) / fiber_tol));
    bins[key].pts.push_back(i);
  }

  GraphPatchResult out{true, {}};
  for (const auto& [key, bin] : bins) {
    double spread = 0.0;
    for (std::size_t i = 0; i + 1 < bin.pts.size(); ++i)
      for (std::size_t j = i + 1; j < bin.pts.size(); ++j) {
        const Vec di = tan.plane.project_perp(cloud.points.col(bin.pts[i]) - x);
        const Vec dj = tan.plane.project_perp(cloud.points.col(bin.pts[j]) - x);
        spread = std::max(spread, (di - dj).norm());
      }
    if (spread > 2.0 * fiber_tol) {
      out.ok = false;
      out.violations.push_back(FiberViolation{key, bin.pts, spread});
    }
  }
  return out;
}

ScaleRecord make_scale_record(const WeightedCloud& cloud, const Point& x, double r,
                              const PlaneSearchOptions& opts) {
  BetaResult b = beta(cloud, x, r, opts);
  ThetaResult t = theta_impl(cloud, x, r, opts, {b.plane.frame()});
  // evaluating beta's objective on the theta plane keeps beta <= theta
  const BallView ball = ball_view(cloud, x, r);
  const double beta_on_theta_plane = beta_objective(t.plane.frame(), ball, r);
  const double beta_final = std::min(b.beta, beta_on_theta_plane);
  return ScaleRecord{x,       r, beta_final, t.theta, t.plane, ahlfors_density(cloud, x, r),
                     cloud.covering_radius};
}

ScalingFit scaling_fit(const std::vector<std::pair<double, double>>& scale_value) {
  std::vector<std::pair<double, double>> logs;
  double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
  for (const auto& [r, v] : scale_value) {
    if (!(r > 0.0) || !(v > 0.0)) continue;
    logs.emplace_back(std::log(r), std::log(v));
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
  }
  if (logs.size() < 4)
    throw std::invalid_argument("scaling_fit: needs at least 4 positive records, got " +
                                std::to_string(logs.size()));
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(logs.size());
  for (const auto& [lx, ly] : logs) {
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-300) throw std::invalid_argument("scaling_fit: degenerate abscissae");
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;
  double ss = 0.0;
  for (const auto& [lx, ly] : logs) {
    const double e = ly - (slope * lx + intercept);
    ss += e * e;
  }
  return ScalingFit{slope, intercept, {rmin, rmax}, std::sqrt(ss / n),
                    static_cast<int>(logs.size())};
}

ScalingFit scaling_fit(const std::vector<ScaleRecord>& records, ScaleField field) {
  std::vector<std::pair<double, double>> rv;
  rv.reserve(records.size());
  for (const auto& rec : records)
    rv.emplace_back(rec.radius, field == ScaleField::Beta ? rec.beta : rec.theta);
  return scaling_fit(rv);
}

namespace {

void write_double(std::ostream& os, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  os.write(buf, res.ptr - buf);
}

}  // namespace

void write_scale_records_csv(std::ostream& os, const std::vector<ScaleRecord>& records) {
  if (records.empty()) throw std::invalid_argument("write_scale_records_csv: no records");
  const int n = static_cast<int>(records.front().center.size());
  const int m = records.front().best_plane.dim();
  os << "# menger-scale-record-v1 n=" << n << " m=" << m
     << " columns=cx0..cx" << n - 1 << ",r,beta,theta,ahlfors_ratio,plane00..plane"
     << n * m - 1 << " (frame row-major)\n";
  for (const auto& rec : records) {
    for (int i = 0; i < n; ++i) {
      write_double(os, rec.center(i));
      os << ',';
    }
    write_double(os, rec.radius);
    os << ',';
    write_double(os, rec.beta);
    os << ',';
    write_double(os, rec.theta);
    os << ',';
    write_double(os, rec.ahlfors_ratio);
    const Mat& f = rec.best_plane.frame();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) {
        os << ',';
        write_double(os, f(i, j));
      }
    os << '\n';
  }
}

std::vector<ScaleRecord> read_scale_records_csv(std::istream& is) {
  std::string header;
  if (!std::getline(is, header) || header.rfind("# menger-scale-record-v1", 0) != 0)
    throw std::runtime_error("scale-record csv: missing v1 header");
  int n = -1, m = -1;
  {
    std::istringstream hs(header);
    std::string tok;
    while (hs >> tok) {
      if (tok.rfind("n=", 0) == 0) n = std::stoi(tok.substr(2));
      if (tok.rfind("m=", 0) == 0) m = std::stoi(tok.substr(2));
    }
  }
  if (n < 1 || m < 1) throw std::runtime_error("scale-record csv: bad header dimensions");
  std::vector<ScaleRecord> out;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> vals;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      std::size_t comma = line.find(',', pos);
      if (comma == std::string::npos) comma = line.size();
      double v = 0;
      const auto res = std::from_chars(line.data() + pos, line.data() + comma, v);
      if (res.ec != std::errc())
        throw std::runtime_error("scale-record csv: parse error at line " +
                                 std::to_string(lineno));
      vals.push_back(v);
      pos = comma + 1;
    }
    const std::size_t expect = static_cast<std::size_t>(n) + 4 + static_cast<std::size_t>(n * m);
    if (vals.size() != expect)
      throw std::runtime_error("scale-record csv: wrong column count at line " +
                               std::to_string(lineno));
    Point c(n);
    for (int i = 0; i < n; ++i) c(i) = vals[static_cast<std::size_t>(i)];
    const double r = vals[static_cast<std::size_t>(n)];
    const double b = vals[static_cast<std::size_t>(n) + 1];
    const double th = vals[static_cast<std::size_t>(n) + 2];
    const double ahl = vals[static_cast<std::size_t>(n) + 3];
    Mat f(n, m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j)
        f(i, j) = vals[static_cast<std::size_t>(n) + 4 + static_cast<std::size_t>(i * m + j)];
    out.push_back(
        ScaleRecord{std::move(c), r, b, th, Subspace::from_orthonormal(std::move(f)), ahl, 0.0});
  }
  return out;
}

double beta_curv_constant(int m, int n) {
  if (m < 1 || n <= m) throw std::invalid_argument("beta_curv_constant: need 1 <= m < n");
  return std::pow(2.0, n) * unit_ball_volume(m) * unit_ball_volume(n - m) /
         unit_ball_volume(n - m - 1);
}

double eta_beta_constant(int m, int n) {
  return std::pow(factorial(m + 1) * beta_curv_constant(m, n), 1.0 / (m + 1));
}

namespace {

std::vector<Mat> candidate_frames_impl(const WeightedCloud& cloud, const Point& x, double r,
                                       const BallView& ball, const PlaneSearchOptions& opts) {
  const int n = cloud.ambient_dim();
  const int m = cloud.intrinsic_dim;
  std::vector<Mat> cands;

  // 0: weighted PCA about x
  Mat cov = Mat::Zero(n, n);
  for (Eigen::Index j = 0; j < ball.v.cols(); ++j)
    cov += ball.weights(j) * ball.v.col(j) * ball.v.col(j).transpose();
  Eigen::SelfAdjointEigenSolver<Mat> es(cov);
  cands.push_back(es.eigenvectors().rightCols(m));

  // 1: base plane of the max-volume simplex, when the ball supports one
  if (static_cast<int>(ball.idx.size()) >= m + 2) {
    const MaxSimplexResult mv = max_volume_simplex(cloud, x, r, SimplexSearchMode::Greedy);
    if (!mv.degenerate) {
      int apex = 0;
      double hmin = std::numeric_limits<double>::infinity();
      for (int i = 0; i <= mv.simplex.order(); ++i) {
        const double h = height(mv.simplex, i);
        if (h < hmin) {
          hmin = h;
          apex = i;
        }
      }
      const Simplex base = face(mv.simplex, apex);
      Mat edges(n, base.order());
      for (int i = 0; i < base.order(); ++i) edges.col(i) = base.vertex(i + 1) - base.vertex(0);
      Eigen::ColPivHouseholderQR<Mat> qr(edges);
      qr.setThreshold(1e-12);
      if (qr.rank() >= m) {
        Mat q = qr.householderQ() * Mat::Identity(n, m);
        cands.push_back(std::move(q));
      }
    }
  }

  // remaining multistarts: seeded random frames
  int c = static_cast<int>(cands.size());
  for (; c < std::max(1, opts.multistarts); ++c)
    cands.push_back(Subspace::random(n, m, derive_seed(opts.seed, static_cast<std::uint64_t>(c)))
                        .frame());
  return cands;
}

}  // namespace

namespace {
// definition for the forward declaration used by minimize_over_planes
std::vector<Mat> candidate_frames(const WeightedCloud& cloud, const Point& x, double r,
                                  const BallView& ball, const PlaneSearchOptions& opts) {
  return candidate_frames_impl(cloud, x, r, ball, opts);
}
}  // namespace

}  // namespace menger
