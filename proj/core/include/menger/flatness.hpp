#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "menger/cloud.hpp"
#include "menger/geometry.hpp"
#include "menger/grassmann.hpp"
#include "menger/types.hpp"

namespace menger {

/// How the inf over m-planes is searched.
///  Auto          - RotationGrid for (m,n) = (1,2), Multistart otherwise.
///  RotationGrid  - exact path for plane curves: dense angle scan plus
///                  golden-section refinement; only valid for (m,n) = (1,2).
///  Multistart    - weighted-PCA and max-volume-simplex seeds plus random
///                  frames, projected-gradient descent with
///                  re-orthonormalization, then a Givens golden-section polish.
enum class PlaneSearchMethod { Auto, RotationGrid, Multistart };

struct PlaneSearchOptions {
  PlaneSearchMethod method = PlaneSearchMethod::Auto;
  int multistarts = 5;
  int pg_max_iters = 40;
  int polish_sweeps = 3;
  int rotation_grid = 2048;           // coarse angles for the (1,2) exact path
  int theta_grid = 0;                 // 0 = default pitch (r/64 for m=1, r/16 for m>=2)
  std::uint64_t seed = 0x5eedULL;     // seeds the random multistarts
};

struct BetaResult {
  double beta;
  Subspace plane;
  int candidate_index;  // multistart index that attained the minimum
};

struct ThetaResult {
  double theta;
  Subspace plane;
  int candidate_index;
  double grid_pitch;  // mesh of the deterministic grid on the plane disk
};

/// Sum-form Hausdorff defect between two finite point sets:
/// sup_{e in E} dist(e, F) + sup_{f in F} dist(f, E).  This is the paper's
/// convention; note it is the SUM of the directed sups, not their max.
double hausdorff_defect(const std::vector<Point>& e, const std::vector<Point>& f);

/// One-sided scale-normalized flatness of cloud within the closed ball
/// B(x, r): (1/r) min_H max_{z} dist(z, x + H).
BetaResult beta(const WeightedCloud& cloud, const Point& x, double r,
                const PlaneSearchOptions& opts = {});

/// Exact rotation-grid + golden-section path for (m,n) = (1,2).
BetaResult beta_rotation_grid(const WeightedCloud& cloud, const Point& x, double r,
                              int grid = 2048);

/// Bilateral flatness: (1/r) min_H d_H(cloud ball, plane disk), the plane-side
/// sup evaluated over a deterministic lattice of pitch ThetaResult::grid_pitch.
ThetaResult theta(const WeightedCloud& cloud, const Point& x, double r,
                  const PlaneSearchOptions& opts = {});

/// The theta-optimal plane; ties broken by lowest candidate index.
Subspace best_approx_plane(const WeightedCloud& cloud, const Point& x, double r,
                           const PlaneSearchOptions& opts = {});

/// (weight of cloud in the open ball B(x,r)) / (omega_m r^m).
double ahlfors_density(const WeightedCloud& cloud, const Point& x, double r);

enum class SimplexSearchMode { Exact, Greedy };

struct MaxSimplexResult {
  std::vector<Eigen::Index> vertex_indices;  // m+2 cloud indices
  Simplex simplex;
  double volume;
  bool degenerate;
  bool exact;
};

/// Near-maximal (m+2)-vertex simplex with vertices in cloud within B(x,r).
/// Exact mode enumerates all subsets (<= 60 candidate points); greedy mode
/// seeds with the diameter pair, grows by farthest-from-affine-hull, runs one
/// swap-improvement pass, and finally saturates the apex so that no cloud
/// point in the ball is farther from the base-face plane than the minimal
/// height.  The saturation step is what makes beta_upper_from_simplex a true
/// upper bound.
MaxSimplexResult max_volume_simplex(const WeightedCloud& cloud, const Point& x, double r,
                                    SimplexSearchMode mode);

/// 2 * min_height(max-volume simplex) / r; an upper bound for beta at (x, r)
/// whenever x is a point of the cloud.
double beta_upper_from_simplex(const WeightedCloud& cloud, const Point& x, double r);

struct TangentEstimate {
  Subspace plane;
  std::vector<double> radii_used;
  std::vector<double> cauchy_increments;  // d_Gr of consecutive plane estimates
};

/// Best approximating plane at the smallest usable radius of the descending
/// schedule, with Cauchy diagnostics attached.  A radius is usable when its
/// ball holds >= m+1 points of affine rank m around x.
TangentEstimate tangent_estimate(const WeightedCloud& cloud, const Point& x,
                                 const std::vector<double>& radii,
                                 const PlaneSearchOptions& opts = {});

/// d_Gr between the tangent estimates at x and y.
double tangent_oscillation(const WeightedCloud& cloud, const Point& x, const Point& y,
                           const std::vector<double>& radii, const PlaneSearchOptions& opts = {});

struct FiberViolation {
  std::vector<long> bin;
  std::vector<Eigen::Index> point_indices;
  double spread;
};

struct GraphPatchResult {
  bool ok;
  std::vector<FiberViolation> violations;
};

/// Bins the ball's points by their tangent-plane projection on a lattice of
/// pitch fiber_tol; a fiber is violated when its points spread more than
/// 2*fiber_tol in the normal directions.
GraphPatchResult graph_patch_check(const WeightedCloud& cloud, const Point& x, double r,
                                   double fiber_tol, const PlaneSearchOptions& opts = {});

struct ScaleRecord {
  Point center;
  double radius;
  double beta;
  double theta;
  Subspace best_plane;
  double ahlfors_ratio;
  double covering_radius;  // of the cloud the record was measured on
};

/// Jointly evaluates beta, theta, the best plane and the Ahlfors ratio at
/// (x, r).  beta is re-evaluated on the theta-optimal plane so that
/// beta <= theta holds numerically as well as mathematically.
ScaleRecord make_scale_record(const WeightedCloud& cloud, const Point& x, double r,
                              const PlaneSearchOptions& opts = {});

struct ScalingFit {
  double exponent;
  double intercept;  // in log coordinates
  std::pair<double, double> r_range;
  double residual;  // rms log residual
  int n_records;
};

enum class ScaleField { Beta, Theta };

/// OLS of log(value) on log(scale); nonpositive values are dropped and at
/// least 4 points must remain.
ScalingFit scaling_fit(const std::vector<std::pair<double, double>>& scale_value);
ScalingFit scaling_fit(const std::vector<ScaleRecord>& records, ScaleField field);

/// CSV stream of scale records; the header comment line versions the exact
/// column order.
void write_scale_records_csv(std::ostream& os, const std::vector<ScaleRecord>& records);
std::vector<ScaleRecord> read_scale_records_csv(std::istream& is);

/// Constant of the simplex-volume vs beta inequality:
/// H^{m+1}(T) <= beta_curv_constant(m,n) * beta(x0, diam) * diam^{m+1}.
double beta_curv_constant(int m, int n);

/// Constant of the voluminousness vs beta inequality:
/// eta <= eta_beta_constant(m,n) * beta(x0, diam)^{1/(m+1)}.
double eta_beta_constant(int m, int n);

}  // namespace menger
