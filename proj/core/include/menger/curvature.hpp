#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "menger/cloud.hpp"
#include "menger/geometry.hpp"
#include "menger/grassmann.hpp"
#include "menger/types.hpp"

namespace menger {

/// Inverse circumradius of the triangle x0 x1 x2:
/// 4 H^2(simp) / (|x0-x1| |x1-x2| |x2-x0|).  Coincident points give 0.
double menger_c(const Point& x0, const Point& x1, const Point& x2);

/// Discrete curvature of an (m+1)-simplex (m+2 vertices):
/// H^{m+1}(simp) / diam^{m+2}.  Fully coincident tuples give 0 by convention.
double kappa(const Simplex& t);

/// h_min(simp) / diam^2, same conventions as kappa.
double kappa_prime(const Simplex& t);

/// Tetrahedron curvature in R^3: H^3(simp) / (H^2(boundary) * diam^2).
double kappa_svdm(const Point& x0, const Point& x1, const Point& x2, const Point& x3);

/// Tangent-point radius |x-y|^2 / (2 dist(y-x, T_x)); absent when y-x lies in
/// the tangent plane (infinite radius).  x == y is a domain error.
std::optional<double> tangent_point_radius(const Point& x, const Point& y,
                                           const Subspace& tangent);

/// Inner-sup search budget.  The free tuple space is enumerated exhaustively
/// when its size is at most exhaustive_threshold; otherwise n_random draws are
/// streamed and every improvement triggers n_refine_rounds of nearest-neighbor
/// hill climbing.  The result is a certified lower bound on the true sup.
struct InnerSearch {
  std::size_t n_random = 512;
  int n_refine_rounds = 2;
  std::size_t exhaustive_threshold = 20000;
  int n_neighbors = 8;
};

/// sup over (m+2-l)-tuples of cloud points of kappa(fixed + free).  With
/// l = m+2 there are no free points and the fixed tuple's kappa is returned.
double sup_kappa(const WeightedCloud& cloud, const std::vector<Point>& fixed,
                 const InnerSearch& search, std::uint64_t seed);

struct EnergyParams {
  int m = 1;
  int l = 1;
  double p = 2.0;

  double lambda() const { return p - static_cast<double>(m) * l; }
  double kappa_exponent() const { return (p + static_cast<double>(m) * l) * (m + 1); }
  double alpha() const { return 1.0 - static_cast<double>(m) * l / p; }
  void validate() const;
};

enum class EnergyMode { Exhaustive, MonteCarlo };

struct EnergyBudget {
  std::size_t mc_tuples = 100000;
  std::size_t exhaustive_limit = 2000000;  // max outer tuple count before refusal
  InnerSearch inner;
  int threads = 1;
};

struct EnergyEstimate {
  double value = 0.0;
  std::optional<double> std_error;  // present in Monte Carlo mode
  std::size_t n_outer_tuples = 0;
  InnerSearch inner;
  EnergyMode mode = EnergyMode::Exhaustive;
  std::uint64_t seed = 0;
  EnergyParams params;

  std::string to_json() const;
  static EnergyEstimate from_json(const std::string& text);
};

/// Discrete integral curvature energy: the weighted sum over ordered l-tuples
/// of cloud points of (prod of weights) * sup_kappa^p.  Monte Carlo draws
/// tuples with probability proportional to weights (with replacement) and is
/// unbiased for the weighted sum; both modes are biased low by the inner-sup
/// underestimate.  Deterministic for fixed (cloud, params, seed) and
/// independent of the thread count.
EnergyEstimate energy(const WeightedCloud& cloud, const EnergyParams& params, EnergyMode mode,
                      const EnergyBudget& budget, std::uint64_t seed);

/// Tangent-point energy: double integral of R_tp(x,y)^{-p}.  Tangent planes
/// are estimated per point unless supplied.
EnergyEstimate energy_tp(const WeightedCloud& cloud, double p, EnergyMode mode,
                         const EnergyBudget& budget, std::uint64_t seed,
                         const std::vector<Subspace>* tangents = nullptr);

struct AhlforsParams {
  double a;  // lower regularity constant
  double r;  // largest radius it is claimed for
};

struct EtaDViolation {
  std::vector<Eigen::Index> tuple;
  double eta;
  double d;
  double required_energy;  // the lower bound the supplied energy failed
};

/// Samples random (m+2)-tuples, measures (eta, d) = (h_min/diam, diam) and
/// flags every tuple whose voluminousness would force the energy above
/// energy_bound:
///   required = (A * (varsigma_{m+1}(eta) * d)^m)^l * (3 eta^{m+1} / (4 (m+1)! d))^p.
/// Tuples with d > ahlfors.r or eta = 0 are skipped.  Empty result expected
/// whenever energy_bound dominates the measured energy.
std::vector<EtaDViolation> eta_d_check(const WeightedCloud& cloud, double energy_bound,
                                       const EnergyParams& params, const AhlforsParams& ahlfors,
                                       std::size_t n_trials, std::uint64_t seed);

}  // namespace menger
