#include "menger/curvature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "menger/flatness.hpp"

namespace menger {

namespace {

using ordered_json = nlohmann::ordered_json;

double tuple_kappa(const Mat& points, const std::vector<Eigen::Index>& tuple) {
  std::vector<Point> v;
  v.reserve(tuple.size());
  for (auto i : tuple) v.push_back(points.col(i));
  return kappa(Simplex(std::move(v)));
}

}  // namespace

double menger_c(const Point& x0, const Point& x1, const Point& x2) {
  const double a = (x0 - x1).norm();
  const double b = (x1 - x2).norm();
  const double c = (x2 - x0).norm();
  if (a == 0.0 || b == 0.0 || c == 0.0) return 0.0;
  const double area = simplex_volume(Simplex({x0, x1, x2}));
  return 4.0 * area / (a * b * c);
}

double kappa(const Simplex& t) {
  if (t.order() < 1) throw std::invalid_argument("kappa: needs at least 2 vertices");
  const double d = simplex_diameter(t);
  if (d == 0.0) return 0.0;  // fully coincident tuple
  const double vol = simplex_volume(t);
  return vol / std::pow(d, t.order() + 1);
}

double kappa_prime(const Simplex& t) {
  if (t.order() < 1) throw std::invalid_argument("kappa_prime: needs at least 2 vertices");
  const double d = simplex_diameter(t);
  if (d == 0.0) return 0.0;
  return min_height(t) / (d * d);
}

double kappa_svdm(const Point& x0, const Point& x1, const Point& x2, const Point& x3) {
  if (x0.size() != 3 || x1.size() != 3 || x2.size() != 3 || x3.size() != 3)
    throw std::invalid_argument("kappa_svdm: points must lie in R^3");
  const Simplex t({x0, x1, x2, x3});
  const double d = simplex_diameter(t);
  if (d == 0.0) return 0.0;
  const double vol = simplex_volume(t);
  if (vol == 0.0) return 0.0;
  double boundary = 0.0;
  for (int i = 0; i < 4; ++i) boundary += simplex_volume(face(t, i));
  if (boundary == 0.0) return 0.0;
  return vol / (boundary * d * d);
}

std::optional<double> tangent_point_radius(const Point& x, const Point& y,
                                           const Subspace& tangent) {
  const Vec diff = y - x;
  const double dist2 = diff.squaredNorm();
  if (dist2 == 0.0) throw std::invalid_argument("tangent_point_radius: x == y");
  const double perp = tangent.project_perp(diff).norm();
  // directions within the frame's orthonormality tolerance count as in-plane
  if (perp <= 1e-12 * std::sqrt(dist2)) return std::nullopt;
  return dist2 / (2.0 * perp);
}

void EnergyParams::validate() const {
  if (m < 1) throw std::invalid_argument("EnergyParams: m must be >= 1");
  if (l < 1 || l > m + 2) throw std::invalid_argument("EnergyParams: need 1 <= l <= m+2");
  if (!(p > 0.0)) throw std::invalid_argument("EnergyParams: p must be positive");
}

namespace {

/// Streaming inner-sup state.  Every random draw that improves the running
/// best triggers hill-climbing refinement, which keeps the result monotone in
/// the number of draws for a fixed seed stream.
class SupSearch {
 public:
  SupSearch(const WeightedCloud& cloud, const InnerSearch& search)
      : cloud_(cloud), search_(search), nn_(cloud.points) {}

  double run(const std::vector<Point>& fixed, std::uint64_t seed) const {
    const int m = cloud_.intrinsic_dim;
    const int n_free = m + 2 - static_cast<int>(fixed.size());
    if (n_free < 0) throw std::invalid_argument("sup_kappa: fixed tuple longer than m+2");
    if (n_free == 0) return kappa(Simplex(fixed));

    const Eigen::Index N = cloud_.size();
    if (N < n_free) throw std::invalid_argument("sup_kappa: not enough cloud points");

    // exhaustive when the free tuple space is small enough
    double combos = 1.0;
    for (int i = 0; i < n_free; ++i) combos = combos * static_cast<double>(N - i) / (i + 1);
    if (combos <= static_cast<double>(search_.exhaustive_threshold))
      return exhaustive(fixed, n_free);

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Eigen::Index> pick(0, N - 1);
    std::vector<Eigen::Index> free_idx(static_cast<std::size_t>(n_free));
    double best = 0.0;
    std::vector<Eigen::Index> best_idx;
    for (std::size_t draw = 0; draw < search_.n_random; ++draw) {
      for (auto& f : free_idx) f = pick(rng);
      const double val = evaluate(fixed, free_idx);
      if (val > best) {
        best = val;
        best_idx = free_idx;
        best = refine(fixed, best_idx, best);
      }
    }
    return best;
  }

 private:
  double evaluate(const std::vector<Point>& fixed, const std::vector<Eigen::Index>& free_idx) const {
    std::vector<Point> v;
    v.reserve(fixed.size() + free_idx.size());
    for (const auto& p : fixed) v.push_back(p);
    for (auto i : free_idx) v.push_back(cloud_.points.col(i));
    return kappa(Simplex(std::move(v)));
  }

  double refine(const std::vector<Point>& fixed, std::vector<Eigen::Index>& idx,
                double best) const {
    for (int round = 0; round < search_.n_refine_rounds; ++round) {
      bool improved = false;
      for (std::size_t slot = 0; slot < idx.size(); ++slot) {
        const auto neighbors =
            nn_.nearest(cloud_.points.col(idx[slot]), search_.n_neighbors, idx[slot]);
        const Eigen::Index keep = idx[slot];
        Eigen::Index pick = keep;
        for (auto cand : neighbors) {
          idx[slot] = cand;
          const double val = evaluate(fixed, idx);
          if (val > best) {
            best = val;
            pick = cand;
            improved = true;
          }
        }
        idx[slot] = pick;
      }
      if (!improved) break;
    }
    return best;
  }

  double exhaustive(const std::vector<Point>& fixed, int n_free) const {
    const Eigen::Index N = cloud_.size();
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n_free));
    for (int i = 0; i < n_free; ++i) idx[static_cast<std::size_t>(i)] = i;
    double best = 0.0;
    while (true) {
      best = std::max(best, evaluate(fixed, idx));
      int i = n_free - 1;
      while (i >= 0 && idx[static_cast<std::size_t>(i)] == N - n_free + i) --i;
      if (i < 0) break;
      ++idx[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < n_free; ++j)
        idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
    return best;
  }

  const WeightedCloud& cloud_;
  InnerSearch search_;
  NeighborIndex nn_;
};

}  // namespace

double sup_kappa(const WeightedCloud& cloud, const std::vector<Point>& fixed,
                 const InnerSearch& search, std::uint64_t seed) {
  return SupSearch(cloud, search).run(fixed, seed);
}

namespace {

struct ChunkStat {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t count = 0;
};

/// Weighted index sampler via binary search over cumulative weights.
class WeightSampler {
 public:
  explicit WeightSampler(const Vec& weights) {
    cum_.resize(static_cast<std::size_t>(weights.size()));
    double acc = 0.0;
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
      acc += weights(i);
      cum_[static_cast<std::size_t>(i)] = acc;
    }
    total_ = acc;
  }

  Eigen::Index draw(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> uni(0.0, total_);
    const double u = uni(rng);
    const auto it = std::lower_bound(cum_.begin(), cum_.end(), u);
    return static_cast<Eigen::Index>(std::min<std::size_t>(
        static_cast<std::size_t>(it - cum_.begin()), cum_.size() - 1));
  }

  double total() const { return total_; }

 private:
  std::vector<double> cum_;
  double total_ = 0.0;
};

}  // namespace

EnergyEstimate energy(const WeightedCloud& cloud, const EnergyParams& params, EnergyMode mode,
                      const EnergyBudget& budget, std::uint64_t seed) {
  params.validate();
  if (params.m != cloud.intrinsic_dim)
    throw std::invalid_argument("energy: params.m does not match the cloud");
  const Eigen::Index N = cloud.size();
  const int l = params.l;
  const SupSearch sup(cloud, budget.inner);

  EnergyEstimate out;
  out.inner = budget.inner;
  out.mode = mode;
  out.seed = seed;
  out.params = params;

  if (mode == EnergyMode::Exhaustive) {
    // ordered tuples with a repeated index carry curvature 0, so the sum over
    // distinct combinations times l! equals the full ordered sum
    double combos = 1.0;
    for (int i = 0; i < l; ++i) combos = combos * static_cast<double>(N - i) / (i + 1);
    double ordered = combos;
    for (int i = 2; i <= l; ++i) ordered *= i;
    if (ordered > static_cast<double>(budget.exhaustive_limit))
      throw budget_error(static_cast<std::size_t>(ordered), budget.exhaustive_limit);
    if (N < l) throw std::invalid_argument("energy: fewer than l points");

    std::vector<Eigen::Index> idx(static_cast<std::size_t>(l));
    for (int i = 0; i < l; ++i) idx[static_cast<std::size_t>(i)] = i;
    double acc = 0.0;
    std::size_t count = 0;
    std::uint64_t tuple_counter = 0;
    while (true) {
      std::vector<Point> fixed;
      fixed.reserve(static_cast<std::size_t>(l));
      double w = 1.0;
      for (auto i : idx) {
        fixed.push_back(cloud.points.col(i));
        w *= cloud.weights(i);
      }
      if (w > 0.0) {
        const double s = sup.run(fixed, derive_seed(seed, tuple_counter));
        acc += w * std::pow(s, params.p);
      }
      ++tuple_counter;
      ++count;
      int i = l - 1;
      while (i >= 0 && idx[static_cast<std::size_t>(i)] == N - l + i) --i;
      if (i < 0) break;
      ++idx[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < l; ++j)
        idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
    out.value = acc * factorial(l);
    out.n_outer_tuples = count;
    return out;
  }

  // Monte Carlo: fixed-size chunks with derived seeds; reduction in chunk
  // order, so the result does not depend on the thread count.
  const std::size_t n = budget.mc_tuples;
  if (n == 0) throw std::invalid_argument("energy: mc_tuples must be positive");
  const std::size_t chunk_size = 4096;
  const std::size_t n_chunks = (n + chunk_size - 1) / chunk_size;
  std::vector<ChunkStat> stats(n_chunks);
  const WeightSampler sampler(cloud.weights);
  const double wl = std::pow(sampler.total(), l);

  auto run_chunk = [&](std::size_t c) {
    const std::size_t begin = c * chunk_size;
    const std::size_t end = std::min(n, begin + chunk_size);
    std::mt19937_64 rng(derive_seed(seed, c));
    ChunkStat st;
    std::vector<Point> fixed(static_cast<std::size_t>(l), Point(cloud.ambient_dim()));
    for (std::size_t t = begin; t < end; ++t) {
      for (int i = 0; i < l; ++i) fixed[static_cast<std::size_t>(i)] = cloud.points.col(sampler.draw(rng));
      const double s = sup.run(fixed, derive_seed(seed ^ 0xabcdefULL, t));
      const double val = std::pow(s, params.p);
      st.sum += val;
      st.sum_sq += val * val;
      ++st.count;
    }
    stats[c] = st;
  };

  const int threads = std::max(1, budget.threads);
  if (threads == 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1)) run_chunk(c);
      });
    for (auto& th : pool) th.join();
  }

  double sum = 0.0, sum_sq = 0.0;
  std::size_t count = 0;
  for (const auto& st : stats) {
    sum += st.sum;
    sum_sq += st.sum_sq;
    count += st.count;
  }
  const double mean = sum / static_cast<double>(count);
  const double var =
      std::max(0.0, sum_sq / static_cast<double>(count) - mean * mean);
  out.value = wl * mean;
  out.std_error = wl * std::sqrt(var / static_cast<double>(count));
  out.n_outer_tuples = count;
  return out;
}

namespace {

/// Tangent planes at every cloud point, estimated at radii tied to the
/// sample's covering radius (values below ~10x covering are resolution noise).
std::vector<Subspace> compute_tangent_field(const WeightedCloud& cloud) {
  const double covering =
      cloud.covering_radius > 0.0 ? cloud.covering_radius : cloud.estimate_covering_radius();
  const double extent =
      (cloud.points.rowwise().maxCoeff() - cloud.points.rowwise().minCoeff()).norm();
  const double r_min = std::max(10.0 * covering, 1e-9 * std::max(extent, 1.0));
  std::vector<double> radii{4.0 * r_min, 2.0 * r_min, r_min};
  std::vector<Subspace> field;
  field.reserve(static_cast<std::size_t>(cloud.size()));
  for (Eigen::Index i = 0; i < cloud.size(); ++i)
    field.push_back(tangent_estimate(cloud, cloud.points.col(i), radii).plane);
  return field;
}

}  // namespace

EnergyEstimate energy_tp(const WeightedCloud& cloud, double p, EnergyMode mode,
                         const EnergyBudget& budget, std::uint64_t seed,
                         const std::vector<Subspace>* tangents) {
  if (!(p > 0.0)) throw std::invalid_argument("energy_tp: p must be positive");
  if (tangents && static_cast<Eigen::Index>(tangents->size()) != cloud.size())
    throw std::invalid_argument("energy_tp: tangent field size mismatch");
  std::vector<Subspace> computed;
  if (!tangents) {
    computed = compute_tangent_field(cloud);
    tangents = &computed;
  }

  EnergyEstimate out;
  out.inner = budget.inner;
  out.mode = mode;
  out.seed = seed;
  out.params = EnergyParams{cloud.intrinsic_dim, 2, p};

  auto pair_integrand = [&](Eigen::Index i, Eigen::Index j) {
    const auto r = tangent_point_radius(cloud.points.col(i), cloud.points.col(j), (*tangents)[i]);
    if (!r) return 0.0;
    return std::pow(*r, -p);
  };

  const Eigen::Index N = cloud.size();
  if (mode == EnergyMode::Exhaustive) {
    const double pairs = static_cast<double>(N) * (N - 1);
    if (pairs > static_cast<double>(budget.exhaustive_limit))
      throw budget_error(static_cast<std::size_t>(pairs), budget.exhaustive_limit);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < N; ++i)
      for (Eigen::Index j = 0; j < N; ++j) {
        if (i == j) continue;  // measure-zero diagonal, R_tp undefined there
        acc += cloud.weights(i) * cloud.weights(j) * pair_integrand(i, j);
      }
    out.value = acc;
    out.n_outer_tuples = static_cast<std::size_t>(pairs);
    return out;
  }

  const std::size_t n = budget.mc_tuples;
  const WeightSampler sampler(cloud.weights);
  const double w2 = sampler.total() * sampler.total();
  const std::size_t chunk_size = 4096;
  const std::size_t n_chunks = (n + chunk_size - 1) / chunk_size;
  double sum = 0.0, sum_sq = 0.0;
  std::size_t count = 0;
  for (std::size_t c = 0; c < n_chunks; ++c) {
    std::mt19937_64 rng(derive_seed(seed, c));
    const std::size_t begin = c * chunk_size;
    const std::size_t end = std::min(n, begin + chunk_size);
    for (std::size_t t = begin; t < end; ++t) {
      const Eigen::Index i = sampler.draw(rng);
      const Eigen::Index j = sampler.draw(rng);
      const double val = (i == j) ? 0.0 : pair_integrand(i, j);
      sum += val;
      sum_sq += val * val;
      ++count;
    }
  }
  const double mean = sum / static_cast<double>(count);
  const double var = std::max(0.0, sum_sq / static_cast<double>(count) - mean * mean);
  out.value = w2 * mean;
  out.std_error = w2 * std::sqrt(var / static_cast<double>(count));
  out.n_outer_tuples = count;
  return out;
}

std::vector<EtaDViolation> eta_d_check(const WeightedCloud& cloud, double energy_bound,
                                       const EnergyParams& params, const AhlforsParams& ahlfors,
                                       std::size_t n_trials, std::uint64_t seed) {
  params.validate();
  if (!(params.p > static_cast<double>(params.m) * params.l))
    throw std::invalid_argument("eta_d_check: requires p > m*l");
  if (params.m != cloud.intrinsic_dim)
    throw std::invalid_argument("eta_d_check: params.m does not match the cloud");
  const int k = params.m + 2;
  if (cloud.size() < k) throw std::invalid_argument("eta_d_check: cloud smaller than m+2");

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Eigen::Index> pick(0, cloud.size() - 1);
  std::vector<EtaDViolation> out;
  std::vector<Eigen::Index> tuple(static_cast<std::size_t>(k));
  for (std::size_t trial = 0; trial < n_trials; ++trial) {
    for (auto& t : tuple) t = pick(rng);
    std::vector<Point> v;
    v.reserve(tuple.size());
    for (auto i : tuple) v.push_back(cloud.points.col(i));
    const Simplex s(std::move(v));
    const double d = simplex_diameter(s);
    if (d == 0.0 || d > ahlfors.r) continue;
    const double eta = min_height(s) / d;
    if (!(eta > 0.0)) continue;
    const double sig = varsigma(params.m + 1, std::min(eta, 1.0 - 1e-15));
    const double required =
        std::pow(ahlfors.a * std::pow(sig * d, params.m), params.l) *
        std::pow(3.0 * std::pow(eta, params.m + 1) / (4.0 * factorial(params.m + 1) * d),
                 params.p);
    if (energy_bound < required)
      out.push_back(EtaDViolation{tuple, eta, d, required});
  }
  return out;
}

std::string EnergyEstimate::to_json() const {
  ordered_json j;
  j["value"] = value;
  if (std_error)
    j["std_error"] = *std_error;
  else
    j["std_error"] = nullptr;
  j["mode"] = mode == EnergyMode::Exhaustive ? "exhaustive" : "monte_carlo";
  j["n_outer_tuples"] = n_outer_tuples;
  j["inner"] = {{"n_random", inner.n_random}, {"n_refine_rounds", inner.n_refine_rounds}};
  j["seed"] = seed;
  j["params"] = {{"m", params.m},
                 {"l", params.l},
                 {"p", params.p},
                 {"lambda", params.lambda()},
                 {"kappa", params.kappa_exponent()},
                 {"alpha", params.alpha()}};
  return j.dump();
}

EnergyEstimate EnergyEstimate::from_json(const std::string& text) {
  const auto j = ordered_json::parse(text);
  EnergyEstimate e;
  e.value = j.at("value").get<double>();
  if (!j.at("std_error").is_null()) e.std_error = j.at("std_error").get<double>();
  e.mode = j.at("mode").get<std::string>() == "exhaustive" ? EnergyMode::Exhaustive
                                                           : EnergyMode::MonteCarlo;
  e.n_outer_tuples = j.at("n_outer_tuples").get<std::size_t>();
  e.inner.n_random = j.at("inner").at("n_random").get<std::size_t>();
  e.inner.n_refine_rounds = j.at("inner").at("n_refine_rounds").get<int>();
  e.seed = j.at("seed").get<std::uint64_t>();
  e.params.m = j.at("params").at("m").get<int>();
  e.params.l = j.at("params").at("l").get<int>();
  e.params.p = j.at("params").at("p").get<double>();
  return e;
}

}  // namespace menger
