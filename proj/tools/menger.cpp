// Experiment harness over the menger library: flatness scans, curvature
// statistics, energy estimation, and the combined scaling check, driven by a
// single JSON config.  Reports are machine-first (CSV/JSON) and reruns with an
// identical effective config are byte-identical.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <menger/cloud.hpp>
#include <menger/curvature.hpp>
#include <menger/flatness.hpp>
#include <menger/shapes.hpp>
#include <menger/types.hpp>

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace menger;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitBudget = 4;

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

struct Experiment {
  ordered_json config;  // effective config (after CLI overrides)
  WeightedCloud cloud;
  EnergyParams params;
  EnergyBudget budget;
  std::uint64_t seed = 0;
  fs::path out_dir;
  std::string config_hash;
};

ordered_json load_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file " + path.string());
  try {
    return ordered_json::parse(in);
  } catch (const std::exception& e) {
    throw config_error("config parse error: " + std::string(e.what()));
  }
}

template <typename T>
T require_field(const ordered_json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw config_error("missing field '" + key + "' in " + where);
  try {
    return j.at(key).get<T>();
  } catch (const std::exception&) {
    throw config_error("field '" + key + "' in " + where + " has the wrong type");
  }
}

WeightedCloud build_cloud(const ordered_json& input, std::uint64_t seed) {
  if (input.contains("generator")) {
    GeneratorSpec spec;
    try {
      spec = GeneratorSpec::from_json(input.at("generator").dump());
    } catch (const std::exception& e) {
      throw config_error(std::string("bad generator spec: ") + e.what());
    }
    if (spec.seed == 0) spec.seed = seed;
    return generate(spec);
  }
  if (input.contains("path")) {
    const std::string path = input.at("path").get<std::string>();
    const auto dot = path.find_last_of('.');
    const std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    if (ext == "csv") return load_cloud_csv(path);
    const MeshSurface mesh = load_mesh(path);
    std::size_t n = 2000;
    if (input.contains("mesh_samples")) n = input.at("mesh_samples").get<std::size_t>();
    return sample_mesh(mesh, n, seed);
  }
  throw config_error("input needs either 'generator' or 'path'");
}

Experiment make_experiment(const ordered_json& raw, std::optional<std::uint64_t> seed_override,
                           std::optional<int> threads_override,
                           std::optional<std::string> out_override) {
  ordered_json cfg = raw;
  if (seed_override) cfg["seed"] = *seed_override;
  if (out_override) cfg["out"] = *out_override;

  Experiment ex;
  ex.seed = cfg.contains("seed") ? require_field<std::uint64_t>(cfg, "seed", "config") : 0;

  const ordered_json params = require_field<ordered_json>(cfg, "params", "config");
  ex.params.m = require_field<int>(params, "m", "params");
  ex.params.l = params.contains("l") ? params.at("l").get<int>() : 1;
  ex.params.p = require_field<double>(params, "p", "params");
  try {
    ex.params.validate();
  } catch (const std::exception& e) {
    throw config_error(std::string("bad params: ") + e.what());
  }

  if (cfg.contains("budgets")) {
    const auto& b = cfg.at("budgets");
    if (b.contains("mc_tuples")) ex.budget.mc_tuples = b.at("mc_tuples").get<std::size_t>();
    if (b.contains("exhaustive_limit"))
      ex.budget.exhaustive_limit = b.at("exhaustive_limit").get<std::size_t>();
    if (b.contains("inner_random"))
      ex.budget.inner.n_random = b.at("inner_random").get<std::size_t>();
    if (b.contains("inner_refine"))
      ex.budget.inner.n_refine_rounds = b.at("inner_refine").get<int>();
    if (b.contains("inner_exhaustive"))
      ex.budget.inner.exhaustive_threshold = b.at("inner_exhaustive").get<std::size_t>();
  }
  int threads = 1;
  if (const char* env = std::getenv("MENGER_THREADS")) threads = std::atoi(env);
  if (threads_override) threads = *threads_override;
  ex.budget.threads = std::max(1, threads);

  ex.out_dir = cfg.contains("out") ? fs::path(cfg.at("out").get<std::string>()) : fs::path(".");
  ex.config = cfg;
  ex.config_hash = hex64(fnv1a64(cfg.dump()));

  const ordered_json input = require_field<ordered_json>(cfg, "input", "config");
  ex.cloud = build_cloud(input, ex.seed);
  if (ex.cloud.intrinsic_dim != ex.params.m)
    throw config_error("params.m = " + std::to_string(ex.params.m) +
                       " does not match the input cloud (m = " +
                       std::to_string(ex.cloud.intrinsic_dim) + ")");
  return ex;
}

ordered_json report_header(const Experiment& ex) {
  ordered_json h;
  h["version"] = kVersion;
  h["config_hash"] = ex.config_hash;
  h["seed"] = ex.seed;
  h["covering_radius"] = ex.cloud.covering_radius;
  h["cloud"] = {{"n_points", static_cast<std::size_t>(ex.cloud.size())},
                {"ambient_dim", ex.cloud.ambient_dim()},
                {"intrinsic_dim", ex.cloud.intrinsic_dim},
                {"total_weight", ex.cloud.total_weight()},
                {"provenance", ex.cloud.provenance}};
  h["derived"] = {{"lambda", ex.params.lambda()},
                  {"kappa", ex.params.kappa_exponent()},
                  {"alpha", ex.params.alpha()}};
  h["config"] = ex.config;
  return h;
}

void write_report(const fs::path& path, const ordered_json& j) {
  if (!path.parent_path().empty()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

std::vector<Eigen::Index> pick_centers(const WeightedCloud& cloud, int count,
                                       std::uint64_t seed) {
  std::vector<Eigen::Index> centers;
  std::uint64_t state = seed ^ 0xc0ffee;
  for (int i = 0; i < count; ++i)
    centers.push_back(static_cast<Eigen::Index>(split_mix64(state) %
                                                static_cast<std::uint64_t>(cloud.size())));
  std::sort(centers.begin(), centers.end());
  centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
  return centers;
}

std::vector<double> radii_schedule(const ordered_json& cfg) {
  if (!cfg.contains("radii")) throw config_error("missing 'radii' section");
  const auto& r = cfg.at("radii");
  std::vector<double> out;
  if (r.contains("list")) {
    out = r.at("list").get<std::vector<double>>();
  } else {
    const double r_max = require_field<double>(r, "r_max", "radii");
    const int count = require_field<int>(r, "count", "radii");
    for (int k = 0; k < count; ++k) out.push_back(r_max * std::pow(2.0, -k));
  }
  if (out.empty()) throw config_error("radii schedule is empty");
  for (double v : out)
    if (!(v > 0.0)) throw config_error("radii must be positive");
  return out;
}

ordered_json fit_to_json(const ScalingFit& fit) {
  return ordered_json{{"exponent", fit.exponent},
                      {"intercept", fit.intercept},
                      {"r_min", fit.r_range.first},
                      {"r_max", fit.r_range.second},
                      {"rms_log_residual", fit.residual},
                      {"n_records", fit.n_records}};
}

ordered_json stats_json(std::vector<double>& values) {
  ordered_json js;
  if (values.empty()) {
    js["count"] = 0;
    return js;
  }
  double sum = 0.0, mx = values.front();
  for (double v : values) {
    sum += v;
    mx = std::max(mx, v);
  }
  js["count"] = values.size();
  js["max"] = mx;
  js["mean"] = sum / static_cast<double>(values.size());
  constexpr int kBins = 32;
  std::vector<std::size_t> hist(kBins, 0);
  const double width = mx > 0 ? mx / kBins : 1.0;
  for (double v : values)
    ++hist[static_cast<std::size_t>(std::min<int>(kBins - 1, static_cast<int>(v / width)))];
  js["histogram"] = {{"bin_width", width}, {"counts", hist}};
  return js;
}

// -------------------------------------------------------------------------
// subcommands

int cmd_curvature(const Experiment& ex) {
  const Eigen::Index n_pts = ex.cloud.size();
  std::size_t tuples = 20000;
  if (ex.config.contains("tuples")) tuples = ex.config.at("tuples").get<std::size_t>();

  std::uint64_t state = ex.seed ^ 0xabe1;
  auto draw = [&] {
    return static_cast<Eigen::Index>(split_mix64(state) % static_cast<std::uint64_t>(n_pts));
  };

  std::vector<double> kappas, cs, svdms;
  kappas.reserve(tuples);
  for (std::size_t t = 0; t < tuples; ++t) {
    std::vector<Point> v;
    for (int i = 0; i < ex.params.m + 2; ++i) v.push_back(ex.cloud.point(draw()));
    kappas.push_back(kappa(Simplex(v)));
    cs.push_back(menger_c(v[0], v[1], v[2]));
    if (ex.cloud.ambient_dim() == 3 && v.size() >= 4)
      svdms.push_back(kappa_svdm(v[0], v[1], v[2], v[3]));
  }

  ordered_json rep = report_header(ex);
  rep["kappa"] = stats_json(kappas);
  rep["menger_c"] = stats_json(cs);
  if (!svdms.empty()) rep["kappa_svdm"] = stats_json(svdms);

  bool want_tp = true;
  if (ex.config.contains("tangent_point")) want_tp = ex.config.at("tangent_point").get<bool>();
  if (want_tp) {
    const std::size_t pairs = std::min<std::size_t>(tuples, 2000);
    const double cov = ex.cloud.covering_radius > 0 ? ex.cloud.covering_radius
                                                    : ex.cloud.estimate_covering_radius();
    const std::vector<double> radii{40 * cov, 20 * cov, 10 * cov};
    std::map<Eigen::Index, Subspace> tangent_cache;
    std::vector<double> inv_radii;
    std::size_t infinite = 0;
    for (std::size_t t = 0; t < pairs; ++t) {
      const Eigen::Index i = draw(), j = draw();
      if (i == j) continue;
      try {
        auto it = tangent_cache.find(i);
        if (it == tangent_cache.end())
          it = tangent_cache
                   .emplace(i, tangent_estimate(ex.cloud, ex.cloud.point(i), radii).plane)
                   .first;
        const auto r = tangent_point_radius(ex.cloud.point(i), ex.cloud.point(j), it->second);
        if (r)
          inv_radii.push_back(1.0 / *r);
        else
          ++infinite;
      } catch (const std::invalid_argument&) {
        // rank collapse at this center; skip the pair
      }
    }
    rep["tangent_point_inverse_radius"] = stats_json(inv_radii);
    rep["tangent_point_inverse_radius"]["n_infinite_radius"] = infinite;
  }

  write_report(ex.out_dir / "curvature.json", rep);
  std::cout << "curvature report: " << (ex.out_dir / "curvature.json").string() << "\n";
  return kExitOk;
}

struct ScanResult {
  std::vector<ScaleRecord> records;
  std::optional<ScalingFit> beta_fit;
  std::size_t n_excluded = 0;
};

ScanResult run_beta_scan(const Experiment& ex) {
  const std::vector<double> radii = radii_schedule(ex.config);
  int centers = 5;
  if (ex.config.contains("centers")) centers = ex.config.at("centers").get<int>();
  const auto center_idx = pick_centers(ex.cloud, centers, ex.seed);

  ScanResult out;
  for (const auto ci : center_idx) {
    const Point x = ex.cloud.point(ci);
    for (double r : radii) {
      if (ex.cloud.indices_in_closed_ball(x, r).size() <
          static_cast<std::size_t>(ex.cloud.intrinsic_dim) + 1)
        continue;
      out.records.push_back(make_scale_record(ex.cloud, x, r));
    }
  }
  if (out.records.empty()) throw std::runtime_error("beta scan produced no records");

  // fits discard radii below 10x the covering radius (resolution floor)
  std::vector<std::pair<double, double>> usable;
  for (const auto& rec : out.records) {
    if (rec.radius < 10.0 * ex.cloud.covering_radius) {
      ++out.n_excluded;
      continue;
    }
    usable.emplace_back(rec.radius, rec.beta);
  }
  if (usable.size() >= 4) out.beta_fit = scaling_fit(usable);
  return out;
}

int cmd_beta_scan(const Experiment& ex) {
  const ScanResult scan = run_beta_scan(ex);

  fs::create_directories(ex.out_dir);
  {
    std::ofstream csv(ex.out_dir / "beta_scan.csv", std::ios::binary);
    write_scale_records_csv(csv, scan.records);
  }
  ordered_json rep = report_header(ex);
  rep["n_records"] = scan.records.size();
  rep["n_excluded_below_resolution"] = scan.n_excluded;
  if (scan.beta_fit)
    rep["beta_fit"] = fit_to_json(*scan.beta_fit);
  else
    rep["beta_fit"] = nullptr;
  write_report(ex.out_dir / "beta_fit.json", rep);
  std::cout << "beta scan: " << scan.records.size() << " records -> "
            << (ex.out_dir / "beta_scan.csv").string() << "\n";
  return kExitOk;
}

EnergyEstimate run_energy(const Experiment& ex) {
  std::string functional = "kl";
  std::string mode_str = "monte_carlo";
  if (ex.config.contains("energy")) {
    const auto& e = ex.config.at("energy");
    if (e.contains("functional")) functional = e.at("functional").get<std::string>();
    if (e.contains("mode")) mode_str = e.at("mode").get<std::string>();
  }
  EnergyMode mode;
  if (mode_str == "exhaustive")
    mode = EnergyMode::Exhaustive;
  else if (mode_str == "monte_carlo")
    mode = EnergyMode::MonteCarlo;
  else
    throw config_error("energy.mode must be 'exhaustive' or 'monte_carlo'");

  if (functional == "kl") return energy(ex.cloud, ex.params, mode, ex.budget, ex.seed);
  if (functional == "tp") return energy_tp(ex.cloud, ex.params.p, mode, ex.budget, ex.seed);
  throw config_error("energy.functional must be 'kl' or 'tp'");
}

int cmd_energy(const Experiment& ex) {
  const EnergyEstimate est = run_energy(ex);
  ordered_json rep = report_header(ex);
  rep["estimate"] = ordered_json::parse(est.to_json());
  write_report(ex.out_dir / "energy.json", rep);
  std::cout << "energy = " << est.value;
  if (est.std_error) std::cout << " +- " << *est.std_error;
  std::cout << " -> " << (ex.out_dir / "energy.json").string() << "\n";
  return kExitOk;
}

int cmd_scaling_check(const Experiment& ex) {
  ordered_json rep = report_header(ex);

  // 1. energy of the cloud
  const EnergyEstimate est = run_energy(ex);
  rep["energy"] = ordered_json::parse(est.to_json());

  // 2. eta-d balance over random tuples
  std::size_t n_trials = 100000;
  double ahl_a = 0.0, ahl_r = 0.0;
  double divisor = 1.0;
  if (ex.config.contains("eta_d")) {
    const auto& ed = ex.config.at("eta_d");
    if (ed.contains("n_trials")) n_trials = ed.at("n_trials").get<std::size_t>();
    if (ed.contains("ahlfors_a")) ahl_a = ed.at("ahlfors_a").get<double>();
    if (ed.contains("ahlfors_r")) ahl_r = ed.at("ahlfors_r").get<double>();
    if (ed.contains("energy_divisor")) divisor = ed.at("energy_divisor").get<double>();
  }
  if (ahl_a <= 0.0 || ahl_r <= 0.0) {
    // conservative measurement: smallest density ratio over sampled centers
    const auto centers = pick_centers(ex.cloud, 16, ex.seed ^ 0xa41);
    const double extent =
        (ex.cloud.points.rowwise().maxCoeff() - ex.cloud.points.rowwise().minCoeff()).norm();
    ahl_r = 0.25 * extent;
    double worst = std::numeric_limits<double>::infinity();
    for (auto ci : centers)
      for (double r : {ahl_r, ahl_r / 2, ahl_r / 4})
        worst = std::min(worst, ahlfors_density(ex.cloud, ex.cloud.point(ci), r));
    ahl_a = 0.9 * worst * unit_ball_volume(ex.cloud.intrinsic_dim);
    rep["eta_d_ahlfors_estimated"] = true;
  } else {
    rep["eta_d_ahlfors_estimated"] = false;
  }
  if (ex.params.p > ex.params.m * ex.params.l && ahl_a > 0.0) {
    const auto violations = eta_d_check(ex.cloud, est.value / divisor, ex.params,
                                        AhlforsParams{ahl_a, ahl_r}, n_trials, ex.seed ^ 0xe7ad);
    ordered_json vj = ordered_json::array();
    for (std::size_t i = 0; i < violations.size() && i < 32; ++i) {
      const auto& v = violations[i];
      vj.push_back({{"eta", v.eta}, {"d", v.d}, {"required_energy", v.required_energy}});
    }
    rep["eta_d"] = {{"n_trials", n_trials},
                    {"ahlfors_a", ahl_a},
                    {"ahlfors_r", ahl_r},
                    {"energy_divisor", divisor},
                    {"n_violations", violations.size()},
                    {"violations_head", vj}};
  } else {
    rep["eta_d"] = nullptr;
  }

  // 3. beta-scan exponent next to lambda/kappa and alpha
  const ScanResult scan = run_beta_scan(ex);
  fs::create_directories(ex.out_dir);
  {
    std::ofstream csv(ex.out_dir / "scaling_records.csv", std::ios::binary);
    write_scale_records_csv(csv, scan.records);
  }
  rep["beta_fit"] = scan.beta_fit ? fit_to_json(*scan.beta_fit) : ordered_json(nullptr);
  rep["exponents"] = {{"lambda_over_kappa", ex.params.lambda() / ex.params.kappa_exponent()},
                      {"alpha", ex.params.alpha()},
                      {"beta_scan", scan.beta_fit ? ordered_json(scan.beta_fit->exponent)
                                                  : ordered_json(nullptr)}};

  // 4. tangent oscillation exponent for curve data, reported side by side
  bool want_osc = ex.cloud.intrinsic_dim == 1;
  if (ex.config.contains("oscillation") && ex.config.at("oscillation").contains("enabled"))
    want_osc = ex.config.at("oscillation").at("enabled").get<bool>();
  if (want_osc && ex.cloud.intrinsic_dim == 1) {
    const double cov = ex.cloud.covering_radius;
    // anchor at the cloud point nearest the origin
    Eigen::Index anchor = 0;
    ex.cloud.points.colwise().squaredNorm().minCoeff(&anchor);
    const Point x0 = ex.cloud.point(anchor);
    std::vector<std::pair<double, double>> osc;
    for (int k = 2; k <= 9; ++k) {
      const double target = std::pow(2.0, -k);
      // nearest cloud point at distance ~ target from the anchor
      Eigen::Index best = -1;
      double best_err = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < ex.cloud.size(); ++i) {
        const double err = std::abs((ex.cloud.point(i) - x0).norm() - target);
        if (err < best_err) {
          best_err = err;
          best = i;
        }
      }
      if (best < 0) continue;
      const Point y = ex.cloud.point(best);
      const double dist = (y - x0).norm();
      if (dist <= 0 || dist / 4.0 < 8.0 * cov) continue;
      const std::vector<double> radii{dist / 2.0, dist / 4.0};
      try {
        osc.emplace_back(dist, tangent_oscillation(ex.cloud, x0, y, radii));
      } catch (const std::invalid_argument&) {
      }
    }
    if (osc.size() >= 4) {
      rep["oscillation_fit"] = fit_to_json(scaling_fit(osc));
    } else {
      rep["oscillation_fit"] = nullptr;
    }
  }

  write_report(ex.out_dir / "scaling_check.json", rep);
  std::cout << "scaling check -> " << (ex.out_dir / "scaling_check.json").string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"discrete Menger curvature energies and multiscale flatness"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> out_dir;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--threads", threads, "worker threads (default: MENGER_THREADS or 1)");
    sub->add_option("--out", out_dir, "output directory (overrides config 'out')");
  };

  CLI::App* curvature = app.add_subcommand("curvature", "curvature statistics over tuples");
  CLI::App* beta_scan = app.add_subcommand("beta-scan", "multiscale flatness records and fit");
  CLI::App* energy_cmd = app.add_subcommand("energy", "integral curvature energy estimate");
  CLI::App* scaling = app.add_subcommand("scaling-check", "energy, eta-d balance and exponents");
  for (auto* sub : {curvature, beta_scan, energy_cmd, scaling}) add_common(sub);

  CLI11_PARSE(app, argc, argv);

  try {
    const ordered_json raw = load_json_file(config_path);
    const Experiment ex = make_experiment(raw, seed, threads, out_dir);
    if (curvature->parsed()) return cmd_curvature(ex);
    if (beta_scan->parsed()) return cmd_beta_scan(ex);
    if (energy_cmd->parsed()) return cmd_energy(ex);
    if (scaling->parsed()) return cmd_scaling_check(ex);
    return kExitConfig;
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const budget_error& e) {
    std::cerr << "budget refusal: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}
