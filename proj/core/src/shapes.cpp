#include "menger/shapes.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace menger {

namespace {

using ordered_json = nlohmann::ordered_json;
constexpr double kPi = std::numbers::pi;

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fb, double fm, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * eps)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, fm, flm, eps / 2.0, depth - 1) +
         adaptive_simpson(f, m, b, fm, fb, frm, eps / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double eps) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return adaptive_simpson(f, a, b, fa, fb, fm, eps, 36);
}

WeightedCloud make_circle(const GeneratorSpec& spec) {
  const std::size_t n = spec.n_samples;
  Mat pts(2, static_cast<Eigen::Index>(n));
  Vec w(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 2.0 * kPi * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    pts(0, static_cast<Eigen::Index>(i)) = std::cos(t);
    pts(1, static_cast<Eigen::Index>(i)) = std::sin(t);
    w(static_cast<Eigen::Index>(i)) = 2.0 * kPi / static_cast<double>(n);
  }
  WeightedCloud c(std::move(pts), std::move(w), 1, "circle");
  c.covering_radius = 2.0 * kPi / static_cast<double>(n);
  return c;
}

WeightedCloud make_sphere(const GeneratorSpec& spec) {
  if (spec.sphere_m == 1) {
    GeneratorSpec s = spec;
    s.kind = GeneratorSpec::Kind::Circle;
    WeightedCloud c = make_circle(s);
    c.provenance = "sphere(m=1)";
    return c;
  }
  if (spec.sphere_m != 2)
    throw std::invalid_argument("generate: sphere supports m in {1,2}");
  const std::size_t n = spec.n_samples;
  Mat pts(3, static_cast<Eigen::Index>(n));
  Vec w = Vec::Constant(static_cast<Eigen::Index>(n), 4.0 * kPi / static_cast<double>(n));
  const double golden_angle = kPi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n);
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden_angle * static_cast<double>(i);
    pts(0, static_cast<Eigen::Index>(i)) = rho * std::cos(phi);
    pts(1, static_cast<Eigen::Index>(i)) = rho * std::sin(phi);
    pts(2, static_cast<Eigen::Index>(i)) = z;
  }
  WeightedCloud c(std::move(pts), std::move(w), 2, "sphere(m=2)");
  c.covering_radius =
      n <= 8192 ? c.estimate_covering_radius() : 3.5 / std::sqrt(static_cast<double>(n));
  return c;
}

WeightedCloud make_torus(const GeneratorSpec& spec) {
  const double R = spec.torus_major, r = spec.torus_minor;
  if (!(R > 0.0 && r > 0.0 && r < R))
    throw std::invalid_argument("generate: torus needs 0 < minor < major");
  const std::size_t n = spec.n_samples;
  const int nv = std::max(3, static_cast<int>(std::lround(std::sqrt(static_cast<double>(n) * r / R))));
  const int nu = std::max(3, static_cast<int>((n + nv - 1) / static_cast<std::size_t>(nv)));
  const double du = 2.0 * kPi / nu;
  const double dv = 2.0 * kPi / nv;
  const std::size_t total = static_cast<std::size_t>(nu) * static_cast<std::size_t>(nv);
  Mat pts(3, static_cast<Eigen::Index>(total));
  Vec w(static_cast<Eigen::Index>(total));
  Eigen::Index k = 0;
  for (int i = 0; i < nu; ++i) {
    const double u = (i + 0.5) * du;
    for (int j = 0; j < nv; ++j) {
      const double v = (j + 0.5) * dv;
      const double v_lo = j * dv, v_hi = (j + 1) * dv;
      pts(0, k) = (R + r * std::cos(v)) * std::cos(u);
      pts(1, k) = (R + r * std::cos(v)) * std::sin(u);
      pts(2, k) = r * std::sin(v);
      // exact cell area: r * du * (R dv + r (sin v_hi - sin v_lo))
      w(k) = r * du * (R * dv + r * (std::sin(v_hi) - std::sin(v_lo)));
      ++k;
    }
  }
  WeightedCloud c(std::move(pts), std::move(w), 2, "torus");
  c.covering_radius = std::hypot(2.0 * kPi * (R + r) / nu, 2.0 * kPi * r / nv);
  return c;
}

WeightedCloud make_graph(const GeneratorSpec& spec) {
  const double lo = spec.domain_lo, hi = spec.domain_hi;
  if (!(hi > lo)) throw std::invalid_argument("generate: graph domain must be nonempty");
  const double e = spec.graph_exponent;
  std::function<double(double)> f, df;
  if (spec.graph_profile == GeneratorSpec::GraphProfile::AbsPow) {
    if (!(e > 1.0)) throw std::invalid_argument("generate: abs_pow exponent must exceed 1");
    f = [e](double t) { return std::pow(std::abs(t), e); };
    df = [e](double t) {
      return t == 0.0 ? 0.0 : e * std::pow(std::abs(t), e - 1.0) * (t > 0 ? 1.0 : -1.0);
    };
  } else {
    const int k = static_cast<int>(std::lround(e));
    if (std::abs(e - k) > 1e-12 || k < 1)
      throw std::invalid_argument("generate: pow profile needs a positive integer exponent");
    f = [k](double t) { return std::pow(t, k); };
    df = [k](double t) { return k * std::pow(t, k - 1); };
  }
  auto speed = [&](double t) { return std::hypot(1.0, df(t)); };

  const std::size_t n = spec.n_samples;
  const double dt = (hi - lo) / static_cast<double>(n);
  Mat pts(2, static_cast<Eigen::Index>(n));
  Vec w(static_cast<Eigen::Index>(n));
  double max_cell = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = lo + static_cast<double>(i) * dt;
    const double b = a + dt;
    const double t = 0.5 * (a + b);
    pts(0, static_cast<Eigen::Index>(i)) = t;
    pts(1, static_cast<Eigen::Index>(i)) = f(t);
    const double arc = integrate(speed, a, b, 1e-13);
    w(static_cast<Eigen::Index>(i)) = arc;
    max_cell = std::max(max_cell, arc);
  }
  WeightedCloud c(std::move(pts), std::move(w), 1, "graph");
  c.covering_radius = max_cell;
  return c;
}

WeightedCloud make_koch(const GeneratorSpec& spec) {
  const int level = spec.koch_level;
  if (level < 0 || level > 10) throw std::invalid_argument("generate: koch level must be in [0,10]");
  using P2 = Eigen::Vector2d;
  std::vector<P2> poly{{0.0, 0.0}, {1.0, 0.0}, {0.5, std::sqrt(3.0) / 2.0}};
  for (int lv = 0; lv < level; ++lv) {
    std::vector<P2> next;
    next.reserve(poly.size() * 4);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const P2 a = poly[i];
      const P2 b = poly[(i + 1) % poly.size()];
      const P2 d = b - a;
      const P2 outward(d.y(), -d.x());  // right of the CCW boundary
      const P2 apex = a + d / 2.0 + outward * (std::sqrt(3.0) / 6.0);
      next.push_back(a);
      next.push_back(a + d / 3.0);
      next.push_back(apex);
      next.push_back(a + d * (2.0 / 3.0));
    }
    poly = std::move(next);
  }
  const double seg = std::pow(3.0, -level);
  const double total = 3.0 * std::pow(4.0 / 3.0, level);

  // equal-weight resample along the closed polyline
  const std::size_t n = spec.n_samples;
  Mat pts(2, static_cast<Eigen::Index>(n));
  const double step = total / static_cast<double>(n);
  Vec w = Vec::Constant(static_cast<Eigen::Index>(n), step);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = (static_cast<double>(i) + 0.5) * step;
    const std::size_t edge = std::min(poly.size() - 1, static_cast<std::size_t>(s / seg));
    const double frac = s / seg - static_cast<double>(edge);
    const P2 a = poly[edge];
    const P2 b = poly[(edge + 1) % poly.size()];
    const P2 p = a + (b - a) * frac;
    pts(0, static_cast<Eigen::Index>(i)) = p.x();
    pts(1, static_cast<Eigen::Index>(i)) = p.y();
  }
  WeightedCloud c(std::move(pts), std::move(w), 1, "koch");
  c.covering_radius = std::max(step, seg);
  return c;
}

WeightedCloud make_plane_with_hole(const GeneratorSpec& spec) {
  const double rho = spec.hole_radius;
  if (!(rho >= 0.0 && rho < 1.0))
    throw std::invalid_argument("generate: hole radius must lie in [0,1)");
  if (spec.plane_m == 1) {
    // segment [-1,1] minus (-rho, rho), embedded in R^2 on the first axis
    const double len = 2.0 * (1.0 - rho);
    const std::size_t n = std::max<std::size_t>(spec.n_samples, 2);
    const std::size_t n_left = n / 2, n_right = n - n_left;
    Mat pts(2, static_cast<Eigen::Index>(n));
    Vec w(static_cast<Eigen::Index>(n));
    Eigen::Index k = 0;
    auto fill = [&](double a, double b, std::size_t count) {
      const double d = (b - a) / static_cast<double>(count);
      for (std::size_t i = 0; i < count; ++i) {
        pts(0, k) = a + (static_cast<double>(i) + 0.5) * d;
        pts(1, k) = 0.0;
        w(k) = d;
        ++k;
      }
    };
    fill(-1.0, -rho, n_left);
    fill(rho, 1.0, n_right);
    WeightedCloud c(std::move(pts), std::move(w), 1, "plane_with_hole(m=1)");
    c.covering_radius = std::max(len / static_cast<double>(n), 1e-12);
    return c;
  }
  if (spec.plane_m != 2) throw std::invalid_argument("generate: plane supports m in {1,2}");

  // polar stratification of the annulus rho < |y| <= 1 in the z=0 plane of
  // R^3; equal-width rings keep the quantization near the center small
  const std::size_t n = spec.n_samples;
  const int nr = std::max(2, static_cast<int>(std::lround(std::sqrt(static_cast<double>(n) / kPi))));
  std::vector<double> radii(static_cast<std::size_t>(nr) + 1);
  for (int j = 0; j <= nr; ++j)
    radii[static_cast<std::size_t>(j)] = rho + (1.0 - rho) * static_cast<double>(j) / nr;
  std::vector<Eigen::Vector3d> out_pts;
  std::vector<double> out_w;
  for (int j = 0; j < nr; ++j) {
    const double r0 = radii[static_cast<std::size_t>(j)], r1 = radii[static_cast<std::size_t>(j) + 1];
    const double rc = 0.5 * (r0 + r1);
    const int ns = std::max(6, static_cast<int>(std::lround(2.0 * kPi * rc / (r1 - r0 + 1e-300))));
    const double dphi = 2.0 * kPi / ns;
    const double cell = dphi * 0.5 * (r1 * r1 - r0 * r0);
    for (int s = 0; s < ns; ++s) {
      const double phi = (s + 0.5) * dphi;
      out_pts.emplace_back(rc * std::cos(phi), rc * std::sin(phi), 0.0);
      out_w.push_back(cell);
    }
  }
  Mat pts(3, static_cast<Eigen::Index>(out_pts.size()));
  Vec w(static_cast<Eigen::Index>(out_pts.size()));
  for (std::size_t i = 0; i < out_pts.size(); ++i) {
    pts.col(static_cast<Eigen::Index>(i)) = out_pts[i];
    w(static_cast<Eigen::Index>(i)) = out_w[i];
  }
  WeightedCloud c(std::move(pts), std::move(w), 2, "plane_with_hole(m=2)");
  c.covering_radius = c.estimate_covering_radius();
  return c;
}

}  // namespace

WeightedCloud generate(const GeneratorSpec& spec) {
  if (spec.n_samples < 3) throw std::invalid_argument("generate: need at least 3 samples");
  switch (spec.kind) {
    case GeneratorSpec::Kind::Circle: return make_circle(spec);
    case GeneratorSpec::Kind::Sphere: return make_sphere(spec);
    case GeneratorSpec::Kind::Torus: return make_torus(spec);
    case GeneratorSpec::Kind::Graph: return make_graph(spec);
    case GeneratorSpec::Kind::Koch: return make_koch(spec);
    case GeneratorSpec::Kind::PlaneWithHole: return make_plane_with_hole(spec);
  }
  throw std::invalid_argument("generate: unknown kind");
}

double MeshSurface::total_area() const {
  double a = 0.0;
  for (double t : areas) a += t;
  return a;
}

namespace {

double triangle_area(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                     const Eigen::Vector3d& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

[[noreturn]] void parse_fail(const std::string& path, std::size_t line, const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

MeshSurface finish_mesh(Mat vertices, std::vector<std::array<int, 3>> triangles,
                        const std::string& path) {
  MeshSurface mesh;
  mesh.vertices = std::move(vertices);
  mesh.triangles = std::move(triangles);
  mesh.areas.reserve(mesh.triangles.size());
  for (const auto& t : mesh.triangles) {
    const double a = triangle_area(mesh.vertices.col(t[0]), mesh.vertices.col(t[1]),
                                   mesh.vertices.col(t[2]));
    mesh.areas.push_back(a);
    if (a <= 0.0) ++mesh.n_degenerate;
  }
  if (!(mesh.total_area() > 0.0))
    throw std::runtime_error(path + ": mesh has zero total area");
  return mesh;
}

MeshSurface load_off(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  std::size_t lineno = 0;
  auto next_line = [&](std::string& out) {
    while (std::getline(in, line)) {
      ++lineno;
      const auto pos = line.find_first_not_of(" \t\r");
      if (pos == std::string::npos || line[pos] == '#') continue;
      out = line;
      return true;
    }
    return false;
  };
  std::string cur;
  if (!next_line(cur)) parse_fail(path, lineno, "empty file");
  {
    std::istringstream ss(cur);
    std::string magic;
    ss >> magic;
    if (magic != "OFF") parse_fail(path, lineno, "not an OFF file");
  }
  if (!next_line(cur)) parse_fail(path, lineno, "missing counts line");
  std::size_t nv = 0, nf = 0, ne = 0;
  {
    std::istringstream ss(cur);
    if (!(ss >> nv >> nf >> ne)) parse_fail(path, lineno, "bad counts line");
  }
  Mat vertices(3, static_cast<Eigen::Index>(nv));
  for (std::size_t i = 0; i < nv; ++i) {
    if (!next_line(cur)) parse_fail(path, lineno, "unexpected end of vertex list");
    std::istringstream ss(cur);
    double x, y, z;
    if (!(ss >> x >> y >> z)) parse_fail(path, lineno, "bad vertex line");
    vertices.col(static_cast<Eigen::Index>(i)) << x, y, z;
  }
  std::vector<std::array<int, 3>> triangles;
  for (std::size_t f = 0; f < nf; ++f) {
    if (!next_line(cur)) parse_fail(path, lineno, "unexpected end of face list");
    std::istringstream ss(cur);
    int count = 0;
    if (!(ss >> count) || count < 3) parse_fail(path, lineno, "bad face line");
    std::vector<int> idx(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
      if (!(ss >> idx[static_cast<std::size_t>(i)])) parse_fail(path, lineno, "bad face index");
      if (idx[static_cast<std::size_t>(i)] < 0 ||
          idx[static_cast<std::size_t>(i)] >= static_cast<int>(nv))
        parse_fail(path, lineno, "face index out of range");
    }
    for (int i = 1; i + 1 < count; ++i)
      triangles.push_back({idx[0], idx[static_cast<std::size_t>(i)],
                           idx[static_cast<std::size_t>(i) + 1]});
  }
  return finish_mesh(std::move(vertices), std::move(triangles), path);
}

MeshSurface load_obj(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  std::size_t lineno = 0;
  std::vector<Eigen::Vector3d> verts;
  std::vector<std::array<int, 3>> triangles;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag)) continue;
    if (tag == "#" || tag[0] == '#') continue;
    if (tag == "v") {
      double x, y, z;
      if (!(ss >> x >> y >> z)) parse_fail(path, lineno, "bad vertex line");
      verts.emplace_back(x, y, z);
    } else if (tag == "f") {
      std::vector<int> idx;
      std::string tok;
      while (ss >> tok) {
        int v = 0;
        const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (res.ec != std::errc() || res.ptr == tok.data())
          parse_fail(path, lineno, "bad face index '" + tok + "'");
        if (v < 1 || v > static_cast<int>(verts.size()))
          parse_fail(path, lineno, "face index out of range");
        idx.push_back(v - 1);
      }
      if (idx.size() < 3) parse_fail(path, lineno, "face with fewer than 3 vertices");
      for (std::size_t i = 1; i + 1 < idx.size(); ++i)
        triangles.push_back({idx[0], idx[i], idx[i + 1]});
    }
    // other tags of the full OBJ grammar are outside the minimal subset
  }
  if (verts.empty()) throw std::runtime_error(path + ": no vertices");
  Mat vertices(3, static_cast<Eigen::Index>(verts.size()));
  for (std::size_t i = 0; i < verts.size(); ++i)
    vertices.col(static_cast<Eigen::Index>(i)) = verts[i];
  return finish_mesh(std::move(vertices), std::move(triangles), path);
}

}  // namespace

MeshSurface load_mesh(const std::string& path) {
  const auto dot = path.find_last_of('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  if (ext == "off" || ext == "OFF") return load_off(path);
  if (ext == "obj" || ext == "OBJ") return load_obj(path);
  throw std::runtime_error(path + ": unsupported mesh extension '" + ext + "'");
}

WeightedCloud sample_mesh(const MeshSurface& mesh, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sample_mesh: need a positive sample count");
  const double total = mesh.total_area();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<Eigen::Vector3d> pts;
  std::vector<double> w;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const double area = mesh.areas[t];
    if (area <= 0.0) continue;
    const auto cnt = static_cast<std::size_t>(
        std::ceil(static_cast<double>(n) * area / total - 1e-12));
    const auto& tri = mesh.triangles[t];
    const Eigen::Vector3d a = mesh.vertices.col(tri[0]);
    const Eigen::Vector3d b = mesh.vertices.col(tri[1]);
    const Eigen::Vector3d c = mesh.vertices.col(tri[2]);
    const double wt = area / static_cast<double>(cnt);
    double emitted = 0.0;
    for (std::size_t i = 0; i < cnt; ++i) {
      double u = uni(rng), v = uni(rng);
      if (u + v > 1.0) {
        u = 1.0 - u;
        v = 1.0 - v;
      }
      pts.emplace_back(a + u * (b - a) + v * (c - a));
      // last sample takes the remainder so the triangle's weight sums exactly
      if (i + 1 == cnt) {
        w.push_back(area - emitted);
      } else {
        w.push_back(wt);
        emitted += wt;
      }
    }
  }
  Mat m(3, static_cast<Eigen::Index>(pts.size()));
  Vec wv(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    m.col(static_cast<Eigen::Index>(i)) = pts[i];
    wv(static_cast<Eigen::Index>(i)) = w[i];
  }
  WeightedCloud cloud(std::move(m), std::move(wv), 2, "mesh");
  cloud.covering_radius = cloud.estimate_covering_radius();
  return cloud;
}

namespace {

void write_double(std::ostream& os, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  os.write(buf, res.ptr - buf);
}

}  // namespace

void save_cloud_csv(const std::string& path, const WeightedCloud& cloud) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "# n=" << cloud.ambient_dim() << " m=" << cloud.intrinsic_dim << "\n";
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    for (Eigen::Index j = 0; j < cloud.points.rows(); ++j) {
      write_double(out, cloud.points(j, i));
      out << ',';
    }
    write_double(out, cloud.weights(i));
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

WeightedCloud load_cloud_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  ++lineno;
  int n = -1, m = -1;
  {
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) {
      if (tok.rfind("n=", 0) == 0) n = std::stoi(tok.substr(2));
      if (tok.rfind("m=", 0) == 0) m = std::stoi(tok.substr(2));
    }
  }
  if (n < 1 || m < 1) parse_fail(path, lineno, "bad header, expected '# n=<n> m=<m>'");
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> vals;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      std::size_t comma = line.find(',', pos);
      if (comma == std::string::npos) comma = line.size();
      double v = 0;
      const auto res = std::from_chars(line.data() + pos, line.data() + comma, v);
      if (res.ec != std::errc()) parse_fail(path, lineno, "bad number");
      vals.push_back(v);
      pos = comma + 1;
    }
    if (vals.size() != static_cast<std::size_t>(n) + 1)
      parse_fail(path, lineno, "expected " + std::to_string(n + 1) + " columns");
    rows.push_back(std::move(vals));
  }
  if (rows.empty()) parse_fail(path, lineno, "no data rows");
  Mat pts(n, static_cast<Eigen::Index>(rows.size()));
  Vec w(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < n; ++j) pts(j, static_cast<Eigen::Index>(i)) = rows[i][static_cast<std::size_t>(j)];
    w(static_cast<Eigen::Index>(i)) = rows[i][static_cast<std::size_t>(n)];
  }
  WeightedCloud cloud(std::move(pts), std::move(w), m, "csv:" + path);
  cloud.covering_radius = cloud.estimate_covering_radius();
  return cloud;
}

GeneratorSpec GeneratorSpec::from_json(const std::string& text) {
  ordered_json j = ordered_json::parse(text);
  GeneratorSpec s;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "circle") s.kind = Kind::Circle;
  else if (kind == "sphere") s.kind = Kind::Sphere;
  else if (kind == "torus") s.kind = Kind::Torus;
  else if (kind == "graph") s.kind = Kind::Graph;
  else if (kind == "koch") s.kind = Kind::Koch;
  else if (kind == "plane_with_hole") s.kind = Kind::PlaneWithHole;
  else throw std::invalid_argument("generator: unknown kind '" + kind + "'");
  s.n_samples = j.at("n_samples").get<std::size_t>();
  if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("sphere_m")) s.sphere_m = j.at("sphere_m").get<int>();
  if (j.contains("torus")) {
    s.torus_major = j.at("torus").at("major").get<double>();
    s.torus_minor = j.at("torus").at("minor").get<double>();
  }
  if (j.contains("graph")) {
    const auto& g = j.at("graph");
    if (g.contains("profile")) {
      const std::string prof = g.at("profile").get<std::string>();
      if (prof == "abs_pow") s.graph_profile = GraphProfile::AbsPow;
      else if (prof == "pow") s.graph_profile = GraphProfile::Pow;
      else throw std::invalid_argument("generator: unknown graph profile '" + prof + "'");
    }
    if (g.contains("exponent")) s.graph_exponent = g.at("exponent").get<double>();
    if (g.contains("domain")) {
      s.domain_lo = g.at("domain").at(0).get<double>();
      s.domain_hi = g.at("domain").at(1).get<double>();
    }
  }
  if (j.contains("koch_level")) s.koch_level = j.at("koch_level").get<int>();
  if (j.contains("plane")) {
    const auto& p = j.at("plane");
    if (p.contains("m")) s.plane_m = p.at("m").get<int>();
    if (p.contains("hole_radius")) s.hole_radius = p.at("hole_radius").get<double>();
  }
  return s;
}

std::string GeneratorSpec::to_json() const {
  ordered_json j;
  switch (kind) {
    case Kind::Circle: j["kind"] = "circle"; break;
    case Kind::Sphere: j["kind"] = "sphere"; break;
    case Kind::Torus: j["kind"] = "torus"; break;
    case Kind::Graph: j["kind"] = "graph"; break;
    case Kind::Koch: j["kind"] = "koch"; break;
    case Kind::PlaneWithHole: j["kind"] = "plane_with_hole"; break;
  }
  j["n_samples"] = n_samples;
  j["seed"] = seed;
  if (kind == Kind::Sphere) j["sphere_m"] = sphere_m;
  if (kind == Kind::Torus) j["torus"] = {{"major", torus_major}, {"minor", torus_minor}};
  if (kind == Kind::Graph)
    j["graph"] = {{"profile", graph_profile == GraphProfile::AbsPow ? "abs_pow" : "pow"},
                  {"exponent", graph_exponent},
                  {"domain", {domain_lo, domain_hi}}};
  if (kind == Kind::Koch) j["koch_level"] = koch_level;
  if (kind == Kind::PlaneWithHole) j["plane"] = {{"m", plane_m}, {"hole_radius", hole_radius}};
  return j.dump();
}

}  // namespace menger
