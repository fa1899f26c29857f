#include "topsteer/geometry.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "topsteer/error.hpp"
#include "topsteer/rng.hpp"

namespace topsteer {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::io_error: return "io-error";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::degenerate_projection: return "degenerate-projection";
    case ErrorCode::complexity_limit: return "complexity-limit";
    case ErrorCode::numerical_degeneracy: return "numerical-degeneracy";
    case ErrorCode::integration_blowup: return "integration-blowup";
    case ErrorCode::invalid_configuration: return "invalid-configuration";
    case ErrorCode::calibration_failure: return "calibration-failure";
    case ErrorCode::steering_abort: return "steering-abort";
    case ErrorCode::empty_input: return "empty-input";
    case ErrorCode::degenerate_partition: return "degenerate-partition";
    case ErrorCode::internal: return "internal";
  }
  return "unknown";
}

PolyCurve::PolyCurve(std::vector<Vec3> vertices, double bead_radius)
    : vertices_(std::move(vertices)), bead_radius_(bead_radius) {
  require(vertices_.size() >= 2, "a curve needs at least 2 vertices");
  require(std::isfinite(bead_radius_) && bead_radius_ > 0.0, "bead radius must be positive");
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    require(is_finite(vertices_[i]), "non-finite vertex coordinate at index " + std::to_string(i));
    if (i > 0) {
      require(distance(vertices_[i], vertices_[i - 1]) > kMinSeparation,
              "consecutive vertices coincide at index " + std::to_string(i));
    }
  }
}

Vec3 PolyCurve::centroid() const {
  Vec3 c;
  for (const auto& v : vertices_) c += v;
  return c / static_cast<double>(vertices_.size());
}

double PolyCurve::diameter() const {
  double best = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    for (std::size_t j = i + 1; j < vertices_.size(); ++j)
      best = std::max(best, norm2(vertices_[i] - vertices_[j]));
  return std::sqrt(best);
}

double PolyCurve::contour_length() const {
  double len = 0.0;
  for (std::size_t i = 1; i < vertices_.size(); ++i) len += distance(vertices_[i], vertices_[i - 1]);
  return len;
}

Direction::Direction(const Vec3& v) {
  const double n = norm(v);
  require(std::isfinite(n) && n > 0.0, "direction must be a finite non-zero vector");
  v_ = v / n;
}

namespace {

Vec3 rotate_by_quaternion(const Vec3& v, double w, const Vec3& q) {
  // v' = v + 2w (q x v) + 2 q x (q x v)
  const Vec3 t = cross(q, v) * 2.0;
  return v + t * w + cross(q, t);
}

}  // namespace

std::vector<Direction> sample_directions(std::size_t n, const DirectionScheme& scheme) {
  require(n >= 1, "sample_directions needs n >= 1");
  std::vector<Direction> out;
  out.reserve(n);
  if (scheme.kind == DirectionScheme::Kind::uniform_random) {
    auto rng = make_stream({scheme.seed, 0x5350484552ull});
    std::normal_distribution<double> normal(0.0, 1.0);
    while (out.size() < n) {
      Vec3 v{normal(rng), normal(rng), normal(rng)};
      if (norm2(v) < 1e-20) continue;
      out.emplace_back(v);
    }
    return out;
  }

  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  double qw = 1.0;
  Vec3 qv{};
  if (scheme.kind == DirectionScheme::Kind::fibonacci_rotated) {
    auto rng = make_stream({scheme.seed, 0x524f54ull});
    std::normal_distribution<double> normal(0.0, 1.0);
    double a = normal(rng), b = normal(rng), c = normal(rng), d = normal(rng);
    const double len = std::sqrt(a * a + b * b + c * c + d * d);
    qw = a / len;
    qv = Vec3{b, c, d} / len;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(i);
    Vec3 v{r * std::cos(phi), r * std::sin(phi), z};
    if (scheme.kind == DirectionScheme::Kind::fibonacci_rotated) v = rotate_by_quaternion(v, qw, qv);
    out.emplace_back(v);
  }
  return out;
}

std::uint64_t hash_directions(std::span<const Direction> dirs) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const auto& d : dirs) {
    for (int k = 0; k < 3; ++k) {
      h ^= std::bit_cast<std::uint64_t>(d.vec()[k]);
      h = mix_seed(h);
    }
  }
  return h;
}

ProjectionFrame projection_frame(const Direction& dir) {
  const Vec3& d = dir.vec();
  Vec3 axis{1, 0, 0};
  const double ax = std::abs(d.x), ay = std::abs(d.y), az = std::abs(d.z);
  if (ay < ax && ay <= az) axis = {0, 1, 0};
  else if (az < ax && az < ay) axis = {0, 0, 1};
  const Vec3 e1 = normalized(axis - d * dot(axis, d));
  const Vec3 e2 = cross(d, e1);
  return {e1, e2, d};
}

PlanarGeometry project(std::span<const Vec3> vertices, const Direction& dir, bool closed) {
  const ProjectionFrame f = projection_frame(dir);
  PlanarGeometry g;
  g.closed = closed;
  g.points.reserve(vertices.size());
  g.depth.reserve(vertices.size());
  for (const auto& v : vertices) {
    g.points.push_back({dot(v, f.e1), dot(v, f.e2)});
    g.depth.push_back(dot(v, f.d));
  }
  return g;
}

PolyCurve trim(const PolyCurve& curve, SubchainSpec s) {
  require(s.a <= s.b && s.b < curve.size(), "subchain indices out of range");
  require(s.b - s.a >= 1, "a subchain needs at least two vertices");
  std::vector<Vec3> v(curve.vertices().begin() + static_cast<std::ptrdiff_t>(s.a),
                      curve.vertices().begin() + static_cast<std::ptrdiff_t>(s.b) + 1);
  return PolyCurve(std::move(v), curve.bead_radius());
}

double bend_angle(const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 u = a - b, v = c - b;
  // atan2 form keeps precision near 0 and pi
  return std::atan2(norm(cross(u, v)), dot(u, v));
}

std::optional<double> dihedral_angle(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  const Vec3 b1 = b - a, b2 = c - b, b3 = d - c;
  const Vec3 n1 = cross(b1, b2), n2 = cross(b2, b3);
  const double l2 = norm(b2);
  constexpr double kCollinear = 1e-12;
  if (norm(n1) <= kCollinear * norm(b1) * l2 || norm(n2) <= kCollinear * l2 * norm(b3)) return std::nullopt;
  double phi = std::atan2(l2 * dot(b1, n2), dot(n1, n2));
  if (phi < 0.0) phi += 2.0 * std::numbers::pi;
  if (phi >= 2.0 * std::numbers::pi) phi -= 2.0 * std::numbers::pi;
  return phi;
}

CurvatureTorsion discrete_curvature_torsion(const PolyCurve& curve) {
  const auto v = curve.vertices();
  const std::size_t n = v.size();
  require(n >= 3, "curvature needs at least 3 vertices");
  CurvatureTorsion out;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double l = 0.5 * (distance(v[i - 1], v[i]) + distance(v[i], v[i + 1]));
    out.curvature.push_back((std::numbers::pi - bend_angle(v[i - 1], v[i], v[i + 1])) / l);
  }
  for (std::size_t i = 1; i + 2 < n; ++i) {
    auto phi = dihedral_angle(v[i - 1], v[i], v[i + 1], v[i + 2]);
    if (!phi) {
      out.torsion.push_back(std::nullopt);
      continue;
    }
    double w = *phi - std::numbers::pi;  // already in [-pi, pi)
    const double l = distance(v[i], v[i + 1]);
    out.torsion.push_back(w / l);
  }
  return out;
}

Direction perturb_direction(const Direction& dir, double max_angle, std::mt19937_64& rng) {
  const ProjectionFrame f = projection_frame(dir);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double psi = 2.0 * std::numbers::pi * u(rng);
  const Vec3 axis = f.e1 * std::cos(psi) + f.e2 * std::sin(psi);
  return Direction(rotate(dir.vec(), axis, max_angle * u(rng)));
}

std::vector<Vec3> parse_curve_text(const std::string& text, const std::string& origin) {
  std::vector<Vec3> pts;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::string tok[3], extra;
    if (!(ls >> tok[0] >> tok[1] >> tok[2]) || (ls >> extra))
      fail(ErrorCode::parse_error, origin + ":" + std::to_string(lineno) + ": expected 'x y z'");
    Vec3 p;
    for (int k = 0; k < 3; ++k) {
      std::size_t used = 0;
      double val = 0.0;
      try {
        val = std::stod(tok[k], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok[k].size())
        fail(ErrorCode::parse_error, origin + ":" + std::to_string(lineno) + ": bad number '" + tok[k] + "'");
      if (!std::isfinite(val))
        fail(ErrorCode::parse_error, origin + ":" + std::to_string(lineno) + ": non-finite coordinate");
      p[k] = val;
    }
    pts.push_back(p);
  }
  return pts;
}

PolyCurve read_curve(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io_error, "cannot open curve file: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  auto pts = parse_curve_text(ss.str(), path.string());
  if (pts.size() < 2) fail(ErrorCode::parse_error, path.string() + ": a curve needs at least 2 vertices");
  return PolyCurve(std::move(pts));
}

void write_curve(const std::filesystem::path& path, std::span<const Vec3> vertices, const std::string& comment) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io_error, "cannot write curve file: " + path.string());
  if (!comment.empty()) {
    std::istringstream cs(comment);
    std::string line;
    while (std::getline(cs, line)) out << "# " << line << '\n';
  }
  char buf[32];
  for (const auto& v : vertices) {
    for (int k = 0; k < 3; ++k) {
      const auto r = std::to_chars(buf, buf + sizeof buf, v[k]);
      out.write(buf, r.ptr - buf);
      out.put(k < 2 ? ' ' : '\n');
    }
  }
}

}  // namespace topsteer
