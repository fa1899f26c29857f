#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "topsteer/vec3.hpp"

namespace topsteer {

/// Ordered vertex list of an open polygonal chain. Lengths are in bead
/// diameters unless a caller says otherwise.
class PolyCurve {
 public:
  static constexpr double kMinSeparation = 1e-9;

  PolyCurve() = default;
  explicit PolyCurve(std::vector<Vec3> vertices, double bead_radius = 1.0);

  std::size_t size() const noexcept { return vertices_.size(); }
  const Vec3& operator[](std::size_t i) const { return vertices_[i]; }
  std::span<const Vec3> vertices() const noexcept { return vertices_; }
  double bead_radius() const noexcept { return bead_radius_; }

  Vec3 centroid() const;
  /// Largest pairwise vertex distance.
  double diameter() const;
  double contour_length() const;

  bool operator==(const PolyCurve&) const = default;

 private:
  std::vector<Vec3> vertices_;
  double bead_radius_ = 1.0;
};

/// Closed index range [a, b] of a chain; a single vertex is not a curve.
struct SubchainSpec {
  std::size_t a = 0;
  std::size_t b = 0;
};

/// Unit vector on S^2.
class Direction {
 public:
  static constexpr double kTolerance = 1e-12;
  explicit Direction(const Vec3& v);  // normalizes; rejects zero / non-finite input
  const Vec3& vec() const noexcept { return v_; }

 private:
  Vec3 v_;
};

struct DirectionScheme {
  enum class Kind { fibonacci, fibonacci_rotated, uniform_random };
  Kind kind = Kind::fibonacci;
  std::uint64_t seed = 0;

  static DirectionScheme fibonacci() { return {Kind::fibonacci, 0}; }
  /// Fibonacci lattice under a seed-derived uniformly random rotation.
  static DirectionScheme fibonacci_rotated(std::uint64_t seed) { return {Kind::fibonacci_rotated, seed}; }
  static DirectionScheme uniform_random(std::uint64_t seed) { return {Kind::uniform_random, seed}; }
};

std::vector<Direction> sample_directions(std::size_t n, const DirectionScheme& scheme);

/// Order-sensitive hash of a direction set (bit patterns of the coordinates).
std::uint64_t hash_directions(std::span<const Direction> dirs);

/// Orthonormal frame (e1, e2) with e1 x e2 = d. e1 is built from the
/// coordinate axis with the smallest |component| of d.
struct ProjectionFrame {
  Vec3 e1, e2, d;
};
ProjectionFrame projection_frame(const Direction& d);

/// Projection of a curve onto the plane orthogonal to a direction.
/// `depth[i] = dot(vertex_i, d)`; larger depth is nearer the viewer.
struct PlanarGeometry {
  std::vector<Vec2> points;
  std::vector<double> depth;
  bool closed = false;
};

PlanarGeometry project(std::span<const Vec3> vertices, const Direction& d, bool closed = false);
inline PlanarGeometry project(const PolyCurve& curve, const Direction& d) {
  return project(curve.vertices(), d, false);
}

PolyCurve trim(const PolyCurve& curve, SubchainSpec s);

/// Bending angle at b of the triple (a, b, c); pi for a straight continuation.
double bend_angle(const Vec3& a, const Vec3& b, const Vec3& c);
/// Dihedral of (a, b, c, d) in [0, 2*pi); 0 is cis, pi is trans.
/// Empty when either triple is collinear.
std::optional<double> dihedral_angle(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

/// Discrete curvature and torsion under the turning-angle convention:
/// kappa_i = (pi - theta_i) / l_i at interior vertex i, and
/// tau_i = wrap(phi_i - pi) / l_i for the dihedral spanning vertices i-1..i+2,
/// with l_i the mean length of the bonds meeting the vertex (or the middle
/// bond for torsion). wrap maps into [-pi, pi).
struct CurvatureTorsion {
  std::vector<double> curvature;              // n - 2 entries
  std::vector<std::optional<double>> torsion;  // n - 3 entries; empty when undefined
};
CurvatureTorsion discrete_curvature_torsion(const PolyCurve& curve);

/// Rotate `d` by a random angle in [0, max_angle] about a random axis
/// orthogonal to it.
Direction perturb_direction(const Direction& d, double max_angle, std::mt19937_64& rng);

/// Plain-text curve file: one "x y z" triple per line, '#' starts a comment.
PolyCurve read_curve(const std::filesystem::path& path);
std::vector<Vec3> parse_curve_text(const std::string& text, const std::string& origin = "<memory>");
void write_curve(const std::filesystem::path& path, std::span<const Vec3> vertices,
                 const std::string& comment = {});

}  // namespace topsteer
