#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "topsteer/diagram.hpp"
#include "topsteer/geometry.hpp"
#include "topsteer/polynomial.hpp"

namespace topsteer {

enum class KnotFamily { unknot, torus, twist, composite, other };
const char* to_string(KnotFamily f) noexcept;

struct KnotInvariants {
  std::int64_t determinant = 1;
  Laurent alexander = Laurent::constant(1);  // normalized: lowest power t^0, value 1 at t = 1
  std::string key() const { return alexander.key(); }
};

inline constexpr int kAlexanderCrossingBudget = 40;

/// Alexander polynomial from the arc presentation of a closed diagram, by
/// fraction-free elimination of a first minor. Throws complexity_limit
/// beyond kAlexanderCrossingBudget crossings (after simplification) or on
/// coefficient overflow.
KnotInvariants knot_invariants(const Diagram& closed_diagram);

struct KnotType {
  std::string name;  // "0_1", "3_1", "3_1#3_1", "other"
  KnotFamily family = KnotFamily::other;
  std::int64_t determinant = 0;
  std::string fingerprint;
};

/// Name-family rule: torus {3_1, 5_1, 7_1}, twist {4_1, 5_2, 6_1, 7_2},
/// composite for '#' names, unknot for 0_1, other otherwise.
KnotFamily classify_family(const std::string& name);

/// CSV columns: name,determinant,fingerprint,family (fingerprint = Alexander key).
class KnotTable {
 public:
  KnotTable() = default;
  explicit KnotTable(std::vector<KnotType> entries);
  static KnotTable load(const std::filesystem::path& path);
  static KnotTable parse(const std::string& text, const std::string& origin = "<memory>");
  const std::vector<KnotType>& entries() const noexcept { return entries_; }
  /// Determinant first, Alexander fingerprint as tie-break; "other" when unmatched.
  KnotType lookup(const KnotInvariants& inv) const;

 private:
  std::vector<KnotType> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct KnotDistribution {
  std::map<std::string, double> fractions;
  std::map<std::string, std::size_t> counts;
  std::string dominant;
  std::size_t n_closures = 0;
};

/// Closed polygon: curve, ray from the last vertex along u to the sphere of
/// radius radius_factor * diameter about the centroid, a great arc, and the
/// ray back to the first vertex.
std::vector<Vec3> close_curve(const PolyCurve& c, const Direction& u, double radius_factor = 3.0, int arc_segments = 16);

/// Removes vertices whose triangle with its neighbours is not pierced by any
/// other edge (Koniaris-Muthukumar / Taylor reduction). Preserves the knot type.
std::vector<Vec3> reduce_closed_polygon(std::vector<Vec3> poly);

/// Knot type of a closed polygon, projected along a seed-derived random
/// direction with degenerate retries.
KnotType identify_closed(std::span<const Vec3> closed_poly, const KnotTable& table, std::uint64_t seed);

KnotDistribution stochastic_closure(const PolyCurve& c, std::size_t n_closures, std::uint64_t seed,
                                    const KnotTable& table, int threads = 1);

}  // namespace topsteer
