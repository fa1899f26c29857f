#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "topsteer/diagram.hpp"
#include "topsteer/geometry.hpp"
#include "topsteer/polynomial.hpp"

namespace topsteer {

/// A transverse crossing of two projected segments. Segment k joins
/// vertex k to vertex k+1 (closed curves add segment n-1 -> 0).
struct CrossingRecord {
  int seg_over = 0, seg_under = 0;
  double t_over = 0.0, t_under = 0.0;  // parameters in [0, 1] along each segment
  int sign = 0;
};

/// Grid-accelerated segment intersection. Throws degenerate_projection on
/// coincident vertices, a vertex within 1e-9 of a non-adjacent segment,
/// zero-length projected segments, triple points or depth ties.
std::vector<CrossingRecord> find_crossings(const PlanarGeometry& g);

/// Gauss code ordered by arclength from the first vertex.
Diagram diagram_from_crossings(const std::vector<CrossingRecord>& crossings, bool closed);
inline Diagram extract_diagram(const PlanarGeometry& g) {
  return diagram_from_crossings(find_crossings(g), g.closed);
}

inline constexpr int kBracketCrossingBudget = 24;

/// Writhe-normalized bracket (Jones-type polynomial in A) of a knotoid or
/// knot diagram: <D> = sum_s A^(a-b) d^(|s|), d = -A^2 - A^-2, |s| the number
/// of closed loops (the open arc of a knotoid carries no factor), times
/// (-A^3)^(-writhe). Simplifies first; throws complexity_limit when more than
/// kBracketCrossingBudget crossings remain.
Laurent bracket_polynomial(const Diagram& d);
std::string bracket_fingerprint(const Diagram& d);

struct KnotoidType {
  std::string name;
  std::string fingerprint;
  int unravelling = 0;
  bool classified = true;  // false: unravelling holds unravel_bound
  std::string source;      // table provenance tag
  std::string representative;  // diagram key, may be empty
};

/// Fingerprint-keyed knotoid lookup table. CSV columns:
/// name,fingerprint,unravelling_number,source[,representative]
class KnotoidTable {
 public:
  KnotoidTable() = default;
  explicit KnotoidTable(std::vector<KnotoidType> entries);
  static KnotoidTable load(const std::filesystem::path& path);
  static KnotoidTable parse(const std::string& text, const std::string& origin = "<memory>");

  const KnotoidType* find(const std::string& fingerprint) const;
  const std::vector<KnotoidType>& entries() const noexcept { return entries_; }
  const KnotoidType& trivial() const { return entries_[trivial_]; }
  int max_unravelling() const noexcept { return max_u_; }

 private:
  std::vector<KnotoidType> entries_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t trivial_ = 0;
  int max_u_ = 0;
};

/// Simplify, fingerprint, look up. Unknown fingerprints and diagrams over
/// the bracket budget come back unclassified with u = unravel_bound.
KnotoidType classify(const Diagram& d, const KnotoidTable& table);

/// ceil(crossings after simplify / 3); heuristic fallback.
int unravel_bound(const Diagram& d);

/// Minimal number of forbidden moves to reach the 0-crossing diagram by
/// 0-1 breadth-first search over simplified diagrams. Reidemeister III
/// moves are free edges. Empty when max_depth or the state budget is
/// exhausted.
std::optional<int> brute_force_unravel(const Diagram& d, int max_depth, std::size_t max_states = 200000);

}  // namespace topsteer
