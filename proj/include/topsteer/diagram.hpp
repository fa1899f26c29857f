#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace topsteer {

/// One passage of the strand through a crossing.
struct Visit {
  int crossing = 0;
  bool over = false;
  bool operator==(const Visit&) const = default;
};

/// Signed Gauss code of an open (knotoid) or closed (knot) diagram on S^2.
///
/// Crossings are relabelled on construction in order of first appearance,
/// so two diagrams with the same combinatorics compare equal. Open codes run
/// from the leg (tail) to the head and are never rotated.
///
/// Each crossing also carries a handedness h = sign * (first visit over ? 1 : -1):
/// h = +1 when the second passage crosses the first from right to left. The
/// handedness fixes the rotation system, hence the embedding.
class Diagram {
 public:
  Diagram() = default;
  Diagram(std::vector<Visit> code, std::vector<int> signs, bool closed);

  static Diagram empty_open() { return {}; }
  static Diagram empty_closed() { return Diagram({}, {}, true); }

  bool closed() const noexcept { return closed_; }
  int crossings() const noexcept { return static_cast<int>(sign_.size()); }
  const std::vector<Visit>& code() const noexcept { return code_; }
  const std::vector<int>& signs() const noexcept { return sign_; }
  int sign(int c) const { return sign_[c]; }
  /// Code positions of the first and second visit of crossing c.
  const std::array<int, 2>& positions(int c) const { return pos_[c]; }
  int handedness(int c) const { return sign_[c] * (code_[pos_[c][0]].over ? 1 : -1); }
  int writhe() const;

  /// Number of edges of the underlying graph (2c + 1 open, 2c closed).
  int edge_count() const noexcept { return static_cast<int>(code_.size()) + (closed_ ? 0 : 1); }

  /// Compact text form, e.g. "o:O0+,U1-,U0,O1". Parsed back by `parse`.
  std::string key() const;
  static Diagram parse(const std::string& key);

  bool operator==(const Diagram& o) const { return closed_ == o.closed_ && code_ == o.code_ && sign_ == o.sign_; }

 private:
  bool closed_ = false;
  std::vector<Visit> code_;
  std::vector<int> sign_;
  std::vector<std::array<int, 2>> pos_;
};

/// Darts are 2*edge (along the orientation) and 2*edge + 1 (against it).
/// Edge e of an open code joins visit e-1 to visit e, with visit -1 the leg
/// and visit 2c the head; in a closed code indices wrap.
struct FaceStructure {
  std::vector<int> face_of_dart;
  std::vector<std::vector<int>> faces;  // dart cycles
};

FaceStructure compute_faces(const Diagram& d);
bool is_planar(const Diagram& d);

/// Code positions at the two ends of edge e; -1 marks an endpoint of an
/// open code.
std::array<int, 2> edge_ends(const Diagram& d, int edge);

/// Remove the given crossings (both visits each).
Diagram remove_crossings(const Diagram& d, const std::vector<int>& crossings);

/// Crossing pairs that bound a bigon face with one strand over both.
std::vector<std::array<int, 2>> r2_candidates(const Diagram& d, const FaceStructure& faces);
/// Crossings whose two visits are adjacent (monogon faces).
std::vector<int> r1_candidates(const Diagram& d);

/// Triangle faces admitting a Reidemeister III move (one side passes over
/// both others). Returned as the three edges of the face.
std::vector<std::array<int, 3>> r3_candidates(const Diagram& d, const FaceStructure& faces);
Diagram apply_r3(const Diagram& d, const std::array<int, 3>& edges);

/// Apply crossing-reducing Reidemeister I and II moves to a fixed point.
/// When stuck, a Reidemeister III move is taken if it exposes a reducing
/// move. No move sweeps an arc across an endpoint: R2/R3 are only applied
/// on bigon/triangle faces, which cannot contain an endpoint.
Diagram simplify(const Diagram& d);

/// Insert a kink on edge `edge`.
Diagram insert_r1(const Diagram& d, int edge, bool first_over, int handedness);
/// Push the strand of dart `d1` across the strand of dart `d2`; both darts
/// must lie on the same face. Returns nullopt when the pair admits no move.
std::optional<Diagram> insert_r2(const Diagram& d, const FaceStructure& faces, int d1, int d2, bool first_strand_over);

/// Forbidden move: pass the endpoint across the strand at the crossing
/// adjacent to the leg (`at_head` false) or the head. Removes that crossing.
Diagram forbidden_move(const Diagram& d, bool at_head);

}  // namespace topsteer
