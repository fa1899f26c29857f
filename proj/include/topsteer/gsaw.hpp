#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "topsteer/vec3.hpp"

namespace topsteer {

/// theta: bending angle in [0, pi] (pi = straight). phi: dihedral in
/// [0, 2*pi) with 0 = cis, pi = trans.
struct AnglePair {
  double theta = 0.0;
  double phi = 0.0;
  bool operator==(const AnglePair&) const = default;
};

inline constexpr double kBondLength = 2.0;  // tangent unit-radius beads

/// New vertex d from the last three (a, b, c) such that |d - c| = bond,
/// bend_angle(b, c, d) = theta and dihedral_angle(a, b, c, d) = phi.
///
///   e = (c - b)/|c - b|,  n = (b - a) x e / |.|,  m = n x e
///   d = c + bond * (-cos(theta) e + sin(theta) cos(phi) m + sin(theta) sin(phi) n)
///
/// When (a, b, c) is collinear, n is taken from the coordinate axis with the
/// smallest |component| of e (n = axis x e / |.|).
Vec3 place_bead(const Vec3& a, const Vec3& b, const Vec3& c, AnglePair ang, double bond = kBondLength);

/// Chain whose angles_from_coordinates() is `pairs`. The first three
/// vertices are (0,0,0), (bond,0,0) and a third at bend `initial_theta`
/// in the xy-plane.
std::vector<Vec3> chain_from_angles(std::span<const AnglePair> pairs, double initial_theta = 1.5707963267948966,
                                    double bond = kBondLength);

struct AngleDataset;

class AngleModel {
 public:
  enum class Kind { uniform, semiflexible, empirical, fixed };
  enum class Subset { full, no_helices, only_helices };

  /// Bending variance that gives a 10-bond persistence length
  /// (<cos(pi - theta)> = exp(-var / 2), lp = 2 / var).
  static constexpr double kDefaultVariance = 0.2;

  /// Isotropic next-bond direction: cos(theta) uniform, phi uniform.
  static AngleModel uniform();
  /// theta = pi - |N(0, variance)| redrawn until >= 0; phi uniform.
  static AngleModel semiflexible(double variance = kDefaultVariance);
  /// Joint draw of a stored (theta, phi) pair from the chosen subset.
  static AngleModel empirical(std::shared_ptr<const AngleDataset> data, Subset subset);
  /// Always returns `pair`; for tests.
  static AngleModel fixed(AnglePair pair);

  AnglePair draw(std::mt19937_64& rng) const;
  Kind kind() const noexcept { return kind_; }
  double variance() const noexcept { return variance_; }
  std::size_t pool_size() const noexcept { return pool_.size(); }

 private:
  Kind kind_ = Kind::uniform;
  double variance_ = 0.0;
  AnglePair fixed_{};
  std::shared_ptr<const AngleDataset> data_;
  std::vector<std::uint32_t> pool_;  // dataset indices in the subset
};

enum class OverlapPolicy { strict, weak };
enum class GrowthStatus { growing, trapped, done };

/// Growing tangent-sphere chain (bead radius 1, bond 2).
class GrowthState {
 public:
  static constexpr double kContact = kBondLength - 1e-9;
  static constexpr int kDefaultMaxAttempts = 1000;

  explicit GrowthState(OverlapPolicy policy = OverlapPolicy::strict, int max_attempts = kDefaultMaxAttempts);

  const std::vector<Vec3>& beads() const noexcept { return beads_; }
  std::size_t size() const noexcept { return beads_.size(); }
  GrowthStatus status() const noexcept { return status_; }
  OverlapPolicy policy() const noexcept { return policy_; }
  int max_attempts() const noexcept { return max_attempts_; }
  /// Beads placed overlapping under the weak policy.
  std::size_t overlaps() const noexcept { return overlaps_; }
  /// Length at which the walk was trapped (0 when not trapped).
  std::size_t trapped_at() const noexcept { return trapped_at_; }

  /// Whether p would lie closer than kContact to any bead other than the last.
  bool would_overlap(const Vec3& p) const;
  /// Appends p unconditionally.
  void push(const Vec3& p);
  void mark_trapped();
  void mark_done() { if (status_ == GrowthStatus::growing) status_ = GrowthStatus::done; }
  /// Places p despite an overlap (weak policy) and counts it.
  void push_overlapping(const Vec3& p) { push(p); ++overlaps_; }

 private:
  using CellKey = std::uint64_t;
  static CellKey key(std::int64_t x, std::int64_t y, std::int64_t z);
  static std::int64_t cell_of(double v);

  OverlapPolicy policy_;
  int max_attempts_;
  GrowthStatus status_ = GrowthStatus::growing;
  std::size_t overlaps_ = 0;
  std::size_t trapped_at_ = 0;
  std::vector<Vec3> beads_;
  std::unordered_map<CellKey, std::vector<std::uint32_t>> cells_;
};

/// Same test as GrowthState::would_overlap by brute force.
bool overlaps_brute(std::span<const Vec3> beads, const Vec3& p);

/// Adds up to n_new beads. Each bead draws angle pairs until a placement does
/// not overlap; after max_attempts failures the strict policy marks the walk
/// trapped and stops, the weak policy places the last attempt anyway.
void grow(GrowthState& state, const AngleModel& model, std::size_t n_new, std::mt19937_64& rng);

/// Model by CLI name: unbiased, protein, protein_no_helix,
/// protein_only_helix, uniform. Protein models need `data`.
AngleModel model_by_name(const std::string& name, std::shared_ptr<const AngleDataset> data);
bool model_needs_dataset(const std::string& name);
const std::vector<std::string>& model_names();

}  // namespace topsteer
