#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "topsteer/gsaw.hpp"

namespace topsteer {

/// Rectangle in (theta, phi) space, radians.
struct HelicalRegion {
  double theta_min = 1.45, theta_max = 1.75;
  double phi_min = 0.6, phi_max = 1.2;

  bool contains(const AnglePair& p) const {
    return p.theta >= theta_min && p.theta <= theta_max && p.phi >= phi_min && p.phi <= phi_max;
  }
  /// Throws invalid_argument for empty area or bounds outside the angle ranges.
  void validate() const;
};

struct AngleDataset {
  std::vector<AnglePair> pairs;
  std::vector<std::uint8_t> helical;    // parallel to pairs
  std::vector<std::string> provenance;  // written as '#' lines

  std::size_t size() const noexcept { return pairs.size(); }
  std::size_t helical_count() const;
};

struct AngleExtraction {
  std::vector<AnglePair> pairs;
  std::size_t excluded_pairs = 0;
  std::size_t collinear_triples = 0;
};

/// Pair k (k = 3..n-1) is (bend at k-1, dihedral of k-3..k), the inverse of
/// place_bead. Pairs touching a collinear triple are excluded.
AngleExtraction angles_from_coordinates(std::span<const Vec3> points);

struct CalphaChain {
  std::string id;  // chain letter plus fragment index, e.g. "A/0"
  std::vector<Vec3> points;
};

struct CalphaParse {
  std::vector<CalphaChain> chains;
  std::size_t malformed = 0;
};

inline constexpr double kMaxCalphaGap = 4.5;  // Angstrom

/// CA atoms of the first model from fixed-column ATOM records; first
/// alternate location only. Chains are split where residue numbers jump or
/// consecutive CA atoms are more than kMaxCalphaGap apart. Throws empty_input
/// when no CA atom is found.
CalphaParse parse_calpha_text(const std::string& text, const std::string& origin = "<memory>");
/// Reads plain or gzip-compressed files.
CalphaParse parse_calpha(const std::filesystem::path& path);

/// Flags pairs inside r. Throws degenerate_partition when either subset is empty.
void partition_helical(AngleDataset& d, const HelicalRegion& r);

struct IngestReport {
  std::size_t files = 0;
  std::size_t chains = 0;
  std::size_t malformed = 0;
  std::size_t excluded_pairs = 0;
};

/// Dataset from every *.pdb, *.ent, *.pdb.gz, *.ent.gz file under dir
/// (sorted by name); fragments shorter than 4 are skipped.
AngleDataset build_dataset(const std::filesystem::path& dir, const HelicalRegion& r, IngestReport* report = nullptr);

/// CSV: '#' provenance lines, header theta_rad,phi_rad,helical, rows with
/// shortest round-trip decimal form.
std::string format_dataset(const AngleDataset& d);
void write_dataset(const std::filesystem::path& path, const AngleDataset& d);
AngleDataset parse_dataset(const std::string& text, const std::string& origin = "<memory>");
AngleDataset load_dataset(const std::filesystem::path& path);

}  // namespace topsteer
