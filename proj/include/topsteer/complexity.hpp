#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "topsteer/geometry.hpp"
#include "topsteer/knotoid.hpp"

namespace topsteer {

struct ComplexityEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  std::size_t n_samples = 0;
  double unclassified_fraction = 0.0;
  std::uint64_t direction_hash = 0;
};

struct KnotoidDistribution {
  std::map<std::string, double> weights;    // type name -> fraction of directions
  std::map<std::string, int> unravelling;   // type name -> u
  std::size_t total = 0;
  std::size_t unclassified = 0;
  std::size_t degenerate = 0;  // directions dropped after all retries
};

struct ProjectionOptions {
  int max_retries = 5;
  double perturb_angle = 1e-4;      // rad
  double max_degenerate_fraction = 0.01;
  int threads = 1;
};

/// Knotoid type of the open curve seen along each direction. Degenerate
/// projections are retried with perturbed directions (retry stream keyed by
/// retry_seed and the direction index); directions that stay degenerate
/// come back as empty names and are counted by the callers.
std::vector<KnotoidType> projection_types(std::span<const Vec3> vertices, std::span<const Direction> dirs,
                                          const KnotoidTable& table, std::uint64_t retry_seed,
                                          const ProjectionOptions& opt = {});

KnotoidDistribution knotoid_spectrum(const PolyCurve& c, std::span<const Direction> dirs, const KnotoidTable& table,
                                     std::uint64_t retry_seed = 0, const ProjectionOptions& opt = {});
KnotoidDistribution knotoid_spectrum(const PolyCurve& c, std::size_t n_dirs, std::uint64_t seed,
                                     const KnotoidTable& table, const ProjectionOptions& opt = {});

/// Mean unravelling number over the directions (normalized average);
/// stderr = sample sd / sqrt(n).
ComplexityEstimate aun(std::span<const Vec3> vertices, std::span<const Direction> dirs, const KnotoidTable& table,
                       std::uint64_t retry_seed = 0, const ProjectionOptions& opt = {});
ComplexityEstimate aun(const PolyCurve& c, std::size_t n_dirs, std::uint64_t seed, const KnotoidTable& table,
                       const ProjectionOptions& opt = {});

/// Subchain grid: indices {0, s, 2s, ...} plus n-1.
std::vector<std::size_t> tun_grid(std::size_t n_vertices, std::size_t stride);
/// Weight of one grid subchain: (stride / (n-1))^2.
double tun_cell_weight(std::size_t n_vertices, std::size_t stride);

/// Sum of AUN over grid subchains (a, b), b - a >= 2, times the cell weight.
/// stderr combines the per-subchain stderrs as if independent.
ComplexityEstimate tun(std::span<const Vec3> vertices, std::size_t stride, std::span<const Direction> dirs,
                       const KnotoidTable& table, std::uint64_t retry_seed = 0, const ProjectionOptions& opt = {});
ComplexityEstimate tun(const PolyCurve& c, std::size_t stride, std::size_t n_dirs, std::uint64_t seed,
                       const KnotoidTable& table, const ProjectionOptions& opt = {});

}  // namespace topsteer
