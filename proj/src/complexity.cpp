#include "topsteer/complexity.hpp"

#include <cmath>

#include "topsteer/error.hpp"
#include "topsteer/parallel.hpp"
#include "topsteer/rng.hpp"

namespace topsteer {

namespace {

std::optional<Diagram> diagram_along(std::span<const Vec3> v, const Direction& dir, std::uint64_t retry_seed,
                                     std::size_t index, const ProjectionOptions& opt) {
  try {
    return extract_diagram(project(v, dir, false));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::degenerate_projection) throw;
  }
  auto rng = make_stream({retry_seed, index, 0x7265747279ull});
  for (int attempt = 0; attempt < opt.max_retries; ++attempt) {
    try {
      return extract_diagram(project(v, perturb_direction(dir, opt.perturb_angle, rng), false));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::degenerate_projection) throw;
    }
  }
  return std::nullopt;
}

void check_degenerate(std::size_t bad, std::size_t total, const ProjectionOptions& opt) {
  if (static_cast<double>(bad) > opt.max_degenerate_fraction * static_cast<double>(total))
    fail(ErrorCode::numerical_degeneracy, std::to_string(bad) + " of " + std::to_string(total) +
                                              " projection directions stayed degenerate after retries");
}

}  // namespace

std::vector<KnotoidType> projection_types(std::span<const Vec3> vertices, std::span<const Direction> dirs,
                                          const KnotoidTable& table, std::uint64_t retry_seed,
                                          const ProjectionOptions& opt) {
  require(vertices.size() >= 2, "a curve needs at least 2 vertices");
  std::vector<KnotoidType> out(dirs.size());
  parallel_for(dirs.size(), opt.threads, [&](std::size_t i) {
    auto d = diagram_along(vertices, dirs[i], retry_seed, i, opt);
    if (!d) return;  // name stays empty
    out[i] = d->crossings() == 0 ? table.trivial() : classify(*d, table);
  });
  return out;
}

KnotoidDistribution knotoid_spectrum(const PolyCurve& c, std::span<const Direction> dirs, const KnotoidTable& table,
                                     std::uint64_t retry_seed, const ProjectionOptions& opt) {
  require(!dirs.empty(), "knotoid_spectrum needs at least one direction");
  const auto types = projection_types(c.vertices(), dirs, table, retry_seed, opt);
  KnotoidDistribution dist;
  std::map<std::string, std::size_t> counts;
  for (const auto& t : types) {
    if (t.name.empty()) {
      ++dist.degenerate;
      continue;
    }
    ++counts[t.name];
    dist.unravelling[t.name] = t.unravelling;
    if (!t.classified) ++dist.unclassified;
  }
  check_degenerate(dist.degenerate, types.size(), opt);
  dist.total = types.size() - dist.degenerate;
  for (const auto& [name, n] : counts) dist.weights[name] = static_cast<double>(n) / static_cast<double>(dist.total);
  return dist;
}

KnotoidDistribution knotoid_spectrum(const PolyCurve& c, std::size_t n_dirs, std::uint64_t seed,
                                     const KnotoidTable& table, const ProjectionOptions& opt) {
  require(n_dirs >= 1, "knotoid_spectrum needs n_dirs >= 1");
  const auto dirs = sample_directions(n_dirs, DirectionScheme::fibonacci_rotated(seed));
  return knotoid_spectrum(c, dirs, table, seed, opt);
}

ComplexityEstimate aun(std::span<const Vec3> vertices, std::span<const Direction> dirs, const KnotoidTable& table,
                       std::uint64_t retry_seed, const ProjectionOptions& opt) {
  require(dirs.size() >= 2, "aun needs at least 2 directions");
  const auto types = projection_types(vertices, dirs, table, retry_seed, opt);
  std::size_t bad = 0, unclassified = 0;
  double sum = 0.0, sum2 = 0.0;
  for (const auto& t : types) {
    if (t.name.empty()) {
      ++bad;
      continue;
    }
    if (!t.classified) ++unclassified;
    sum += t.unravelling;
    sum2 += static_cast<double>(t.unravelling) * t.unravelling;
  }
  check_degenerate(bad, types.size(), opt);
  ComplexityEstimate est;
  est.n_samples = types.size() - bad;
  const double n = static_cast<double>(est.n_samples);
  est.value = sum / n;
  const double var = est.n_samples > 1 ? std::max(0.0, (sum2 - n * est.value * est.value) / (n - 1.0)) : 0.0;
  est.stderr_ = std::sqrt(var / n);
  est.unclassified_fraction = static_cast<double>(unclassified) / n;
  est.direction_hash = hash_directions(dirs);
  return est;
}

ComplexityEstimate aun(const PolyCurve& c, std::size_t n_dirs, std::uint64_t seed, const KnotoidTable& table,
                       const ProjectionOptions& opt) {
  require(n_dirs >= 2, "aun needs n_dirs >= 2");
  const auto dirs = sample_directions(n_dirs, DirectionScheme::fibonacci_rotated(seed));
  return aun(c.vertices(), dirs, table, seed, opt);
}

std::vector<std::size_t> tun_grid(std::size_t n, std::size_t stride) {
  require(stride >= 1, "stride must be >= 1");
  require(n >= 3, "tun needs at least 3 vertices");
  std::vector<std::size_t> g;
  for (std::size_t i = 0; i < n; i += stride) g.push_back(i);
  if (g.back() != n - 1) g.push_back(n - 1);
  return g;
}

double tun_cell_weight(std::size_t n, std::size_t stride) {
  const double h = static_cast<double>(stride) / static_cast<double>(n - 1);
  return h * h;
}

ComplexityEstimate tun(std::span<const Vec3> vertices, std::size_t stride, std::span<const Direction> dirs,
                       const KnotoidTable& table, std::uint64_t retry_seed, const ProjectionOptions& opt) {
  const auto grid = tun_grid(vertices.size(), stride);
  std::vector<std::pair<std::size_t, std::size_t>> subchains;
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = i + 1; j < grid.size(); ++j)
      if (grid[j] - grid[i] >= 2) subchains.emplace_back(grid[i], grid[j]);
  std::vector<ComplexityEstimate> parts(subchains.size());
  ProjectionOptions inner = opt;
  inner.threads = 1;
  parallel_for(subchains.size(), opt.threads, [&](std::size_t k) {
    const auto [a, b] = subchains[k];
    parts[k] = aun(vertices.subspan(a, b - a + 1), dirs, table, derive_seed(retry_seed, k), inner);
  });
  const double w = tun_cell_weight(vertices.size(), stride);
  ComplexityEstimate est;
  double var = 0.0, unclassified = 0.0;
  for (const auto& p : parts) {
    est.value += w * p.value;
    var += w * w * p.stderr_ * p.stderr_;
    est.n_samples += p.n_samples;
    unclassified += p.unclassified_fraction;
  }
  est.stderr_ = std::sqrt(var);
  est.unclassified_fraction = parts.empty() ? 0.0 : unclassified / static_cast<double>(parts.size());
  est.direction_hash = hash_directions(dirs);
  return est;
}

ComplexityEstimate tun(const PolyCurve& c, std::size_t stride, std::size_t n_dirs, std::uint64_t seed,
                       const KnotoidTable& table, const ProjectionOptions& opt) {
  require(n_dirs >= 2, "tun needs n_dirs >= 2");
  const auto dirs = sample_directions(n_dirs, DirectionScheme::fibonacci_rotated(seed));
  return tun(c.vertices(), stride, dirs, table, seed, opt);
}

}  // namespace topsteer
