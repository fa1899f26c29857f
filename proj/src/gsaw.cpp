#include "topsteer/gsaw.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "topsteer/error.hpp"
#include "topsteer/ingest.hpp"
#include "topsteer/rng.hpp"

namespace topsteer {

namespace {

Vec3 fallback_normal(const Vec3& e) {
  Vec3 axis{1.0, 0.0, 0.0};
  const double ax = std::abs(e.x), ay = std::abs(e.y), az = std::abs(e.z);
  if (ay <= ax && ay <= az) axis = {0.0, 1.0, 0.0};
  if (az < ax && az < ay) axis = {0.0, 0.0, 1.0};
  return normalized(cross(axis, e));
}

}  // namespace

Vec3 place_bead(const Vec3& a, const Vec3& b, const Vec3& c, AnglePair ang, double bond) {
  const Vec3 bc = c - b;
  const double lbc = norm(bc);
  require(lbc > 0.0, "place_bead: coincident last two beads");
  const Vec3 e = bc / lbc;
  Vec3 n = cross(b - a, e);
  const double ln = norm(n);
  if (ln <= 1e-12 * norm(b - a)) {
    n = fallback_normal(e);
  } else {
    n = n / ln;
  }
  const Vec3 m = cross(n, e);
  const double st = std::sin(ang.theta);
  const Vec3 dir = e * -std::cos(ang.theta) + m * (st * std::cos(ang.phi)) + n * (st * std::sin(ang.phi));
  return c + dir * (bond / norm(dir));
}

std::vector<Vec3> chain_from_angles(std::span<const AnglePair> pairs, double initial_theta, double bond) {
  std::vector<Vec3> x;
  x.reserve(pairs.size() + 3);
  x.push_back({0.0, 0.0, 0.0});
  x.push_back({bond, 0.0, 0.0});
  x.push_back(x[1] + Vec3{-std::cos(initial_theta), std::sin(initial_theta), 0.0} * bond);
  for (const auto& p : pairs) {
    const std::size_t k = x.size();
    x.push_back(place_bead(x[k - 3], x[k - 2], x[k - 1], p, bond));
  }
  return x;
}

AngleModel AngleModel::uniform() {
  AngleModel m;
  m.kind_ = Kind::uniform;
  return m;
}

AngleModel AngleModel::semiflexible(double variance) {
  require(variance > 0.0 && std::isfinite(variance), "semiflexible model needs a positive variance");
  AngleModel m;
  m.kind_ = Kind::semiflexible;
  m.variance_ = variance;
  return m;
}

AngleModel AngleModel::empirical(std::shared_ptr<const AngleDataset> data, Subset subset) {
  if (!data || data->size() == 0) fail(ErrorCode::empty_input, "empirical angle model needs a non-empty dataset");
  require(data->helical.size() == data->pairs.size(), "dataset helical flags do not match pairs");
  AngleModel m;
  m.kind_ = Kind::empirical;
  for (std::size_t i = 0; i < data->size(); ++i) {
    const bool h = data->helical[i] != 0;
    if (subset == Subset::full || (subset == Subset::only_helices) == h) m.pool_.push_back(static_cast<std::uint32_t>(i));
  }
  if (m.pool_.empty()) fail(ErrorCode::degenerate_partition, "empirical angle model: selected subset is empty");
  m.data_ = std::move(data);
  return m;
}

AngleModel AngleModel::fixed(AnglePair pair) {
  AngleModel m;
  m.kind_ = Kind::fixed;
  m.fixed_ = pair;
  return m;
}

AnglePair AngleModel::draw(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  switch (kind_) {
    case Kind::uniform: {
      const double c = 2.0 * u01(rng) - 1.0;
      return {std::acos(c), 2.0 * std::numbers::pi * u01(rng)};
    }
    case Kind::semiflexible: {
      std::normal_distribution<double> g(0.0, std::sqrt(variance_));
      double theta;
      do theta = std::numbers::pi - std::abs(g(rng));
      while (theta < 0.0);
      return {theta, 2.0 * std::numbers::pi * u01(rng)};
    }
    case Kind::empirical: {
      std::uniform_int_distribution<std::size_t> pick(0, pool_.size() - 1);
      return data_->pairs[pool_[pick(rng)]];
    }
    case Kind::fixed:
      return fixed_;
  }
  return fixed_;
}

GrowthState::GrowthState(OverlapPolicy policy, int max_attempts) : policy_(policy), max_attempts_(max_attempts) {
  require(max_attempts >= 1, "max_attempts must be >= 1");
}

std::int64_t GrowthState::cell_of(double v) { return static_cast<std::int64_t>(std::floor(v / kBondLength)); }

GrowthState::CellKey GrowthState::key(std::int64_t x, std::int64_t y, std::int64_t z) {
  // 21 bits per axis, offset to non-negative
  constexpr std::int64_t off = 1 << 20;
  return (static_cast<std::uint64_t>(x + off) << 42) | (static_cast<std::uint64_t>(y + off) << 21) |
         static_cast<std::uint64_t>(z + off);
}

bool GrowthState::would_overlap(const Vec3& p) const {
  const std::int64_t cx = cell_of(p.x), cy = cell_of(p.y), cz = cell_of(p.z);
  const std::size_t last = beads_.empty() ? 0 : beads_.size() - 1;
  for (std::int64_t dx = -1; dx <= 1; ++dx)
    for (std::int64_t dy = -1; dy <= 1; ++dy)
      for (std::int64_t dz = -1; dz <= 1; ++dz) {
        auto it = cells_.find(key(cx + dx, cy + dy, cz + dz));
        if (it == cells_.end()) continue;
        for (std::uint32_t j : it->second) {
          if (j == last) continue;
          if (norm2(beads_[j] - p) < kContact * kContact) return true;
        }
      }
  return false;
}

void GrowthState::push(const Vec3& p) {
  require(is_finite(p), "non-finite bead position");
  cells_[key(cell_of(p.x), cell_of(p.y), cell_of(p.z))].push_back(static_cast<std::uint32_t>(beads_.size()));
  beads_.push_back(p);
}

void GrowthState::mark_trapped() {
  status_ = GrowthStatus::trapped;
  trapped_at_ = beads_.size();
}

bool overlaps_brute(std::span<const Vec3> beads, const Vec3& p) {
  for (std::size_t j = 0; j + 1 < beads.size(); ++j)
    if (norm2(beads[j] - p) < GrowthState::kContact * GrowthState::kContact) return true;
  return false;
}

void grow(GrowthState& state, const AngleModel& model, std::size_t n_new, std::mt19937_64& rng) {
  require(n_new >= 1, "grow: n_new must be >= 1");
  if (state.status() != GrowthStatus::growing) return;
  for (std::size_t added = 0; added < n_new; ++added) {
    const auto& x = state.beads();
    const std::size_t k = x.size();
    if (k == 0) {
      state.push({0.0, 0.0, 0.0});
      continue;
    }
    if (k == 1) {
      state.push({kBondLength, 0.0, 0.0});
      continue;
    }
    Vec3 p;
    bool placed = false;
    for (int attempt = 0; attempt < state.max_attempts(); ++attempt) {
      const AnglePair a = model.draw(rng);
      if (k == 2) {
        p = x[1] + Vec3{-std::cos(a.theta), std::sin(a.theta), 0.0} * kBondLength;
      } else {
        p = place_bead(x[k - 3], x[k - 2], x[k - 1], a);
      }
      if (!state.would_overlap(p)) {
        placed = true;
        break;
      }
    }
    if (!placed) {
      if (state.policy() == OverlapPolicy::strict) {
        state.mark_trapped();
        return;
      }
      state.push_overlapping(p);
      continue;
    }
    state.push(p);
  }
}

const std::vector<std::string>& model_names() {
  static const std::vector<std::string> names{"unbiased", "protein", "protein_no_helix", "protein_only_helix",
                                              "uniform"};
  return names;
}

bool model_needs_dataset(const std::string& name) { return name.rfind("protein", 0) == 0; }

AngleModel model_by_name(const std::string& name, std::shared_ptr<const AngleDataset> data) {
  if (name == "unbiased") return AngleModel::semiflexible();
  if (name == "uniform") return AngleModel::uniform();
  if (name == "protein") return AngleModel::empirical(std::move(data), AngleModel::Subset::full);
  if (name == "protein_no_helix") return AngleModel::empirical(std::move(data), AngleModel::Subset::no_helices);
  if (name == "protein_only_helix") return AngleModel::empirical(std::move(data), AngleModel::Subset::only_helices);
  fail(ErrorCode::invalid_argument, "unknown angle model '" + name + "'");
}

}  // namespace topsteer
