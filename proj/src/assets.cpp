#include "topsteer/assets.hpp"

#include <cstdlib>
#include <memory>
#include <mutex>
#include <optional>

#include "topsteer/knot_id.hpp"
#include "topsteer/knotoid.hpp"

#ifndef TOPSTEER_DEFAULT_DATA_DIR
#define TOPSTEER_DEFAULT_DATA_DIR "data"
#endif

namespace topsteer {

namespace {

std::mutex g_mutex;
std::optional<std::filesystem::path> g_override;

struct Loaded {
  std::filesystem::path dir;
  std::shared_ptr<const KnotoidTable> knotoids;
  std::shared_ptr<const KnotTable> knots;
};
Loaded g_loaded;

std::filesystem::path resolve_locked() {
  if (g_override) return *g_override;
  if (const char* env = std::getenv("TOPSTEER_DATA_DIR"); env && *env) return env;
  return TOPSTEER_DEFAULT_DATA_DIR;
}

void refresh_locked() {
  const auto dir = resolve_locked();
  if (dir != g_loaded.dir) g_loaded = Loaded{dir, nullptr, nullptr};
}

}  // namespace

std::filesystem::path data_dir() {
  std::lock_guard<std::mutex> lock(g_mutex);
  return resolve_locked();
}

void set_data_dir(const std::filesystem::path& dir) {
  std::lock_guard<std::mutex> lock(g_mutex);
  g_override = dir;
}

// Tables are never freed once loaded, so returned references stay valid
// even if the data directory changes later.
const KnotoidTable& default_knotoid_table() {
  static std::vector<std::shared_ptr<const KnotoidTable>> keep;
  std::lock_guard<std::mutex> lock(g_mutex);
  refresh_locked();
  if (!g_loaded.knotoids) {
    g_loaded.knotoids = std::make_shared<const KnotoidTable>(KnotoidTable::load(g_loaded.dir / "knotoid_table.csv"));
    keep.push_back(g_loaded.knotoids);
  }
  return *g_loaded.knotoids;
}

const KnotTable& default_knot_table() {
  static std::vector<std::shared_ptr<const KnotTable>> keep;
  std::lock_guard<std::mutex> lock(g_mutex);
  refresh_locked();
  if (!g_loaded.knots) {
    g_loaded.knots = std::make_shared<const KnotTable>(KnotTable::load(g_loaded.dir / "knot_table.csv"));
    keep.push_back(g_loaded.knots);
  }
  return *g_loaded.knots;
}

}  // namespace topsteer
