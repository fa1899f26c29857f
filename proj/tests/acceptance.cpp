// Acceptance runner: one PASS/FAIL line per criterion.
//   acceptance            smoke scale (criteria 6-9 reduced, orderings only for 9)
//   acceptance --full     desk scale as stated in the criteria
// --known-failure N keeps criterion N's FAIL line but leaves the exit status alone.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "support.hpp"
#include "topsteer/complexity.hpp"
#include "topsteer/dynamics.hpp"
#include "topsteer/error.hpp"
#include "topsteer/knot_id.hpp"
#include "topsteer/pipelines.hpp"
#include "topsteer/rng.hpp"

using namespace topsteer;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Options {
  bool full = false;
  int threads = 1;
  fs::path scratch;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const KnotoidTable& knotoids() {
  static const KnotoidTable t = KnotoidTable::load(testsupport::data_path("knotoid_table.csv"));
  return t;
}
const KnotTable& knots() {
  static const KnotTable t = KnotTable::load(testsupport::data_path("knot_table.csv"));
  return t;
}

json pipeline(const std::string& cmd, const std::map<std::string, std::string>& kv) {
  RunConfig cfg(cmd);
  for (const auto& [k, v] : kv) cfg.set(k, v);
  return json::parse(run_pipeline(cfg));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Missing values (never reached) sort last.
double median(std::vector<std::optional<int>> v) {
  std::vector<double> x;
  for (const auto& o : v) x.push_back(o ? *o : INFINITY);
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();
  return n % 2 ? x[n / 2] : 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

std::string list(const std::vector<std::optional<int>>& v) {
  std::string s;
  for (const auto& o : v) s += (s.empty() ? "" : " ") + (o ? std::to_string(*o) : std::string("-"));
  return s;
}

// 1 -----------------------------------------------------------------------
Outcome invariance(const Options&) {
  std::mt19937_64 rng(1);
  int stable = 0;
  const int n = 1000;
  for (int i = 0; i < n; ++i) {
    const auto d = testsupport::random_diagram(rng, 1 + static_cast<int>(rng() % 8));
    const auto fp = bracket_fingerprint(d);
    auto e = d;
    const int moves = 1 + static_cast<int>(rng() % 4);
    for (int m = 0; m < moves; ++m) e = testsupport::random_move(e, rng);
    stable += is_planar(e) && bracket_fingerprint(e) == fp;
  }
  return {stable == n, std::to_string(stable) + "/" + std::to_string(n) + " fingerprints stable"};
}

// 2 -----------------------------------------------------------------------
Outcome oracles(const Options&) {
  std::mt19937_64 rng(2);
  int agree = 0, curves = 0;
  while (curves < 500) {
    const auto walk = testsupport::random_walk(rng, 20 + rng() % 60);
    const auto dir = sample_directions(1, DirectionScheme::uniform_random(rng()))[0];
    const auto g = project(walk, dir);
    std::vector<CrossingRecord> fast;
    try {
      fast = find_crossings(g);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::degenerate_projection) continue;
      throw;
    }
    ++curves;
    const auto slow = testsupport::brute_force_crossings(g);
    std::multiset<std::tuple<int, int, int>> a, b;
    for (const auto& c : fast) a.insert({c.seg_over, c.seg_under, c.sign});
    for (const auto& c : slow) b.insert({c.over, c.under, c.sign});
    agree += a == b;
  }
  int entries = 0, match = 0;
  for (const auto& e : knotoids().entries()) {
    if (e.representative.empty()) continue;
    const auto d = Diagram::parse(e.representative);
    if (d.crossings() > 4) continue;
    ++entries;
    const auto u = brute_force_unravel(d, 8);
    match += u && *u == e.unravelling;
  }
  return {agree == curves && match == entries,
          std::to_string(agree) + "/" + std::to_string(curves) + " crossing sets equal; " + std::to_string(match) +
              "/" + std::to_string(entries) + " table entries (<= 4 crossings) match BFS"};
}

// 3 -----------------------------------------------------------------------
Outcome knot_identification(const Options& o) {
  struct Case {
    const char* file;
    const char* name;
    std::int64_t det;
  };
  bool ok = true;
  std::string detail;
  for (const Case& k : {Case{"trefoil.xyz", "3_1", 3}, Case{"figure_eight.xyz", "4_1", 5},
                        Case{"granny.xyz", "3_1#3_1", 9}}) {
    const auto d = stochastic_closure(read_curve(testsupport::data_path(k.file)), 100, 3, knots(), o.threads);
    const auto it = d.fractions.find(k.name);
    const double f = it == d.fractions.end() ? 0.0 : it->second;
    std::int64_t det = 0;
    for (const auto& e : knots().entries())
      if (e.name == d.dominant) det = e.determinant;
    ok = ok && d.dominant == k.name && f >= 0.9 && det == k.det;
    detail += std::string(detail.empty() ? "" : "; ") + k.file + " -> " + d.dominant + " " + fmt("%.2f", f) +
              " det " + std::to_string(det);
  }
  return {ok, detail};
}

// 4 -----------------------------------------------------------------------
Outcome aun_sanity(const Options& o) {
  ProjectionOptions opt;
  opt.threads = o.threads;
  const auto straight = aun(read_curve(testsupport::data_path("straight.xyz")), 500, 4, knotoids(), opt);
  const auto slip = read_curve(testsupport::data_path("slipknot.xyz"));
  const auto a = aun(slip, 500, 4, knotoids(), opt);
  const auto t = tun(slip, 4, 64, 4, knotoids(), opt);
  const bool ok = straight.value == 0.0 && a.value < 0.1 && t.value > 5.0 * a.stderr_ && t.value > 5.0 * t.stderr_;
  return {ok, "straight AUN " + fmt("%g", straight.value) + "; slipknot AUN " + fmt("%.4f", a.value) + " (stderr " +
                  fmt("%.4f", a.stderr_) + "), TUN " + fmt("%.4f", t.value) + " (stderr " + fmt("%.4f", t.stderr_) +
                  ")"};
}

// 5 -----------------------------------------------------------------------
Outcome thermostat(const Options&) {
  auto s = init_coil(38, 5);
  DynamicsConfig eq;
  eq.dt = 0.001;
  eq.steps = 20000;
  eq.seed = 1;
  run_langevin(s, eq);
  DynamicsConfig cfg = eq;
  cfg.steps = 100000;
  cfg.seed = 2;
  double ke = 0.0, max_bond = 0.0;
  long samples = 0;
  run_langevin(s, cfg, [&](const ChainState& st, int) {
    ke += kinetic_energy(st);
    ++samples;
    for (std::size_t i = 0; i + 1 < st.size(); ++i) max_bond = std::max(max_bond, distance(st.x[i], st.x[i + 1]));
  });
  const double per_dof = ke / static_cast<double>(samples) / (3.0 * 38.0);
  const double lp = measure_persistence(ChainParams{}, CalibrationOptions{});
  const bool ok = std::abs(per_dof - 0.5) <= 0.05 * 0.5 && max_bond < 1.5 && lp >= 9.0 && lp <= 11.0;
  return {ok, "KE/DOF " + fmt("%.4f", per_dof) + " (target 0.5); max bond " + fmt("%.3f", max_bond) + "; lp " +
                  fmt("%.2f", lp)};
}

// 6 -----------------------------------------------------------------------
Outcome unknotting(const Options& o) {
  const int seeds = o.full ? 10 : 3;
  auto run = [&](int seed, const std::string& functional, bool undirected) -> std::optional<int> {
    const auto r = pipeline("unknot", {{"seed", std::to_string(seed)},
                                       {"functional", functional},
                                       {"undirected", undirected ? "true" : "false"},
                                       {"stop", "0.05"},
                                       {"sustain", "3"},
                                       {"iters", "100"},
                                       {"snapshots", "false"},
                                       {"threads", std::to_string(o.threads)},
                                       {"out", (o.scratch / "c6").string()}});
    if (r["stop_iteration"].is_null()) return std::nullopt;
    return r["stop_iteration"].get<int>();
  };
  std::vector<std::optional<int>> directed, undirected, tun_runs;
  for (int s = 0; s < seeds; ++s) directed.push_back(run(s, "aun", false));
  for (int s = 0; s < seeds; ++s) undirected.push_back(run(s, "aun", true));
  for (int s = 0; s < seeds; ++s) tun_runs.push_back(run(s, "tun", false));
  const long unknotted = std::count_if(directed.begin(), directed.end(), [](auto v) { return v.has_value(); });
  const double med = median(directed), med_u = median(undirected);
  const long tun_faster = std::count_if(tun_runs.begin(), tun_runs.end(), [&](auto v) { return v && *v <= med; });
  const int need_unknot = o.full ? 8 : 2, need_tun = o.full ? 6 : 2;
  const bool ok = unknotted >= need_unknot && med < med_u && tun_faster >= need_tun;
  return {ok, std::to_string(unknotted) + "/" + std::to_string(seeds) + " unknotted [" + list(directed) +
                  "], median " + fmt("%g", med) + " vs undirected " + fmt("%g", med_u) + " [" + list(undirected) +
                  "]; TUN <= AUN median for " + std::to_string(tun_faster) + " [" + list(tun_runs) + "]"};
}

// 7 -----------------------------------------------------------------------
Outcome baseline(const Options& o) {
  const int n_snap = o.full ? 2000 : 200;
  const int spacing = o.full ? 20000 : 10000;
  auto s = init_coil(52, 7);
  DynamicsConfig cfg;
  cfg.dt = 0.005;
  cfg.steps = 100000;
  cfg.seed = 70;
  run_langevin(s, cfg);
  cfg.steps = spacing;
  ProjectionOptions opt;
  opt.threads = o.threads;
  int nontrivial = 0, knotted = 0;
  for (int i = 0; i < n_snap; ++i) {
    cfg.seed = derive_seed(71, static_cast<std::uint64_t>(i));
    run_langevin(s, cfg);
    const PolyCurve c(s.x);
    nontrivial += aun(c, 500, static_cast<std::uint64_t>(i), knotoids(), opt).value > 0.0;
    knotted += stochastic_closure(c, 10, static_cast<std::uint64_t>(i), knots(), o.threads).dominant != "0_1";
  }
  const double f = static_cast<double>(nontrivial) / n_snap, k = static_cast<double>(knotted) / n_snap;
  // the smoke sample is too small to resolve the lower bound
  const bool ok = (o.full ? f >= 0.002 : true) && f <= 0.03 && k <= 0.003;
  return {ok, std::to_string(n_snap) + " snapshots: nontrivial AUN " + fmt("%.2f%%", 100 * f) + ", knotted " +
                  fmt("%.2f%%", 100 * k)};
}

// 8 -----------------------------------------------------------------------
Outcome knotting(const Options& o) {
  const int seeds = o.full ? 10 : 1;
  int trefoil = 0, then_51 = 0;
  std::string detail;
  for (int s = 0; s < seeds; ++s) {
    const auto r = pipeline("knot", {{"seed", std::to_string(s)},
                                     {"iters", "600"},
                                     {"snapshots", "false"},
                                     {"threads", std::to_string(o.threads)},
                                     {"out", (o.scratch / "c8").string()}});
    std::optional<int> t31, t51;
    for (const auto& t : r["knot_types"]) {
      if (t["type"] == "3_1" && !t31) t31 = t["first_iteration"].get<int>();
      if (t["type"] == "5_1" && t31 && !t51) t51 = t["first_iteration"].get<int>();
    }
    trefoil += t31.has_value();
    then_51 += t51.has_value();
    detail += (detail.empty() ? "" : " ") + std::to_string(s) + ":" + (t31 ? std::to_string(*t31) : "-") + "/" +
              (t51 ? std::to_string(*t51) : "-");
  }
  const bool ok = o.full ? trefoil >= 5 && then_51 >= 2 : trefoil >= 1;
  return {ok, std::to_string(trefoil) + "/" + std::to_string(seeds) + " reach 3_1, " + std::to_string(then_51) +
                  " then 5_1 (seed:first 3_1/first 5_1 " + detail + ")"};
}

// 9 -----------------------------------------------------------------------
struct GrowStats {
  double knotted = 0.0;
  double twist = 0.0;
  std::size_t population = 0;
  std::size_t twist_count = 0;
};

GrowStats grow_model(const Options& o, const std::string& model, int walks, int length) {
  const auto out = o.scratch / ("c9_" + model);
  pipeline("grow", {{"model", model},
                    {"walks", std::to_string(walks)},
                    {"length", std::to_string(length)},
                    {"threads", std::to_string(o.threads)},
                    {"out", out.string()}});
  GrowStats g;
  std::istringstream in(slurp(out / "twist.csv"));
  std::string line;
  std::getline(in, line);
  std::vector<std::string> header;
  {
    std::istringstream h(line);
    std::string col;
    while (std::getline(h, col, ',')) header.push_back(col);
  }
  while (std::getline(in, line)) {
    std::istringstream r(line);
    std::string cell;
    std::map<std::string, std::string> row;
    for (const auto& col : header) {
      std::getline(r, cell, ',');
      row[col] = cell;
    }
    if (std::stoi(row["length"]) != length) continue;
    g.population = std::stoul(row["population"]);
    g.twist_count = std::stoul(row["twist"]);
    g.knotted = static_cast<double>(std::stoul(row["knotted"])) / static_cast<double>(g.population);
    g.twist = std::stod(row["twist_fraction"]);
  }
  return g;
}

// one-sided two-proportion z-test for p1 > p2
double one_sided_p(std::size_t x1, std::size_t n1, std::size_t x2, std::size_t n2) {
  const double p1 = static_cast<double>(x1) / n1, p2 = static_cast<double>(x2) / n2;
  const double p = static_cast<double>(x1 + x2) / (n1 + n2);
  const double se = std::sqrt(p * (1 - p) * (1.0 / n1 + 1.0 / n2));
  if (se == 0.0) return p1 > p2 ? 0.0 : 1.0;
  return 0.5 * std::erfc((p1 - p2) / se / std::sqrt(2.0));
}

Outcome growth(const Options& o) {
  const int walks = o.full ? 100 : 20, length = o.full ? 250 : 120;
  const std::vector<std::string> models{"unbiased", "protein", "protein_no_helix", "protein_only_helix"};
  std::map<std::string, GrowStats> st;
  std::string detail;
  for (const auto& m : models) {
    st[m] = grow_model(o, m, walks, length);
    detail += (detail.empty() ? "" : "; ") + m + " knotted " + fmt("%.0f%%", 100 * st[m].knotted) + " twist " +
              fmt("%.0f%%", 100 * st[m].twist);
  }
  const auto& u = st["unbiased"];
  const auto& h = st["protein_only_helix"];
  bool order = true;
  for (const auto& m : models) order = order && st[m].knotted >= u.knotted;
  const bool twist_order = h.twist >= u.twist;
  if (!o.full) return {order && twist_order, "orderings only; " + detail};
  bool a = true;
  for (const auto& m : models) a = a && st[m].knotted >= 0.30;
  const double p = one_sided_p(h.twist_count, h.population, u.twist_count, u.population);
  const bool c = h.twist > u.twist && p < 0.05 && std::abs(h.twist - 0.08) <= 0.04 && std::abs(u.twist - 0.02) <= 0.04;
  return {a && order && c, std::string("(a) ") + (a ? "ok" : "fail") + " (b) " + (order ? "ok" : "fail") + " (c) " +
                               (c ? "ok" : "fail") + " p=" + fmt("%.3f", p) + "; " + detail};
}

// 10 ----------------------------------------------------------------------
Outcome determinism(const Options& o) {
  struct Run {
    std::string cmd;
    std::map<std::string, std::string> kv;
    std::vector<std::string> files;
  };
  const std::vector<Run> runs{
      {"grow", {{"walks", "3"}, {"length", "60"}, {"k", "4"}, {"dirs", "16"}, {"closures", "5"}, {"seed", "3"}},
       {"kymograph.csv", "twist.csv", "walks.csv"}},
      {"grow",
       {{"model", "protein_only_helix"}, {"walks", "2"}, {"length", "40"}, {"k", "3"}, {"dirs", "8"}, {"seed", "4"}},
       {"kymograph.csv", "twist.csv", "walks.csv"}},
      {"unknot", {{"iters", "3"}, {"k", "4"}, {"horizon", "200"}, {"dirs", "16"}, {"closures", "4"}, {"seed", "5"}},
       {"trajectory.csv", "final.xyz", "snapshots/iter_00002.xyz"}},
      {"knot", {{"iters", "2"}, {"k", "3"}, {"horizon", "100"}, {"dirs", "16"}, {"equilibrate", "500"}, {"seed", "6"}},
       {"trajectory.csv", "final.xyz"}},
      {"knot-id", {{"curve", testsupport::data_path("trefoil.xyz")}, {"closures", "10"}, {"seed", "7"}},
       {"knot_id.json"}},
  };
  int identical = 0, total = 0;
  for (const auto& r : runs) {
    std::vector<std::string> first;
    for (int rep = 0; rep < 2; ++rep) {
      auto kv = r.kv;
      const auto out = o.scratch / ("c10_" + r.cmd + std::to_string(rep));
      fs::remove_all(out);
      kv["out"] = out.string();
      kv["threads"] = rep == 0 ? "1" : std::to_string(std::max(2, o.threads));
      pipeline(r.cmd, kv);
      for (std::size_t f = 0; f < r.files.size(); ++f) {
        const auto bytes = slurp(out / r.files[f]);
        if (rep == 0) {
          first.push_back(bytes);
        } else {
          ++total;
          identical += !bytes.empty() && bytes == first[f];
        }
      }
    }
  }
  return {identical == total, std::to_string(identical) + "/" + std::to_string(total) +
                                  " output files byte-identical across reruns (1 vs 2+ threads)"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  Options o;
  std::vector<int> only, known;
  std::string scratch = (fs::temp_directory_path() / "topsteer_acceptance").string();
  app.add_flag("--full", o.full, "desk-scale runs for criteria 6-9");
  app.add_option("--only", only, "criteria to run (default all)");
  app.add_option("--threads", o.threads, "worker threads");
  app.add_option("--scratch", scratch, "scratch directory");
  app.add_option("--known-failure", known, "criteria whose failure is documented and not counted");
  CLI11_PARSE(app, argc, argv);
  o.scratch = scratch;
  fs::create_directories(o.scratch);

  const std::vector<std::pair<int, std::function<Outcome(const Options&)>>> criteria{
      {1, invariance}, {2, oracles},  {3, knot_identification}, {4, aun_sanity}, {5, thermostat},
      {6, unknotting}, {7, baseline}, {8, knotting},            {9, growth},     {10, determinism}};
  int failed = 0;
  std::printf("mode: %s\n", o.full ? "full" : "smoke");
  for (const auto& [id, fn] : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome r;
    try {
      r = fn(o);
    } catch (const std::exception& e) {
      r = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool scaled = !o.full && id >= 6 && id <= 9;
    const bool is_known = std::find(known.begin(), known.end(), id) != known.end();
    std::printf("criterion %d%s: %s: %s [%.0f s]\n", id, scaled ? " (smoke)" : "",
                r.pass ? "PASS" : (is_known ? "FAIL (known)" : "FAIL"), r.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !r.pass && !is_known;
  }
  return failed == 0 ? 0 : 1;
}
