#include "topsteer/pipelines.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"

#include "topsteer/assets.hpp"
#include "topsteer/complexity.hpp"
#include "topsteer/dynamics.hpp"
#include "topsteer/error.hpp"
#include "topsteer/gsaw.hpp"
#include "topsteer/ingest.hpp"
#include "topsteer/knot_id.hpp"
#include "topsteer/knotoid.hpp"
#include "topsteer/parallel.hpp"
#include "topsteer/rng.hpp"
#include "topsteer/steering.hpp"

namespace topsteer {

using json = nlohmann::ordered_json;

namespace {

const std::map<std::string, std::vector<ConfigKey>>& key_table() {
  static const std::map<std::string, std::vector<ConfigKey>> table = [] {
    const std::vector<ConfigKey> steer_common{
        {"k", "40", "candidates per iteration"},
        {"horizon", "500", "propagator steps per candidate"},
        {"dt", "0.001", "Langevin time step"},
        {"functional", "aun", "aun or tun"},
        {"dirs", "64", "projection directions per evaluation"},
        {"stride", "4", "tun subchain grid stride"},
        {"sustain", "3", "iterations the stop threshold must hold"},
        {"propagator", "langevin", "langevin or crankshaft"},
        {"undirected", "false", "K = 1 control run (ignores k)"},
        {"snapshots", "true", "write per-iteration curve snapshots"},
        {"seed", "0", "master seed"},
        {"threads", "0", "worker threads (0 = all cores)"},
    };
    std::map<std::string, std::vector<ConfigKey>> t;
    t["analyze"] = {
        {"curve", "", "curve file (x y z per line)"},
        {"functional", "aun", "aun or tun"},
        {"dirs", "500", "projection directions"},
        {"stride", "4", "tun subchain grid stride"},
        {"subchain_a", "", "first vertex of a subchain"},
        {"subchain_b", "", "last vertex of a subchain"},
        {"spectrum", "false", "include the knotoid spectrum"},
        {"seed", "0", "master seed"},
        {"threads", "0", "worker threads (0 = all cores)"},
        {"out", "", "output directory (optional)"},
    };
    auto unknot = steer_common;
    unknot.insert(unknot.begin(), {"curve", "@data/deep_trefoil.xyz", "initial configuration"});
    unknot.push_back({"iters", "100", "maximum iterations"});
    unknot.push_back({"stop", "0.02", "stop when the value stays below this (empty = never)"});
    unknot.push_back({"closures", "0", "stochastic closures per iteration for knot_type"});
    unknot.push_back({"out", "unknot_out", "output directory"});
    t["unknot"] = unknot;
    auto knot = steer_common;
    for (auto& key : knot) {
      if (key.name == "dt") key.default_value = "0.005";
      if (key.name == "dirs") key.default_value = "256";
    }
    knot.insert(knot.begin(), {"curve", "", "initial configuration (empty: equilibrated coil)"});
    knot.insert(knot.begin() + 1, {"n", "52", "beads of the generated coil"});
    knot.insert(knot.begin() + 2, {"equilibrate", "20000", "Langevin steps to equilibrate the generated coil"});
    knot.push_back({"iters", "600", "maximum iterations"});
    knot.push_back({"stop", "", "stop when the value stays above this (empty = never)"});
    knot.push_back({"closures", "10", "stochastic closures per iteration for knot_type"});
    knot.push_back({"out", "knot_out", "output directory"});
    t["knot"] = knot;
    t["grow"] = {
        {"model", "unbiased", "unbiased, protein, protein_no_helix, protein_only_helix, uniform"},
        {"walks", "100", "number of walks"},
        {"length", "250", "target length in beads"},
        {"k", "20", "candidates per step"},
        {"beads_per_step", "10", "beads added per step"},
        {"dirs", "64", "projection directions per evaluation"},
        {"closures", "50", "stochastic closures per recorded length"},
        {"dataset", "@data/protein_angles.csv", "angle dataset for protein models"},
        {"policy", "strict", "strict or weak self-avoidance"},
        {"max_attempts", "1000", "angle draws per bead before trapping"},
        {"seed", "0", "master seed"},
        {"threads", "0", "worker threads (0 = all cores)"},
        {"out", "grow_out", "output directory"},
    };
    t["knot-id"] = {
        {"curve", "", "curve file"},
        {"closures", "100", "number of stochastic closures"},
        {"seed", "0", "master seed"},
        {"threads", "0", "worker threads (0 = all cores)"},
        {"out", "", "output directory (optional)"},
    };
    t["ingest"] = {
        {"in", "", "directory of PDB files (.pdb, .ent, optionally .gz)"},
        {"out", "", "dataset CSV to write"},
        {"theta_min", "1.45", "helical region"},
        {"theta_max", "1.75", "helical region"},
        {"phi_min", "0.6", "helical region"},
        {"phi_max", "1.2", "helical region"},
    };
    return t;
  }();
  return table;
}

// Typed access to a resolved configuration.
class Params {
 public:
  explicit Params(std::map<std::string, std::string> v) : v_(std::move(v)) {}

  const std::string& str(const std::string& key) const { return v_.at(key); }
  bool has(const std::string& key) const { return !v_.at(key).empty(); }

  std::string required(const std::string& key) const {
    if (!has(key)) fail(ErrorCode::invalid_configuration, "missing required key '" + key + "'");
    return str(key);
  }

  std::filesystem::path path(const std::string& key) const {
    const std::string s = required(key);
    if (s.rfind("@data/", 0) == 0) return data_dir() / s.substr(6);
    return s;
  }

  long long integer(const std::string& key, long long lo, long long hi) const {
    const std::string s = required(key);
    long long out = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size() || out < lo || out > hi)
      fail(ErrorCode::invalid_configuration, "key '" + key + "': expected an integer in [" + std::to_string(lo) +
                                                 ", " + std::to_string(hi) + "], got '" + s + "'");
    return out;
  }

  std::uint64_t seed(const std::string& key) const {
    const std::string s = required(key);
    std::uint64_t out = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size())
      fail(ErrorCode::invalid_configuration, "key '" + key + "': expected an unsigned integer, got '" + s + "'");
    return out;
  }

  double real(const std::string& key) const {
    const std::string s = required(key);
    double out = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size() || !std::isfinite(out))
      fail(ErrorCode::invalid_configuration, "key '" + key + "': expected a number, got '" + s + "'");
    return out;
  }

  bool boolean(const std::string& key) const {
    const std::string s = required(key);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    fail(ErrorCode::invalid_configuration, "key '" + key + "': expected true or false, got '" + s + "'");
  }

  std::string choice(const std::string& key, std::initializer_list<const char*> allowed) const {
    const std::string s = required(key);
    for (const char* a : allowed)
      if (s == a) return s;
    std::string list;
    for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
    fail(ErrorCode::invalid_configuration, "key '" + key + "': expected one of {" + list + "}, got '" + s + "'");
  }

  int threads() const {
    const int t = static_cast<int>(integer("threads", 0, 4096));
    return t == 0 ? default_threads() : t;
  }

  const std::map<std::string, std::string>& all() const { return v_; }

 private:
  std::map<std::string, std::string> v_;
};

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string hex(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io_error, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) fail(ErrorCode::io_error, "write failed for '" + path.string() + "'");
}

std::filesystem::path prepare_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    fail(ErrorCode::io_error, "cannot create output directory '" + dir.string() + "'");
  return dir;
}

json manifest(const std::string& command, const Params& p, const json& outputs, const json& summary) {
  json m;
  m["command"] = command;
  m["schema_version"] = kSchemaVersion;
  json cfg = json::object();
  for (const auto& [k, v] : p.all()) cfg[k] = v;
  m["config"] = cfg;
  m["data_dir"] = data_dir().string();
  m["outputs"] = outputs;
  m["summary"] = summary;
  return m;
}

PolyCurve load_curve(const Params& p, const std::string& key = "curve") {
  const auto path = p.path(key);
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) fail(ErrorCode::io_error, "curve file not found: '" + path.string() + "'");
  return read_curve(path);
}

json run_analyze(const Params& p) {
  PolyCurve c = load_curve(p);
  if (p.has("subchain_a") || p.has("subchain_b")) {
    const auto a = static_cast<std::size_t>(p.integer("subchain_a", 0, 1LL << 40));
    const auto b = static_cast<std::size_t>(p.integer("subchain_b", 0, 1LL << 40));
    c = trim(c, {a, b});
  }
  const std::string functional = p.choice("functional", {"aun", "tun"});
  const auto dirs_n = static_cast<std::size_t>(p.integer("dirs", 2, 1 << 22));
  const std::uint64_t seed = p.seed("seed");
  ProjectionOptions opt;
  opt.threads = p.threads();
  const auto& table = default_knotoid_table();
  ComplexityEstimate est;
  if (functional == "aun") {
    est = aun(c, dirs_n, seed, table, opt);
  } else {
    est = tun(c, static_cast<std::size_t>(p.integer("stride", 1, 1 << 20)), dirs_n, seed, table, opt);
  }
  json r;
  r["functional"] = functional;
  r["value"] = est.value;
  r["stderr"] = est.stderr_;
  r["n_samples"] = est.n_samples;
  r["unclassified_fraction"] = est.unclassified_fraction;
  r["direction_hash"] = hex(est.direction_hash);
  r["n_vertices"] = c.size();
  if (p.boolean("spectrum")) {
    const auto dist = knotoid_spectrum(c, dirs_n, seed, table, opt);
    json s = json::array();
    for (const auto& [name, w] : dist.weights)
      s.push_back({{"type", name}, {"weight", w}, {"unravelling", dist.unravelling.at(name)}});
    r["spectrum"] = s;
  }
  return r;
}

json run_knot_id(const Params& p) {
  const PolyCurve c = load_curve(p);
  const auto n = static_cast<std::size_t>(p.integer("closures", 1, 1 << 22));
  const auto dist = stochastic_closure(c, n, p.seed("seed"), default_knot_table(), p.threads());
  json r;
  r["dominant"] = dist.dominant;
  r["dominant_fraction"] = dist.fractions.at(dist.dominant);
  r["family"] = to_string(classify_family(dist.dominant));
  json f = json::array();
  for (const auto& [name, frac] : dist.fractions)
    f.push_back({{"type", name}, {"fraction", frac}, {"count", dist.counts.at(name)}});
  r["fractions"] = f;
  r["n_closures"] = dist.n_closures;
  return r;
}

ChainState initial_chain(const std::string& command, const Params& p, std::uint64_t seed, ChainParams params) {
  ChainState s;
  if (p.has("curve")) {
    const PolyCurve c = load_curve(p);
    s = init_from_curve(c.vertices(), params);
  } else {
    const auto n = static_cast<std::size_t>(p.integer("n", 4, 100000));
    s = init_coil(n, derive_seed(seed, 0x636f696cull), params);
    DynamicsConfig eq;
    eq.dt = p.real("dt");
    eq.steps = static_cast<int>(p.integer("equilibrate", 0, 1LL << 30));
    eq.seed = derive_seed(seed, 0x657175696cull);
    if (eq.steps > 0) run_langevin(s, eq);
  }
  if (command == "unknot" || p.has("curve")) {
    // Maxwell-Boltzmann velocities for a loaded configuration
    auto rng = make_stream({seed, 0x76656c6full});
    std::normal_distribution<double> g(0.0, std::sqrt(params.temperature / params.mass));
    s.v.assign(s.size(), Vec3{});
    for (auto& v : s.v) v = {g(rng), g(rng), g(rng)};
  }
  return s;
}

json run_steer_cmd(const std::string& command, const Params& p) {
  const std::uint64_t seed = p.seed("seed");
  const bool undirected = p.boolean("undirected");
  SteeringConfig cfg;
  cfg.k = undirected ? 1 : static_cast<int>(p.integer("k", 1, 1 << 16));
  cfg.horizon = static_cast<int>(p.integer("horizon", 1, 1 << 30));
  cfg.direction = command == "unknot" ? SteerDirection::minimize : SteerDirection::maximize;
  cfg.functional.kind = p.choice("functional", {"aun", "tun"}) == "aun" ? FunctionalSpec::Kind::aun
                                                                          : FunctionalSpec::Kind::tun;
  cfg.functional.n_dirs = static_cast<std::size_t>(p.integer("dirs", 2, 1 << 20));
  cfg.functional.stride = static_cast<std::size_t>(p.integer("stride", 1, 1 << 20));
  cfg.max_iterations = static_cast<int>(p.integer("iters", 0, 1 << 24));
  if (p.has("stop")) {
    cfg.stop_threshold = p.real("stop");
  } else {
    cfg.stop_threshold.reset();
  }
  cfg.stop_sustain = static_cast<int>(p.integer("sustain", 1, 1 << 20));
  cfg.seed = seed;
  cfg.threads = p.threads();
  cfg.closures = static_cast<std::size_t>(p.integer("closures", 0, 1 << 20));
  const bool snapshots = p.boolean("snapshots");
  cfg.keep_snapshots = snapshots;
  const double dt = p.real("dt");
  const std::string prop_name = p.choice("propagator", {"langevin", "crankshaft"});
  const auto propagate = prop_name == "langevin" ? langevin_propagator(dt) : crankshaft_propagator();

  const auto out = prepare_dir(p.required("out"));
  ChainState state = initial_chain(command, p, seed, ChainParams{});
  const SteeringTrajectory traj =
      steer<ChainState>(state, propagate, chain_curve, cfg, default_knotoid_table(), default_knot_table());

  std::string csv = "iteration,chosen_value,stderr";
  for (int c = 0; c < cfg.k; ++c) csv += ",cand_" + std::to_string(c);
  csv += ",aun,knot_type\n";
  for (const auto& r : traj.records) {
    csv += std::to_string(r.iteration) + "," + fmt(r.chosen_value) + "," + fmt(r.stderr_);
    for (double v : r.candidate_values) csv += "," + fmt(v);
    csv += "," + fmt(r.aun) + "," + r.knot_type + "\n";
  }
  write_text(out / "trajectory.csv", csv);
  json outputs = json::array({"trajectory.csv"});
  if (snapshots) {
    const auto snap = prepare_dir(out / "snapshots");
    for (const auto& r : traj.records) {
      char name[32];
      std::snprintf(name, sizeof name, "iter_%05d.xyz", r.iteration);
      write_curve(snap / name, r.snapshot, "iteration " + std::to_string(r.iteration));
    }
    outputs.push_back("snapshots/");
  }
  write_curve(out / "final.xyz", state.x, "final configuration");
  outputs.push_back("final.xyz");

  json s;
  s["iterations"] = traj.records.size();
  s["stopped"] = traj.stopped;
  s["stop_iteration"] = traj.stop_iteration ? json(*traj.stop_iteration) : json(nullptr);
  s["final_value"] = traj.records.empty() ? json(nullptr) : json(traj.records.back().chosen_value);
  json types = json::array();
  std::set<std::string> seen;
  for (const auto& r : traj.records)
    if (!r.knot_type.empty() && seen.insert(r.knot_type).second)
      types.push_back({{"type", r.knot_type}, {"first_iteration", r.iteration}});
  s["knot_types"] = types;
  s["output_dir"] = out.string();
  write_text(out / "manifest.json", manifest(command, p, outputs, s).dump(2) + "\n");
  return s;
}

json run_grow(const Params& p) {
  const std::string model_name = p.required("model");
  if (std::find(model_names().begin(), model_names().end(), model_name) == model_names().end())
    fail(ErrorCode::invalid_configuration, "unknown model '" + model_name + "'");
  std::shared_ptr<const AngleDataset> data;
  if (model_needs_dataset(model_name)) {
    const auto path = p.path("dataset");
    std::error_code ec;
    if (!std::filesystem::exists(path, ec))
      fail(ErrorCode::io_error, "angle dataset not found: '" + path.string() +
                                    "'; build it with: topsteer ingest --in <pdb-dir> --out " + path.string());
    data = std::make_shared<const AngleDataset>(load_dataset(path));
  }
  const AngleModel model = model_by_name(model_name, data);
  GrowthConfig g;
  g.n_walks = static_cast<std::size_t>(p.integer("walks", 1, 1 << 24));
  g.target_length = static_cast<int>(p.integer("length", 1, 1 << 24));
  g.k = static_cast<int>(p.integer("k", 1, 1 << 16));
  g.beads_per_step = static_cast<int>(p.integer("beads_per_step", 1, 1 << 20));
  g.n_dirs = static_cast<std::size_t>(p.integer("dirs", 2, 1 << 20));
  g.closures = static_cast<std::size_t>(p.integer("closures", 1, 1 << 20));
  g.seed = p.seed("seed");
  g.threads = p.threads();
  g.policy = p.choice("policy", {"strict", "weak"}) == "strict" ? OverlapPolicy::strict : OverlapPolicy::weak;
  g.max_attempts = static_cast<int>(p.integer("max_attempts", 1, 1 << 24));
  if (g.target_length % g.beads_per_step != 0)
    fail(ErrorCode::invalid_configuration, "length must be a multiple of beads_per_step");

  const auto out = prepare_dir(p.required("out"));
  const GrowthEnsemble e = grow_steered_ensemble(model, model_name, g, default_knotoid_table(), default_knot_table());

  std::string kymo = "length,knot_type,fraction,model\n";
  for (const auto& r : e.rows)
    kymo += std::to_string(r.length) + "," + r.knot_type + "," + fmt(r.fraction) + "," + model_name + "\n";
  write_text(out / "kymograph.csv", kymo);
  const auto twist = twist_series(e);
  std::string tw = "length,population,knotted,trefoil,twist,twist_fraction,twist_of_knotted,model\n";
  for (const auto& t : twist)
    tw += std::to_string(t.length) + "," + std::to_string(t.population) + "," + std::to_string(t.knotted) + "," +
          std::to_string(t.trefoil) + "," + std::to_string(t.twist) + "," + fmt(t.twist_fraction) + "," +
          fmt(t.twist_of_knotted) + "," + model_name + "\n";
  write_text(out / "twist.csv", tw);
  std::string walks = "walk,final_length,trapped_at,final_knot_type\n";
  for (std::size_t w = 0; w < e.walks.size(); ++w) {
    const auto& wk = e.walks[w];
    walks += std::to_string(w) + "," + std::to_string(wk.lengths.empty() ? 0 : wk.lengths.back()) + "," +
             (wk.trapped_at ? std::to_string(*wk.trapped_at) : std::string()) + "," +
             (wk.knot_types.empty() ? std::string() : wk.knot_types.back()) + "\n";
  }
  write_text(out / "walks.csv", walks);

  json s;
  s["model"] = model_name;
  s["walks"] = g.n_walks;
  s["trapped"] = std::count_if(e.walks.begin(), e.walks.end(), [](const GrowthWalk& w) { return w.trapped_at.has_value(); });
  s["knotted_fraction_final"] = knotted_fraction(e, g.target_length);
  s["twist_fraction_final"] = twist.empty() ? 0.0 : twist.back().twist_fraction;
  s["output_dir"] = out.string();
  write_text(out / "manifest.json",
             manifest("grow", p, json::array({"kymograph.csv", "twist.csv", "walks.csv"}), s).dump(2) + "\n");
  return s;
}

json run_ingest(const Params& p) {
  HelicalRegion r{p.real("theta_min"), p.real("theta_max"), p.real("phi_min"), p.real("phi_max")};
  IngestReport rep;
  const auto in = p.path("in");
  const auto out = p.path("out");
  const AngleDataset d = build_dataset(in, r, &rep);
  write_dataset(out, d);
  json s;
  s["files"] = rep.files;
  s["fragments"] = rep.chains;
  s["pairs"] = d.size();
  s["helical"] = d.helical_count();
  s["helical_fraction"] = static_cast<double>(d.helical_count()) / static_cast<double>(d.size());
  s["malformed_records"] = rep.malformed;
  s["excluded_pairs"] = rep.excluded_pairs;
  s["output"] = out.string();
  auto mpath = out;
  mpath += ".manifest.json";
  write_text(mpath, manifest("ingest", p, json::array({out.filename().string()}), s).dump(2) + "\n");
  return s;
}

}  // namespace

const std::vector<std::string>& pipeline_commands() {
  static const std::vector<std::string> cmds{"analyze", "unknot", "knot", "grow", "knot-id", "ingest"};
  return cmds;
}

const std::vector<ConfigKey>& pipeline_keys(const std::string& command) {
  const auto& t = key_table();
  auto it = t.find(command);
  if (it == t.end()) fail(ErrorCode::invalid_configuration, "unknown command '" + command + "'");
  return it->second;
}

RunConfig::RunConfig(std::string command) : command_(std::move(command)) { (void)pipeline_keys(command_); }

void RunConfig::set(const std::string& key, const std::string& value) {
  const auto& keys = pipeline_keys(command_);
  if (std::none_of(keys.begin(), keys.end(), [&](const ConfigKey& k) { return k.name == key; }))
    fail(ErrorCode::invalid_configuration, "unknown key '" + key + "' for command '" + command_ + "'");
  values_[key] = value;
}

void RunConfig::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io_error, "cannot open config '" + path.string() + "'");
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      fail(ErrorCode::invalid_configuration, path.string() + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(t.substr(0, eq));
    std::replace(key.begin(), key.end(), '-', '_');
    set(key, trim(t.substr(eq + 1)));
  }
}

std::map<std::string, std::string> RunConfig::resolved() const {
  std::map<std::string, std::string> out;
  for (const auto& k : pipeline_keys(command_)) out[k.name] = k.default_value;
  for (const auto& [k, v] : values_) out[k] = v;
  return out;
}

std::string run_pipeline(const RunConfig& cfg) {
  const Params p(cfg.resolved());
  const std::string& cmd = cfg.command();
  json result;
  if (cmd == "analyze") {
    result = run_analyze(p);
  } else if (cmd == "knot-id") {
    result = run_knot_id(p);
  } else if (cmd == "unknot" || cmd == "knot") {
    return json(run_steer_cmd(cmd, p)).dump(2);
  } else if (cmd == "grow") {
    return run_grow(p).dump(2);
  } else if (cmd == "ingest") {
    return run_ingest(p).dump(2);
  } else {
    fail(ErrorCode::invalid_configuration, "unknown command '" + cmd + "'");
  }
  if (p.has("out")) {
    const auto out = prepare_dir(p.str("out"));
    const std::string file = cmd == "analyze" ? "analyze.json" : "knot_id.json";
    write_text(out / file, result.dump(2) + "\n");
    write_text(out / "manifest.json", manifest(cmd, p, json::array({file}), result).dump(2) + "\n");
  }
  json wrapped = result;
  json cfgj = json::object();
  for (const auto& [k, v] : p.all()) cfgj[k] = v;
  wrapped["config"] = cfgj;
  return wrapped.dump(2);
}

}  // namespace topsteer
