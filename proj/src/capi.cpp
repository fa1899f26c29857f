#include "topsteer.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "json.hpp"
#include "topsteer/assets.hpp"
#include "topsteer/complexity.hpp"
#include "topsteer/error.hpp"
#include "topsteer/geometry.hpp"
#include "topsteer/knot_id.hpp"
#include "topsteer/knotoid.hpp"
#include "topsteer/pipelines.hpp"

struct ts_curve {
  topsteer::PolyCurve curve;
};

struct ts_config {
  topsteer::RunConfig cfg;
};

namespace {

thread_local std::string g_last_error;

ts_status to_status(topsteer::ErrorCode c) {
  using topsteer::ErrorCode;
  switch (c) {
    case ErrorCode::invalid_argument: return TS_ERR_INVALID_ARGUMENT;
    case ErrorCode::io_error: return TS_ERR_IO;
    case ErrorCode::parse_error: return TS_ERR_PARSE;
    case ErrorCode::degenerate_projection: return TS_ERR_DEGENERATE_PROJECTION;
    case ErrorCode::complexity_limit: return TS_ERR_COMPLEXITY_LIMIT;
    case ErrorCode::numerical_degeneracy: return TS_ERR_NUMERICAL_DEGENERACY;
    case ErrorCode::integration_blowup: return TS_ERR_INTEGRATION_BLOWUP;
    case ErrorCode::invalid_configuration: return TS_ERR_INVALID_CONFIGURATION;
    case ErrorCode::calibration_failure: return TS_ERR_CALIBRATION_FAILURE;
    case ErrorCode::steering_abort: return TS_ERR_STEERING_ABORT;
    case ErrorCode::empty_input: return TS_ERR_EMPTY_INPUT;
    case ErrorCode::degenerate_partition: return TS_ERR_DEGENERATE_PARTITION;
    case ErrorCode::internal: return TS_ERR_INTERNAL;
  }
  return TS_ERR_INTERNAL;
}

template <class F>
ts_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return TS_OK;
  } catch (const topsteer::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return TS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TS_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown exception";
    return TS_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void need(const void* p, const char* what) {
  if (!p) topsteer::fail(topsteer::ErrorCode::invalid_argument, std::string(what) + " is null");
}

}  // namespace

extern "C" {

const char* ts_last_error(void) { return g_last_error.c_str(); }

const char* ts_status_name(ts_status s) {
  switch (s) {
    case TS_OK: return "ok";
    case TS_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case TS_ERR_IO: return "io-error";
    case TS_ERR_PARSE: return "parse-error";
    case TS_ERR_DEGENERATE_PROJECTION: return "degenerate-projection";
    case TS_ERR_COMPLEXITY_LIMIT: return "complexity-limit";
    case TS_ERR_NUMERICAL_DEGENERACY: return "numerical-degeneracy";
    case TS_ERR_INTEGRATION_BLOWUP: return "integration-blowup";
    case TS_ERR_INVALID_CONFIGURATION: return "invalid-configuration";
    case TS_ERR_CALIBRATION_FAILURE: return "calibration-failure";
    case TS_ERR_STEERING_ABORT: return "steering-abort";
    case TS_ERR_EMPTY_INPUT: return "empty-input";
    case TS_ERR_DEGENERATE_PARTITION: return "degenerate-partition";
    case TS_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

int ts_status_exit_code(ts_status s) {
  switch (s) {
    case TS_OK: return 0;
    case TS_ERR_INVALID_ARGUMENT:
    case TS_ERR_IO:
    case TS_ERR_PARSE:
    case TS_ERR_INVALID_CONFIGURATION:
    case TS_ERR_EMPTY_INPUT:
      return 2;
    default:
      return 1;
  }
}

const char* ts_version(void) { return "1.0.0"; }

void ts_string_free(char* s) { std::free(s); }

ts_status ts_set_data_dir(const char* dir) {
  return guarded([&] {
    need(dir, "dir");
    topsteer::set_data_dir(dir);
  });
}

ts_status ts_get_data_dir(char** out) {
  return guarded([&] {
    need(out, "out");
    *out = dup_string(topsteer::data_dir().string());
  });
}

ts_status ts_curve_create(const double* xyz, size_t n, ts_curve** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    if (n > 0) need(xyz, "xyz");
    std::vector<topsteer::Vec3> v(n);
    for (size_t i = 0; i < n; ++i) v[i] = {xyz[3 * i], xyz[3 * i + 1], xyz[3 * i + 2]};
    *out = new ts_curve{topsteer::PolyCurve(std::move(v))};
  });
}

ts_status ts_curve_load(const char* path, ts_curve** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = nullptr;
    *out = new ts_curve{topsteer::read_curve(path)};
  });
}

ts_status ts_curve_save(const ts_curve* c, const char* path) {
  return guarded([&] {
    need(c, "curve");
    need(path, "path");
    topsteer::write_curve(path, c->curve.vertices());
  });
}

void ts_curve_free(ts_curve* c) { delete c; }

size_t ts_curve_size(const ts_curve* c) { return c ? c->curve.size() : 0; }

ts_status ts_curve_vertex(const ts_curve* c, size_t i, double out_xyz[3]) {
  return guarded([&] {
    need(c, "curve");
    need(out_xyz, "out_xyz");
    topsteer::require(i < c->curve.size(), "vertex index out of range");
    const auto& v = c->curve[i];
    out_xyz[0] = v.x;
    out_xyz[1] = v.y;
    out_xyz[2] = v.z;
  });
}

ts_status ts_aun(const ts_curve* c, size_t n_dirs, uint64_t seed, double* value, double* stderr_out) {
  return guarded([&] {
    need(c, "curve");
    need(value, "value");
    const auto e = topsteer::aun(c->curve, n_dirs, seed, topsteer::default_knotoid_table());
    *value = e.value;
    if (stderr_out) *stderr_out = e.stderr_;
  });
}

ts_status ts_tun(const ts_curve* c, size_t stride, size_t n_dirs, uint64_t seed, double* value, double* stderr_out) {
  return guarded([&] {
    need(c, "curve");
    need(value, "value");
    const auto e = topsteer::tun(c->curve, stride, n_dirs, seed, topsteer::default_knotoid_table());
    *value = e.value;
    if (stderr_out) *stderr_out = e.stderr_;
  });
}

ts_status ts_classify_projection(const ts_curve* c, const double dir[3], char** name, int* unravelling) {
  return guarded([&] {
    need(c, "curve");
    need(dir, "dir");
    need(name, "name");
    *name = nullptr;
    const topsteer::Direction d({dir[0], dir[1], dir[2]});
    const auto diagram = topsteer::extract_diagram(topsteer::project(c->curve, d));
    const auto t = topsteer::classify(diagram, topsteer::default_knotoid_table());
    *name = dup_string(t.name);
    if (unravelling) *unravelling = t.unravelling;
  });
}

ts_status ts_knot_id(const ts_curve* c, size_t n_closures, uint64_t seed, char** json_out) {
  return guarded([&] {
    need(c, "curve");
    need(json_out, "json_out");
    *json_out = nullptr;
    const auto d = topsteer::stochastic_closure(c->curve, n_closures, seed, topsteer::default_knot_table());
    nlohmann::ordered_json j;
    j["dominant"] = d.dominant;
    j["n_closures"] = d.n_closures;
    j["fractions"] = d.fractions;
    *json_out = dup_string(j.dump());
  });
}

ts_status ts_config_create(const char* command, ts_config** out) {
  return guarded([&] {
    need(command, "command");
    need(out, "out");
    *out = nullptr;
    *out = new ts_config{topsteer::RunConfig(command)};
  });
}

void ts_config_free(ts_config* cfg) { delete cfg; }

ts_status ts_config_set(ts_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    need(cfg, "config");
    need(key, "key");
    need(value, "value");
    cfg->cfg.set(key, value);
  });
}

ts_status ts_config_load_file(ts_config* cfg, const char* path) {
  return guarded([&] {
    need(cfg, "config");
    need(path, "path");
    cfg->cfg.load_file(path);
  });
}

ts_status ts_config_resolved_json(const ts_config* cfg, char** json_out) {
  return guarded([&] {
    need(cfg, "config");
    need(json_out, "json_out");
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [k, v] : cfg->cfg.resolved()) j[k] = v;
    *json_out = dup_string(j.dump());
  });
}

ts_status ts_command_keys_json(const char* command, char** json_out) {
  return guarded([&] {
    need(command, "command");
    need(json_out, "json_out");
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& k : topsteer::pipeline_keys(command))
      j.push_back({{"name", k.name}, {"default", k.default_value}, {"help", k.help}});
    *json_out = dup_string(j.dump());
  });
}

ts_status ts_run(const ts_config* cfg, char** json_out) {
  return guarded([&] {
    need(cfg, "config");
    need(json_out, "json_out");
    *json_out = nullptr;
    *json_out = dup_string(topsteer::run_pipeline(cfg->cfg));
  });
}

}  // extern "C"
