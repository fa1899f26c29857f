#include <cstring>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "topsteer.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  ts_string_free(s);
  return out;
}

std::string asset(const char* name) { return std::string(TOPSTEER_TEST_DATA_DIR) + "/" + name; }

}  // namespace

TEST_CASE("status names and exit codes") {
  CHECK(std::string(ts_status_name(TS_OK)) == "ok");
  CHECK(ts_status_exit_code(TS_OK) == 0);
  CHECK(ts_status_exit_code(TS_ERR_IO) == 2);
  CHECK(ts_status_exit_code(TS_ERR_INVALID_CONFIGURATION) == 2);
  CHECK(ts_status_exit_code(TS_ERR_STEERING_ABORT) == 1);
  CHECK(std::strlen(ts_version()) > 0);
}

TEST_CASE("curve handles") {
  const double xyz[] = {0, 0, 0, 1, 0, 0, 2, 0, 0, 3, 0, 0};
  ts_curve* c = nullptr;
  REQUIRE(ts_curve_create(xyz, 4, &c) == TS_OK);
  CHECK(ts_curve_size(c) == 4);
  double v[3];
  CHECK(ts_curve_vertex(c, 2, v) == TS_OK);
  CHECK(v[0] == 2.0);
  CHECK(ts_curve_vertex(c, 9, v) == TS_ERR_INVALID_ARGUMENT);
  double value = -1, err = -1;
  CHECK(ts_aun(c, 50, 1, &value, &err) == TS_OK);
  CHECK(value == 0.0);
  const auto path = std::filesystem::temp_directory_path() / "topsteer_capi_curve.xyz";
  CHECK(ts_curve_save(c, path.c_str()) == TS_OK);
  ts_curve* d = nullptr;
  CHECK(ts_curve_load(path.c_str(), &d) == TS_OK);
  CHECK(ts_curve_size(d) == 4);
  ts_curve_free(d);
  ts_curve_free(c);
  std::filesystem::remove(path);

  const double dup[] = {0, 0, 0, 0, 0, 0};
  ts_curve* bad = nullptr;
  CHECK(ts_curve_create(dup, 2, &bad) == TS_ERR_INVALID_ARGUMENT);
  CHECK(bad == nullptr);
  CHECK(std::strlen(ts_last_error()) > 0);
  CHECK(ts_curve_load("/nonexistent/curve.xyz", &bad) == TS_ERR_IO);
  CHECK(ts_curve_create(nullptr, 3, &bad) == TS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("analysis through the C API") {
  ts_curve* c = nullptr;
  REQUIRE(ts_curve_load(asset("trefoil.xyz").c_str(), &c) == TS_OK);
  double value = 0, err = 0;
  CHECK(ts_aun(c, 64, 2, &value, &err) == TS_OK);
  CHECK(value > 1.8);
  CHECK(ts_tun(c, 8, 16, 2, &value, &err) == TS_OK);
  CHECK(value > 0.0);
  char* name = nullptr;
  int u = -1;
  const double dir[3] = {0.1, 0.2, 1.0};
  CHECK(ts_classify_projection(c, dir, &name, &u) == TS_OK);
  CHECK(!take(name).empty());
  CHECK(u >= 0);
  char* json = nullptr;
  CHECK(ts_knot_id(c, 20, 1, &json) == TS_OK);
  const auto j = nlohmann::json::parse(take(json));
  CHECK(j["dominant"] == "3_1");
  ts_curve_free(c);
}

TEST_CASE("configs") {
  ts_config* cfg = nullptr;
  CHECK(ts_config_create("nonsense", &cfg) == TS_ERR_INVALID_CONFIGURATION);
  REQUIRE(ts_config_create("analyze", &cfg) == TS_OK);
  CHECK(ts_config_set(cfg, "no_such_key", "1") == TS_ERR_INVALID_CONFIGURATION);
  CHECK(ts_config_set(cfg, "curve", asset("straight.xyz").c_str()) == TS_OK);
  CHECK(ts_config_set(cfg, "dirs", "40") == TS_OK);
  char* json = nullptr;
  REQUIRE(ts_config_resolved_json(cfg, &json) == TS_OK);
  CHECK(nlohmann::json::parse(take(json))["dirs"] == "40");
  REQUIRE(ts_run(cfg, &json) == TS_OK);
  const auto r = nlohmann::json::parse(take(json));
  CHECK(r["value"] == 0.0);
  CHECK(r["n_samples"] == 40);
  ts_config_free(cfg);

  REQUIRE(ts_command_keys_json("grow", &json) == TS_OK);
  const auto keys = nlohmann::json::parse(take(json));
  bool has_model = false;
  for (const auto& k : keys) has_model |= k["name"] == "model";
  CHECK(has_model);

  char* dir = nullptr;
  REQUIRE(ts_get_data_dir(&dir) == TS_OK);
  const std::string original = take(dir);
  CHECK(ts_set_data_dir("/tmp") == TS_OK);
  REQUIRE(ts_get_data_dir(&dir) == TS_OK);
  CHECK(take(dir) == "/tmp");
  CHECK(ts_set_data_dir(original.c_str()) == TS_OK);
}
