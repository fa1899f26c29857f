#include <cstdio>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "topsteer.h"

namespace {

struct Owned {
  char* p = nullptr;
  ~Owned() { ts_string_free(p); }
};

int report(ts_status s, const std::string& context) {
  std::fprintf(stderr, "topsteer %s: %s: %s\n", context.c_str(), ts_status_name(s), ts_last_error());
  return ts_status_exit_code(s);
}

std::string flag_of(std::string key) {
  for (auto& ch : key)
    if (ch == '_') ch = '-';
  return "--" + key;
}

struct Subcommand {
  std::string name;
  CLI::App* app = nullptr;
  std::map<std::string, std::string> values;  // key -> value
  std::map<std::string, CLI::Option*> options;
  std::string config_file;
  std::vector<double> region;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Knotoid complexity, topological steering and growing walks"};
  app.require_subcommand(1);
  std::string data_dir;
  app.add_option("--data-dir", data_dir, "data directory (tables, assets)");
  app.set_version_flag("--version", std::string(ts_version()));

  const std::vector<std::pair<std::string, std::string>> commands{
      {"analyze", "AUN / TUN of a curve"},
      {"unknot", "steer a knotted chain towards lower complexity"},
      {"knot", "steer an open chain towards higher complexity"},
      {"grow", "topologically steered growing walks (kymograph)"},
      {"knot-id", "knot type of an open curve by stochastic closure"},
      {"ingest", "build the protein angle dataset from PDB files"},
  };
  std::vector<std::unique_ptr<Subcommand>> subs;
  for (const auto& [name, help] : commands) {
    Owned keys;
    if (ts_status s = ts_command_keys_json(name.c_str(), &keys.p); s != TS_OK) return report(s, name);
    auto sub = std::make_unique<Subcommand>();
    sub->name = name;
    sub->app = app.add_subcommand(name, help);
    sub->app->add_option("--config", sub->config_file, "key=value configuration file");
    for (const auto& k : nlohmann::json::parse(keys.p)) {
      const std::string key = k["name"];
      const std::string def = k["default"];
      std::string desc = k["help"].get<std::string>();
      if (!def.empty()) desc += " [" + def + "]";
      sub->options[key] = sub->app->add_option(flag_of(key), sub->values[key], desc);
    }
    if (name == "ingest")
      sub->app->add_option("--region", sub->region, "helical region: theta_min theta_max phi_min phi_max")
          ->expected(4);
    subs.push_back(std::move(sub));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (!data_dir.empty())
    if (ts_status s = ts_set_data_dir(data_dir.c_str()); s != TS_OK) return report(s, "--data-dir");

  for (auto& sub : subs) {
    if (!sub->app->parsed()) continue;
    ts_config* raw = nullptr;
    if (ts_status s = ts_config_create(sub->name.c_str(), &raw); s != TS_OK) return report(s, sub->name);
    std::unique_ptr<ts_config, decltype(&ts_config_free)> cfg(raw, ts_config_free);
    if (!sub->config_file.empty())
      if (ts_status s = ts_config_load_file(cfg.get(), sub->config_file.c_str()); s != TS_OK)
        return report(s, sub->name);
    for (const auto& [key, opt] : sub->options) {
      if (opt->count() == 0) continue;
      if (ts_status s = ts_config_set(cfg.get(), key.c_str(), sub->values[key].c_str()); s != TS_OK)
        return report(s, sub->name);
    }
    if (!sub->region.empty()) {
      const char* keys[] = {"theta_min", "theta_max", "phi_min", "phi_max"};
      for (int i = 0; i < 4; ++i) {
        const std::string v = std::to_string(sub->region[static_cast<std::size_t>(i)]);
        if (ts_status s = ts_config_set(cfg.get(), keys[i], v.c_str()); s != TS_OK) return report(s, sub->name);
      }
    }
    Owned result;
    if (ts_status s = ts_run(cfg.get(), &result.p); s != TS_OK) return report(s, sub->name);
    std::printf("%s\n", result.p);
    return 0;
  }
  return 2;
}
