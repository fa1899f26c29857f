#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace topsteer {

inline constexpr int kSchemaVersion = 1;

struct ConfigKey {
  std::string name;
  std::string default_value;  // empty: unset
  std::string help;
};

/// Subcommands: analyze, unknot, knot, grow, knot-id, ingest.
const std::vector<std::string>& pipeline_commands();
/// Accepted keys of a subcommand; throws invalid_configuration for unknown commands.
const std::vector<ConfigKey>& pipeline_keys(const std::string& command);

/// Key-value configuration of one run. Unknown keys are rejected.
class RunConfig {
 public:
  explicit RunConfig(std::string command);
  const std::string& command() const noexcept { return command_; }
  void set(const std::string& key, const std::string& value);
  /// key=value lines; '#' comments and blank lines ignored.
  void load_file(const std::filesystem::path& path);
  /// Defaults merged with explicit values.
  std::map<std::string, std::string> resolved() const;

 private:
  std::string command_;
  std::map<std::string, std::string> values_;
};

/// Runs a pipeline and returns its JSON summary. Pipelines with an `out`
/// directory also write their tables and manifest.json there.
std::string run_pipeline(const RunConfig& cfg);

}  // namespace topsteer
