#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace powercf::cli {

/// Parsed config document plus the stamps every output carries.
struct Config {
  nlohmann::ordered_json doc;
  std::filesystem::path base_dir;  // relative paths resolve against this
  std::string config_hash;         // FNV-1a of the file bytes
  std::uint64_t seed = 0;

  static Config load(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override);
  std::filesystem::path path(const nlohmann::ordered_json& section, const std::string& key) const;
};

struct Options {
  std::filesystem::path out_dir = "out";
  std::vector<std::string> targets;  // empty: config or defaults
};

void cmd_ingest(const Config& config, const Options& options, std::ostream& log);
void cmd_counterfactual(const Config& config, const Options& options, std::ostream& log);
void cmd_market(const Config& config, const Options& options, std::ostream& log);
void cmd_report(const Config& config, const Options& options, std::ostream& out);

/// Full command line; returns the process exit code. Errors go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace powercf::cli
