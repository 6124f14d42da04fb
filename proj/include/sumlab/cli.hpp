#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sumlab/certificate.hpp"
#include "sumlab/common.hpp"

namespace sumlab::cli {

inline constexpr const char* kVersion = "sumlab 0.1.0";

// Invalid configuration; key() names the offending entry.
class ConfigError : public InvalidArgument {
 public:
  ConfigError(std::string key, const std::string& what) : InvalidArgument(what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

enum class ParamType { integer, rational, path, text, list, flag };

struct ParamSpec {
  std::string key;
  ParamType type = ParamType::integer;
  bool required = false;
  std::string help;
};

struct ExperimentInfo {
  std::string name;
  bool randomized = false;
  std::vector<ParamSpec> params;
  std::string help;
};

const std::vector<ExperimentInfo>& experiments();
const ExperimentInfo& experiment(const std::string& name);

struct ExperimentConfig {
  std::string experiment;
  std::map<std::string, std::string> params;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  std::string out_dir;
};

// Unknown experiments or keys, badly typed values, missing required keys or a missing seed.
void validate(const ExperimentConfig& config);

// {"experiment", "seed", "threads", "out", "params": {...}}; scalar values may be numbers or strings.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
// Values set in `flags` win; params are merged key by key.
ExperimentConfig merge(const ExperimentConfig& file, const ExperimentConfig& flags);

struct Report {
  ExperimentConfig config;
  std::vector<Certificate> certificates;  // in run order
  nlohmann::json result;
  std::string version = kVersion;
  double seconds = 0;

  bool all_pass() const;
  // Index of the first failing certificate.
  std::optional<std::size_t> first_failure() const;
};

Report run(const ExperimentConfig& config);

// Canonical JSON of the whole report. Timings are left out unless asked for.
std::string report_json(const Report& report, bool with_timing = false);
// Canonical JSON of the certificates and result only: the reproducibility payload.
std::string payload_json(const Report& report);
// One header line plus one row per certificate.
std::string report_tsv(const Report& report);

// Writes <out_dir>/<experiment>.<format>; returns the path.
std::string emit(const Report& report, const std::string& format);

}  // namespace sumlab::cli
