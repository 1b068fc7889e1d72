#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gsup::harness {

enum class ParamType { Int, Real, RealList, IntList, Text };

struct ParamSpec {
  std::string key;
  ParamType type;
  std::string default_value;
  std::string help;
  bool constant = false;  // lives in [constants] rather than [params]
};

struct KindInfo {
  std::string name;
  std::string subject;  // what is compared, for --help
  std::vector<ParamSpec> params;
};

const std::vector<KindInfo>& experiment_kinds();
/// Throws ConfigError for an unknown kind.
const KindInfo& kind_info(std::string_view name);

struct Sweep {
  std::string key;
  std::vector<std::string> values;
};

struct ExperimentConfig {
  std::string kind;
  std::uint64_t reps = 10000;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  std::map<std::string, std::string> params;     // kind parameters, defaults filled in
  std::map<std::string, std::string> constants;  // free constants, defaults filled in
  std::string csv_path;
  std::string json_path;
  std::string plotdata_path;
  std::optional<Sweep> sweep;

  double real(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;
  std::vector<std::int64_t> integers(const std::string& key) const;
  const std::string& text(const std::string& key) const;
  double constant(const std::string& key) const;

  /// Copy with `key` (a parameter or constant) set to `value`, re-validated.
  ExperimentConfig with_value(const std::string& key, const std::string& value) const;
};

/// INI text with sections [experiment], [params], [constants], [output] and
/// optional [sweep]. Unknown sections, keys, kinds and malformed values throw
/// ConfigError before anything runs.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);
/// Config for `kind` with every default.
ExperimentConfig default_config(const std::string& kind);

/// "key=value" for a parameter/constant, or experiment.reps / .seed / .workers.
void apply_override(ExperimentConfig& config, std::string_view assignment);

/// CLI value, then GSUP_SEED, then the config value.
std::uint64_t resolve_seed(std::optional<std::uint64_t> cli, std::uint64_t config_seed);
inline constexpr const char* kSeedEnv = "GSUP_SEED";

/// Sorted key=value lines of everything that affects results (workers and
/// output paths excluded).
std::string canonical_text(const ExperimentConfig& config);
/// FNV-1a 64 of the canonical text, 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

}  // namespace gsup::harness
