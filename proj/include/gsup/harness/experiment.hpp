#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gsup/harness/config.hpp"

namespace gsup::harness {

struct EstimateEntry {
  std::string name;
  double estimate = 0.0;
  double half_width = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::uint64_t reps = 0;
  friend bool operator==(const EstimateEntry&, const EstimateEntry&) = default;
};

struct BoundEntry {
  std::string name;
  double value = 0.0;
  friend bool operator==(const BoundEntry&, const BoundEntry&) = default;
};

struct AssertionEntry {
  std::string name;
  bool passed = false;
  friend bool operator==(const AssertionEntry&, const AssertionEntry&) = default;
};

struct ResultRecord {
  std::string config_hash;
  std::string kind;
  std::string subject;
  double x = 0.0;  // sweep coordinate, NaN without a sweep
  std::uint64_t seed = 0;
  std::vector<EstimateEntry> estimates;
  std::vector<BoundEntry> bounds;
  std::vector<AssertionEntry> assertions;
  std::map<std::string, double> free_constants;
  double wall_time_s = 0.0;
  std::string version;

  bool passed() const;
};

/// Equality with NaN == NaN for the numeric fields.
bool same_record(const ResultRecord& a, const ResultRecord& b, bool compare_wall_time = true);

/// Runs the config, one record per sweep value (or a single record). Module
/// errors are rethrown as gsup::Error with the kind and parameters prefixed.
std::vector<ResultRecord> run_experiment(const ExperimentConfig& config);

const char* library_version();

}  // namespace gsup::harness
