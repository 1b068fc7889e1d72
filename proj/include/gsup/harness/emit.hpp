#pragma once

#include <string>
#include <vector>

#include "gsup/harness/experiment.hpp"

namespace gsup::harness {

/// Column order of the CSV output. wall_time_s is last so determinism checks
/// can drop it with a single cut.
inline constexpr const char* kCsvHeader =
    "config_hash,kind,subject,x,seed,version,estimates,bounds,assertions,free_constants,passed,"
    "wall_time_s";

/// Lists inside a cell are ';'-separated; estimate fields are
/// name:estimate:half_width:lo:hi:reps, bounds name:value, assertions
/// name:0|1. Doubles use the shortest round-trip form.
std::string to_csv(const std::vector<ResultRecord>& records);
std::string to_json(const std::vector<ResultRecord>& records);
std::vector<ResultRecord> from_json(const std::string& text);
/// Whitespace-separated x mc mc_lo mc_hi bound, one line per record, from the
/// first estimate and first bound. x falls back to the record index.
std::string to_plotdata(const std::vector<ResultRecord>& records);

enum class Format { Csv, Json, Plotdata };
/// Throws IoError when the file cannot be written.
void emit(const std::vector<ResultRecord>& records, Format format, const std::string& path);

std::string format_double(double v);

}  // namespace gsup::harness
