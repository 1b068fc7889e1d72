#include "gsup/harness/emit.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gsup/error.hpp"

namespace gsup::harness {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

std::string estimates_cell(const ResultRecord& r) {
  std::string s;
  for (const auto& e : r.estimates) {
    if (!s.empty()) s += ';';
    s += e.name + ':' + format_double(e.estimate) + ':' + format_double(e.half_width) + ':' +
         format_double(e.lo) + ':' + format_double(e.hi) + ':' + std::to_string(e.reps);
  }
  return s;
}

std::string bounds_cell(const ResultRecord& r) {
  std::string s;
  for (const auto& b : r.bounds) {
    if (!s.empty()) s += ';';
    s += b.name + ':' + format_double(b.value);
  }
  return s;
}

std::string assertions_cell(const ResultRecord& r) {
  std::string s;
  for (const auto& a : r.assertions) {
    if (!s.empty()) s += ';';
    s += a.name + (a.passed ? ":1" : ":0");
  }
  return s;
}

std::string constants_cell(const ResultRecord& r) {
  std::string s;
  for (const auto& [k, v] : r.free_constants) {
    if (!s.empty()) s += ';';
    s += k + ':' + format_double(v);
  }
  return s;
}

// JSON has no NaN or infinity; those travel as strings.
json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

double number(const json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "nan") return std::nan("");
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  throw ConfigError("bad number '" + s + "' in result json");
}

}  // namespace

std::string to_csv(const std::vector<ResultRecord>& records) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.config_hash << ',' << quote(r.kind) << ',' << quote(r.subject) << ','
        << format_double(r.x) << ',' << r.seed << ',' << quote(r.version) << ','
        << quote(estimates_cell(r)) << ',' << quote(bounds_cell(r)) << ','
        << quote(assertions_cell(r)) << ',' << quote(constants_cell(r)) << ','
        << (r.passed() ? 1 : 0) << ',' << format_double(r.wall_time_s) << '\n';
  }
  return out.str();
}

std::string to_json(const std::vector<ResultRecord>& records) {
  json arr = json::array();
  for (const auto& r : records) {
    json j;
    j["config_hash"] = r.config_hash;
    j["kind"] = r.kind;
    j["subject"] = r.subject;
    j["x"] = number(r.x);
    j["seed"] = r.seed;
    j["version"] = r.version;
    j["wall_time_s"] = number(r.wall_time_s);
    j["passed"] = r.passed();
    j["estimates"] = json::array();
    for (const auto& e : r.estimates)
      j["estimates"].push_back({{"name", e.name},
                                {"estimate", number(e.estimate)},
                                {"half_width", number(e.half_width)},
                                {"lo", number(e.lo)},
                                {"hi", number(e.hi)},
                                {"reps", e.reps}});
    j["bounds"] = json::array();
    for (const auto& b : r.bounds) j["bounds"].push_back({{"name", b.name}, {"value", number(b.value)}});
    j["assertions"] = json::array();
    for (const auto& a : r.assertions)
      j["assertions"].push_back({{"name", a.name}, {"passed", a.passed}});
    j["free_constants"] = json::object();
    for (const auto& [k, v] : r.free_constants) j["free_constants"][k] = number(v);
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + '\n';
}

std::vector<ResultRecord> from_json(const std::string& text) {
  std::vector<ResultRecord> records;
  try {
    for (const auto& j : json::parse(text)) {
      ResultRecord r;
      r.config_hash = j.at("config_hash").get<std::string>();
      r.kind = j.at("kind").get<std::string>();
      r.subject = j.at("subject").get<std::string>();
      r.x = number(j.at("x"));
      r.seed = j.at("seed").get<std::uint64_t>();
      r.version = j.at("version").get<std::string>();
      r.wall_time_s = number(j.at("wall_time_s"));
      for (const auto& e : j.at("estimates"))
        r.estimates.push_back({e.at("name").get<std::string>(), number(e.at("estimate")),
                               number(e.at("half_width")), number(e.at("lo")), number(e.at("hi")),
                               e.at("reps").get<std::uint64_t>()});
      for (const auto& b : j.at("bounds"))
        r.bounds.push_back({b.at("name").get<std::string>(), number(b.at("value"))});
      for (const auto& a : j.at("assertions"))
        r.assertions.push_back({a.at("name").get<std::string>(), a.at("passed").get<bool>()});
      for (const auto& [k, v] : j.at("free_constants").items()) r.free_constants[k] = number(v);
      records.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed result json: ") + e.what());
  }
  return records;
}

std::string to_plotdata(const std::vector<ResultRecord>& records) {
  std::ostringstream out;
  out << "# x mc mc_lo mc_hi bound\n";
  const double nan = std::nan("");
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    const double x = std::isnan(r.x) ? static_cast<double>(i) : r.x;
    const auto* e = r.estimates.empty() ? nullptr : &r.estimates.front();
    out << format_double(x) << ' ' << format_double(e ? e->estimate : nan) << ' '
        << format_double(e ? e->lo : nan) << ' ' << format_double(e ? e->hi : nan) << ' '
        << format_double(r.bounds.empty() ? nan : r.bounds.front().value) << '\n';
  }
  return out.str();
}

void emit(const std::vector<ResultRecord>& records, Format format, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  switch (format) {
    case Format::Csv: f << to_csv(records); break;
    case Format::Json: f << to_json(records); break;
    case Format::Plotdata: f << to_plotdata(records); break;
  }
  if (!f.flush()) throw IoError("write to '" + path + "' failed");
}

}  // namespace gsup::harness
