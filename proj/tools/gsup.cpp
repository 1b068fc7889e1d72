// gsup: run bound-vs-simulation experiments from a config file.
//
//   gsup bound --config eq.ini --csv out.csv
//   gsup verify szego -p n=4 -p z=2 --seed 7
//   gsup calibrate --config transfer.ini
//
// Exit status: 0 all assertions passed, 1 some assertion failed, 2 bad usage
// or config.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gsup/error.hpp"
#include "gsup/harness/config.hpp"
#include "gsup/harness/emit.hpp"
#include "gsup/harness/experiment.hpp"

namespace h = gsup::harness;

namespace {

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> reps;
  std::optional<unsigned> workers;
  std::string csv, json, plotdata;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("-c,--config", o.config_path, "INI config file")->check(CLI::ExistingFile);
  cmd->add_option("-p,--param", o.overrides, "override, key=value (repeatable)");
  cmd->add_option("--seed", o.seed, "seed (overrides $GSUP_SEED and the config)");
  cmd->add_option("--reps", o.reps, "Monte Carlo replications");
  cmd->add_option("--workers", o.workers, "worker threads, 0 = all cores");
  cmd->add_option("--csv", o.csv, "write records as CSV");
  cmd->add_option("--json", o.json, "write records as JSON");
  cmd->add_option("--plotdata", o.plotdata, "write x mc mc_lo mc_hi bound columns");
}

h::ExperimentConfig build_config(const std::string& kind, const CommonOptions& o) {
  h::ExperimentConfig c =
      o.config_path.empty() ? h::default_config(kind) : h::load_config(o.config_path);
  if (c.kind != kind)
    throw gsup::ConfigError("config is for kind '" + c.kind + "', this command runs '" + kind + "'");
  for (const auto& a : o.overrides) h::apply_override(c, a);
  if (o.reps) c.reps = *o.reps;
  if (o.workers) c.workers = *o.workers;
  c.seed = h::resolve_seed(o.seed, c.seed);
  if (!o.csv.empty()) c.csv_path = o.csv;
  if (!o.json.empty()) c.json_path = o.json;
  if (!o.plotdata.empty()) c.plotdata_path = o.plotdata;
  return c;
}

void print_record(const h::ResultRecord& r) {
  std::cout << r.kind;
  if (!std::isnan(r.x)) std::cout << " x=" << h::format_double(r.x);
  std::cout << " seed=" << r.seed << " hash=" << r.config_hash << '\n';
  for (const auto& e : r.estimates)
    std::cout << "  mc    " << e.name << " = " << e.estimate << " +- " << e.half_width << " ("
              << e.reps << " reps)\n";
  for (const auto& b : r.bounds) std::cout << "  bound " << b.name << " = " << b.value << '\n';
  for (const auto& [k, v] : r.free_constants) std::cout << "  const " << k << " = " << v << '\n';
  for (const auto& a : r.assertions)
    std::cout << "  " << (a.passed ? "PASS  " : "FAIL  ") << a.name << '\n';
}

void write_outputs(const h::ExperimentConfig& c, const std::vector<h::ResultRecord>& records) {
  if (!c.csv_path.empty()) h::emit(records, h::Format::Csv, c.csv_path);
  if (!c.json_path.empty()) h::emit(records, h::Format::Json, c.json_path);
  if (!c.plotdata_path.empty()) h::emit(records, h::Format::Plotdata, c.plotdata_path);
}

int run(const std::string& kind, const CommonOptions& o) {
  const h::ExperimentConfig c = build_config(kind, o);
  const auto records = h::run_experiment(c);
  bool ok = true;
  for (const auto& r : records) {
    print_record(r);
    ok = ok && r.passed();
  }
  write_outputs(c, records);
  return ok ? 0 : 1;
}

// Largest C at which the transfer inequality still holds for every record.
// Printed only; the config on disk is never touched.
int calibrate(const CommonOptions& o) {
  const h::ExperimentConfig c = build_config("cyclic-transfer", o);
  const auto records = h::run_experiment(c);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& r : records) {
    print_record(r);
    for (const auto& b : r.bounds)
      if (b.name == "largest_C") best = std::min(best, b.value);
  }
  write_outputs(c, records);
  std::cout << "calibrated C = " << best << " (not saved)\n";
  return 0;
}

std::string kinds_footer() {
  std::string s = "Experiment kinds:\n";
  for (const auto& k : h::experiment_kinds()) s += "  " + k.name + ": " + k.subject + '\n';
  s += "Seed precedence: --seed, then $" + std::string(h::kSeedEnv) + ", then the config.";
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounds on P{sup X <= theta} for Gaussian families, checked by simulation"};
  app.set_version_flag("--version", std::string(h::library_version()));
  app.footer(kinds_footer());
  app.require_subcommand(1);

  struct Command {
    const char* name;
    const char* kind;
  };
  const Command fixed[] = {{"bound", "equicorrelated"},
                           {"simulate", "moderate-trig"},
                           {"decouple", "decoupling"},
                           {"cyclic", "cyclic-transfer"},
                           {"kronecker", "kronecker-search"}};

  CommonOptions opts;
  std::string selected_kind;
  for (const auto& cmd : fixed) {
    auto* sub = app.add_subcommand(cmd.name, std::string(cmd.kind) + ": " +
                                                 h::kind_info(cmd.kind).subject);
    add_common(sub, opts);
    sub->callback([&selected_kind, kind = cmd.kind] { selected_kind = kind; });
  }

  std::string verify_kind;
  auto* verify = app.add_subcommand("verify", "run any experiment kind");
  std::vector<std::string> names;
  for (const auto& k : h::experiment_kinds()) names.push_back(k.name);
  verify->add_option("kind", verify_kind, "experiment kind")->required()->check(CLI::IsMember(names));
  add_common(verify, opts);
  verify->callback([&] { selected_kind = verify_kind; });

  auto* cal = app.add_subcommand(
      "calibrate", "fit the transfer constant C on cyclic-transfer configs and print it");
  add_common(cal, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cal->parsed()) return calibrate(opts);
    return run(selected_kind, opts);
  } catch (const gsup::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const gsup::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
