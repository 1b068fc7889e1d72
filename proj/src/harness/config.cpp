#include "gsup/harness/config.hpp"

#include <charconv>
#include <cstdio>
#include <limits>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "gsup/error.hpp"

namespace gsup::harness {

namespace {

using PT = ParamType;

std::vector<KindInfo> build_kinds() {
  const std::string sqrt2 = "1.4142135623730951";
  const std::string sqrt3 = "1.7320508075688772";
  const std::string sqrt5 = "2.23606797749979";
  return {
      {"equicorrelated",
       "P{max X_i <= theta} for equicorrelated unit-variance vectors against the equicorrelated "
       "deviation bound",
       {{"n", PT::Int, "8", "dimension"},
        {"lambda", PT::Real, "0.3", "common correlation"},
        {"theta", PT::Real, "2", "level"}}},
      {"block",
       "P{max X_i <= theta} for the partitioned covariance C(lambda,u) against the product "
       "Gaussian bound with beta(lambda,u)",
       {{"N", PT::Int, "2", "number of blocks"},
        {"k", PT::Int, "4", "block size"},
        {"u", PT::Real, "0.5", "within-block correlation"},
        {"lambda", PT::Real, "0.1", "between-block correlation"},
        {"theta", PT::Real, "1", "level"}}},
      {"szego",
       "P{max |X_j| <= z} for a stationary sequence against the Szego two-sided bound",
       {{"density", PT::RealList, "1,0.5", "cosine coefficients 1,c1,... of the density (c0 = 1: unit variance)"},
        {"n", PT::Int, "5", "sequence length"},
        {"z", PT::Real, "1.5", "level"}}},
      {"moderate-trig",
       "P{sup over [0,eps] of a trigonometric polynomial <= sqrt(2 eta A log A)} against the "
       "moderate-deviation bound",
       {{"coefficients", PT::Text, "constant", "constant | inverse_sqrt"},
        {"y", PT::Int, "2", "first index"},
        {"x", PT::Int, "100", "last index"},
        {"eta", PT::Real, "0.3", "eta in (0,1]"},
        {"eps", PT::Real, "1", "interval length"},
        {"V", PT::Real, "0", "V for eta = 1"},
        {"grid_nodes", PT::Int, "2048", "grid nodes on [0,eps]; 0 uses the cyclic rule"},
        {"C", PT::Real, "1", "absolute constant of the bound", true}}},
      {"cyclic-transfer",
       "P{sup X <= theta - h} against P{sup X-perp <= theta} plus the transfer error term",
       {{"x", PT::Int, "60", "last index"},
        {"y", PT::Int, "1", "first index"},
        {"U", PT::Real, "16", "interval [1,U]"},
        {"H", PT::Real, "1", "theta = 2 H sqrt(A), h = H sqrt(A)"},
        {"exponent", PT::Real, "-0.5", "a_k = k^exponent"},
        {"freq_law", PT::Text, "sqrt", "sqrt (L_k = s sqrt k) | linear (L_k = s k)"},
        {"freq_scale", PT::Real, sqrt2, "s"},
        {"density", PT::Int, "64", "grid nodes per unit length"},
        {"C", PT::Real, "1", "constant of the error term", true}}},
      {"decoupling",
       "E prod of interval indicators against the decoupling multiplier times the L^p norms",
       {{"n", PT::Int, "3", "dimension"},
        {"lambda", PT::Real, "0.2", "equicorrelation"},
        {"p", PT::Real, "0", "exponent; 0 uses beta_bar p(X)"},
        {"beta", PT::Real, "2", "beta >= 1"},
        {"box_lo", PT::Real, "0", "lower end of every interval"},
        {"box_hi", PT::Real, "inf", "upper end of every interval"}}},
      {"kronecker-search",
       "lattice search for t in I with max ||t lambda_j - beta_j|| <= 1/omega, solution count "
       "and lower bounds",
       {{"lambdas", PT::RealList, sqrt2 + "," + sqrt3, "frequencies"},
        {"betas", PT::RealList, "0.3,0.7", "targets"},
        {"omega", PT::Int, "10", "accuracy 1/omega"},
        {"h", PT::Real, "1", "lattice step"},
        {"lo", PT::Real, "1", "interval start"},
        {"hi", PT::Real, "100000", "interval end"},
        {"C_o", PT::Real, "0.125", "constant in (0,1/4)", true},
        {"C", PT::Real, "1", "constant of the count lower bounds", true}}},
      {"limsup",
       "running max of |sum alpha_k e(nu lambda_k)| along a progression against sum alpha_k",
       {{"alphas", PT::RealList, "1,1,1", "nonnegative weights"},
        {"lambdas", PT::RealList, sqrt2 + "," + sqrt3 + "," + sqrt5, "frequencies"},
        {"start", PT::Int, "1", "progression start"},
        {"step", PT::Int, "1", "progression step"},
        {"M", PT::Int, "100000", "number of terms"},
        {"convention", PT::Text, "2pi", "2pi | 2"}}},
      {"divergence",
       "partial sums of the decoupling series p(x,a) for independent frequencies",
       {{"lambdas", PT::RealList, sqrt2 + "," + sqrt3 + "," + sqrt5, "frequencies"},
        {"exponent", PT::Real, "-0.5", "a_k = k^exponent"},
        {"a", PT::Real, "1", "sampling step"},
        {"J", PT::IntList, "1000,10000,100000", "ladder of J"}}},
      {"lattice-correlation",
       "correlations of the cosine part at lattice points found with targets beta",
       {{"lambdas", PT::RealList, sqrt2 + "," + sqrt3, "frequencies (unit coefficients)"},
        {"a", PT::Real, "1", "sampling step"},
        {"omega", PT::Int, "1000", "accuracy 1/omega"},
        {"beta", PT::Real, "0.3", "common target"},
        {"c", PT::Real, "0.6", "constant in (0, 2/pi)"},
        {"m", PT::Int, "4", "number of lattice points"},
        {"lo", PT::Real, "1", "search start"},
        {"hi", PT::Real, "10000000", "search end"},
        {"kappa", PT::Real, "1", "level of the cosine-lattice bound"},
        {"pi_factor", PT::Int, "0", "1 samples at pi j a"}}},
  };
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  if (boost::algorithm::trim_copy(s).empty()) return parts;
  boost::algorithm::split(parts, s, boost::algorithm::is_any_of(","));
  for (auto& p : parts) boost::algorithm::trim(p);
  return parts;
}

double parse_real(const std::string& key, const std::string& s) {
  const std::string t = boost::algorithm::trim_copy(s);
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  if (t == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw ConfigError("'" + key + "': expected a real number, got '" + s + "'");
  return v;
}

std::int64_t parse_int(const std::string& key, const std::string& s) {
  const std::string t = boost::algorithm::trim_copy(s);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw ConfigError("'" + key + "': expected an integer, got '" + s + "'");
  return v;
}

std::uint64_t parse_uint(const std::string& key, const std::string& s) {
  const std::string t = boost::algorithm::trim_copy(s);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw ConfigError("'" + key + "': expected a non-negative integer, got '" + s + "'");
  return v;
}

void check_value(const ParamSpec& p, const std::string& value) {
  switch (p.type) {
    case PT::Int:
      parse_int(p.key, value);
      break;
    case PT::Real:
      parse_real(p.key, value);
      break;
    case PT::RealList:
      for (const auto& v : split_list(value)) parse_real(p.key, v);
      break;
    case PT::IntList:
      for (const auto& v : split_list(value)) parse_int(p.key, v);
      break;
    case PT::Text:
      if (value.empty()) throw ConfigError("'" + p.key + "' must not be empty");
      break;
  }
}

const ParamSpec* find_param(const KindInfo& info, const std::string& key) {
  for (const auto& p : info.params)
    if (p.key == key) return &p;
  return nullptr;
}

void set_value(ExperimentConfig& c, const std::string& key, const std::string& value,
               std::optional<bool> want_constant) {
  const KindInfo& info = kind_info(c.kind);
  const ParamSpec* p = find_param(info, key);
  if (!p || (want_constant && *want_constant != p->constant))
    throw ConfigError("unknown " + std::string(want_constant && *want_constant ? "constant" : "parameter") +
                      " '" + key + "' for kind '" + c.kind + "'");
  check_value(*p, value);
  (p->constant ? c.constants : c.params)[key] = value;
}

}  // namespace

const std::vector<KindInfo>& experiment_kinds() {
  static const std::vector<KindInfo> kinds = build_kinds();
  return kinds;
}

const KindInfo& kind_info(std::string_view name) {
  for (const auto& k : experiment_kinds())
    if (k.name == name) return k;
  throw ConfigError("unknown experiment kind '" + std::string(name) + "'");
}

double ExperimentConfig::real(const std::string& key) const {
  return parse_real(key, text(key));
}

std::int64_t ExperimentConfig::integer(const std::string& key) const {
  return parse_int(key, text(key));
}

std::vector<double> ExperimentConfig::reals(const std::string& key) const {
  std::vector<double> out;
  for (const auto& v : split_list(text(key))) out.push_back(parse_real(key, v));
  return out;
}

std::vector<std::int64_t> ExperimentConfig::integers(const std::string& key) const {
  std::vector<std::int64_t> out;
  for (const auto& v : split_list(text(key))) out.push_back(parse_int(key, v));
  return out;
}

const std::string& ExperimentConfig::text(const std::string& key) const {
  if (auto it = params.find(key); it != params.end()) return it->second;
  if (auto it = constants.find(key); it != constants.end()) return it->second;
  throw ConfigError("parameter '" + key + "' is not defined for kind '" + kind + "'");
}

double ExperimentConfig::constant(const std::string& key) const {
  const auto it = constants.find(key);
  if (it == constants.end()) throw ConfigError("constant '" + key + "' is not defined");
  return parse_real(key, it->second);
}

ExperimentConfig ExperimentConfig::with_value(const std::string& key,
                                              const std::string& value) const {
  ExperimentConfig c = *this;
  set_value(c, key, value, std::nullopt);
  return c;
}

ExperimentConfig default_config(const std::string& kind) {
  ExperimentConfig c;
  c.kind = kind_info(kind).name;
  for (const auto& p : kind_info(kind).params)
    (p.constant ? c.constants : c.params)[p.key] = p.default_value;
  return c;
}

ExperimentConfig parse_config(std::string_view text) {
  boost::property_tree::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    if (section != "experiment" && section != "params" && section != "constants" &&
        section != "output" && section != "sweep")
      throw ConfigError("unknown section [" + section + "]");
    if (body.empty() && !body.data().empty())
      throw ConfigError("key '" + section + "' outside a section");
  }
  const auto exp = tree.get_child_optional("experiment");
  if (!exp) throw ConfigError("missing [experiment] section");
  const auto kind = exp->get_optional<std::string>("kind");
  if (!kind) throw ConfigError("[experiment] needs 'kind'");
  ExperimentConfig c = default_config(*kind);

  for (const auto& [key, node] : *exp) {
    const std::string v = node.data();
    if (key == "kind") continue;
    if (key == "reps") {
      c.reps = parse_uint(key, v);
      if (c.reps == 0) throw ConfigError("'reps' must be >= 1");
    } else if (key == "seed") {
      c.seed = parse_uint(key, v);
    } else if (key == "workers") {
      c.workers = static_cast<unsigned>(parse_uint(key, v));
    } else {
      throw ConfigError("unknown key '" + key + "' in [experiment]");
    }
  }
  if (const auto params = tree.get_child_optional("params"))
    for (const auto& [key, node] : *params) set_value(c, key, node.data(), false);
  if (const auto consts = tree.get_child_optional("constants"))
    for (const auto& [key, node] : *consts) set_value(c, key, node.data(), true);
  if (const auto out = tree.get_child_optional("output")) {
    for (const auto& [key, node] : *out) {
      if (key == "csv") c.csv_path = node.data();
      else if (key == "json") c.json_path = node.data();
      else if (key == "plotdata") c.plotdata_path = node.data();
      else throw ConfigError("unknown key '" + key + "' in [output]");
    }
  }
  if (const auto sw = tree.get_child_optional("sweep")) {
    Sweep s;
    for (const auto& [key, node] : *sw) {
      if (key == "key") s.key = node.data();
      else if (key == "values") s.values = split_list(node.data());
      else throw ConfigError("unknown key '" + key + "' in [sweep]");
    }
    if (s.key.empty() || s.values.empty()) throw ConfigError("[sweep] needs 'key' and 'values'");
    const ParamSpec* p = find_param(kind_info(c.kind), s.key);
    if (!p) throw ConfigError("sweep key '" + s.key + "' is not a parameter of '" + c.kind + "'");
    for (const auto& v : s.values) check_value(*p, v);
    c.sweep = std::move(s);
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void apply_override(ExperimentConfig& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw ConfigError("override must look like key=value");
  const std::string key = boost::algorithm::trim_copy(std::string(assignment.substr(0, eq)));
  const std::string value = boost::algorithm::trim_copy(std::string(assignment.substr(eq + 1)));
  if (key == "experiment.reps" || key == "reps") {
    config.reps = parse_uint(key, value);
    if (config.reps == 0) throw ConfigError("'reps' must be >= 1");
  } else if (key == "experiment.seed" || key == "seed") {
    config.seed = parse_uint(key, value);
  } else if (key == "experiment.workers" || key == "workers") {
    config.workers = static_cast<unsigned>(parse_uint(key, value));
  } else {
    set_value(config, key, value, std::nullopt);
  }
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> cli, std::uint64_t config_seed) {
  if (cli) return *cli;
  if (const char* env = std::getenv(kSeedEnv); env && *env) return parse_uint(kSeedEnv, env);
  return config_seed;
}

std::string canonical_text(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "experiment.kind=" << c.kind << '\n'
      << "experiment.reps=" << c.reps << '\n'
      << "experiment.seed=" << c.seed << '\n';
  for (const auto& [k, v] : c.params) out << "params." << k << '=' << v << '\n';
  for (const auto& [k, v] : c.constants) out << "constants." << k << '=' << v << '\n';
  if (c.sweep) {
    out << "sweep.key=" << c.sweep->key << '\n' << "sweep.values=";
    for (std::size_t i = 0; i < c.sweep->values.size(); ++i)
      out << (i ? "," : "") << c.sweep->values[i];
    out << '\n';
  }
  return out.str();
}

std::string config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_text(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace gsup::harness
