#include "gsup/harness/experiment.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "gsup/bounds.hpp"
#include "gsup/cyclic.hpp"
#include "gsup/decoupling.hpp"
#include "gsup/error.hpp"
#include "gsup/kronecker.hpp"
#include "gsup/simulate.hpp"
#include "gsup/spectrum.hpp"

#ifndef GSUP_VERSION
#define GSUP_VERSION "unknown"
#endif

namespace gsup::harness {

const char* library_version() { return GSUP_VERSION; }

bool ResultRecord::passed() const {
  for (const auto& a : assertions)
    if (!a.passed) return false;
  return true;
}

namespace {

bool same_double(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

EstimateEntry entry(std::string name, const McEstimate& e) {
  return {std::move(name), e.estimate, e.half_width, e.lo, e.hi, e.reps};
}

McOptions mc_options(const ExperimentConfig& c) {
  McOptions o;
  o.reps = c.reps;
  o.seed = c.seed;
  o.workers = c.workers;
  return o;
}

void assert_le(ResultRecord& r, std::string name, double lhs, double rhs) {
  r.assertions.push_back({std::move(name), lhs <= rhs});
}

void run_equicorrelated(const ExperimentConfig& c, ResultRecord& r) {
  const Index n = c.integer("n");
  const double lambda = c.real("lambda");
  const double theta = c.real("theta");
  const BoundReport b = bound_equicorrelated(n, lambda, theta);
  const McEstimate mc =
      mc_vector_sup_prob(CovarianceSpec::equicorrelated(n, lambda), theta, mc_options(c));
  r.estimates.push_back(entry("P(max<=theta)", mc));
  r.bounds.push_back({"bound", b.value});
  r.bounds.push_back({"multiplier", b.intermediates.at("multiplier")});
  assert_le(r, "mc<=bound+3hw", mc.estimate, b.value + 3.0 * mc.half_width);
}

void run_block(const ExperimentConfig& c, ResultRecord& r) {
  const Index N = c.integer("N");
  const Index k = c.integer("k");
  const double u = c.real("u");
  const double lambda = c.real("lambda");
  const double theta = c.real("theta");
  if (N * k > 12) throw DomainError("block experiment needs N k <= 12");
  const BoundReport b = bound_block(lambda, u, k, N, theta);
  const McEstimate mc =
      mc_vector_sup_prob(CovarianceSpec::block(N, k, u, lambda), theta, mc_options(c));
  r.estimates.push_back(entry("P(max<=theta)", mc));
  r.bounds.push_back({"bound", b.value});
  r.bounds.push_back({"beta", b.intermediates.at("beta")});
  assert_le(r, "mc<=bound+3hw", mc.estimate, b.value + 3.0 * mc.half_width);
}

TrigPolynomial cosine_density(const std::vector<double>& coeffs) {
  if (coeffs.empty()) throw DomainError("density needs at least the constant coefficient");
  TrigPolynomial p;
  p.cos_coeffs = coeffs;
  p.sin_coeffs.assign(coeffs.size(), 0.0);
  return p;
}

void run_szego(const ExperimentConfig& c, ResultRecord& r) {
  const TrigPolynomial p = cosine_density(c.reals("density"));
  // The lower bound is Sidak's product of marginals, valid for unit variances.
  if (std::abs(p.constant_term() - 1.0) > 1e-12)
    throw ConfigError("szego density needs constant coefficient 1 (unit variance)");
  const SpectralDensity f([p](double t) { return p(t); }, "cosine polynomial");
  const Index n = c.integer("n");
  const double z = c.real("z");
  const SzegoBounds s = szego_bounds(f, n, z);
  const CovarianceSpec cov = CovarianceSpec::stationary(autocovariance(f, n));
  const McEstimate mc = mc_vector_sup_prob(cov, z, mc_options(c), SupKind::MaxAbs);
  r.estimates.push_back(entry("P(max|X|<=z)", mc));
  r.bounds.push_back({"lower", s.lower});
  r.bounds.push_back({"upper", s.upper});
  r.bounds.push_back({"G(f)", s.geometric_mean});
  assert_le(r, "lower-3hw<=mc", s.lower - 3.0 * mc.half_width, mc.estimate);
  assert_le(r, "mc<=upper+3hw", mc.estimate, s.upper + 3.0 * mc.half_width);
}

CoefficientSeq coefficient_rule(const std::string& rule, Index length) {
  if (rule == "constant") return CoefficientSeq::constant(1.0, length);
  if (rule == "inverse_sqrt") return CoefficientSeq::inverse_sqrt(length);
  throw ConfigError("unknown coefficient rule '" + rule + "'");
}

void run_moderate(const ExperimentConfig& c, ResultRecord& r) {
  const Index y = c.integer("y");
  const Index x = c.integer("x");
  const double eps = c.real("eps");
  const double eta = c.real("eta");
  const double C = c.constant("C");
  const PolynomialSpec spec(coefficient_rule(c.text("coefficients"), x), FrequencySeq::identity(x),
                            y, x, AngularConvention::TwoPi);
  const BoundReport b = bound_moderate_trig(spec, eta, eps, C, c.real("V"));
  const Index nodes = c.integer("grid_nodes");
  const GridSpec grid = nodes > 0 ? GridSpec::uniform(0.0, eps, nodes) : GridSpec::moderate_rule(spec, eps);
  const McEstimate mc = mc_sup_prob(spec, grid, b.threshold, mc_options(c));
  r.estimates.push_back(entry("P(sup<=threshold)", mc));
  r.bounds.push_back({"bound", b.value});
  r.bounds.push_back({"threshold", b.threshold});
  r.free_constants = b.free_constants;
  assert_le(r, "mc<=bound+3hw", mc.estimate, b.value + 3.0 * mc.half_width);
}

void run_transfer(const ExperimentConfig& c, ResultRecord& r) {
  const Index x = c.integer("x");
  const Index y = c.integer("y");
  const double U = c.real("U");
  const double H = c.real("H");
  const double scale = c.real("freq_scale");
  const std::string law = c.text("freq_law");
  FrequencySeq freqs = law == "sqrt"     ? FrequencySeq::sqrt_law(scale, x)
                       : law == "linear" ? FrequencySeq::linear(scale, x)
                                         : throw ConfigError("unknown freq_law '" + law + "'");
  const PolynomialSpec spec(CoefficientSeq::power(c.real("exponent"), x), freqs, y, x,
                            AngularConvention::Raw);
  const double root_a = std::sqrt(power_sum(spec, 2));
  const TestSequence ts = TestSequence::powers_of_two(x);
  const GridSpec grid = GridSpec::per_unit(1.0, U, c.integer("density"));
  const TransferCheck t =
      check_transfer(spec, ts, U, 2.0 * H * root_a, H * root_a, c.constant("C"), grid, mc_options(c));
  r.estimates.push_back(entry("P(supX<=theta-h)", t.lhs));
  r.estimates.push_back(entry("P(supXperp<=theta)", t.perp));
  r.bounds.push_back({"error_term", t.report.error_term});
  r.bounds.push_back({"delta", t.report.delta.delta});
  r.bounds.push_back({"kappa", static_cast<double>(t.report.delta.kappa_1u.count)});
  r.bounds.push_back({"largest_C", t.largest_constant});
  r.free_constants["C"] = t.report.c;
  r.assertions.push_back({"transfer", t.holds});
}

void run_decoupling(const ExperimentConfig& c, ResultRecord& r) {
  const Index n = c.integer("n");
  const CovarianceSpec cov = CovarianceSpec::equicorrelated(n, c.real("lambda"));
  const double beta = c.real("beta");
  double p = c.real("p");
  if (p == 0.0) p = decoupling_multiplier(cov.matrix(), 1e300, beta).required_p;
  const std::vector<std::pair<double, double>> boxes(static_cast<std::size_t>(n),
                                                     {c.real("box_lo"), c.real("box_hi")});
  const DecouplingCheck d = verify_decoupling_mc(cov, p, beta, boxes, mc_options(c));
  r.estimates.push_back(entry("E prod f_i", d.lhs));
  r.bounds.push_back({"rhs", d.rhs});
  r.bounds.push_back({"multiplier", d.multiplier.value});
  r.bounds.push_back({"p(X)", d.multiplier.p_coefficient});
  r.bounds.push_back({"p", p});
  assert_le(r, "mc<=rhs+3hw", d.lhs.estimate, d.rhs + 3.0 * d.lhs.half_width);
}

LatticeProblem lattice_problem(const ExperimentConfig& c, std::vector<double> lambdas,
                               std::vector<double> betas) {
  LatticeProblem p;
  p.lambdas = std::move(lambdas);
  p.betas = std::move(betas);
  p.omega = c.integer("omega");
  p.lo = c.real("lo");
  p.hi = c.real("hi");
  return p;
}

void run_kronecker(const ExperimentConfig& c, ResultRecord& r) {
  LatticeProblem p = lattice_problem(c, c.reals("lambdas"), c.reals("betas"));
  p.h = c.real("h");
  p.c_o = c.constant("C_o");
  const SearchResult s = lattice_search(p, true);
  const SolutionCount n = solution_count(p, c.constant("C"), false);
  r.bounds.push_back({"t_best", s.t_best});
  r.bounds.push_back({"achieved", s.achieved});
  r.bounds.push_back({"count", static_cast<double>(n.count)});
  r.bounds.push_back({"k", static_cast<double>(n.k)});
  r.bounds.push_back({"lower_ii", n.lower_ii});
  r.bounds.push_back({"length_threshold", s.length_threshold});
  r.free_constants["C_o"] = p.c_o;
  r.free_constants["C"] = n.c;
  // The theorem guarantees success only beyond the length threshold.
  if (s.armed) r.assertions.push_back({"found<=1/omega", s.success});
}

void run_limsup(const ExperimentConfig& c, ResultRecord& r) {
  const std::string conv = c.text("convention");
  if (conv != "2pi" && conv != "2") throw ConfigError("convention must be 2pi or 2");
  const LimsupResult l = limsup_exponential_sum(
      c.reals("alphas"), c.reals("lambdas"), c.integer("start"), c.integer("step"), c.integer("M"),
      conv == "2pi" ? PhaseConvention::TwoPi : PhaseConvention::Two);
  r.bounds.push_back({"final_max", l.final_max});
  r.bounds.push_back({"alpha_sum", l.alpha_sum});
  assert_le(r, "max<=sum_alpha", l.final_max, l.alpha_sum * (1.0 + 1e-12));
}

void run_divergence(const ExperimentConfig& c, ResultRecord& r) {
  const std::vector<double> lambdas = c.reals("lambdas");
  const auto x = static_cast<Index>(lambdas.size());
  const PolynomialSpec spec(CoefficientSeq::power(c.real("exponent"), x),
                            FrequencySeq::reals(lambdas), 1, x, AngularConvention::Raw);
  std::vector<std::int64_t> js;
  for (auto j : c.integers("J")) {
    js.push_back(j);
    js.push_back(2 * j);
  }
  const std::vector<double> s = divergence_partial_sums(spec, c.real("a"), js);
  for (std::size_t i = 0; i < js.size(); i += 2) {
    r.bounds.push_back({"S_" + std::to_string(js[i]), s[i]});
    r.bounds.push_back({"S_" + std::to_string(js[i + 1]), s[i + 1]});
    r.assertions.push_back({"S_2J>=1.1S_J@" + std::to_string(js[i]), s[i + 1] >= 1.1 * s[i]});
  }
}

void run_lattice_correlation(const ExperimentConfig& c, ResultRecord& r) {
  const std::vector<double> lambdas = c.reals("lambdas");
  const auto x = static_cast<Index>(lambdas.size());
  const double beta = c.real("beta");
  const LatticeProblem p = lattice_problem(c, lambdas, std::vector<double>(lambdas.size(), beta));
  const SearchResult s = lattice_search(p);
  const auto m = static_cast<std::size_t>(c.integer("m"));
  std::vector<double> points(s.hits.begin(), s.hits.begin() + std::min(m, s.hits.size()));
  const PolynomialSpec spec(CoefficientSeq::constant(1.0, x), FrequencySeq::reals(lambdas), 1, x,
                            AngularConvention::Raw);
  const LatticeCorrelation lc = lattice_correlation(spec, c.real("a"), p.omega, beta, c.real("c"),
                                                    points, c.integer("pi_factor") != 0);
  r.bounds.push_back({"points", static_cast<double>(lc.accepted.size())});
  r.bounds.push_back({"max_offdiag_corr", lc.max_offdiag_corr});
  r.bounds.push_back({"var_ratio_min", lc.var_ratio_min});
  r.bounds.push_back({"eta", lc.eta});
  if (lc.accepted.size() >= 2) {
    const BoundReport b = bound_cos_lattice(static_cast<Index>(lc.accepted.size()), lc.eta,
                                            c.real("kappa"), power_sum(spec, 2));
    r.bounds.push_back({"cos_lattice_bound", b.value});
  }
  r.assertions.push_back({"preconditions", lc.c_ok && lc.beta_ok && lc.omega_ok});
  r.assertions.push_back({"correlation<=eta", lc.cap_holds});
  r.assertions.push_back({"variance>=eta*A", lc.floor_holds});
}

ResultRecord run_single(const ExperimentConfig& c, double x) {
  const auto start = std::chrono::steady_clock::now();
  ResultRecord r;
  r.config_hash = config_hash(c);
  r.kind = c.kind;
  r.subject = kind_info(c.kind).subject;
  r.x = x;
  r.seed = c.seed;
  r.version = library_version();
  if (c.kind == "equicorrelated") run_equicorrelated(c, r);
  else if (c.kind == "block") run_block(c, r);
  else if (c.kind == "szego") run_szego(c, r);
  else if (c.kind == "moderate-trig") run_moderate(c, r);
  else if (c.kind == "cyclic-transfer") run_transfer(c, r);
  else if (c.kind == "decoupling") run_decoupling(c, r);
  else if (c.kind == "kronecker-search") run_kronecker(c, r);
  else if (c.kind == "limsup") run_limsup(c, r);
  else if (c.kind == "divergence") run_divergence(c, r);
  else if (c.kind == "lattice-correlation") run_lattice_correlation(c, r);
  else throw ConfigError("unknown experiment kind '" + c.kind + "'");
  r.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace

bool same_record(const ResultRecord& a, const ResultRecord& b, bool compare_wall_time) {
  if (a.config_hash != b.config_hash || a.kind != b.kind || a.subject != b.subject ||
      !same_double(a.x, b.x) || a.seed != b.seed || a.version != b.version ||
      a.assertions != b.assertions)
    return false;
  if (compare_wall_time && !same_double(a.wall_time_s, b.wall_time_s)) return false;
  if (a.estimates.size() != b.estimates.size() || a.bounds.size() != b.bounds.size() ||
      a.free_constants.size() != b.free_constants.size())
    return false;
  for (std::size_t i = 0; i < a.estimates.size(); ++i) {
    const auto& p = a.estimates[i];
    const auto& q = b.estimates[i];
    if (p.name != q.name || p.reps != q.reps || !same_double(p.estimate, q.estimate) ||
        !same_double(p.half_width, q.half_width) || !same_double(p.lo, q.lo) ||
        !same_double(p.hi, q.hi))
      return false;
  }
  for (std::size_t i = 0; i < a.bounds.size(); ++i)
    if (a.bounds[i].name != b.bounds[i].name || !same_double(a.bounds[i].value, b.bounds[i].value))
      return false;
  for (auto ia = a.free_constants.begin(), ib = b.free_constants.begin();
       ia != a.free_constants.end(); ++ia, ++ib)
    if (ia->first != ib->first || !same_double(ia->second, ib->second)) return false;
  return true;
}

std::vector<ResultRecord> run_experiment(const ExperimentConfig& config) {
  std::vector<ResultRecord> records;
  try {
    if (!config.sweep) {
      records.push_back(run_single(config, std::numeric_limits<double>::quiet_NaN()));
    } else {
      for (const auto& v : config.sweep->values) {
        const ExperimentConfig point = config.with_value(config.sweep->key, v);
        double x = std::numeric_limits<double>::quiet_NaN();
        try {
          x = point.real(config.sweep->key);
        } catch (const ConfigError&) {
        }
        ResultRecord r = run_single(point, x);
        // All sweep points share the hash of the config that produced them.
        r.config_hash = config_hash(config);
        records.push_back(std::move(r));
      }
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    std::ostringstream msg;
    msg << "experiment '" << config.kind << "'";
    for (const auto& [k, v] : config.params) msg << ' ' << k << '=' << v;
    msg << ": " << e.what();
    throw Error(msg.str());
  }
  return records;
}

}  // namespace gsup::harness
