#include "gsup/kronecker.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "gsup/error.hpp"
#include "gsup/normal.hpp"

namespace gsup {

double nearest_integer_distance(double u) { return std::abs(u - std::nearbyint(u)); }

Index xi_radius(Index n, Index omega, double c_o) {
  if (n < 1 || omega < 1) throw DomainError("xi radius needs N, omega >= 1");
  if (!(c_o > 0.0 && c_o < 0.25)) throw DomainError("C_o must lie in (0, 1/4)");
  return static_cast<Index>(std::floor(6.0 * static_cast<double>(omega) *
                                       std::log(static_cast<double>(n * omega) / c_o)));
}

namespace {

void validate(const LatticeProblem& p) {
  if (p.lambdas.empty()) throw DomainError("lattice problem needs N >= 1");
  if (p.betas.size() != p.lambdas.size()) throw DomainError("one target per frequency");
  if (p.omega < 1) throw DomainError("omega must be >= 1");
  if (!(p.h > 0.0)) throw DomainError("h must be > 0");
  if (!(p.c_o > 0.0 && p.c_o < 0.25)) throw DomainError("C_o must lie in (0, 1/4)");
  if (!(p.lo <= p.hi)) throw DomainError("interval must be nonempty");
}

double max_target_distance(const LatticeProblem& p, double t) {
  double worst = 0.0;
  for (std::size_t j = 0; j < p.lambdas.size(); ++j)
    worst = std::max(worst, nearest_integer_distance(t * p.lambdas[j] - p.betas[j]));
  return worst;
}

}  // namespace

XiReport xi(const LatticeProblem& problem) {
  validate(problem);
  const auto n = static_cast<Index>(problem.lambdas.size());
  XiReport r;
  r.radius = problem.radius_override > 0 ? problem.radius_override
                                         : xi_radius(n, problem.omega, problem.c_o);
  if (r.radius < 1) throw DomainError("enumeration radius must be >= 1");
  const double side = 2.0 * static_cast<double>(r.radius) + 1.0;
  if (std::pow(side, static_cast<double>(n)) > kEnumerationBudget)
    throw BudgetError("Xi enumeration needs (2M+1)^N = " +
                      std::to_string(std::pow(side, static_cast<double>(n))) + " > 1e8 vectors");

  std::vector<std::int64_t> nu(static_cast<std::size_t>(n), -r.radius);
  r.xi = std::numeric_limits<double>::infinity();
  for (;;) {
    auto first = std::find_if(nu.begin(), nu.end(), [](std::int64_t v) { return v != 0; });
    if (first != nu.end() && *first > 0) {
      double s = 0.0;
      for (Index l = 0; l < n; ++l) s += problem.lambdas[l] * static_cast<double>(nu[l]);
      const double d = nearest_integer_distance(problem.h * s);
      if (d < r.xi) {
        r.xi = d;
        r.argmin = nu;
      }
    }
    // Odometer with the first coordinate most significant.
    Index pos = n - 1;
    while (pos >= 0 && nu[pos] == r.radius) nu[pos--] = -r.radius;
    if (pos < 0) break;
    ++nu[pos];
  }
  r.degenerate = r.xi == 0.0;
  return r;
}

double kronecker_length_threshold(Index n, Index omega, double c_o, double xi_value) {
  if (!(xi_value > 0.0)) return std::numeric_limits<double>::infinity();
  const double ratio = static_cast<double>(n * omega) / c_o;
  const double base = 4.0 * static_cast<double>(omega) / c_o * std::sqrt(std::log(ratio));
  return std::pow(base, static_cast<double>(n)) / xi_value;
}

SearchResult lattice_search(const LatticeProblem& problem, bool with_threshold) {
  validate(problem);
  const auto m_lo = static_cast<std::int64_t>(std::max(0.0, std::ceil(problem.lo / problem.h)));
  const auto m_hi = static_cast<std::int64_t>(std::floor(problem.hi / problem.h));
  SearchResult s;
  if (m_hi < m_lo) throw DomainError("interval contains no lattice point");
  if (static_cast<double>(m_hi - m_lo + 1) > kEnumerationBudget)
    throw BudgetError("lattice search would scan more than 1e8 points");
  s.points = m_hi - m_lo + 1;
  const double target = 1.0 / static_cast<double>(problem.omega);
  for (std::int64_t m = m_lo; m <= m_hi; ++m) {
    const double t = problem.h * static_cast<double>(m);
    const double d = max_target_distance(problem, t);
    if (d < s.achieved) {
      s.achieved = d;
      s.t_best = t;
    }
    if (d <= target) s.hits.push_back(t);
  }
  s.success = s.achieved <= target;
  if (with_threshold) {
    const auto n = static_cast<Index>(problem.lambdas.size());
    try {
      const XiReport x = xi(problem);
      s.length_threshold = kronecker_length_threshold(n, problem.omega, problem.c_o, x.xi);
    } catch (const BudgetError&) {
      s.length_threshold = std::numeric_limits<double>::infinity();
    }
    s.armed = problem.hi - problem.lo > s.length_threshold;
  }
  return s;
}

Index kronecker_k_index(double ratio) {
  if (!(ratio > 0.0) || !std::isfinite(ratio)) throw DomainError("k index needs a finite ratio > 0");
  for (Index j = 1;; ++j) {
    const double rhs = std::pow(4.0, 2.0 * static_cast<double>(j) - 1.0) /
                       std::sqrt(static_cast<double>(j));
    if (ratio <= rhs) return j;
  }
}

SolutionCount solution_count(const LatticeProblem& problem, double c, bool with_xi) {
  const SearchResult s = lattice_search(problem);
  const auto n = static_cast<double>(problem.lambdas.size());
  SolutionCount r;
  r.c = c;
  r.count = static_cast<std::int64_t>(s.hits.size());
  r.k = kronecker_k_index(n * static_cast<double>(problem.omega) / problem.c_o);
  r.lower_ii = std::pow(c / (static_cast<double>(problem.omega) * std::sqrt(static_cast<double>(r.k))), n) *
               static_cast<double>(s.points);
  r.lower_iii = std::numeric_limits<double>::quiet_NaN();
  if (with_xi) {
    const XiReport x = xi(problem);
    r.lower_iii = x.xi > 0.0 ? std::pow(c, n / 2.0) / (problem.h * x.xi)
                             : std::numeric_limits<double>::infinity();
  }
  return r;
}

LimsupResult limsup_exponential_sum(const std::vector<double>& alphas,
                                    const std::vector<double>& lambdas, std::int64_t start,
                                    std::int64_t step, std::int64_t M,
                                    PhaseConvention convention) {
  if (alphas.size() != lambdas.size()) throw DomainError("one alpha per frequency");
  if (M < 1) throw DomainError("limsup scan needs M >= 1");
  for (double a : alphas)
    if (!(a >= 0.0)) throw DomainError("alphas must be nonnegative");
  LimsupResult r;
  for (double a : alphas) r.alpha_sum += a;
  r.running_max.reserve(static_cast<std::size_t>(M));
  double best = 0.0;
  for (std::int64_t i = 0; i < M; ++i) {
    const double nu = static_cast<double>(start + step * i);
    std::complex<double> s = 0.0;
    for (std::size_t k = 0; k < alphas.size(); ++k) {
      double angle;
      if (convention == PhaseConvention::TwoPi) {
        const double x = nu * lambdas[k];
        angle = 2.0 * std::numbers::pi * (x - std::floor(x));
      } else {
        angle = 2.0 * nu * lambdas[k];
      }
      s += alphas[k] * std::polar(1.0, angle);
    }
    best = std::max(best, std::abs(s));
    r.running_max.push_back(best);
  }
  r.final_max = best;
  return r;
}

std::vector<double> divergence_partial_sums(const PolynomialSpec& spec, double a,
                                            const std::vector<std::int64_t>& js) {
  if (!(a > 0.0)) throw DomainError("divergence sums need a > 0");
  if (spec.empty()) throw DomainError("divergence sums need a nonempty range");
  if (!spec.coefficients().non_vanishing(spec.y(), spec.x()))
    throw DomainError("divergence sums need non-vanishing coefficients");
  const double A = power_sum(spec, 2);
  std::int64_t j_max = 0;
  for (auto j : js) {
    if (j < 0) throw DomainError("J must be >= 0");
    j_max = std::max(j_max, j);
  }
  std::vector<double> w;
  std::vector<double> freq;
  for (Index k = spec.y(); k <= spec.x(); ++k) {
    w.push_back(spec.coefficient(k) * spec.coefficient(k));
    freq.push_back(spec.frequencies().value(k));
  }
  std::vector<double> out(js.size());
  double running = 0.0;
  for (std::int64_t j = 0; j <= j_max; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k)
      s += w[k] * std::cos(freq[k] * static_cast<double>(j) * a);
    running += std::abs(s);
    for (std::size_t i = 0; i < js.size(); ++i)
      if (js[i] == j) out[i] = running / A;
  }
  return out;
}

LatticeCorrelation lattice_correlation(const PolynomialSpec& spec, double a, Index omega,
                                       double beta, double c, const std::vector<double>& points,
                                       bool pi_factor) {
  if (spec.empty()) throw DomainError("lattice correlation needs a nonempty range");
  if (spec.convention() != AngularConvention::Raw)
    throw DomainError("lattice correlation needs the raw angular convention");
  if (omega < 1) throw DomainError("omega must be >= 1");
  LatticeCorrelation r;
  const double om = static_cast<double>(omega);
  r.eta = 1.0 - 2.0 / om;
  r.c_ok = c > 0.0 && c < 2.0 / std::numbers::pi;
  r.beta_ok = 0.5 * c * beta * beta < 1.0;
  r.omega_ok = om > 12.0 * std::numbers::pi / (c * std::pow(std::numbers::pi * beta, 2));

  for (double j : points) {
    double worst = 0.0;
    for (Index k = spec.y(); k <= spec.x(); ++k)
      worst = std::max(worst, nearest_integer_distance(j * spec.frequencies().value(k) - beta));
    (worst <= 1.0 / om ? r.accepted : r.rejected).push_back(j);
  }

  const double scale = pi_factor ? std::numbers::pi : 1.0;
  const auto m = static_cast<Index>(r.accepted.size());
  const Index terms = spec.terms();
  // Columns hold a_k cos(lambda_k t_u); the Gram matrix is the covariance.
  Eigen::MatrixXd basis(terms, m);
  for (Index u = 0; u < m; ++u) {
    const double t = scale * r.accepted[u] * a;
    for (Index k = spec.y(); k <= spec.x(); ++k)
      basis(k - spec.y(), u) = spec.coefficient(k) * std::cos(spec.frequencies().value(k) * t);
  }
  const Eigen::MatrixXd cov = basis.transpose() * basis;
  const double A = power_sum(spec, 2);
  r.correlation.resize(m, m);
  for (Index u = 0; u < m; ++u) {
    r.var_ratio_min = std::min(r.var_ratio_min, cov(u, u) / A);
    for (Index v = 0; v < m; ++v) {
      r.correlation(u, v) = cov(u, v) / std::sqrt(cov(u, u) * cov(v, v));
      if (u != v) r.max_offdiag_corr = std::max(r.max_offdiag_corr, r.correlation(u, v));
    }
  }
  r.cap_holds = m < 2 || r.max_offdiag_corr <= r.eta;
  r.floor_holds = m == 0 || r.var_ratio_min >= r.eta;
  return r;
}

BoundReport bound_cos_lattice(Index m, double eta, double kappa, double A) {
  if (m < 2) throw DomainError("cos-lattice bound needs m >= 2");
  if (!(eta > 0.0 && eta < 1.0)) throw DomainError("cos-lattice bound needs eta in (0,1)");
  const double md = static_cast<double>(m);
  const double phi = normal_cdf(kappa / std::sqrt(1.0 + eta * (md - 1.0)));
  BoundReport r;
  r.threshold = eta * std::sqrt(A) * kappa;
  r.value = std::exp(-0.5 * (md - 1.0) * std::log1p(-eta) + md * std::log(phi));
  r.intermediates["multiplier"] = std::pow(1.0 - eta, -0.5 * (md - 1.0));
  r.intermediates["phi"] = phi;
  r.vacuous = r.value > 1.0;
  return r;
}

}  // namespace gsup
