#include "gsup/decoupling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "gsup/error.hpp"
#include "gsup/normal.hpp"

namespace gsup {

DecouplingReport decoupling_coeff_vector(const Eigen::MatrixXd& cov) {
  if (cov.rows() == 0 || cov.rows() != cov.cols()) throw DomainError("covariance must be square");
  DecouplingReport r;
  r.terms.resize(static_cast<std::size_t>(cov.rows()));
  for (Index i = 0; i < cov.rows(); ++i) {
    const double var = cov(i, i);
    if (!(var > 0.0)) throw DomainError("component " + std::to_string(i) + " has zero variance");
    r.terms[i] = cov.row(i).cwiseAbs().sum() / var;
    if (i == 0 || r.terms[i] > r.p_value) {
      r.p_value = r.terms[i];
      r.argmax = i;
    }
  }
  return r;
}

namespace {

void require_integer_spec(const PolynomialSpec& spec) {
  if (spec.frequencies().kind() != FrequencyKind::Integer)
    throw DomainError("cyclic quantities need integer frequencies");
}

// sum_k a_k^2 cos(2 pi j_k u) with j_k u reduced mod 1 first.
double cosine_sum(const PolynomialSpec& spec, double u) {
  double s = 0.0;
  for (Index k = spec.y(); k <= spec.x(); ++k) {
    const double a = spec.coefficient(k);
    const double ju = static_cast<double>(spec.frequencies().integer(k)) * u;
    s += a * a * std::cos(2.0 * std::numbers::pi * (ju - std::floor(ju)));
  }
  return s;
}

// Derivative and primitive (from 0) of cosine_sum.
double cosine_sum_derivative(const PolynomialSpec& spec, double u) {
  double s = 0.0;
  for (Index k = spec.y(); k <= spec.x(); ++k) {
    const double a = spec.coefficient(k);
    const auto j = static_cast<double>(spec.frequencies().integer(k));
    const double ju = j * u;
    s -= a * a * 2.0 * std::numbers::pi * j * std::sin(2.0 * std::numbers::pi * (ju - std::floor(ju)));
  }
  return s;
}

double cosine_sum_primitive(const PolynomialSpec& spec, double u) {
  double s = 0.0;
  for (Index k = spec.y(); k <= spec.x(); ++k) {
    const double a = spec.coefficient(k);
    const std::int64_t j = spec.frequencies().integer(k);
    if (j == 0) {
      s += a * a * u;
      continue;
    }
    const double ju = static_cast<double>(j) * u;
    s += a * a * std::sin(2.0 * std::numbers::pi * (ju - std::floor(ju))) /
         (2.0 * std::numbers::pi * static_cast<double>(j));
  }
  return s;
}

// Zeros of cosine_sum on [0, 1]. A cell is dropped when |f(lo)| + |f(hi)|
// exceeds slope * width (no room to reach zero) or when f is monotone on it
// (|f'(mid)| > curvature * width / 2) without a sign change; a monotone cell
// with a sign change holds exactly one root. Cells whose possible area is
// below area_floor stop refining, which bounds the work at tangential zeros.
struct ZeroFinder {
  const PolynomialSpec& spec;
  double slope = 0.0;
  double curvature = 0.0;
  double area_floor = 0.0;
  std::vector<double> zeros;

  void isolate(double lo, double flo, double hi, double fhi, int depth) {
    const double w = hi - lo;
    const bool change = (flo < 0.0) != (fhi < 0.0);
    if (!change && std::abs(flo) + std::abs(fhi) > slope * w) return;
    // Area |f| can hide in the cell; below rounding it is not worth resolving.
    const bool negligible = 2.0 * w * (std::max(std::abs(flo), std::abs(fhi)) + slope * w) <= area_floor;
    if (!change && negligible) return;
    const double mid = 0.5 * (lo + hi);
    const bool monotone = std::abs(cosine_sum_derivative(spec, mid)) > 0.5 * curvature * w;
    if (!change && monotone) return;
    if (change && (monotone || negligible || depth >= 60)) {
      std::uintmax_t iters = 100;
      const auto f = [this](double u) { return cosine_sum(spec, u); };
      const auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi,
                                                       boost::math::tools::eps_tolerance<double>(), iters);
      zeros.push_back(0.5 * (r.first + r.second));
      return;
    }
    if (depth >= 60) return;  // tangential zero: no sign change, no area lost
    const double fmid = cosine_sum(spec, mid);
    isolate(lo, flo, mid, fmid, depth + 1);
    isolate(mid, fmid, hi, fhi, depth + 1);
  }
};

}  // namespace

double weighted_frequency_sum(const PolynomialSpec& spec) {
  require_integer_spec(spec);
  double s = 0.0;
  for (Index k = spec.y(); k <= spec.x(); ++k)
    s += static_cast<double>(spec.frequencies().integer(k)) * spec.coefficient(k) *
         spec.coefficient(k);
  return s;
}

DecouplingReport decoupling_coeff_cyclic(const PolynomialSpec& spec, Index n) {
  require_integer_spec(spec);
  if (n < 1) throw DomainError("cyclic coefficient needs n >= 1");
  const double a = power_sum(spec, 2);
  if (!(a > 0.0)) throw DomainError("cyclic coefficient needs A(y,x) > 0");
  DecouplingReport r;
  r.normalization = a;
  r.terms.resize(static_cast<std::size_t>(n));
  double total = 0.0;
  for (Index j = 0; j < n; ++j) {
    // j_k j mod n in integers keeps the angle exact before scaling.
    double s = 0.0;
    for (Index k = spec.y(); k <= spec.x(); ++k) {
      const std::int64_t jk = spec.frequencies().integer(k);
      const auto residue = static_cast<double>(((((jk % n) + n) % n) * j) % n);
      const double ak = spec.coefficient(k);
      s += ak * ak * std::cos(2.0 * std::numbers::pi * residue / static_cast<double>(n));
    }
    r.terms[j] = std::abs(s);
    total += r.terms[j];
  }
  r.p_value = total / a;
  return r;
}

RiemannGap riemann_gap(const PolynomialSpec& spec, Index n, double tol) {
  const DecouplingReport p = decoupling_coeff_cyclic(spec, n);
  const double a = p.normalization;
  // int_0^1 |phi| from the exact primitive between consecutive zeros of phi.
  std::int64_t degree = 0;
  double weight = 0.0, weight2 = 0.0;
  for (Index k = spec.y(); k <= spec.x(); ++k) {
    const auto j = static_cast<double>(std::abs(spec.frequencies().integer(k)));
    const double a2 = spec.coefficient(k) * spec.coefficient(k);
    degree = std::max(degree, std::abs(spec.frequencies().integer(k)));
    weight += a2 * j;
    weight2 += a2 * j * j;
  }
  ZeroFinder zf{spec, 2.0 * std::numbers::pi * weight, 4.0 * std::numbers::pi * std::numbers::pi * weight2,
                std::numeric_limits<double>::epsilon() * a, {}};
  const std::int64_t cells = 8 * std::max<std::int64_t>(degree, 1);
  double prev_u = 0.0, prev_f = cosine_sum(spec, 0.0);
  for (std::int64_t i = 1; i <= cells; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(cells);
    const double fu = cosine_sum(spec, u);
    zf.isolate(prev_u, prev_f, u, fu, 0);
    prev_u = u;
    prev_f = fu;
  }
  std::vector<double> breaks{0.0};
  breaks.insert(breaks.end(), zf.zeros.begin(), zf.zeros.end());
  breaks.push_back(1.0);
  double integral = 0.0;
  double last = cosine_sum_primitive(spec, 0.0);
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    const double next = cosine_sum_primitive(spec, breaks[i]);
    integral += std::abs(next - last);
    last = next;
  }
  const double err_total =
      static_cast<double>(breaks.size()) * 8.0 * std::numeric_limits<double>::epsilon() * a;

  RiemannGap g;
  g.p_value = p.p_value;
  g.integral_term = static_cast<double>(n) * integral / a;
  g.quadrature_error = static_cast<double>(n) * err_total / a;
  g.gap = std::abs(g.p_value - g.integral_term);
  const double w = weighted_frequency_sum(spec);
  g.gap_bound = 2.0 * std::numbers::pi * w / a;
  g.upper_bound =
      (static_cast<double>(n) * std::sqrt(power_sum(spec, 4)) + 2.0 * std::numbers::pi * w) / a;
  g.gap_holds = g.gap <= g.gap_bound + std::max(tol, g.quadrature_error);
  g.upper_holds = g.p_value <= g.upper_bound * (1.0 + 1e-12);
  return g;
}

QuadratureCheck mechanical_quadrature_check(const TrigPolynomial& p, Index N) {
  if (N < 1) throw DomainError("mechanical quadrature needs N >= 1");
  QuadratureCheck q;
  q.lhs = p.constant_term();
  double sum = 0.0;
  for (Index nu = -N + 1; nu <= N; ++nu)
    sum += p(static_cast<double>(nu) * std::numbers::pi / static_cast<double>(N));
  q.rhs = sum / (2.0 * static_cast<double>(N));
  q.tolerance = 1e-12 * (1.0 + p.abs_coefficient_sum());
  q.asserted = p.degree() <= 2 * N - 1;
  q.holds = std::abs(q.lhs - q.rhs) <= q.tolerance;
  return q;
}

MultiplierReport decoupling_multiplier(const Eigen::MatrixXd& cov, double p, double beta) {
  if (!(beta >= 1.0)) throw DomainError("multiplier needs beta >= 1");
  const DecouplingReport pc = decoupling_coeff_vector(cov);
  const Eigen::VectorXd var = cov.diagonal();
  const double beta_bar = std::max(var.maxCoeff() / var.minCoeff(), beta);
  if (!(beta_bar > 1.0)) throw DomainError("multiplier needs beta_bar > 1");
  MultiplierReport m;
  m.beta_bar = beta_bar;
  m.p_coefficient = pc.p_value;
  m.required_p = beta_bar * pc.p_value;
  if (!(p >= m.required_p))
    throw DomainError("multiplier needs p >= beta_bar p(X) = " + std::to_string(m.required_p));
  const Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) throw DomainError("multiplier needs an invertible covariance");
  const double log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  const double n = static_cast<double>(cov.rows());
  const double log_sigma = 0.5 * var.array().log().sum();
  const double log_value = log_sigma / p - 0.5 * n * (1.0 - 1.0 / p) * std::log1p(-1.0 / beta_bar) -
                           log_det / (2.0 * p);
  m.value = std::exp(log_value);
  return m;
}

DecouplingCheck verify_decoupling_mc(const CovarianceSpec& cov, double p, double beta,
                                     const std::vector<std::pair<double, double>>& boxes,
                                     const McOptions& options) {
  const Index n = cov.dimension();
  if (static_cast<Index>(boxes.size()) != n) throw DomainError("one interval per component");
  DecouplingCheck c;
  c.multiplier = decoupling_multiplier(cov.matrix(), p, beta);
  double log_norms = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double s = std::sqrt(cov.matrix()(i, i));
    const double mass = normal_mass(boxes[i].first / s, boxes[i].second / s);
    log_norms += std::log(mass) / p;
  }
  c.rhs = c.multiplier.value * std::exp(log_norms);
  c.lhs = mc_vector_probability(
      cov,
      [&](const Eigen::VectorXd& x) {
        for (Index i = 0; i < n; ++i)
          if (x(i) < boxes[i].first || x(i) > boxes[i].second) return false;
        return true;
      },
      options);
  c.holds = c.lhs.estimate <= c.rhs + 3.0 * c.lhs.half_width;
  return c;
}

double evaluate(TestFunction f, double x) {
  switch (f) {
    case TestFunction::Identity:
      return x;
    case TestFunction::Hermite2:
      return x * x - 1.0;
    case TestFunction::Hermite3:
      return x * x * x - 3.0 * x;
  }
  return 0.0;
}

double gaussian_lp_norm(TestFunction f, double p) {
  if (!(p >= 1.0)) throw DomainError("L^p norm needs p >= 1");
  std::vector<double> roots;
  switch (f) {
    case TestFunction::Identity:
      roots = {0.0};
      break;
    case TestFunction::Hermite2:
      roots = {-1.0, 1.0};
      break;
    case TestFunction::Hermite3:
      roots = {-std::sqrt(3.0), 0.0, std::sqrt(3.0)};
      break;
  }
  using boost::math::quadrature::gauss_kronrod;
  auto integrand = [&](double x) { return std::pow(std::abs(evaluate(f, x)), p) * normal_pdf(x); };
  const double inf = std::numeric_limits<double>::infinity();
  double total = gauss_kronrod<double, 31>::integrate(integrand, -inf, roots.front(), 15, 1e-12);
  for (std::size_t i = 0; i + 1 < roots.size(); ++i)
    total += gauss_kronrod<double, 31>::integrate(integrand, roots[i], roots[i + 1], 15, 1e-12);
  total += gauss_kronrod<double, 31>::integrate(integrand, roots.back(), inf, 15, 1e-12);
  return std::pow(total, 1.0 / p);
}

GebeleinNelsonCheck verify_gebelein_nelson(double rho, TestFunction f, const McOptions& options) {
  if (!(std::abs(rho) <= 1.0)) throw DomainError("correlation must satisfy |rho| <= 1");
  Eigen::Matrix2d c;
  c << 1.0, rho, rho, 1.0;
  const CovarianceSpec cov = CovarianceSpec::explicit_matrix(c);
  GebeleinNelsonCheck g;
  g.product = mc_vector_expectation(
      cov, [&](const Eigen::VectorXd& x) { return evaluate(f, x(0)) * evaluate(f, x(1)); }, options);
  const double l2 = gaussian_lp_norm(f, 2.0);
  g.gebelein_rhs = std::abs(rho) * l2 * l2;
  g.nelson_p = 1.0 + std::abs(rho);
  const double lp = gaussian_lp_norm(f, g.nelson_p);
  g.nelson_rhs = lp * lp;
  const double lhs = std::abs(g.product.estimate);
  g.gebelein_holds = lhs <= g.gebelein_rhs + 3.0 * g.product.half_width;
  g.nelson_holds = lhs <= g.nelson_rhs + 3.0 * g.product.half_width;
  return g;
}

BoundReport cyclic_deviation_bound(const PolynomialSpec& spec, Index n, double eps, double theta) {
  if (!(eps > 0.0 && eps <= 1.0)) throw DomainError("cyclic bound needs eps in (0,1]");
  if (!(static_cast<double>(n) * eps >= 1.0)) throw DomainError("cyclic bound needs n >= 1/eps");
  if (!(theta >= 0.0)) throw DomainError("cyclic bound needs theta >= 0");
  const DecouplingReport p = decoupling_coeff_cyclic(spec, n);
  const double a = p.normalization;
  const double h = theta / std::sqrt(a);
  const double tail = normal_sf(h);
  const double nd = static_cast<double>(n);
  const double w = weighted_frequency_sum(spec);
  const double s4 = std::sqrt(power_sum(spec, 4));

  BoundReport r;
  r.threshold = theta;
  r.value = std::exp(-eps * tail * nd / p.p_value);
  const bool ii_ok = nd >= 2.0 * std::numbers::pi * w;
  r.intermediates["value_ii"] =
      ii_ok ? std::exp(-eps * tail * a / (s4 + 1.0)) : std::numeric_limits<double>::quiet_NaN();
  r.intermediates["ii_admissible"] = ii_ok ? 1.0 : 0.0;
  r.intermediates["p"] = p.p_value;
  r.intermediates["A"] = a;
  r.intermediates["z"] = std::ceil(nd * eps);
  r.intermediates["tail"] = tail;
  r.intermediates["mills_lower"] = mills_tail_lower_bound(h);
  r.vacuous = false;
  return r;
}

double ou_decoupling_constant() {
  const double s = std::sqrt(std::numbers::e);
  return (s + 1.0) / (s - 1.0);
}

}  // namespace gsup
