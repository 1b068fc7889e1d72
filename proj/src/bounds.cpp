#include "gsup/bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "gsup/normal.hpp"

namespace gsup {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double equicorrelated_log_multiplier(Index n, double lambda) {
  const double nd = static_cast<double>(n);
  return 0.5 * (nd - 1.0) * std::log1p(lambda * nd / (1.0 - lambda));
}

void finish(BoundReport& r) { r.vacuous = r.value > 1.0; }

}  // namespace

BoundReport bound_equicorrelated(Index n, double lambda, double theta) {
  if (n < 2) throw DomainError("equicorrelated bound needs n >= 2");
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("equicorrelated bound needs lambda in (0,1)");
  if (!std::isfinite(theta)) throw DomainError("theta must be finite");
  const double nd = static_cast<double>(n);
  const double scale = std::sqrt(1.0 + lambda * (nd - 1.0));
  const double phi = normal_cdf(theta / scale);
  const double log_mult = equicorrelated_log_multiplier(n, lambda);
  BoundReport r;
  r.threshold = theta;
  r.value = std::exp(log_mult + nd * std::log(phi));
  r.intermediates["multiplier"] = std::exp(log_mult);
  r.intermediates["phi"] = phi;
  r.intermediates["scale"] = scale;
  finish(r);
  return r;
}

BoundReport bound_gumbel(Index n, double lambda, double x_arg, double eps) {
  if (n < 3) throw DomainError("Gumbel form needs n >= 3");
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("Gumbel form needs lambda in (0,1)");
  if (!(eps > 0.0)) throw DomainError("Gumbel form needs eps > 0");
  const double nd = static_cast<double>(n);
  const double inner = std::log(nd * nd / (4.0 * std::numbers::pi * std::log(nd)));
  if (!(inner > 0.0)) throw DomainError("b_n is not real for this n");
  const double b = std::sqrt(inner);
  if (x_arg < -b * b) throw DomainError("Gumbel form needs x >= -b_n^2");
  const double log_mult = equicorrelated_log_multiplier(n, lambda);
  BoundReport r;
  r.threshold = (x_arg / b + b) * std::sqrt(1.0 + lambda * (nd - 1.0));
  r.value = std::exp(log_mult - std::exp(-x_arg) * (1.0 - eps));
  r.intermediates["b_n"] = b;
  r.intermediates["multiplier"] = std::exp(log_mult);
  finish(r);
  return r;
}

BoundReport bound_small_lambda(Index n, double eta, double c_eta, double c_eta_prime) {
  if (n < 3) throw DomainError("small-lambda bound needs n >= 3");
  if (!(eta > 0.0 && eta < 1.0)) throw DomainError("small-lambda bound needs eta in (0,1)");
  const double nd = static_cast<double>(n);
  const double ln = std::log(nd);
  const double radicand = 2.0 * ln - 2.0 * std::log(ln) - eta * ln / nd;
  if (!(radicand > 0.0)) throw DomainError("small-lambda threshold radicand is not positive");
  BoundReport r;
  r.threshold = std::sqrt(radicand);
  r.value = c_eta * std::exp(-c_eta_prime * std::sqrt(ln));
  r.intermediates["lambda_max"] = eta / (2.0 * nd);
  r.intermediates["sqrt_log_n"] = std::sqrt(ln);
  r.free_constants["C_eta"] = c_eta;
  r.free_constants["C_eta_prime"] = c_eta_prime;
  finish(r);
  return r;
}

void check_block_parameters(double lambda, double u, Index k, Index N) {
  if (k < 1 || N < 1) throw DomainError("block parameters need k, N >= 1");
  if (!(lambda > 0.0)) throw DomainError("block parameters need lambda > 0");
  if (!(lambda <= u)) throw DomainError("block parameters need lambda <= u");
  if (!(u < 1.0)) throw DomainError("block parameters need u < 1");
  if (!(static_cast<double>(N) * u > lambda)) throw DomainError("block parameters need N u > lambda");
  if (!(static_cast<double>(k - 1) * u > 1.0)) throw DomainError("block parameters need (k-1) u > 1");
}

double beta_block(double lambda, double u, Index k, Index N) {
  check_block_parameters(lambda, u, k, N);
  const double kd = static_cast<double>(k);
  const double nk = static_cast<double>(N) * kd;
  const double beta = (1.0 / (1.0 - u + kd * (u - lambda))) *
                      ((1.0 - u + nk * u - kd * lambda) / (1.0 - u + nk * (u + lambda) - kd * lambda));
  if (!(beta > 0.0 && beta < 1.0))
    throw DomainError("beta(lambda,u) = " + std::to_string(beta) + " is outside (0,1)");
  return beta;
}

QCoefficients q_coefficients(double lambda, double u, Index k, Index N) {
  if (k < 1 || N < 1) throw DomainError("q_form needs k, N >= 1");
  if (!(u < 1.0)) throw DomainError("q_form needs u < 1");
  const double kd = static_cast<double>(k);
  const double nd = static_cast<double>(N);
  const double inner = 1.0 - u + kd * (u - lambda);
  QCoefficients c;
  c.global = -lambda / (inner * ((1.0 - u) + nd * kd * u + (nd - 1.0) * kd * lambda));
  c.block = -(u - lambda) / ((1.0 - u) * inner);
  c.diagonal = 1.0 / (1.0 - u);
  return c;
}

double block_normalizer(double u, Index k, Index N) {
  const double kd = static_cast<double>(k);
  const double nd = static_cast<double>(N);
  return std::pow(1.0 - u, (kd - 1.0) * nd) * std::pow(1.0 + u * (kd - 1.0), nd);
}

BoundReport bound_block(double lambda, double u, Index k, Index N, double theta) {
  if (!std::isfinite(theta)) throw DomainError("theta must be finite");
  const double beta = beta_block(lambda, u, k, N);
  const double d = block_normalizer(u, k, N);
  const double nk = static_cast<double>(N * k);
  const double phi = normal_cdf(theta * std::sqrt(beta));
  BoundReport r;
  r.threshold = theta;
  r.value = std::exp(nk * (std::log(phi) - 0.5 * std::log(beta)) - 0.5 * std::log(d));
  r.intermediates["beta"] = beta;
  r.intermediates["normalizer"] = d;
  r.intermediates["phi"] = phi;
  finish(r);
  return r;
}

SzegoBounds szego_bounds_from_g(double g, Index n, double z) {
  if (n < 1) throw DomainError("Szego bounds need n >= 1");
  if (!(z > 0.0)) throw DomainError("Szego bounds need z > 0");
  if (!(g >= 0.0)) throw DomainError("geometric mean must be nonnegative");
  const double nd = static_cast<double>(n);
  SzegoBounds s;
  s.geometric_mean = g;
  s.lower = std::pow(normal_mass(-z, z), nd);
  if (g == 0.0) {
    s.upper = 1.0;
    s.upper_vacuous = true;
  } else {
    const double zz = z / std::sqrt(g);
    s.upper = std::pow(normal_mass(-zz, zz), nd);
  }
  return s;
}

SzegoBounds szego_bounds(const SpectralDensity& f, Index n, double z,
                         const GeometricMeanOptions& options) {
  return szego_bounds_from_g(spectral_geometric_mean(f, options).value, n, z);
}

BoundReport bound_moderate_trig(const PolynomialSpec& spec, double eta, double eps, double c,
                                double v) {
  if (!(eta > 0.0 && eta <= 1.0)) throw DomainError("moderate bound needs eta in (0,1]");
  if (!(eps > 0.0 && eps <= 1.0)) throw DomainError("moderate bound needs eps in (0,1]");
  const double a = power_sum(spec, 2);
  const double s4 = std::sqrt(power_sum(spec, 4));
  BoundReport r;
  r.free_constants["C"] = c;
  r.intermediates["A"] = a;
  r.intermediates["sqrt_sum_a4"] = s4;
  if (eta < 1.0) {
    const ModerateCondition cond = check_moderate_condition(spec, eta);
    if (!cond.holds)
      throw DomainError("fourth-moment condition fails: " + std::to_string(cond.lhs) + " > " +
                        std::to_string(cond.rhs));
    const double la = std::log(a);
    r.threshold = std::sqrt(2.0 * eta * a * la);
    const double exponent = moderate_trig_exponent(a, s4, eta, eps, c);
    r.intermediates["exponent"] = exponent;
    r.value = std::exp(exponent);
  } else {
    if (!(v > 0.0 && v < a)) throw DomainError("eta = 1 branch needs 0 < V < A");
    const double lr = std::log(a / v);
    r.threshold = std::sqrt(2.0 * a * lr);
    const double exponent = -c * eps * v / std::sqrt((s4 + 1.0) * lr);
    r.intermediates["V"] = v;
    r.intermediates["exponent"] = exponent;
    r.value = std::exp(exponent);
  }
  finish(r);
  return r;
}

BoundReport bound_loglog_from_log(double log_x, double eta, double b, double c) {
  if (!(eta > 0.0 && eta < 1.0)) throw DomainError("log-log bound needs eta in (0,1)");
  if (!(b >= 0.0)) throw DomainError("log-log bound needs B >= 0");
  if (!(log_x > 1.0)) throw DomainError("x too small: log log x must be positive");
  const double ll = std::log(log_x);
  const double lll = std::log(ll);
  if (!(lll > 0.0)) throw DomainError("x too small: log log log x must be positive");
  BoundReport r;
  r.threshold = std::sqrt(2.0 * eta * ll * lll);
  const double exponent = -c * std::pow(ll, 1.0 - eta) / std::sqrt(8.0 * eta * (b + 1.0) * lll);
  r.value = std::exp(exponent);
  r.intermediates["loglog_x"] = ll;
  r.intermediates["logloglog_x"] = lll;
  r.intermediates["exponent"] = exponent;
  r.free_constants["C"] = c;
  finish(r);
  return r;
}

BoundReport bound_loglog(double x, double eta, double b, double c) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("log-log bound needs finite x > 0");
  return bound_loglog_from_log(std::log(x), eta, b, c);
}

}  // namespace gsup
