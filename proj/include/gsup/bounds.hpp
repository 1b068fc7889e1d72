#pragma once

#include <map>
#include <string>

#include <Eigen/Dense>

#include "gsup/error.hpp"
#include "gsup/spectrum.hpp"

namespace gsup {

struct BoundReport {
  double value = 0.0;
  double threshold = 0.0;  // NaN when the bound is stated for a caller-chosen theta
  std::map<std::string, double> intermediates;
  std::map<std::string, double> free_constants;
  bool vacuous = false;  // probability bound above 1
};

/// (1 + lambda n/(1-lambda))^{(n-1)/2} Phi(theta/sqrt(1+lambda(n-1)))^n.
BoundReport bound_equicorrelated(Index n, double lambda, double theta);

/// Gumbel form with b_n = sqrt(log(n^2/(4 pi log n))).
BoundReport bound_gumbel(Index n, double lambda, double x_arg, double eps);

/// Threshold sqrt(2 log n - 2 log log n - eta log n/n), lambda_max = eta/(2n).
/// The value C exp(-C' sqrt(log n)) uses the free constants C_eta, C_eta_prime.
BoundReport bound_small_lambda(Index n, double eta, double c_eta = 1.0, double c_eta_prime = 1.0);

/// Checks 0 < lambda <= u < 1, N u > lambda and (k-1) u > 1; throws DomainError
/// naming the first violated condition.
void check_block_parameters(double lambda, double u, Index k, Index N);

/// beta(lambda, u). Throws DomainError when the result is not in (0, 1).
double beta_block(double lambda, double u, Index k, Index N);

/// Coefficients of the three terms of Q: global sum, block sums, diagonal.
struct QCoefficients {
  double global = 0.0;
  double block = 0.0;
  double diagonal = 0.0;
};

QCoefficients q_coefficients(double lambda, double u, Index k, Index N);

template <typename Derived>
typename Derived::Scalar q_form(double lambda, double u, Index k, Index N,
                                const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  if (x.size() != N * k) throw DomainError("q_form: vector length must be N*k");
  const QCoefficients c = q_coefficients(lambda, u, k, N);
  const Scalar total = x.sum();
  Scalar blocks(0);
  for (Index j = 0; j < N; ++j) {
    const Scalar s = x.segment(j * k, k).sum();
    blocks += s * s;
  }
  return Scalar(c.global) * total * total + Scalar(c.block) * blocks +
         Scalar(c.diagonal) * x.squaredNorm();
}

/// (1-u)^{(k-1)N} (1+u(k-1))^N.
double block_normalizer(double u, Index k, Index N);

/// Closed form of the product-Gaussian integral bounding P{max <= theta}
/// for the block covariance C(lambda, u).
BoundReport bound_block(double lambda, double u, Index k, Index N, double theta);

struct SzegoBounds {
  double lower = 0.0;
  double upper = 1.0;
  double geometric_mean = 0.0;
  bool upper_vacuous = false;
};

SzegoBounds szego_bounds(const SpectralDensity& f, Index n, double z,
                         const GeometricMeanOptions& options = {});
/// Same, for a precomputed G(f).
SzegoBounds szego_bounds_from_g(double geometric_mean, Index n, double z);

/// log of the eta < 1 moderate-deviation bound from its aggregates:
/// -C eps A^{1-eta} / sqrt(eta (s4 + 1) log A), s4 = (sum a^4)^{1/2}.
template <typename Scalar>
Scalar moderate_trig_exponent(Scalar a, Scalar s4, Scalar eta, Scalar eps, Scalar c = Scalar(1)) {
  using std::log;
  using std::pow;
  using std::sqrt;
  return -c * eps * pow(a, Scalar(1) - eta) / sqrt(eta * (s4 + Scalar(1)) * log(a));
}

/// Moderate-deviation bound for trigonometric polynomials. eta < 1 needs the
/// fourth-moment condition; eta == 1 needs 0 < v < A.
BoundReport bound_moderate_trig(const PolynomialSpec& spec, double eta, double eps, double c = 1.0,
                                double v = 0.0);

/// Bound for A(x) ~ log log x with B = sum a_k^4.
BoundReport bound_loglog(double x, double eta, double b, double c = 1.0);
/// Same with log x given directly, for x beyond double range.
BoundReport bound_loglog_from_log(double log_x, double eta, double b, double c = 1.0);

}  // namespace gsup
