#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gsup/bounds.hpp"
#include "gsup/simulate.hpp"
#include "gsup/spectrum.hpp"

namespace gsup {

struct DecouplingReport {
  double p_value = 0.0;
  /// Row sums sum_j |C_ij| / C_ii (vector case) or the n cosine-sum moduli
  /// |sum_k a_k^2 cos(2 pi j_k j/n)| (cyclic case).
  std::vector<double> terms;
  double normalization = 1.0;  // A(y,x) in the cyclic case
  Index argmax = 0;
};

/// p(X) = max_i sum_j |C_ij| / C_ii.
DecouplingReport decoupling_coeff_vector(const Eigen::MatrixXd& cov);
inline DecouplingReport decoupling_coeff_vector(const CovarianceSpec& cov) {
  return decoupling_coeff_vector(cov.matrix());
}

/// p_{y,x}(n) = (1/A) sum_{j<n} |sum_k a_k^2 cos(2 pi j_k j/n)|.
DecouplingReport decoupling_coeff_cyclic(const PolynomialSpec& spec, Index n);

/// sum_k j_k a_k^2 over the spec range (integer frequencies).
double weighted_frequency_sum(const PolynomialSpec& spec);

struct RiemannGap {
  double p_value = 0.0;
  double integral_term = 0.0;  // (n/A) int_0^1 |phi(u)| du
  double gap = 0.0;
  double gap_bound = 0.0;       // (2 pi/A) sum j_k a_k^2
  double upper_bound = 0.0;     // (1/A)(n (sum a^4)^{1/2} + 2 pi sum j_k a_k^2)
  double quadrature_error = 0.0;
  bool gap_holds = false;
  bool upper_holds = false;
};

RiemannGap riemann_gap(const PolynomialSpec& spec, Index n, double tol = 1e-9);

struct QuadratureCheck {
  double lhs = 0.0;  // constant Fourier coefficient
  double rhs = 0.0;  // (1/2N) sum_{nu=-N+1}^{N} P(nu pi/N)
  double tolerance = 0.0;
  bool asserted = false;  // degree <= 2N-1
  bool holds = false;
};

QuadratureCheck mechanical_quadrature_check(const TrigPolynomial& p, Index N);

struct MultiplierReport {
  double value = 0.0;
  double beta_bar = 0.0;
  double p_coefficient = 0.0;  // p(X)
  double required_p = 0.0;     // beta_bar * p(X)
};

/// (prod sigma_i)^{1/p} / ((1-1/beta_bar)^{(n/2)(1-1/p)} det(C)^{1/(2p)}).
/// Throws DomainError when p < beta_bar p(X), reporting the minimum p.
MultiplierReport decoupling_multiplier(const Eigen::MatrixXd& cov, double p, double beta);

struct DecouplingCheck {
  McEstimate lhs;
  double rhs = 0.0;
  MultiplierReport multiplier;
  bool holds = false;
};

/// MC check of |E prod 1{X_i in [lo_i, hi_i]}| <= multiplier * prod ||f_i||_p,
/// with ||f_i||_p = (mass of [lo_i, hi_i] under N(0, sigma_i^2))^{1/p}.
DecouplingCheck verify_decoupling_mc(const CovarianceSpec& cov, double p, double beta,
                                     const std::vector<std::pair<double, double>>& boxes,
                                     const McOptions& options);

enum class TestFunction { Identity, Hermite2, Hermite3 };

double evaluate(TestFunction f, double x);
/// (E |f(Z)|^p)^{1/p} for standard normal Z, by quadrature.
double gaussian_lp_norm(TestFunction f, double p);

struct GebeleinNelsonCheck {
  McEstimate product;      // E f(U) f(V)
  double gebelein_rhs = 0.0;  // |rho| ||f||_2^2
  double nelson_rhs = 0.0;    // ||f||_p^2 with p = 1 + |rho|
  double nelson_p = 0.0;
  bool gebelein_holds = false;
  bool nelson_holds = false;
};

GebeleinNelsonCheck verify_gebelein_nelson(double rho, TestFunction f, const McOptions& options);

/// Upper bounds on P{max_{m<=z} X(m/n) <= theta}, z = ceil(n eps).
/// value is the p_{y,x}(n) form; intermediates carry value_ii (NaN when
/// n < 2 pi sum j_k a_k^2), z, the tail probability and its Mills lower bound.
BoundReport cyclic_deviation_bound(const PolynomialSpec& spec, Index n, double eps, double theta);

/// (sqrt(e)+1)/(sqrt(e)-1).
double ou_decoupling_constant();

}  // namespace gsup
