#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "gsup/bounds.hpp"
#include "gsup/spectrum.hpp"

namespace gsup {

inline constexpr double kDefaultCo = 0.125;
inline constexpr double kEnumerationBudget = 1e8;

/// Distance from u to the nearest integer, |u - round(u)| (ties to even).
double nearest_integer_distance(double u);

struct LatticeProblem {
  std::vector<double> lambdas;
  std::vector<double> betas;  // targets, same length as lambdas
  Index omega = 10;
  double h = 1.0;
  double lo = 0.0;  // interval I = [lo, hi]
  double hi = 1.0;
  double c_o = kDefaultCo;
  Index radius_override = 0;  // > 0 replaces floor(6 omega log(N omega / C_o))
};

/// floor(6 omega log(N omega / C_o)).
Index xi_radius(Index n, Index omega, double c_o);

struct XiReport {
  double xi = 0.0;
  std::vector<std::int64_t> argmin;
  Index radius = 0;
  bool degenerate = false;  // xi == 0: the hypothesis fails
};

/// Minimum of ||h sum lambda_l nu_l|| over nonzero integer nu with
/// sup |nu_l| <= M. nu and -nu give the same value, so only vectors whose
/// first nonzero entry is positive are visited; ties go to the
/// lexicographically smallest such vector.
XiReport xi(const LatticeProblem& problem);

/// (1/Xi) (4 omega/C_o sqrt(log(N omega/C_o)))^N; +inf when Xi == 0.
double kronecker_length_threshold(Index n, Index omega, double c_o, double xi_value);

struct SearchResult {
  double t_best = 0.0;
  double achieved = std::numeric_limits<double>::infinity();
  std::vector<double> hits;  // t with max_j ||t lambda_j - beta_j|| <= 1/omega
  std::int64_t points = 0;   // |I cap hN|
  bool armed = false;        // |I| exceeds the length threshold
  bool success = false;      // achieved <= 1/omega
  double length_threshold = std::numeric_limits<double>::infinity();
};

/// Scans t = h m, m >= 0, over I. When `with_threshold` is set, Xi is
/// computed (if affordable) to decide whether the success assertion is armed.
SearchResult lattice_search(const LatticeProblem& problem, bool with_threshold = false);

/// Smallest j >= 1 with ratio <= 4^{2j-1}/sqrt(j).
Index kronecker_k_index(double ratio);

struct SolutionCount {
  std::int64_t count = 0;
  double lower_ii = 0.0;   // (C/(omega sqrt k))^N |I cap hN|
  double lower_iii = 0.0;  // C^{N/2}/(h Xi), NaN when Xi was not computed
  Index k = 0;
  double c = 1.0;
};

SolutionCount solution_count(const LatticeProblem& problem, double c = 1.0,
                             bool with_xi = false);

enum class PhaseConvention { TwoPi, Two };

struct LimsupResult {
  std::vector<double> running_max;
  double final_max = 0.0;
  double alpha_sum = 0.0;
};

/// Running max of |sum_k alpha_k e^{i s nu lambda_k}| for nu = start + step i,
/// i < M, with s = 2 pi or 2.
LimsupResult limsup_exponential_sum(const std::vector<double>& alphas,
                                    const std::vector<double>& lambdas, std::int64_t start,
                                    std::int64_t step, std::int64_t M,
                                    PhaseConvention convention = PhaseConvention::TwoPi);

/// S_J = (1/A) sum_{j=0}^{J} |sum_k a_k^2 cos(lambda_k j a)| for each J.
std::vector<double> divergence_partial_sums(const PolynomialSpec& spec, double a,
                                            const std::vector<std::int64_t>& js);

struct LatticeCorrelation {
  Eigen::MatrixXd correlation;  // over accepted points
  std::vector<double> accepted;
  std::vector<double> rejected;
  double max_offdiag_corr = -std::numeric_limits<double>::infinity();
  double var_ratio_min = std::numeric_limits<double>::infinity();
  double eta = 0.0;
  bool c_ok = false;         // 0 < c < 2/pi
  bool beta_ok = false;      // (c/2) beta^2 < 1
  bool omega_ok = false;     // omega > 12 pi / (c (pi beta)^2)
  bool cap_holds = false;    // max off-diagonal correlation <= eta
  bool floor_holds = false;  // every variance ratio >= eta
};

/// Exact correlations of X^cos(t) = sum a_k g_k cos(lambda_k t) at t = s j a
/// (s = pi when `pi_factor`, else 1) for lattice points j. Points with
/// max_k ||j lambda_k - beta|| > 1/omega are rejected.
LatticeCorrelation lattice_correlation(const PolynomialSpec& spec, double a, Index omega,
                                       double beta, double c, const std::vector<double>& points,
                                       bool pi_factor = false);

/// (1-eta)^{-(m-1)/2} Phi(kappa/sqrt(1+eta(m-1)))^m; threshold is
/// eta sqrt(A) kappa.
BoundReport bound_cos_lattice(Index m, double eta, double kappa, double A = 1.0);

}  // namespace gsup
