#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gsup/rng.hpp"
#include "gsup/spectrum.hpp"

namespace gsup {

/// Equispaced evaluation nodes t0 + i*step, i = 0..count-1.
struct GridSpec {
  double t0 = 0.0;
  double step = 0.0;
  Index count = 1;

  /// n points spanning [t0, t1] inclusive.
  static GridSpec uniform(double t0, double t1, Index n);
  /// ceil((t1 - t0) * density) + 1 points spanning [t0, t1].
  static GridSpec per_unit(double t0, double t1, Index density);
  /// Nodes m/n for m = 0..ceil(n*eps).
  static GridSpec cyclic(Index n, double eps);
  /// Cyclic grid with n = max(ceil(2 pi sum j_k a_k^2), ceil(1/eps)); integer
  /// frequencies under the 2pi convention only.
  static GridSpec moderate_rule(const PolynomialSpec& spec, double eps);

  double node(Index i) const { return t0 + static_cast<double>(i) * step; }
  double t1() const { return node(count - 1); }
  std::vector<double> nodes() const;
};

/// Grid used for "continuous" suprema on [t0, t1] when none is given: the
/// cyclic rule on [0, eps] for 2pi-scaled integer specs, otherwise 2^12 nodes
/// per unit length.
GridSpec default_grid(const PolynomialSpec& spec, double t0, double t1);

enum class EstimateKind { Probability, Mean };

struct McEstimate {
  double estimate = 0.0;
  std::uint64_t reps = 0;
  double half_width = 0.0;  // 95% Wilson (probabilities) or CLT (means)
  double lo = 0.0;
  double hi = 0.0;
  std::uint64_t seed = 0;
  EstimateKind kind = EstimateKind::Probability;
};

inline constexpr double kZ95 = 1.959963984540054;
inline constexpr const char* kSubstreamRule = "splitmix64(seed, replication)";

McEstimate probability_estimate(std::uint64_t hits, std::uint64_t reps, std::uint64_t seed);
McEstimate mean_estimate(std::span<const double> values, std::uint64_t seed);

struct McOptions {
  std::uint64_t reps = 10000;
  std::uint64_t seed = 0;
  unsigned workers = 0;  // 0: hardware concurrency
  std::uint64_t block = 256;
};

/// Runs `fill(first_replication, out)` over fixed blocks of replications and
/// returns one value per replication, in replication order. Block boundaries
/// depend on reps and block size only, so the result is bit-identical for any
/// worker count.
std::vector<double> replicate(
    const McOptions& options,
    const std::function<void(std::uint64_t first, std::span<double> out)>& fill);

struct GaussianPairs {
  Eigen::VectorXd g;   // g_k, k = y..x
  Eigen::VectorXd gp;  // g'_k
};

/// Reads (g_k, g'_k) for k = y..x from the stream, interleaved in k order.
GaussianPairs draw_gaussian_pairs(Index terms, SplitMix64& engine);

/// a_k cos(w_k t_i) and a_k sin(w_k t_i) on the grid, one row per node.
struct PathBasis {
  PathBasis(const PolynomialSpec& spec, const GridSpec& grid);
  Eigen::MatrixXd cos_part;
  Eigen::MatrixXd sin_part;
  Eigen::VectorXd evaluate(const GaussianPairs& pairs) const;
};

std::vector<double> sample_path(const PolynomialSpec& spec, const GridSpec& grid,
                                const GaussianPairs& pairs);
/// One path from replication 0 of `seed`.
std::vector<double> sample_path(const PolynomialSpec& spec, const GridSpec& grid,
                                std::uint64_t seed);

enum class SupKind { Max, MaxAbs };

/// Per-replication grid supremum of X (or |X|).
std::vector<double> mc_sup_values(const PolynomialSpec& spec, const GridSpec& grid,
                                  const McOptions& options, SupKind kind = SupKind::Max);

/// P{max over grid of X <= theta}. The grid event contains the continuous
/// event, so this estimates an upper bound of P{sup over the interval <= theta}.
McEstimate mc_sup_prob(const PolynomialSpec& spec, const GridSpec& grid, double theta,
                       const McOptions& options);

/// Per-replication suprema of two specs driven by the same (g, g') draws.
struct CoupledSups {
  std::vector<double> first;   // max X
  std::vector<double> second;  // max Y
  std::vector<double> diff;    // max |X - Y|
};

CoupledSups mc_coupled_sups(const PolynomialSpec& first, const PolynomialSpec& second,
                            const GridSpec& grid, const McOptions& options);

McEstimate mc_expected_sup(const PolynomialSpec& spec, const GridSpec& grid,
                           const McOptions& options, SupKind kind = SupKind::Max);
/// E max over grid of |X - Y| with shared Gaussian inputs.
McEstimate mc_expected_sup_diff(const PolynomialSpec& first, const PolynomialSpec& second,
                                const GridSpec& grid, const McOptions& options);

// ---------------------------------------------------------------------------
// Finite Gaussian vectors

class CovarianceSpec {
 public:
  enum class Structure { Explicit, Equicorrelated, Block, Stationary };

  static CovarianceSpec explicit_matrix(Eigen::MatrixXd matrix);
  /// Unit variances, all correlations lambda; -1/(n-1) < lambda < 1.
  static CovarianceSpec equicorrelated(Index n, double lambda);
  /// N diagonal k x k blocks with off-diagonal u, lambda elsewhere.
  static CovarianceSpec block(Index N, Index k, double u, double lambda);
  /// Toeplitz matrix gamma(|i - j|).
  static CovarianceSpec stationary(std::vector<double> gamma);

  const Eigen::MatrixXd& matrix() const { return matrix_; }
  Index dimension() const { return matrix_.rows(); }
  Structure structure() const { return structure_; }
  const std::string& description() const { return description_; }

 private:
  CovarianceSpec(Eigen::MatrixXd matrix, Structure structure, std::string description);
  Eigen::MatrixXd matrix_;
  Structure structure_;
  std::string description_;
};

/// Lower-triangular F with F F^T = C. Adds 1e-12 * trace/n to the diagonal
/// once if the plain factorization fails, then gives up.
Eigen::MatrixXd sampling_factor(const CovarianceSpec& cov);

std::vector<double> mc_vector_values(const CovarianceSpec& cov,
                                     const std::function<double(const Eigen::VectorXd&)>& f,
                                     const McOptions& options);

McEstimate mc_vector_probability(const CovarianceSpec& cov,
                                 const std::function<bool(const Eigen::VectorXd&)>& event,
                                 const McOptions& options);

/// P{max_i X_i <= theta} (or max_i |X_i| when kind is MaxAbs).
McEstimate mc_vector_sup_prob(const CovarianceSpec& cov, double theta, const McOptions& options,
                              SupKind kind = SupKind::Max);

McEstimate mc_vector_expectation(const CovarianceSpec& cov,
                                 const std::function<double(const Eigen::VectorXd&)>& f,
                                 const McOptions& options);

}  // namespace gsup
