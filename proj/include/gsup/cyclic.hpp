#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "gsup/simulate.hpp"
#include "gsup/spectrum.hpp"

namespace gsup {

/// Non-decreasing positive integers N_1..N_K.
class TestSequence {
 public:
  static TestSequence from_values(std::vector<std::int64_t> values);
  /// N_k = 2^min(k, 52); the cap keeps N_k L_k exactly representable.
  static TestSequence powers_of_two(Index length);
  /// N_k = k.
  static TestSequence identity(Index length);
  /// N_k = max(k, floor).
  static TestSequence at_least(std::int64_t floor, Index length);

  std::int64_t operator()(Index k) const;
  Index size() const { return static_cast<Index>(values_->size()); }
  /// N_k >= k on [y, x].
  bool dominates_index(Index y, Index x) const;
  bool has_repeats() const;

 private:
  explicit TestSequence(std::vector<std::int64_t> values);
  std::shared_ptr<const std::vector<std::int64_t>> values_;
};

/// (floor(N L), N). Exact: the floor is taken on the unrounded product.
Rational rational_freq(double L, std::int64_t N);

struct KappaCount {
  Index count = 0;
  Index degenerate = 0;  // counted blocks with N_{k-1} == N_k
};

/// Number of k >= 2 with [N_{k-1}, N_k) inside [lo, hi]. An empty block
/// N_{k-1} == N_k is contained in every interval and is counted (and tallied
/// in `degenerate`).
KappaCount kappa_count(const TestSequence& ts, double lo, double hi);

enum class DeltaBranch { YBelowU, UBelowY };

struct DeltaReport {
  double delta = 0.0;
  DeltaBranch branch = DeltaBranch::YBelowU;
  double first = 0.0;   // y sqrt(sum 1/N^2) sqrt(sum a^2), or the U-product
  double second = 0.0;  // sum_{y<=k<kappa_max} |a_k|
  double third = 0.0;   // sup_{y<=N_kappa<=U} N_kappa sqrt(sum 1/N^2) sqrt(sum a^2)
  Index kappa_max = 0;  // largest kappa with N_kappa <= U (0 if none)
  Index third_argmax = 0;
  KappaCount kappa_1u;
};

/// Error amplitude of the transfer inequality. The same expression is the
/// E (y <= U) or E' (U < y) of the expected sup-difference bound.
DeltaReport delta_term(const PolynomialSpec& spec, const TestSequence& ts, double U);

/// X-perp: frequencies replaced by floor(N_k L_k)/N_k. Integer frequencies are
/// returned unchanged.
PolynomialSpec perp_process(const PolynomialSpec& spec, const TestSequence& ts);

struct SupDiffBound {
  double e_value = 0.0;
  DeltaBranch branch = DeltaBranch::YBelowU;
  KappaCount kappa;     // kappa([y,U]) or kappa([1,U]) by branch
  double log_factor = 1.0;  // sqrt(max(log kappa, 1))
  double bound = 0.0;       // C E log_factor
  double c = 1.0;
};

SupDiffBound sup_diff_bound(const PolynomialSpec& spec, const TestSequence& ts, double U,
                            double c = 1.0);

struct TransferReport {
  double error_term = 0.0;
  DeltaReport delta;
  double log_guard = 1.0;  // max(log kappa([1,U]), 1)
  double c = 1.0;
  double exponent_scale = 0.0;  // h^2 / (Delta^2 log_guard); error = 2 exp(-C scale)
};

TransferReport transfer_bound(const PolynomialSpec& spec, const TestSequence& ts, double U,
                              double theta, double h, double c = 1.0);

struct TransferCheck {
  McEstimate lhs;   // P{max X <= theta - h}
  McEstimate perp;  // P{max X-perp <= theta}
  TransferReport report;
  bool holds = false;
  /// Largest C with lhs <= perp + 2 exp(-C scale) + 3(hw1 + hw2); +inf when
  /// any C works, 0 when none does.
  double largest_constant = 0.0;
};

/// Coupled MC over [1, U] on `grid`.
TransferCheck check_transfer(const PolynomialSpec& spec, const TestSequence& ts, double U,
                             double theta, double h, double c, const GridSpec& grid,
                             const McOptions& options);

struct TailShape {
  double mean = 0.0;
  std::vector<double> q{2.0, 3.0, 4.0};
  std::vector<double> exceedance;  // P{value > q mean}
  std::vector<double> log_exceedance;  // -inf for a zero count
  bool decreasing = false;
  bool concave = false;
  double fitted_k = 0.0;  // max_q q^2 / log(2/P), over positive counts
};

TailShape analyze_tail(const std::vector<double>& values);

struct MaxGrowth {
  std::vector<Index> j;
  std::vector<double> mean_max;  // E max of j consecutive copies
  double intercept = 0.0;
  double slope = 0.0;            // least squares of mean_max on sqrt(log j)
  double max_relative_residual = 0.0;
};

MaxGrowth max_of_copies_growth(const std::vector<double>& values, const std::vector<Index>& js);

}  // namespace gsup
