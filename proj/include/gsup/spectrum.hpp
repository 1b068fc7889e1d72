#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gsup {

using Index = std::int64_t;

/// Real coefficients a_1..a_K. Values are materialized once from the
/// generating rule and shared between copies, so every module sees the
/// same doubles for the same k.
class CoefficientSeq {
 public:
  static CoefficientSeq from_values(std::vector<double> values);
  static CoefficientSeq constant(double c, Index length);
  /// a_k = k^exponent.
  static CoefficientSeq power(double exponent, Index length);
  static CoefficientSeq inverse_sqrt(Index length) { return power(-0.5, length); }
  /// a_p = p^{-1/2} on primes p, 0 elsewhere.
  static CoefficientSeq prime_inverse_sqrt(Index length);

  /// 1-based access.
  double operator()(Index k) const;
  Index size() const { return static_cast<Index>(values_->size()); }
  const std::string& rule() const { return rule_; }
  bool non_vanishing(Index y, Index x) const;
  /// Scaled copy (c * a_k), keeps the rule tag for provenance.
  CoefficientSeq scaled(double c) const;

 private:
  CoefficientSeq(std::vector<double> values, std::string rule);
  std::shared_ptr<const std::vector<double>> values_;
  std::string rule_;
};

/// Exact rational num/den with den > 0.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

enum class FrequencyKind { Integer, Real, Rational };

class FrequencySeq {
 public:
  static FrequencySeq integers(std::vector<std::int64_t> values);
  /// j_k = k.
  static FrequencySeq identity(Index length);
  static FrequencySeq reals(std::vector<double> values);
  /// L_k = slope * k.
  static FrequencySeq linear(double slope, Index length);
  /// L_k = scale * sqrt(k).
  static FrequencySeq sqrt_law(double scale, Index length);
  static FrequencySeq rationals(std::vector<Rational> values);

  FrequencyKind kind() const { return kind_; }
  Index size() const { return size_; }
  double value(Index k) const;
  std::int64_t integer(Index k) const;
  Rational rational(Index k) const;
  /// frequency * u; rational entries are applied as (u * num) / den.
  double angle(Index k, double u) const;
  bool strictly_increasing() const;

 private:
  FrequencyKind kind_ = FrequencyKind::Real;
  Index size_ = 0;
  std::shared_ptr<const std::vector<std::int64_t>> ints_;
  std::shared_ptr<const std::vector<double>> reals_;
  std::shared_ptr<const std::vector<Rational>> rationals_;
};

/// TwoPi: terms cos(2 pi j_k t); Raw: terms cos(L_k u).
enum class AngularConvention { TwoPi, Raw };

/// X_{y,x}(t) = sum_{y<=k<=x} a_k (g_k cos(w_k t) + g'_k sin(w_k t)).
/// The range is empty when y > x.
class PolynomialSpec {
 public:
  PolynomialSpec(CoefficientSeq coeffs, FrequencySeq freqs, Index y, Index x,
                 AngularConvention convention);

  Index y() const { return y_; }
  Index x() const { return x_; }
  bool empty() const { return y_ > x_; }
  Index terms() const { return empty() ? 0 : x_ - y_ + 1; }
  AngularConvention convention() const { return convention_; }
  const CoefficientSeq& coefficients() const { return coeffs_; }
  const FrequencySeq& frequencies() const { return freqs_; }

  double coefficient(Index k) const { return coeffs_(k); }
  /// Phase w_k * t of term k at time t under the angular convention.
  double phase(Index k, double t) const;
  /// a_y..a_x.
  Eigen::VectorXd coefficient_vector() const;

  PolynomialSpec with_range(Index y, Index x) const;
  PolynomialSpec with_coefficients(CoefficientSeq coeffs) const;
  PolynomialSpec with_frequencies(FrequencySeq freqs) const;

 private:
  CoefficientSeq coeffs_;
  FrequencySeq freqs_;
  Index y_;
  Index x_;
  AngularConvention convention_;
};

/// sum_{y<=k<=x} a_k^p for p in {2, 4}; 0 on an empty range.
double power_sum(const PolynomialSpec& spec, int p);

struct ModerateCondition {
  bool holds = false;
  double lhs = 0.0;  // (sum a_k^4)^{1/2}
  double rhs = 0.0;  // A^{1-eta} / sqrt(log A)
};

/// Fourth-moment condition of the moderate-deviation bound. Throws DomainError
/// when A(y,x) <= 1.
ModerateCondition check_moderate_condition(const PolynomialSpec& spec, double eta);

/// Nonnegative spectral density on [-pi, pi].
class SpectralDensity {
 public:
  SpectralDensity(std::function<double(double)> f, std::string name = "custom");
  double operator()(double t) const { return f_(t); }
  const std::string& name() const { return name_; }

 private:
  std::function<double(double)> f_;
  std::string name_;
};

/// c_0 + sum_m (c_m cos(m x) + s_m sin(m x)).
struct TrigPolynomial {
  std::vector<double> cos_coeffs{0.0};  // index 0 is the constant term
  std::vector<double> sin_coeffs{0.0};  // index 0 unused

  double operator()(double x) const;
  int degree() const;
  double constant_term() const { return cos_coeffs.empty() ? 0.0 : cos_coeffs[0]; }
  double abs_coefficient_sum() const;
};

struct GeometricMeanOptions {
  double tol = 1e-10;
  int max_log2_nodes = 22;
  /// Mean of log f below -cutoff counts as divergence to -infinity.
  double divergence_cutoff = 700.0;
};

struct GeometricMean {
  double value = 0.0;     // G(f)
  double log_mean = 0.0;  // (1/2pi) int log f, -inf when divergent
  Index nodes = 0;
  bool log_integrable = true;
};

/// exp((1/2pi) int_{-pi}^{pi} log f) by composite midpoint with doubling.
/// Returns value 0 with log_integrable = false when the log-integral diverges
/// to -infinity; throws ConvergenceError when refinement stalls otherwise.
GeometricMean spectral_geometric_mean(const SpectralDensity& f,
                                      const GeometricMeanOptions& options = {});

/// gamma(h) = (1/2pi) int f(t) cos(h t) dt for h = 0..n-1.
std::vector<double> autocovariance(const SpectralDensity& f, Index n, double tol = 1e-12);

std::vector<Index> primes_up_to(Index limit);

}  // namespace gsup
