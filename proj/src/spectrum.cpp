#include "gsup/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "gsup/error.hpp"

namespace gsup {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_length(Index length, const char* what) {
  if (length < 0) throw DomainError(std::string(what) + ": negative length");
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// CoefficientSeq

CoefficientSeq::CoefficientSeq(std::vector<double> values, std::string rule)
    : values_(std::make_shared<const std::vector<double>>(std::move(values))),
      rule_(std::move(rule)) {
  for (double v : *values_)
    if (!std::isfinite(v)) throw DomainError("coefficient sequence has a non-finite entry");
}

CoefficientSeq CoefficientSeq::from_values(std::vector<double> values) {
  return CoefficientSeq(std::move(values), "explicit");
}

CoefficientSeq CoefficientSeq::constant(double c, Index length) {
  require_length(length, "constant coefficients");
  return CoefficientSeq(std::vector<double>(static_cast<std::size_t>(length), c),
                        "constant:" + format_double(c));
}

CoefficientSeq CoefficientSeq::power(double exponent, Index length) {
  require_length(length, "power coefficients");
  std::vector<double> v(static_cast<std::size_t>(length));
  for (Index k = 1; k <= length; ++k) v[k - 1] = std::pow(static_cast<double>(k), exponent);
  return CoefficientSeq(std::move(v), "power:" + format_double(exponent));
}

CoefficientSeq CoefficientSeq::prime_inverse_sqrt(Index length) {
  require_length(length, "prime coefficients");
  std::vector<double> v(static_cast<std::size_t>(length), 0.0);
  for (Index p : primes_up_to(length)) v[p - 1] = 1.0 / std::sqrt(static_cast<double>(p));
  return CoefficientSeq(std::move(v), "prime_inverse_sqrt");
}

double CoefficientSeq::operator()(Index k) const {
  if (k < 1 || k > size())
    throw DomainError("coefficient index " + std::to_string(k) + " outside 1.." +
                      std::to_string(size()));
  return (*values_)[static_cast<std::size_t>(k - 1)];
}

bool CoefficientSeq::non_vanishing(Index y, Index x) const {
  for (Index k = y; k <= x; ++k)
    if ((*this)(k) == 0.0) return false;
  return true;
}

CoefficientSeq CoefficientSeq::scaled(double c) const {
  std::vector<double> v(*values_);
  for (double& a : v) a *= c;
  return CoefficientSeq(std::move(v), rule_ + "*" + format_double(c));
}

// ---------------------------------------------------------------------------
// FrequencySeq

FrequencySeq FrequencySeq::integers(std::vector<std::int64_t> values) {
  FrequencySeq s;
  s.kind_ = FrequencyKind::Integer;
  s.size_ = static_cast<Index>(values.size());
  s.ints_ = std::make_shared<const std::vector<std::int64_t>>(std::move(values));
  return s;
}

FrequencySeq FrequencySeq::identity(Index length) {
  require_length(length, "identity frequencies");
  std::vector<std::int64_t> v(static_cast<std::size_t>(length));
  for (Index k = 1; k <= length; ++k) v[k - 1] = k;
  return integers(std::move(v));
}

FrequencySeq FrequencySeq::reals(std::vector<double> values) {
  for (double v : values)
    if (!std::isfinite(v)) throw DomainError("frequency sequence has a non-finite entry");
  FrequencySeq s;
  s.kind_ = FrequencyKind::Real;
  s.size_ = static_cast<Index>(values.size());
  s.reals_ = std::make_shared<const std::vector<double>>(std::move(values));
  return s;
}

FrequencySeq FrequencySeq::linear(double slope, Index length) {
  require_length(length, "linear frequencies");
  std::vector<double> v(static_cast<std::size_t>(length));
  for (Index k = 1; k <= length; ++k) v[k - 1] = slope * static_cast<double>(k);
  return reals(std::move(v));
}

FrequencySeq FrequencySeq::sqrt_law(double scale, Index length) {
  require_length(length, "sqrt-law frequencies");
  std::vector<double> v(static_cast<std::size_t>(length));
  for (Index k = 1; k <= length; ++k) v[k - 1] = scale * std::sqrt(static_cast<double>(k));
  return reals(std::move(v));
}

FrequencySeq FrequencySeq::rationals(std::vector<Rational> values) {
  for (const Rational& r : values)
    if (r.den <= 0) throw DomainError("rational frequency with non-positive denominator");
  FrequencySeq s;
  s.kind_ = FrequencyKind::Rational;
  s.size_ = static_cast<Index>(values.size());
  s.rationals_ = std::make_shared<const std::vector<Rational>>(std::move(values));
  return s;
}

double FrequencySeq::value(Index k) const {
  if (k < 1 || k > size_)
    throw DomainError("frequency index " + std::to_string(k) + " outside 1.." +
                      std::to_string(size_));
  const auto i = static_cast<std::size_t>(k - 1);
  switch (kind_) {
    case FrequencyKind::Integer: return static_cast<double>((*ints_)[i]);
    case FrequencyKind::Real: return (*reals_)[i];
    case FrequencyKind::Rational: return (*rationals_)[i].value();
  }
  return 0.0;
}

std::int64_t FrequencySeq::integer(Index k) const {
  if (kind_ != FrequencyKind::Integer) throw DomainError("frequency sequence is not integer");
  value(k);  // range check
  return (*ints_)[static_cast<std::size_t>(k - 1)];
}

Rational FrequencySeq::rational(Index k) const {
  value(k);
  const auto i = static_cast<std::size_t>(k - 1);
  switch (kind_) {
    case FrequencyKind::Integer: return {(*ints_)[i], 1};
    case FrequencyKind::Rational: return (*rationals_)[i];
    case FrequencyKind::Real: break;
  }
  throw DomainError("real frequency has no exact rational form");
}

double FrequencySeq::angle(Index k, double u) const {
  if (kind_ == FrequencyKind::Rational) {
    const Rational r = rational(k);
    return (u * static_cast<double>(r.num)) / static_cast<double>(r.den);
  }
  return value(k) * u;
}

bool FrequencySeq::strictly_increasing() const {
  for (Index k = 2; k <= size_; ++k)
    if (!(value(k) > value(k - 1))) return false;
  return true;
}

// ---------------------------------------------------------------------------
// PolynomialSpec

PolynomialSpec::PolynomialSpec(CoefficientSeq coeffs, FrequencySeq freqs, Index y, Index x,
                               AngularConvention convention)
    : coeffs_(std::move(coeffs)), freqs_(std::move(freqs)), y_(y), x_(x),
      convention_(convention) {
  if (y_ < 1) throw DomainError("range start y must be >= 1");
  if (!empty()) {
    if (x_ > coeffs_.size())
      throw DomainError("range end x exceeds the coefficient sequence length");
    if (x_ > freqs_.size())
      throw DomainError("range end x exceeds the frequency sequence length");
  }
  if (convention_ == AngularConvention::TwoPi && freqs_.kind() != FrequencyKind::Integer)
    throw DomainError("2pi-scaled convention requires integer frequencies");
}

double PolynomialSpec::phase(Index k, double t) const {
  if (convention_ == AngularConvention::TwoPi) {
    // Reduce j_k * t modulo 1 before scaling; exact for the grid nodes m/n.
    const double jt = static_cast<double>(freqs_.integer(k)) * t;
    return kTwoPi * (jt - std::floor(jt));
  }
  return freqs_.angle(k, t);
}

Eigen::VectorXd PolynomialSpec::coefficient_vector() const {
  Eigen::VectorXd a(terms());
  for (Index k = y_; k <= x_; ++k) a(k - y_) = coeffs_(k);
  return a;
}

PolynomialSpec PolynomialSpec::with_range(Index y, Index x) const {
  return PolynomialSpec(coeffs_, freqs_, y, x, convention_);
}

PolynomialSpec PolynomialSpec::with_coefficients(CoefficientSeq coeffs) const {
  return PolynomialSpec(std::move(coeffs), freqs_, y_, x_, convention_);
}

PolynomialSpec PolynomialSpec::with_frequencies(FrequencySeq freqs) const {
  return PolynomialSpec(coeffs_, std::move(freqs), y_, x_, convention_);
}

// ---------------------------------------------------------------------------

double power_sum(const PolynomialSpec& spec, int p) {
  if (p != 2 && p != 4) throw DomainError("power_sum supports p in {2, 4}");
  double s = 0.0;
  for (Index k = spec.y(); k <= spec.x(); ++k) {
    const double a2 = spec.coefficient(k) * spec.coefficient(k);
    s += p == 2 ? a2 : a2 * a2;
  }
  return s;
}

ModerateCondition check_moderate_condition(const PolynomialSpec& spec, double eta) {
  if (!(eta > 0.0 && eta < 1.0)) throw DomainError("eta must lie in (0,1)");
  const double A = power_sum(spec, 2);
  if (!(A > 1.0)) throw DomainError("A(y,x) <= 1, log A(y,x) is not positive");
  ModerateCondition c;
  c.lhs = std::sqrt(power_sum(spec, 4));
  c.rhs = std::pow(A, 1.0 - eta) / std::sqrt(std::log(A));
  c.holds = c.lhs <= c.rhs;
  return c;
}

// ---------------------------------------------------------------------------
// Spectral densities

SpectralDensity::SpectralDensity(std::function<double(double)> f, std::string name)
    : f_(std::move(f)), name_(std::move(name)) {
  if (!f_) throw DomainError("spectral density is empty");
  constexpr int kProbe = 4096;
  for (int i = 0; i < kProbe; ++i) {
    const double t = -std::numbers::pi + (i + 0.5) * kTwoPi / kProbe;
    const double v = f_(t);
    if (!(v >= 0.0)) throw DomainError("spectral density is negative or NaN on [-pi, pi]");
  }
}

double TrigPolynomial::operator()(double x) const {
  double s = constant_term();
  for (std::size_t m = 1; m < cos_coeffs.size(); ++m)
    s += cos_coeffs[m] * std::cos(static_cast<double>(m) * x);
  for (std::size_t m = 1; m < sin_coeffs.size(); ++m)
    s += sin_coeffs[m] * std::sin(static_cast<double>(m) * x);
  return s;
}

int TrigPolynomial::degree() const {
  int d = 0;
  for (std::size_t m = 1; m < cos_coeffs.size(); ++m)
    if (cos_coeffs[m] != 0.0) d = std::max(d, static_cast<int>(m));
  for (std::size_t m = 1; m < sin_coeffs.size(); ++m)
    if (sin_coeffs[m] != 0.0) d = std::max(d, static_cast<int>(m));
  return d;
}

double TrigPolynomial::abs_coefficient_sum() const {
  double s = 0.0;
  for (double c : cos_coeffs) s += std::abs(c);
  for (std::size_t m = 1; m < sin_coeffs.size(); ++m) s += std::abs(sin_coeffs[m]);
  return s;
}

GeometricMean spectral_geometric_mean(const SpectralDensity& f,
                                      const GeometricMeanOptions& options) {
  GeometricMean out;
  std::vector<double> steps;
  double previous = std::numeric_limits<double>::quiet_NaN();
  for (int level = 4; level <= options.max_log2_nodes; ++level) {
    const Index n = Index{1} << level;
    const double h = kTwoPi / static_cast<double>(n);
    double sum = 0.0;
    for (Index i = 0; i < n; ++i) {
      const double t = -std::numbers::pi + (static_cast<double>(i) + 0.5) * h;
      double v = f(t);
      // A zero landing exactly on a node: sample a quarter step aside.
      if (v == 0.0) v = 0.5 * (f(t - 0.25 * h) + f(t + 0.25 * h));
      if (v == 0.0) {
        out.value = 0.0;
        out.log_mean = -std::numeric_limits<double>::infinity();
        out.nodes = n;
        out.log_integrable = false;
        return out;
      }
      sum += std::log(v);
    }
    const double mean = sum / static_cast<double>(n);
    out.nodes = n;
    if (mean < -options.divergence_cutoff) {
      out.value = 0.0;
      out.log_mean = -std::numeric_limits<double>::infinity();
      out.log_integrable = false;
      return out;
    }
    if (!std::isnan(previous)) {
      const double step = mean - previous;
      steps.push_back(step);
      if (std::abs(step) < options.tol * std::max(1.0, std::abs(mean))) {
        out.log_mean = mean;
        out.value = std::exp(mean);
        return out;
      }
    }
    previous = mean;
  }
  // Refinement budget exhausted. Steadily decreasing estimates whose decrements
  // do not shrink geometrically indicate a log-integral running to -infinity.
  // Decrements that do shrink geometrically (a log zero of f makes the midpoint
  // error O(h)) are summed as a geometric tail.
  const std::size_t m = steps.size();
  if (m >= 4) {
    const double r = steps[m - 1] / steps[m - 2];
    bool geometric = r > 0.0 && r < 0.75;
    for (std::size_t i = m - 3; i < m - 1; ++i) {
      const double ri = steps[i] / steps[i - 1];
      geometric = geometric && std::abs(ri - r) < 0.05;
    }
    if (geometric) {
      out.log_mean = previous + steps[m - 1] * r / (1.0 - r);
      out.value = std::exp(out.log_mean);
      return out;
    }
  }
  if (m >= 4) {
    bool diverging = true;
    for (std::size_t i = m - 3; i < m; ++i)
      if (!(steps[i] < 0.0 && std::abs(steps[i]) >= 0.75 * std::abs(steps[i - 1])))
        diverging = false;
    if (diverging) {
      out.value = 0.0;
      out.log_mean = -std::numeric_limits<double>::infinity();
      out.log_integrable = false;
      return out;
    }
  }
  throw ConvergenceError("geometric mean quadrature did not converge within 2^" +
                         std::to_string(options.max_log2_nodes) + " nodes");
}

std::vector<double> autocovariance(const SpectralDensity& f, Index n, double tol) {
  if (n < 1) throw DomainError("autocovariance needs n >= 1");
  std::vector<double> gamma(static_cast<std::size_t>(n), 0.0);
  std::vector<double> prev;
  Index nodes = 64;
  while (nodes < 4 * n) nodes *= 2;
  for (int iter = 0; iter < 16; ++iter, nodes *= 2) {
    const double h = kTwoPi / static_cast<double>(nodes);
    std::vector<double> fv(static_cast<std::size_t>(nodes));
    for (Index i = 0; i < nodes; ++i) fv[i] = f(-std::numbers::pi + (i + 0.5) * h);
    for (Index lag = 0; lag < n; ++lag) {
      double s = 0.0;
      for (Index i = 0; i < nodes; ++i)
        s += fv[i] * std::cos(static_cast<double>(lag) * (-std::numbers::pi + (i + 0.5) * h));
      gamma[lag] = s / static_cast<double>(nodes);
    }
    if (!prev.empty()) {
      double diff = 0.0;
      for (Index lag = 0; lag < n; ++lag) diff = std::max(diff, std::abs(gamma[lag] - prev[lag]));
      if (diff <= tol * std::max(1.0, std::abs(gamma[0]))) return gamma;
    }
    prev = gamma;
  }
  throw ConvergenceError("autocovariance quadrature did not converge");
}

std::vector<Index> primes_up_to(Index limit) {
  std::vector<Index> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(static_cast<std::size_t>(limit + 1), false);
  for (Index p = 2; p <= limit; ++p) {
    if (composite[p]) continue;
    primes.push_back(p);
    for (Index q = p * p; q <= limit; q += p) composite[q] = true;
  }
  return primes;
}

}  // namespace gsup
