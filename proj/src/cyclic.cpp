#include "gsup/cyclic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gsup/error.hpp"

namespace gsup {

// ---------------------------------------------------------------------------
// Test sequences

TestSequence::TestSequence(std::vector<std::int64_t> values)
    : values_(std::make_shared<const std::vector<std::int64_t>>(std::move(values))) {
  const auto& v = *values_;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < 1) throw DomainError("test sequence entries must be positive");
    if (i > 0 && v[i] < v[i - 1]) throw DomainError("test sequence must be non-decreasing");
  }
}

TestSequence TestSequence::from_values(std::vector<std::int64_t> values) {
  return TestSequence(std::move(values));
}

TestSequence TestSequence::powers_of_two(Index length) {
  std::vector<std::int64_t> v(static_cast<std::size_t>(std::max<Index>(length, 0)));
  for (Index k = 1; k <= length; ++k) v[k - 1] = std::int64_t{1} << std::min<Index>(k, 52);
  return TestSequence(std::move(v));
}

TestSequence TestSequence::identity(Index length) {
  std::vector<std::int64_t> v(static_cast<std::size_t>(std::max<Index>(length, 0)));
  for (Index k = 1; k <= length; ++k) v[k - 1] = k;
  return TestSequence(std::move(v));
}

TestSequence TestSequence::at_least(std::int64_t floor, Index length) {
  std::vector<std::int64_t> v(static_cast<std::size_t>(std::max<Index>(length, 0)));
  for (Index k = 1; k <= length; ++k) v[k - 1] = std::max<std::int64_t>(k, floor);
  return TestSequence(std::move(v));
}

std::int64_t TestSequence::operator()(Index k) const {
  if (k < 1 || k > size())
    throw DomainError("test sequence index " + std::to_string(k) + " outside 1.." +
                      std::to_string(size()));
  return (*values_)[static_cast<std::size_t>(k - 1)];
}

bool TestSequence::dominates_index(Index y, Index x) const {
  for (Index k = y; k <= x; ++k)
    if ((*this)(k) < k) return false;
  return true;
}

bool TestSequence::has_repeats() const {
  return std::adjacent_find(values_->begin(), values_->end()) != values_->end();
}

Rational rational_freq(double L, std::int64_t N) {
  if (!(L > 0.0) || !std::isfinite(L)) throw DomainError("rational_freq needs finite L > 0");
  if (N < 1) throw DomainError("rational_freq needs N >= 1");
  const double n = static_cast<double>(N);
  if (static_cast<std::int64_t>(n) != N) throw DomainError("N is not exactly representable");
  const double p = n * L;
  if (!(p < 9.2e18)) throw DomainError("N L overflows a 64-bit numerator");
  // p is N L rounded; the fma residual tells which side of the true product
  // p landed on, which only matters when p itself is an integer.
  double fl = std::floor(p);
  if (fl == p && std::fma(n, L, -p) < 0.0) fl -= 1.0;
  return Rational{static_cast<std::int64_t>(fl), N};
}

KappaCount kappa_count(const TestSequence& ts, double lo, double hi) {
  if (!(lo <= hi)) throw DomainError("kappa interval must be nonempty");
  KappaCount c;
  for (Index k = 2; k <= ts.size(); ++k) {
    const auto a = static_cast<double>(ts(k - 1));
    const auto b = static_cast<double>(ts(k));
    if (a == b) {
      // [a, a) is empty, so it sits inside any interval.
      ++c.count;
      ++c.degenerate;
    } else if (a >= lo && b <= hi) {
      ++c.count;
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Delta

namespace {

struct TailSums {
  double inv_n2 = 0.0;
  double a2 = 0.0;
};

TailSums tail_sums(const PolynomialSpec& spec, const TestSequence& ts, Index from) {
  TailSums s;
  for (Index k = std::max(from, spec.y()); k <= spec.x(); ++k) {
    const auto n = static_cast<double>(ts(k));
    s.inv_n2 += 1.0 / (n * n);
    s.a2 += spec.coefficient(k) * spec.coefficient(k);
  }
  return s;
}

}  // namespace

DeltaReport delta_term(const PolynomialSpec& spec, const TestSequence& ts, double U) {
  if (!(U >= 1.0)) throw DomainError("delta needs U >= 1");
  if (spec.empty()) throw DomainError("delta needs a nonempty range");
  if (spec.x() > ts.size()) throw DomainError("test sequence shorter than the range");
  if (!ts.dominates_index(spec.y(), spec.x())) throw DomainError("test sequence needs N_k >= k");
  DeltaReport d;
  d.kappa_1u = kappa_count(ts, 1.0, U);
  const TailSums full = tail_sums(spec, ts, spec.y());
  const double y = static_cast<double>(spec.y());
  if (y <= U) {
    d.branch = DeltaBranch::YBelowU;
    d.first = y * std::sqrt(full.inv_n2) * std::sqrt(full.a2);
    for (Index k = 1; k <= ts.size(); ++k)
      if (static_cast<double>(ts(k)) <= U) d.kappa_max = k;
    for (Index k = spec.y(); k < d.kappa_max && k <= spec.x(); ++k)
      d.second += std::abs(spec.coefficient(k));
    for (Index k = 1; k <= ts.size(); ++k) {
      const auto nk = static_cast<double>(ts(k));
      if (nk < y || nk > U) continue;
      const TailSums t = tail_sums(spec, ts, k);
      const double v = nk * std::sqrt(t.inv_n2) * std::sqrt(t.a2);
      if (v > d.third) {
        d.third = v;
        d.third_argmax = k;
      }
    }
    d.delta = d.first + d.second + d.third;
  } else {
    d.branch = DeltaBranch::UBelowY;
    d.first = U * std::sqrt(full.inv_n2) * std::sqrt(full.a2);
    d.delta = d.first;
  }
  return d;
}

PolynomialSpec perp_process(const PolynomialSpec& spec, const TestSequence& ts) {
  if (spec.convention() != AngularConvention::Raw)
    throw DomainError("perp_process needs the raw angular convention");
  const FrequencySeq& f = spec.frequencies();
  if (f.kind() == FrequencyKind::Integer) return spec;
  if (f.kind() == FrequencyKind::Rational) throw DomainError("frequencies are already rational");
  if (ts.size() < spec.x()) throw DomainError("test sequence shorter than the range");
  std::vector<Rational> r(static_cast<std::size_t>(f.size()));
  for (Index k = 1; k <= f.size(); ++k) {
    // Entries outside [y, x] are never evaluated; keep them as the identity
    // quantization so the sequence stays well formed.
    if (k >= spec.y() && k <= spec.x())
      r[k - 1] = rational_freq(f.value(k), ts(k));
    else
      r[k - 1] = Rational{static_cast<std::int64_t>(std::floor(f.value(k))), 1};
  }
  return spec.with_frequencies(FrequencySeq::rationals(std::move(r)));
}

SupDiffBound sup_diff_bound(const PolynomialSpec& spec, const TestSequence& ts, double U,
                            double c) {
  const DeltaReport d = delta_term(spec, ts, U);
  SupDiffBound b;
  b.e_value = d.delta;
  b.branch = d.branch;
  b.c = c;
  b.kappa = d.branch == DeltaBranch::YBelowU
                ? kappa_count(ts, static_cast<double>(spec.y()), U)
                : d.kappa_1u;
  const double lk = b.kappa.count > 0 ? std::log(static_cast<double>(b.kappa.count)) : 0.0;
  b.log_factor = std::sqrt(std::max(lk, 1.0));
  b.bound = c * b.e_value * b.log_factor;
  return b;
}

TransferReport transfer_bound(const PolynomialSpec& spec, const TestSequence& ts, double U,
                              double theta, double h, double c) {
  if (!(theta > 0.0)) throw DomainError("transfer bound needs theta > 0");
  if (!(h > 0.0 && h < theta)) throw DomainError("transfer bound needs 0 < h < theta");
  TransferReport r;
  r.delta = delta_term(spec, ts, U);
  r.c = c;
  const double kappa = static_cast<double>(r.delta.kappa_1u.count);
  r.log_guard = std::max(kappa > 0 ? std::log(kappa) : 0.0, 1.0);
  if (r.delta.delta == 0.0) {
    r.exponent_scale = std::numeric_limits<double>::infinity();
    r.error_term = 0.0;
    return r;
  }
  r.exponent_scale = h * h / (r.delta.delta * r.delta.delta * r.log_guard);
  r.error_term = 2.0 * std::exp(-c * r.exponent_scale);
  return r;
}

TransferCheck check_transfer(const PolynomialSpec& spec, const TestSequence& ts, double U,
                             double theta, double h, double c, const GridSpec& grid,
                             const McOptions& options) {
  TransferCheck t;
  t.report = transfer_bound(spec, ts, U, theta, h, c);
  const PolynomialSpec perp = perp_process(spec, ts);
  const CoupledSups s = mc_coupled_sups(spec, perp, grid, options);
  const auto below = [](const std::vector<double>& v, double level) {
    return static_cast<std::uint64_t>(
        std::count_if(v.begin(), v.end(), [&](double s) { return s <= level; }));
  };
  t.lhs = probability_estimate(below(s.first, theta - h), options.reps, options.seed);
  t.perp = probability_estimate(below(s.second, theta), options.reps, options.seed);
  const double margin = 3.0 * (t.lhs.half_width + t.perp.half_width);
  t.holds = t.lhs.estimate <= t.perp.estimate + t.report.error_term + margin;
  const double slack = t.lhs.estimate - t.perp.estimate - margin;
  if (slack <= 0.0)
    t.largest_constant = std::numeric_limits<double>::infinity();
  else if (slack >= 2.0 || !std::isfinite(t.report.exponent_scale))
    t.largest_constant = 0.0;
  else
    t.largest_constant = -std::log(slack / 2.0) / t.report.exponent_scale;
  return t;
}

// ---------------------------------------------------------------------------
// Tail shape of the coupled difference

TailShape analyze_tail(const std::vector<double>& values) {
  if (values.empty()) throw DomainError("tail analysis needs values");
  TailShape t;
  double sum = 0.0;
  for (double v : values) sum += v;
  t.mean = sum / static_cast<double>(values.size());
  for (double q : t.q) {
    const auto hits = std::count_if(values.begin(), values.end(),
                                    [&](double v) { return v > q * t.mean; });
    const double p = static_cast<double>(hits) / static_cast<double>(values.size());
    t.exceedance.push_back(p);
    t.log_exceedance.push_back(p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity());
    if (p > 0.0) t.fitted_k = std::max(t.fitted_k, q * q / std::log(2.0 / p));
  }
  const auto& l = t.log_exceedance;
  t.decreasing = true;
  for (std::size_t i = 1; i < l.size(); ++i)
    if (!(l[i] < l[i - 1] || (std::isinf(l[i]) && std::isinf(l[i - 1])))) t.decreasing = false;
  t.concave = true;
  for (std::size_t i = 1; i + 1 < l.size(); ++i) {
    if (std::isinf(l[i + 1])) continue;  // a drop to -inf keeps the slope falling
    if (std::isinf(l[i]) || l[i + 1] - l[i] > l[i] - l[i - 1]) t.concave = false;
  }
  return t;
}

MaxGrowth max_of_copies_growth(const std::vector<double>& values, const std::vector<Index>& js) {
  MaxGrowth g;
  g.j = js;
  for (Index j : js) {
    if (j < 1) throw DomainError("copy count must be >= 1");
    const std::size_t groups = values.size() / static_cast<std::size_t>(j);
    if (groups == 0) throw DomainError("not enough values for the requested copies");
    double sum = 0.0;
    for (std::size_t gi = 0; gi < groups; ++gi) {
      const auto first = values.begin() + static_cast<std::ptrdiff_t>(gi * j);
      sum += *std::max_element(first, first + j);
    }
    g.mean_max.push_back(sum / static_cast<double>(groups));
  }
  // Least squares of mean_max on sqrt(log j).
  const std::size_t m = js.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = std::sqrt(std::log(static_cast<double>(js[i])));
    sx += x;
    sy += g.mean_max[i];
    sxx += x * x;
    sxy += x * g.mean_max[i];
  }
  const double md = static_cast<double>(m);
  const double den = md * sxx - sx * sx;
  g.slope = den != 0.0 ? (md * sxy - sx * sy) / den : 0.0;
  g.intercept = (sy - g.slope * sx) / md;
  for (std::size_t i = 0; i < m; ++i) {
    const double fit = g.intercept + g.slope * std::sqrt(std::log(static_cast<double>(js[i])));
    g.max_relative_residual =
        std::max(g.max_relative_residual, std::abs(g.mean_max[i] - fit) / std::abs(g.mean_max[i]));
  }
  return g;
}

}  // namespace gsup
