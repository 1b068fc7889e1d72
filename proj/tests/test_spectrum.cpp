#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gsup/error.hpp"
#include "gsup/spectrum.hpp"

using namespace gsup;

namespace {

PolynomialSpec ones(Index y, Index x) {
  return PolynomialSpec(CoefficientSeq::constant(1.0, std::max(x, y)),
                        FrequencySeq::identity(std::max(x, y)), y, x, AngularConvention::TwoPi);
}

TrigPolynomial random_positive_density(std::mt19937_64& rng, int degree) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TrigPolynomial p;
  p.cos_coeffs.assign(degree + 1, 0.0);
  p.sin_coeffs.assign(degree + 1, 0.0);
  double mass = 0.0;
  for (int m = 1; m <= degree; ++m) {
    p.cos_coeffs[m] = u(rng);
    p.sin_coeffs[m] = u(rng);
    mass += std::abs(p.cos_coeffs[m]) + std::abs(p.sin_coeffs[m]);
  }
  p.cos_coeffs[0] = mass + 0.1 + 0.5 * (u(rng) + 1.0);
  return p;
}

}  // namespace

TEST_SUITE("spectrum") {
  TEST_CASE("power sums") {
    CHECK(power_sum(ones(1, 5), 2) == 5.0);
    CHECK(power_sum(ones(6, 5), 2) == 0.0);
    const PolynomialSpec s(CoefficientSeq::inverse_sqrt(4), FrequencySeq::identity(4), 1, 4,
                           AngularConvention::TwoPi);
    CHECK(power_sum(s, 2) == doctest::Approx(25.0 / 12.0).epsilon(1e-14));
    CHECK_THROWS_AS(power_sum(s, 3), DomainError);
  }

  TEST_CASE("power sum additivity and Cauchy-Schwarz") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
      const Index x = 2 + static_cast<Index>(rng() % 60);
      std::vector<double> a(x);
      for (auto& v : a) v = u(rng);
      const PolynomialSpec s(CoefficientSeq::from_values(a), FrequencySeq::identity(x), 1, x,
                             AngularConvention::TwoPi);
      const Index m = 1 + static_cast<Index>(rng() % (x - 1));
      for (int p : {2, 4}) {
        const double whole = power_sum(s, p);
        const double split = power_sum(s.with_range(1, m), p) + power_sum(s.with_range(m + 1, x), p);
        CHECK(std::abs(whole - split) <= 8 * std::numeric_limits<double>::epsilon() * whole);
      }
      CHECK(std::sqrt(power_sum(s, 4)) <= power_sum(s, 2) * (1 + 1e-15));
    }
  }

  TEST_CASE("moderate condition") {
    const auto lo = check_moderate_condition(ones(1, 100), 0.1);
    CHECK(lo.lhs == doctest::Approx(10.0));
    CHECK(lo.rhs == doctest::Approx(29.4020192654774).epsilon(1e-12));
    CHECK(lo.holds);
    const auto hi = check_moderate_condition(ones(1, 100), 0.9);
    CHECK(hi.rhs == doctest::Approx(0.738545332519359).epsilon(1e-12));
    CHECK_FALSE(hi.holds);
    CHECK_THROWS_AS(check_moderate_condition(ones(1, 1), 0.5), DomainError);
  }

  TEST_CASE("geometric mean") {
    CHECK(spectral_geometric_mean(SpectralDensity([](double) { return 1.0; })).value ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(spectral_geometric_mean(SpectralDensity([](double) { return 3.5; })).value ==
          doctest::Approx(3.5).epsilon(1e-12));
    CHECK(spectral_geometric_mean(SpectralDensity([](double t) { return std::exp(std::cos(t)); }))
              .value == doctest::Approx(1.0).epsilon(1e-9));
    // log-integrable zero: G(2 - 2 cos t) = 1
    const auto g = spectral_geometric_mean(SpectralDensity([](double t) { return 2 - 2 * std::cos(t); }));
    CHECK(g.log_integrable);
    CHECK(g.value == doctest::Approx(1.0).epsilon(1e-4));
    const auto zero = spectral_geometric_mean(SpectralDensity([](double t) {
      return std::abs(t) < 1.0 ? 0.0 : 1.0;
    }));
    CHECK_FALSE(zero.log_integrable);
    CHECK(zero.value == 0.0);
  }

  TEST_CASE("AM-GM on random densities") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
      const TrigPolynomial p = random_positive_density(rng, 1 + trial % 4);
      const double g = spectral_geometric_mean(SpectralDensity([&](double t) { return p(t); })).value;
      CHECK(g <= p.constant_term() * (1 + 1e-9));
    }
  }

  TEST_CASE("autocovariance of a cosine density") {
    TrigPolynomial p;
    p.cos_coeffs = {1.0, 0.5, 0.2};
    p.sin_coeffs = {0.0, 0.0, 0.0};
    const auto gamma = autocovariance(SpectralDensity([&](double t) { return p(t); }), 4);
    CHECK(gamma[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(gamma[1] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(gamma[2] == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(std::abs(gamma[3]) < 1e-12);
  }

  TEST_CASE("sequences") {
    const auto primes = primes_up_to(30);
    CHECK(primes == std::vector<Index>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
    const auto c = CoefficientSeq::prime_inverse_sqrt(10);
    CHECK(c(4) == 0.0);
    CHECK(c(7) == doctest::Approx(1 / std::sqrt(7.0)));
    CHECK_FALSE(c.non_vanishing(1, 10));
    CHECK(CoefficientSeq::inverse_sqrt(10).non_vanishing(1, 10));
    CHECK_FALSE(FrequencySeq::reals({1.0, 0.5}).strictly_increasing());
    CHECK(FrequencySeq::sqrt_law(2.0, 5).strictly_increasing());
    const auto r = FrequencySeq::rationals({{14, 10}});
    CHECK(r.angle(1, 10.0) == doctest::Approx(14.0));
    const PolynomialSpec s = ones(3, 5);
    CHECK(s.phase(2, 0.25) == doctest::Approx(std::numbers::pi));
  }
}
