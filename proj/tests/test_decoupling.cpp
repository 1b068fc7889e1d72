#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gsup/decoupling.hpp"
#include "gsup/normal.hpp"

using namespace gsup;

namespace {

PolynomialSpec integer_spec(std::vector<double> a, std::vector<std::int64_t> j) {
  const auto x = static_cast<Index>(a.size());
  return PolynomialSpec(CoefficientSeq::from_values(std::move(a)), FrequencySeq::integers(std::move(j)),
                        1, x, AngularConvention::TwoPi);
}

// Direct transcription of the cyclic coefficient in long double.
double brute_cyclic(const std::vector<double>& a, const std::vector<std::int64_t>& j, Index n) {
  long double A = 0, total = 0;
  for (double v : a) A += static_cast<long double>(v) * v;
  for (Index m = 0; m < n; ++m) {
    long double s = 0;
    for (std::size_t k = 0; k < a.size(); ++k)
      s += static_cast<long double>(a[k]) * a[k] *
           std::cos(2.0L * std::numbers::pi_v<long double> * static_cast<long double>(j[k]) * m / n);
    total += std::abs(s);
  }
  return static_cast<double>(total / A);
}

McOptions opts(std::uint64_t reps, std::uint64_t seed) {
  McOptions o;
  o.reps = reps;
  o.seed = seed;
  return o;
}

}  // namespace

TEST_SUITE("decoupling") {
  TEST_CASE("vector coefficient") {
    CHECK(decoupling_coeff_vector(Eigen::MatrixXd::Identity(5, 5)).p_value == 1.0);
    CHECK(decoupling_coeff_vector(CovarianceSpec::equicorrelated(6, 0.3)).p_value ==
          doctest::Approx(1 + 5 * 0.3));
    Eigen::MatrixXd z = Eigen::MatrixXd::Identity(2, 2);
    z(1, 1) = 0.0;
    CHECK_THROWS_AS(decoupling_coeff_vector(z), DomainError);
  }

  TEST_CASE("stationary sandwich and range") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
      const Index n = 2 + static_cast<Index>(rng() % 12);
      const double r = 0.95 * u(rng);
      const double phase = u(rng) * std::numbers::pi;
      // damped cosine: positive definite as the covariance of an AR-type sequence
      std::vector<double> gamma(n);
      for (Index h = 0; h < n; ++h) gamma[h] = std::pow(r, static_cast<double>(h)) * std::cos(phase * h);
      const Eigen::MatrixXd m = CovarianceSpec::stationary(gamma).matrix();
      const double p = decoupling_coeff_vector(m).p_value;
      double s = 0.0;
      for (double g : gamma) s += std::abs(g);
      CHECK(p >= s - 1e-12);
      CHECK(p <= 2 * s + 1e-12);
      CHECK(p >= 1.0);
      CHECK(p <= static_cast<double>(n) + 1e-12);
    }
  }

  TEST_CASE("OU constant") {
    std::vector<double> gamma(200);
    for (std::size_t h = 0; h < gamma.size(); ++h) gamma[h] = std::exp(-0.5 * static_cast<double>(h));
    const auto r = decoupling_coeff_vector(CovarianceSpec::stationary(gamma));
    CHECK(ou_decoupling_constant() == doctest::Approx(4.08298816507360).epsilon(1e-13));
    CHECK(std::abs(r.p_value - ou_decoupling_constant()) < 1e-3);
  }

  TEST_CASE("cyclic coefficient") {
    CHECK(decoupling_coeff_cyclic(integer_spec({1.0}, {1}), 4).p_value == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(decoupling_coeff_cyclic(integer_spec({0.3, 2.0, 1.1}, {1, 2, 3}), 1).p_value == 1.0);
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t x = 1 + rng() % 12;
      std::vector<double> a(x);
      std::vector<std::int64_t> j(x);
      std::int64_t cur = 0;
      for (std::size_t k = 0; k < x; ++k) {
        a[k] = u(rng);
        cur += 1 + static_cast<std::int64_t>(rng() % 7);
        j[k] = cur;
      }
      const Index n = 1 + static_cast<Index>(rng() % 80);
      CHECK(decoupling_coeff_cyclic(integer_spec(a, j), n).p_value ==
            doctest::Approx(brute_cyclic(a, j, n)).epsilon(1e-12));
    }
  }

  TEST_CASE("riemann gap") {
    const auto g = riemann_gap(integer_spec({1.0}, {1}), 50);
    CHECK(g.integral_term == doctest::Approx(100 / std::numbers::pi).epsilon(1e-9));
    CHECK(g.gap_holds);
    CHECK(g.upper_holds);
    const PolynomialSpec s = integer_spec({1.0, 0.5, 0.7}, {1, 3, 4});
    const double r1 = riemann_gap(s, 1000).gap / 1000;
    const double r2 = riemann_gap(s, 10000).gap / 10000;
    CHECK(r2 < r1);
  }

  TEST_CASE("riemann integral against a fine midpoint sum") {
    // (1/A) int_0^1 |phi|, with phi = sum a_k^2 cos(2 pi j_k u)
    const auto midpoint = [](const std::vector<double>& a, const std::vector<std::int64_t>& j) {
      const int m = 1 << 20;
      long double sum = 0, norm = 0;
      for (double v : a) norm += static_cast<long double>(v) * v;
      for (int i = 0; i < m; ++i) {
        const long double u = (i + 0.5L) / m;
        long double phi = 0;
        for (std::size_t k = 0; k < a.size(); ++k)
          phi += static_cast<long double>(a[k]) * a[k] * std::cos(2 * std::numbers::pi_v<long double> * j[k] * u);
        sum += std::abs(phi);
      }
      return static_cast<double>(sum / m / norm);
    };
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 12; ++trial) {
      const std::size_t x = 1 + rng() % 6;
      std::vector<double> a(x);
      std::vector<std::int64_t> j(x);
      std::int64_t cur = 0;
      for (std::size_t k = 0; k < x; ++k) {
        a[k] = std::uniform_real_distribution<double>(-1, 1)(rng);
        j[k] = cur += 1 + static_cast<std::int64_t>(rng() % 7);
      }
      CHECK(riemann_gap(integer_spec(a, j), 1).integral_term == doctest::Approx(midpoint(a, j)).epsilon(1e-8));
    }
    // tangential zero at u = 1/2: 1 + cos(2 pi u) integrates to 1
    CHECK(riemann_gap(integer_spec({1.0, 1.0}, {0, 1}), 1).integral_term == doctest::Approx(0.5).epsilon(1e-14));
  }

  TEST_CASE("mechanical quadrature") {
    TrigPolynomial c;
    c.cos_coeffs = {0.0, 1.0};
    c.sin_coeffs = {0.0, 0.0};
    const auto q = mechanical_quadrature_check(c, 1);
    CHECK(q.lhs == 0.0);
    CHECK(std::abs(q.rhs) < 1e-15);
    TrigPolynomial one;
    one.cos_coeffs = {1.0};
    one.sin_coeffs = {0.0};
    CHECK(mechanical_quadrature_check(one, 3).rhs == doctest::Approx(1.0).epsilon(1e-15));
    for (Index N : {1, 5, 64}) {
      TrigPolynomial bad;
      bad.cos_coeffs.assign(2 * N + 1, 0.0);
      bad.sin_coeffs.assign(2 * N + 1, 0.0);
      bad.cos_coeffs[2 * N] = 1.0;
      const auto b = mechanical_quadrature_check(bad, N);
      CHECK_FALSE(b.asserted);
      CHECK_FALSE(b.holds);
      CHECK(b.rhs - b.lhs == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  TEST_CASE("multiplier") {
    CHECK(decoupling_multiplier(Eigen::MatrixXd::Identity(1, 1), 2.0, 2.0).value ==
          doctest::Approx(1.18920711500272).epsilon(1e-14));
    const auto far = decoupling_multiplier(Eigen::MatrixXd::Identity(3, 3), 1e12, 2.0);
    CHECK(far.value == doctest::Approx(std::pow(0.5, -1.5)).epsilon(1e-9));
    try {
      decoupling_multiplier(CovarianceSpec::equicorrelated(3, 0.2).matrix(), 2.0, 2.0);
      FAIL("expected a DomainError");
    } catch (const DomainError& e) {
      CHECK(std::string(e.what()).find("2.8") != std::string::npos);
    }
    // Hadamard: det <= prod of diagonal for unit-diagonal C, so the multiplier is >= 1
    std::mt19937_64 rng(2);
    std::normal_distribution<double> z;
    for (int trial = 0; trial < 50; ++trial) {
      const Index n = 2 + static_cast<Index>(rng() % 5);
      Eigen::MatrixXd g(n, n + 2);
      for (Index i = 0; i < g.size(); ++i) g.data()[i] = z(rng);
      Eigen::MatrixXd c = g * g.transpose();
      const Eigen::VectorXd d = c.diagonal().cwiseSqrt().cwiseInverse();
      c = d.asDiagonal() * c * d.asDiagonal();
      const auto m = decoupling_multiplier(c, 1e9, 2.0);
      CHECK(m.value >= 1.0 - 1e-12);
      CHECK(decoupling_multiplier(c, m.required_p, 2.0).value >= 1.0 - 1e-12);
    }
  }

  TEST_CASE("decoupling by simulation") {
    const auto all = verify_decoupling_mc(CovarianceSpec::equicorrelated(3, 0.2), 3.0, 2.0,
                                          {{-INFINITY, INFINITY}, {-INFINITY, INFINITY}, {-INFINITY, INFINITY}},
                                          opts(2000, 1));
    CHECK(all.lhs.estimate == 1.0);
    CHECK(all.rhs == doctest::Approx(all.multiplier.value));
    const auto ind = verify_decoupling_mc(CovarianceSpec::explicit_matrix(Eigen::MatrixXd::Identity(3, 3)), 2.0,
                                          2.0, {{0, INFINITY}, {-1, 1}, {0.5, 2}}, opts(20000, 2));
    CHECK(ind.holds);
    const auto eq = verify_decoupling_mc(CovarianceSpec::equicorrelated(3, 0.2), 2.8, 2.0,
                                         {{0, INFINITY}, {0, INFINITY}, {0, INFINITY}}, opts(20000, 3));
    CHECK(eq.holds);
  }

  TEST_CASE("Gebelein and Nelson") {
    CHECK(gaussian_lp_norm(TestFunction::Identity, 2.0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(gaussian_lp_norm(TestFunction::Hermite2, 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
    CHECK(gaussian_lp_norm(TestFunction::Hermite3, 2.0) == doctest::Approx(std::sqrt(6.0)).epsilon(1e-10));
    CHECK(gaussian_lp_norm(TestFunction::Identity, 1.0) ==
          doctest::Approx(std::sqrt(2 / std::numbers::pi)).epsilon(1e-10));
    const auto h2 = verify_gebelein_nelson(0.5, TestFunction::Hermite2, opts(100000, 4));
    CHECK(std::abs(h2.product.estimate - 0.5) <= 3 * h2.product.half_width);
    CHECK(h2.gebelein_rhs == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(h2.gebelein_holds);
    CHECK(h2.nelson_holds);
    const auto id = verify_gebelein_nelson(-0.7, TestFunction::Identity, opts(50000, 5));
    CHECK(id.gebelein_rhs == doctest::Approx(0.7).epsilon(1e-9));
    CHECK(std::abs(std::abs(id.product.estimate) - 0.7) <= 3 * id.product.half_width);
    const auto zero = verify_gebelein_nelson(0.0, TestFunction::Hermite3, opts(20000, 6));
    CHECK(zero.gebelein_holds);
    CHECK(zero.nelson_holds);
  }

  TEST_CASE("cyclic deviation bound") {
    const PolynomialSpec s = integer_spec({1.0}, {1});
    const auto r = cyclic_deviation_bound(s, 4, 1.0, 0.0);
    CHECK(r.value == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(r.intermediates.at("z") == 4.0);
    CHECK(std::isnan(r.intermediates.at("value_ii")));  // 4 < 2 pi
    const auto big = cyclic_deviation_bound(s, 8, 1.0, 0.0);
    CHECK(big.intermediates.at("value_ii") == doctest::Approx(std::exp(-0.5 / 2.0)));
    CHECK(cyclic_deviation_bound(s, 8, 1.0, 60.0).value == doctest::Approx(1.0));
    for (double H : {0.0, 0.5, 2.0, 5.0})
      CHECK(cyclic_deviation_bound(s, 8, 1.0, H).intermediates.at("mills_lower") <=
            normal_sf(H) * (1 + 1e-14));
    CHECK_THROWS_AS(cyclic_deviation_bound(s, 1, 0.5, 0.0), DomainError);
  }
}
