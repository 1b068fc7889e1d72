#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gsup/bounds.hpp"
#include "gsup/normal.hpp"
#include "gsup/simulate.hpp"

using namespace gsup;

TEST_SUITE("bounds") {
  TEST_CASE("equicorrelated") {
    const auto r = bound_equicorrelated(2, 0.5, 1.0);
    CHECK(r.value == doctest::Approx(1.08890151418714).epsilon(1e-13));
    CHECK(r.vacuous);
    // exact bivariate orthant probability at rho = 1/2, by 1-d quadrature
    CHECK(r.value >= 0.745203586846750);
    const auto tiny = bound_equicorrelated(6, 1e-9, 0.7);
    CHECK(tiny.value == doctest::Approx(std::pow(normal_cdf(0.7), 6)).epsilon(1e-7));
    const auto big = bound_equicorrelated(6, 0.4, 40.0);
    CHECK(big.value == doctest::Approx(std::pow(1 + 0.4 * 6 / 0.6, 2.5)).epsilon(1e-14));
    CHECK_THROWS_AS(bound_equicorrelated(4, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(bound_equicorrelated(4, 0.0, 1.0), DomainError);
  }

  TEST_CASE("gumbel form") {
    const auto r = bound_gumbel(10, 0.2, 0.5, 0.3);
    CHECK(r.intermediates.at("b_n") == doctest::Approx(1.11360383160747).epsilon(1e-13));
    const double b = r.intermediates.at("b_n");
    CHECK(r.threshold == doctest::Approx((0.5 / b + b) * std::sqrt(1 + 0.2 * 9)));
    CHECK(bound_gumbel(10, 0.2, 50.0, 0.3).value ==
          doctest::Approx(r.intermediates.at("multiplier")).epsilon(1e-14));
    CHECK(bound_gumbel(10, 0.2, -1.0, 1.0).value == r.intermediates.at("multiplier"));
    CHECK_THROWS_AS(bound_gumbel(10, 0.2, -2.0, 0.3), DomainError);
    CHECK_THROWS_AS(bound_gumbel(2, 0.2, 0.0, 0.3), DomainError);
  }

  TEST_CASE("small-lambda threshold") {
    const auto r15 = bound_small_lambda(15, 0.5);
    const double l15 = std::log(15.0);
    CHECK(r15.threshold == doctest::Approx(std::sqrt(2 * l15 - 2 * std::log(l15) - 0.5 * l15 / 15)));
    const auto r = bound_small_lambda(100, 1e-12);
    CHECK(r.threshold == doctest::Approx(2.48112497072606).epsilon(1e-10));
    CHECK(bound_small_lambda(100, 0.5).intermediates.at("lambda_max") == doctest::Approx(0.0025));
    CHECK(r.free_constants.at("C_eta") == 1.0);
  }

  TEST_CASE("beta") {
    CHECK(beta_block(0.1, 0.5, 4, 3) == doctest::Approx(0.397912589693412).epsilon(1e-13));
    const double u = 0.5;
    const double expect = (1 / (1 - u)) * ((1 - u + 3 * 4 * u - 4 * u) / (1 - u + 2 * 3 * 4 * u - 4 * u));
    CHECK(beta_block(u, u, 4, 3) == doctest::Approx(expect).epsilon(1e-14));
    CHECK_THROWS_AS(beta_block(0.2, 0.5, 2, 3), DomainError);   // (k-1)u <= 1
    CHECK_THROWS_AS(beta_block(0.6, 0.5, 4, 3), DomainError);   // lambda > u
    CHECK_THROWS_AS(beta_block(0.9, 0.9, 3, 2), DomainError);   // beta > 1
  }

  TEST_CASE("beta lies in (0,1) on admissible draws") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    int accepted = 0;
    for (int trial = 0; trial < 10000; ++trial) {
      const Index k = 2 + static_cast<Index>(rng() % 10);
      const Index N = 1 + static_cast<Index>(rng() % 10);
      const double u = U(rng);
      const double lambda = u * U(rng);
      try {
        check_block_parameters(lambda, u, k, N);
      } catch (const DomainError&) {
        continue;
      }
      try {
        const double b = beta_block(lambda, u, k, N);
        CHECK(b > 0.0);
        CHECK(b < 1.0);
        ++accepted;
      } catch (const DomainError&) {
        // beta outside (0,1): must really be outside
        const double kd = k, nk = N * kd;
        const double raw = (1 / (1 - u + kd * (u - lambda))) *
                           ((1 - u + nk * u - kd * lambda) / (1 - u + nk * (u + lambda) - kd * lambda));
        CHECK_FALSE((raw > 0.0 && raw < 1.0));
      }
    }
    CHECK(accepted > 1000);
  }

  TEST_CASE("q_form against an assembled matrix") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> z;
    for (auto [lambda, u, k, N] : {std::tuple{0.1, 0.5, Index{2}, Index{2}},
                                   std::tuple{0.0, 0.3, Index{3}, Index{2}},
                                   std::tuple{0.2, 0.7, Index{4}, Index{3}}}) {
      const Index n = N * k;
      const double kd = static_cast<double>(k);
      const double inner = 1 - u + kd * (u - lambda);
      const double g = -lambda / (inner * ((1 - u) + N * kd * u + (N - 1) * kd * lambda));
      const double b = -(u - lambda) / ((1 - u) * inner);
      Eigen::MatrixXd M = Eigen::MatrixXd::Constant(n, n, g);
      for (Index j = 0; j < N; ++j) M.block(j * k, j * k, k, k).array() += b;
      M.diagonal().array() += 1 / (1 - u);
      for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd x(n);
        for (Index i = 0; i < n; ++i) x[i] = z(rng);
        const double want = x.dot(M * x);
        CHECK(q_form(lambda, u, k, N, x) == doctest::Approx(want).epsilon(1e-10));
      }
      CHECK(q_form(lambda, u, k, N, Eigen::VectorXd::Zero(n)) == 0.0);
    }
    CHECK(q_coefficients(0.0, 0.4, 3, 2).global == 0.0);
    // expression input and long double scalar
    Eigen::Matrix<long double, Eigen::Dynamic, 1> xl = Eigen::Matrix<long double, Eigen::Dynamic, 1>::Ones(4);
    CHECK(static_cast<double>(q_form(0.1, 0.5, 2, 2, xl * 2.0L)) ==
          doctest::Approx(q_form(0.1, 0.5, 2, 2, Eigen::VectorXd::Constant(4, 2.0))));
    CHECK_THROWS_AS(q_form(0.1, 0.5, 2, 2, Eigen::VectorXd::Ones(3)), DomainError);
  }

  TEST_CASE("block bound closed form") {
    const double lambda = 0.1, u = 0.5;
    const Index k = 4, N = 3;
    const double beta = beta_block(lambda, u, k, N);
    const double d = block_normalizer(u, k, N);
    CHECK(d == doctest::Approx(std::pow(0.5, 9) * std::pow(2.5, 3)));
    const auto r = bound_block(lambda, u, k, N, 1.2);
    CHECK(r.value == doctest::Approx(std::pow(normal_cdf(1.2 * std::sqrt(beta)) / std::sqrt(beta), 12) /
                                     std::sqrt(d))
                         .epsilon(1e-12));
    CHECK(bound_block(lambda, u, k, N, 60.0).value ==
          doctest::Approx(std::pow(beta, -6.0) / std::sqrt(d)).epsilon(1e-12));
  }

  TEST_CASE("block bound dominates simulation") {
    McOptions o;
    o.reps = 20000;
    o.seed = 21;
    for (auto [lambda, u, k, N, theta] : {std::tuple{0.1, 0.5, Index{4}, Index{3}, 1.0},
                                          std::tuple{0.2, 0.6, Index{3}, Index{2}, 0.5},
                                          std::tuple{0.05, 0.4, Index{6}, Index{2}, 2.0}}) {
      const auto b = bound_block(lambda, u, k, N, theta);
      const auto mc = mc_vector_sup_prob(CovarianceSpec::block(N, k, u, lambda), theta, o);
      CHECK(mc.estimate <= b.value + 3 * mc.half_width);
    }
  }

  TEST_CASE("szego") {
    const auto flat = szego_bounds(SpectralDensity([](double) { return 1.0; }), 4, 1.3);
    CHECK(flat.lower == doctest::Approx(std::pow(2 * normal_cdf(1.3) - 1, 4)).epsilon(1e-14));
    CHECK(flat.upper == doctest::Approx(flat.lower).epsilon(1e-10));
    const auto e = szego_bounds(SpectralDensity([](double t) { return std::exp(std::cos(t)); }), 5, 1.0);
    CHECK(e.lower == doctest::Approx(0.148291443088863).epsilon(1e-12));
    CHECK(e.upper == doctest::Approx(0.148291443088863).epsilon(1e-8));
    const auto far = szego_bounds_from_g(0.7, 3, 40.0);
    CHECK(far.lower == doctest::Approx(1.0));
    CHECK(far.upper == doctest::Approx(1.0));
    const auto zero = szego_bounds_from_g(0.0, 3, 1.0);
    CHECK(zero.upper == 1.0);
    CHECK(zero.upper_vacuous);
  }

  TEST_CASE("moderate deviations") {
    // a_k = 1, x = 10^4, eta = 1/2, eps = 1, C = 1
    const double ex = moderate_trig_exponent(1e4, 100.0, 0.5, 1.0);
    CHECK(ex == doctest::Approx(-4.63677979064066).epsilon(1e-12));
    CHECK(std::exp(ex) == doctest::Approx(0.00968884756356733).epsilon(1e-11));
    // that example violates the fourth-moment condition, so the full bound refuses it
    const PolynomialSpec flat(CoefficientSeq::constant(1.0, 10000), FrequencySeq::identity(10000), 1,
                              10000, AngularConvention::TwoPi);
    CHECK_THROWS_AS(bound_moderate_trig(flat, 0.5, 1.0), DomainError);
    const PolynomialSpec s = flat.with_range(1, 100);
    const auto r = bound_moderate_trig(s, 0.1, 1.0);
    CHECK(r.threshold == doctest::Approx(std::sqrt(2 * 0.1 * 100 * std::log(100.0))));
    CHECK(std::log(r.value) == doctest::Approx(moderate_trig_exponent(100.0, 10.0, 0.1, 1.0)));
    CHECK(bound_moderate_trig(s, 0.1, 1e-12).value == doctest::Approx(1.0));
    const double l1 = std::log(bound_moderate_trig(s, 0.1, 1.0, 1.0).value);
    const double l2 = std::log(bound_moderate_trig(s, 0.1, 1.0, 2.0).value);
    CHECK(l2 == doctest::Approx(2 * l1).epsilon(1e-14));
    CHECK(r.free_constants.at("C") == 1.0);
    const auto one = bound_moderate_trig(s, 1.0, 1.0, 1.0, 10.0);
    CHECK(one.threshold == doctest::Approx(std::sqrt(2 * 100 * std::log(10.0))));
    CHECK(std::log(one.value) == doctest::Approx(-10.0 / std::sqrt(11 * std::log(10.0))));
    CHECK_THROWS_AS(bound_moderate_trig(s, 1.0, 1.0, 1.0, 100.0), DomainError);
  }

  TEST_CASE("log-log") {
    const auto tower = bound_loglog_from_log(std::exp(std::numbers::e), 0.5, 1.0);
    CHECK(tower.intermediates.at("loglog_x") == doctest::Approx(std::numbers::e).epsilon(1e-15));
    CHECK(tower.intermediates.at("logloglog_x") == doctest::Approx(1.0).epsilon(1e-15));
    const auto r = bound_loglog_from_log(100 * std::log(10.0), 0.5, 1.0);
    CHECK(r.intermediates.at("loglog_x") == doctest::Approx(5.43920263123605).epsilon(1e-13));
    CHECK(r.intermediates.at("exponent") == doctest::Approx(-0.633596893622988).epsilon(1e-12));
    double prev = 2.0;
    for (double lx : {50.0, 500.0, 5e3, 5e4, 5e5}) {
      const double v = bound_loglog_from_log(lx, 0.3, 1.0).value;
      CHECK(v < prev);
      prev = v;
    }
    CHECK(bound_loglog(1e100, 0.5, 1.0).value == doctest::Approx(r.value));
    CHECK_THROWS_AS(bound_loglog(10.0, 0.5, 1.0), DomainError);
  }
}
