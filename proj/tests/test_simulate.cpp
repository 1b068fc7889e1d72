#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gsup/error.hpp"
#include "gsup/normal.hpp"
#include "gsup/simulate.hpp"

using namespace gsup;

namespace {

PolynomialSpec raw_spec(Index x) {
  return PolynomialSpec(CoefficientSeq::inverse_sqrt(x), FrequencySeq::sqrt_law(std::sqrt(2.0), x), 1,
                        x, AngularConvention::Raw);
}

McOptions opts(std::uint64_t reps, std::uint64_t seed, unsigned workers = 1) {
  McOptions o;
  o.reps = reps;
  o.seed = seed;
  o.workers = workers;
  return o;
}

bool within(const McEstimate& e, double truth, double k = 3.0) {
  return std::abs(e.estimate - truth) <= k * e.half_width;
}

}  // namespace

TEST_SUITE("simulate") {
  TEST_CASE("grids") {
    const auto g = GridSpec::uniform(0.0, 1.0, 5);
    CHECK(g.count == 5);
    CHECK(g.t1() == doctest::Approx(1.0));
    const auto c = GridSpec::cyclic(8, 0.5);
    CHECK(c.count == 5);
    CHECK(c.node(4) == 0.5);
    CHECK(GridSpec::per_unit(1.0, 4.0, 10).count == 31);
    const PolynomialSpec s(CoefficientSeq::constant(1.0, 3), FrequencySeq::identity(3), 1, 3,
                           AngularConvention::TwoPi);
    // n >= max(2 pi * 6, 1/eps) = 38
    CHECK(GridSpec::moderate_rule(s, 0.5).step == doctest::Approx(1.0 / 38));
    CHECK_THROWS_AS(GridSpec::moderate_rule(raw_spec(3), 1.0), DomainError);
  }

  TEST_CASE("wilson and clt intervals") {
    const auto p = probability_estimate(50, 100, 0);
    CHECK(p.estimate == 0.5);
    CHECK(p.lo < 0.5);
    CHECK(p.hi > 0.5);
    CHECK(p.half_width == doctest::Approx((p.hi - p.lo) / 2));
    const auto z = probability_estimate(0, 1000, 0);
    CHECK(z.lo == 0.0);
    CHECK(z.hi > 0.0);
    const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    const auto m = mean_estimate(v, 0);
    CHECK(m.estimate == 2.5);
    CHECK(m.half_width == doctest::Approx(kZ95 * std::sqrt(5.0 / 3.0 / 4.0)));
  }

  TEST_CASE("empty range is the zero path") {
    const PolynomialSpec s = raw_spec(5).with_range(4, 3);
    for (double v : sample_path(s, GridSpec::uniform(0, 1, 7), 3)) CHECK(v == 0.0);
  }

  TEST_CASE("single term path reads the stream") {
    const PolynomialSpec s(CoefficientSeq::constant(1.0, 1), FrequencySeq::reals({1.0}), 1, 1,
                           AngularConvention::Raw);
    const GridSpec grid = GridSpec::uniform(0.0, 3.0, 11);
    SplitMix64 eng = substream(42, 0);
    const GaussianPairs gp = draw_gaussian_pairs(1, eng);
    const auto path = sample_path(s, grid, 42);
    for (Index i = 0; i < grid.count; ++i) {
      const double t = grid.node(i);
      CHECK(path[i] == doctest::Approx(gp.g[0] * std::cos(t) + gp.gp[0] * std::sin(t)).epsilon(1e-14));
    }
  }

  TEST_CASE("draws do not depend on the grid") {
    const PolynomialSpec s = raw_spec(6);
    const auto a = sample_path(s, GridSpec::uniform(0.0, 2.0, 3), 9);
    const auto b = sample_path(s, GridSpec::uniform(0.0, 2.0, 101), 9);
    CHECK(a[0] == b[0]);
    CHECK(a[2] == doctest::Approx(b[100]).epsilon(1e-14));
  }

  TEST_CASE("variance of X(t) is A") {
    const PolynomialSpec s = raw_spec(8);
    const double A = power_sum(s, 2);
    for (double t : {0.0, 0.7, 2.3}) {
      const GridSpec g = GridSpec::uniform(t, t, 1);
      const auto vals = mc_sup_values(s, g, opts(100000, 17));
      std::vector<double> sq(vals.size());
      for (std::size_t i = 0; i < vals.size(); ++i) sq[i] = vals[i] * vals[i];
      CHECK(within(mean_estimate(sq, 17), A, 4.0));
    }
  }

  TEST_CASE("sup probabilities") {
    const PolynomialSpec s = raw_spec(6);
    const double A = power_sum(s, 2);
    const GridSpec grid = GridSpec::uniform(0.0, 5.0, 200);
    CHECK(mc_sup_prob(s, grid, 10 * std::sqrt(A), opts(5000, 1)).estimate >= 0.999);
    const GridSpec one = GridSpec::uniform(1.3, 1.3, 1);
    const double theta = 0.8;
    CHECK(within(mc_sup_prob(s, one, theta, opts(40000, 2)), normal_cdf(theta / std::sqrt(A))));
    const auto lo = mc_sup_prob(s, grid, 1.0, opts(5000, 3));
    const auto hi = mc_sup_prob(s, grid, 1.5, opts(5000, 3));
    CHECK(lo.estimate <= hi.estimate);
  }

  // Shared nodes are computed from different step sizes, so equal sups may
  // differ in the last bits.
  TEST_CASE("finer grid has larger sup per replication") {
    const PolynomialSpec s = raw_spec(10);
    const auto coarse = mc_sup_values(s, GridSpec::uniform(0.0, 4.0, 41), opts(500, 4));
    const auto fine = mc_sup_values(s, GridSpec::uniform(0.0, 4.0, 401), opts(500, 4));
    for (std::size_t i = 0; i < coarse.size(); ++i) CHECK(fine[i] >= coarse[i] - 1e-12);
  }

  TEST_CASE("determinism across worker counts") {
    const PolynomialSpec s = raw_spec(12);
    const GridSpec grid = GridSpec::uniform(0.0, 3.0, 64);
    const auto a = mc_sup_prob(s, grid, 1.0, opts(3001, 99, 1));
    const auto b = mc_sup_prob(s, grid, 1.0, opts(3001, 99, 8));
    const auto c = mc_sup_prob(s, grid, 1.0, opts(3001, 99, 3));
    CHECK(a.estimate == b.estimate);
    CHECK(a.estimate == c.estimate);
    const auto va = mc_sup_values(s, grid, opts(777, 5, 1));
    const auto vb = mc_sup_values(s, grid, opts(777, 5, 8));
    CHECK(va == vb);
    const auto ea = mc_vector_sup_prob(CovarianceSpec::equicorrelated(5, 0.3), 1.0, opts(2000, 6, 1));
    const auto eb = mc_vector_sup_prob(CovarianceSpec::equicorrelated(5, 0.3), 1.0, opts(2000, 6, 8));
    CHECK(ea.estimate == eb.estimate);
  }

  TEST_CASE("expected sup") {
    const PolynomialSpec s = raw_spec(7);
    const GridSpec grid = GridSpec::uniform(0.0, 2.0, 50);
    CHECK(mc_expected_sup_diff(s, s, grid, opts(200, 1)).estimate == 0.0);
    const auto e1 = mc_expected_sup(s, grid, opts(1000, 8));
    const auto e2 = mc_expected_sup(s.with_coefficients(s.coefficients().scaled(2.0)), grid, opts(1000, 8));
    CHECK(e2.estimate == doctest::Approx(2 * e1.estimate).epsilon(1e-12));
    const auto abs1 = mc_vector_expectation(CovarianceSpec::explicit_matrix(Eigen::MatrixXd::Identity(1, 1)),
                                            [](const Eigen::VectorXd& v) { return std::abs(v[0]); },
                                            opts(100000, 10));
    CHECK(within(abs1, std::sqrt(2 / std::numbers::pi)));
  }

  TEST_CASE("vector sup probabilities") {
    const auto id2 = CovarianceSpec::explicit_matrix(Eigen::MatrixXd::Identity(2, 2));
    CHECK(within(mc_vector_sup_prob(id2, 0.0, opts(40000, 1)), 0.25));
    const auto id3 = CovarianceSpec::explicit_matrix(Eigen::MatrixXd::Identity(3, 3));
    CHECK(within(mc_vector_sup_prob(id3, 1.0, opts(40000, 2)), std::pow(normal_cdf(1.0), 3)));
    const auto near_one = CovarianceSpec::equicorrelated(4, 0.999999);
    CHECK(within(mc_vector_sup_prob(near_one, 0.0, opts(40000, 3)), 0.5));
    const auto abs_id = mc_vector_sup_prob(id2, 1.0, opts(40000, 4), SupKind::MaxAbs);
    CHECK(within(abs_id, std::pow(2 * normal_cdf(1.0) - 1, 2)));
  }

  TEST_CASE("covariance validation") {
    CHECK_THROWS_AS(CovarianceSpec::equicorrelated(3, -0.6), DomainError);
    CHECK_THROWS_AS(CovarianceSpec::equicorrelated(3, 1.0), DomainError);
    Eigen::MatrixXd bad(2, 2);
    bad << 1, 2, 2, 1;
    CHECK_THROWS_AS(CovarianceSpec::explicit_matrix(bad), FactorizationError);
    Eigen::MatrixXd asym(2, 2);
    asym << 1, 0.1, 0.2, 1;
    CHECK_THROWS(CovarianceSpec::explicit_matrix(asym));
    // rank one: the jitter makes it factorizable
    const Eigen::MatrixXd r1 = Eigen::MatrixXd::Ones(3, 3);
    const Eigen::MatrixXd f = sampling_factor(CovarianceSpec::explicit_matrix(r1));
    CHECK((f * f.transpose() - r1).cwiseAbs().maxCoeff() < 1e-10);
    const auto blk = CovarianceSpec::block(2, 3, 0.5, 0.1);
    CHECK(blk.matrix()(0, 1) == 0.5);
    CHECK(blk.matrix()(0, 3) == 0.1);
    CHECK(blk.matrix()(4, 4) == 1.0);
  }
}
