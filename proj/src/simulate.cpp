#include "gsup/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>

#include "gsup/error.hpp"

namespace gsup {

// ---------------------------------------------------------------------------
// Grids

GridSpec GridSpec::uniform(double t0, double t1, Index n) {
  if (!(t0 <= t1)) throw DomainError("grid requires t0 <= t1");
  if (n < 1) throw DomainError("grid requires at least one node");
  GridSpec g;
  g.t0 = t0;
  g.count = n;
  g.step = n > 1 ? (t1 - t0) / static_cast<double>(n - 1) : 0.0;
  return g;
}

GridSpec GridSpec::per_unit(double t0, double t1, Index density) {
  if (density < 1) throw DomainError("grid density must be >= 1");
  if (!(t0 <= t1)) throw DomainError("grid requires t0 <= t1");
  GridSpec g;
  g.t0 = t0;
  g.step = 1.0 / static_cast<double>(density);
  g.count = static_cast<Index>(std::ceil((t1 - t0) * static_cast<double>(density))) + 1;
  return g;
}

GridSpec GridSpec::cyclic(Index n, double eps) {
  if (n < 1) throw DomainError("cyclic grid needs n >= 1");
  if (!(eps > 0.0 && eps <= 1.0)) throw DomainError("cyclic grid needs eps in (0,1]");
  GridSpec g;
  g.t0 = 0.0;
  g.step = 1.0 / static_cast<double>(n);
  g.count = static_cast<Index>(std::ceil(static_cast<double>(n) * eps)) + 1;
  return g;
}

GridSpec GridSpec::moderate_rule(const PolynomialSpec& spec, double eps) {
  if (spec.convention() != AngularConvention::TwoPi)
    throw DomainError("cyclic grid rule needs integer frequencies with the 2pi convention");
  if (!(eps > 0.0 && eps <= 1.0)) throw DomainError("cyclic grid needs eps in (0,1]");
  double weighted = 0.0;
  for (Index k = spec.y(); k <= spec.x(); ++k)
    weighted += static_cast<double>(spec.frequencies().integer(k)) * spec.coefficient(k) *
                spec.coefficient(k);
  const double n = std::max(std::ceil(2.0 * std::numbers::pi * weighted), std::ceil(1.0 / eps));
  return cyclic(std::max<Index>(1, static_cast<Index>(n)), eps);
}

std::vector<double> GridSpec::nodes() const {
  std::vector<double> t(static_cast<std::size_t>(count));
  for (Index i = 0; i < count; ++i) t[i] = node(i);
  return t;
}

GridSpec default_grid(const PolynomialSpec& spec, double t0, double t1) {
  if (spec.convention() == AngularConvention::TwoPi && t0 == 0.0 && t1 > 0.0 && t1 <= 1.0)
    return GridSpec::moderate_rule(spec, t1);
  return GridSpec::per_unit(t0, t1, 4096);
}

// ---------------------------------------------------------------------------
// Estimates

McEstimate probability_estimate(std::uint64_t hits, std::uint64_t reps, std::uint64_t seed) {
  if (reps == 0) throw DomainError("estimate needs at least one replication");
  const double n = static_cast<double>(reps);
  const double p = static_cast<double>(hits) / n;
  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  McEstimate e;
  e.estimate = p;
  e.reps = reps;
  // The Wilson interval touches 0 at zero hits and 1 at full hits.
  e.lo = hits == 0 ? 0.0 : std::max(0.0, center - half);
  e.hi = hits == reps ? 1.0 : std::min(1.0, center + half);
  e.half_width = half;
  e.seed = seed;
  e.kind = EstimateKind::Probability;
  return e;
}

McEstimate mean_estimate(std::span<const double> values, std::uint64_t seed) {
  if (values.empty()) throw DomainError("estimate needs at least one replication");
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double var = values.size() > 1 ? ss / (n - 1.0) : 0.0;
  McEstimate e;
  e.estimate = mean;
  e.reps = values.size();
  e.half_width = kZ95 * std::sqrt(var / n);
  e.lo = mean - e.half_width;
  e.hi = mean + e.half_width;
  e.seed = seed;
  e.kind = EstimateKind::Mean;
  return e;
}

// ---------------------------------------------------------------------------
// Replication engine

std::vector<double> replicate(
    const McOptions& options,
    const std::function<void(std::uint64_t first, std::span<double> out)>& fill) {
  if (options.reps == 0) throw DomainError("reps must be >= 1");
  const std::uint64_t block = std::max<std::uint64_t>(1, options.block);
  const std::uint64_t blocks = (options.reps + block - 1) / block;
  std::vector<double> values(options.reps);

  unsigned workers = options.workers ? options.workers : std::thread::hardware_concurrency();
  workers = static_cast<unsigned>(std::clamp<std::uint64_t>(workers, 1, blocks));

  auto run_blocks = [&](unsigned w) {
    for (std::uint64_t b = w; b < blocks; b += workers) {
      const std::uint64_t first = b * block;
      const std::uint64_t count = std::min(block, options.reps - first);
      fill(first, std::span<double>(values.data() + first, count));
    }
  };

  if (workers == 1) {
    run_blocks(0);
    return values;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          run_blocks(w);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return values;
}

// ---------------------------------------------------------------------------
// Polynomial paths

GaussianPairs draw_gaussian_pairs(Index terms, SplitMix64& engine) {
  std::normal_distribution<double> normal;
  GaussianPairs p;
  p.g.resize(terms);
  p.gp.resize(terms);
  for (Index i = 0; i < terms; ++i) {
    p.g(i) = normal(engine);
    p.gp(i) = normal(engine);
  }
  return p;
}

PathBasis::PathBasis(const PolynomialSpec& spec, const GridSpec& grid)
    : cos_part(grid.count, spec.terms()), sin_part(grid.count, spec.terms()) {
  for (Index k = spec.y(); k <= spec.x(); ++k) {
    const double a = spec.coefficient(k);
    const Index c = k - spec.y();
    for (Index i = 0; i < grid.count; ++i) {
      const double phase = spec.phase(k, grid.node(i));
      cos_part(i, c) = a * std::cos(phase);
      sin_part(i, c) = a * std::sin(phase);
    }
  }
}

Eigen::VectorXd PathBasis::evaluate(const GaussianPairs& pairs) const {
  if (cos_part.cols() == 0) return Eigen::VectorXd::Zero(cos_part.rows());
  return cos_part * pairs.g + sin_part * pairs.gp;
}

std::vector<double> sample_path(const PolynomialSpec& spec, const GridSpec& grid,
                                const GaussianPairs& pairs) {
  const Eigen::VectorXd v = PathBasis(spec, grid).evaluate(pairs);
  return {v.data(), v.data() + v.size()};
}

std::vector<double> sample_path(const PolynomialSpec& spec, const GridSpec& grid,
                                std::uint64_t seed) {
  SplitMix64 engine = substream(seed, 0);
  return sample_path(spec, grid, draw_gaussian_pairs(spec.terms(), engine));
}

namespace {

// Paths for replications first..first+B-1 as columns of an (nodes x B) matrix.
struct BlockDraws {
  Eigen::MatrixXd g;
  Eigen::MatrixXd gp;
};

BlockDraws draw_block(Index terms, std::uint64_t seed, std::uint64_t first, Index count) {
  BlockDraws d{Eigen::MatrixXd(terms, count), Eigen::MatrixXd(terms, count)};
  for (Index b = 0; b < count; ++b) {
    SplitMix64 engine = substream(seed, first + static_cast<std::uint64_t>(b));
    const GaussianPairs p = draw_gaussian_pairs(terms, engine);
    d.g.col(b) = p.g;
    d.gp.col(b) = p.gp;
  }
  return d;
}

Eigen::MatrixXd block_paths(const PathBasis& basis, const BlockDraws& d) {
  if (basis.cos_part.cols() == 0) return Eigen::MatrixXd::Zero(basis.cos_part.rows(), d.g.cols());
  Eigen::MatrixXd paths = basis.cos_part * d.g;
  paths.noalias() += basis.sin_part * d.gp;
  return paths;
}

}  // namespace

std::vector<double> mc_sup_values(const PolynomialSpec& spec, const GridSpec& grid,
                                  const McOptions& options, SupKind kind) {
  const PathBasis basis(spec, grid);
  return replicate(options, [&](std::uint64_t first, std::span<double> out) {
    const auto count = static_cast<Index>(out.size());
    const Eigen::MatrixXd paths =
        block_paths(basis, draw_block(spec.terms(), options.seed, first, count));
    for (Index b = 0; b < count; ++b)
      out[b] = kind == SupKind::Max ? paths.col(b).maxCoeff() : paths.col(b).cwiseAbs().maxCoeff();
  });
}

McEstimate mc_sup_prob(const PolynomialSpec& spec, const GridSpec& grid, double theta,
                       const McOptions& options) {
  const std::vector<double> sups = mc_sup_values(spec, grid, options, SupKind::Max);
  const auto hits = static_cast<std::uint64_t>(
      std::count_if(sups.begin(), sups.end(), [&](double s) { return s <= theta; }));
  return probability_estimate(hits, options.reps, options.seed);
}

CoupledSups mc_coupled_sups(const PolynomialSpec& first, const PolynomialSpec& second,
                            const GridSpec& grid, const McOptions& options) {
  if (first.y() != second.y() || first.x() != second.x())
    throw DomainError("coupled specs must share the index range");
  const PathBasis basis_a(first, grid);
  const PathBasis basis_b(second, grid);
  // Three values per replication packed into one run keeps a single draw per rep.
  CoupledSups out;
  out.first.resize(options.reps);
  out.second.resize(options.reps);
  out.diff = replicate(options, [&](std::uint64_t first_rep, std::span<double> diff) {
    const auto count = static_cast<Index>(diff.size());
    const BlockDraws d = draw_block(first.terms(), options.seed, first_rep, count);
    const Eigen::MatrixXd pa = block_paths(basis_a, d);
    const Eigen::MatrixXd pb = block_paths(basis_b, d);
    for (Index b = 0; b < count; ++b) {
      out.first[first_rep + b] = pa.col(b).maxCoeff();
      out.second[first_rep + b] = pb.col(b).maxCoeff();
      diff[b] = (pa.col(b) - pb.col(b)).cwiseAbs().maxCoeff();
    }
  });
  return out;
}

McEstimate mc_expected_sup(const PolynomialSpec& spec, const GridSpec& grid,
                           const McOptions& options, SupKind kind) {
  const std::vector<double> v = mc_sup_values(spec, grid, options, kind);
  return mean_estimate(v, options.seed);
}

McEstimate mc_expected_sup_diff(const PolynomialSpec& first, const PolynomialSpec& second,
                                const GridSpec& grid, const McOptions& options) {
  const CoupledSups s = mc_coupled_sups(first, second, grid, options);
  return mean_estimate(s.diff, options.seed);
}

// ---------------------------------------------------------------------------
// Covariance specs

namespace {

void validate_covariance(const Eigen::MatrixXd& m) {
  if (m.rows() == 0 || m.rows() != m.cols()) throw DomainError("covariance must be square, n >= 1");
  if (!m.allFinite()) throw DomainError("covariance has non-finite entries");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw DomainError("covariance is not symmetric");
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  const double smallest = es.eigenvalues().minCoeff();
  if (smallest < -1e-10 * std::max(1.0, m.trace()))
    throw FactorizationError("covariance is not positive semi-definite (smallest eigenvalue " +
                                 std::to_string(smallest) + ")",
                             smallest);
}

}  // namespace

CovarianceSpec::CovarianceSpec(Eigen::MatrixXd matrix, Structure structure,
                               std::string description)
    : matrix_(std::move(matrix)), structure_(structure), description_(std::move(description)) {
  validate_covariance(matrix_);
}

CovarianceSpec CovarianceSpec::explicit_matrix(Eigen::MatrixXd matrix) {
  return CovarianceSpec(std::move(matrix), Structure::Explicit, "explicit");
}

CovarianceSpec CovarianceSpec::equicorrelated(Index n, double lambda) {
  if (n < 1) throw DomainError("equicorrelated covariance needs n >= 1");
  if (!(lambda < 1.0) || (n > 1 && !(lambda > -1.0 / static_cast<double>(n - 1))))
    throw DomainError("equicorrelated covariance needs -1/(n-1) < lambda < 1");
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(n, n, lambda);
  m.diagonal().setOnes();
  return CovarianceSpec(std::move(m), Structure::Equicorrelated,
                        "equicorrelated(n=" + std::to_string(n) + ")");
}

CovarianceSpec CovarianceSpec::block(Index N, Index k, double u, double lambda) {
  if (N < 1 || k < 1) throw DomainError("block covariance needs N, k >= 1");
  const Index n = N * k;
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(n, n, lambda);
  for (Index j = 0; j < N; ++j) m.block(j * k, j * k, k, k).setConstant(u);
  m.diagonal().setOnes();
  return CovarianceSpec(std::move(m), Structure::Block,
                        "block(N=" + std::to_string(N) + ",k=" + std::to_string(k) + ")");
}

CovarianceSpec CovarianceSpec::stationary(std::vector<double> gamma) {
  const auto n = static_cast<Index>(gamma.size());
  if (n < 1) throw DomainError("stationary covariance needs gamma(0)");
  Eigen::MatrixXd m(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) m(i, j) = gamma[static_cast<std::size_t>(std::abs(i - j))];
  return CovarianceSpec(std::move(m), Structure::Stationary,
                        "stationary(n=" + std::to_string(n) + ")");
}

Eigen::MatrixXd sampling_factor(const CovarianceSpec& cov) {
  const Eigen::MatrixXd& c = cov.matrix();
  Eigen::LLT<Eigen::MatrixXd> llt(c);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  Eigen::MatrixXd jittered = c;
  jittered.diagonal().array() += 1e-12 * c.trace() / static_cast<double>(c.rows());
  llt.compute(jittered);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c, Eigen::EigenvaluesOnly);
  const double smallest = es.eigenvalues().minCoeff();
  throw FactorizationError("covariance factorization failed after jitter; smallest eigenvalue " +
                               std::to_string(smallest),
                           smallest);
}

std::vector<double> mc_vector_values(const CovarianceSpec& cov,
                                     const std::function<double(const Eigen::VectorXd&)>& f,
                                     const McOptions& options) {
  const Eigen::MatrixXd factor = sampling_factor(cov);
  const Index n = cov.dimension();
  return replicate(options, [&](std::uint64_t first, std::span<double> out) {
    std::normal_distribution<double> normal;
    Eigen::VectorXd z(n);
    Eigen::VectorXd x(n);
    for (std::size_t b = 0; b < out.size(); ++b) {
      SplitMix64 engine = substream(options.seed, first + b);
      for (Index i = 0; i < n; ++i) z(i) = normal(engine);
      normal.reset();
      x.noalias() = factor.triangularView<Eigen::Lower>() * z;
      out[b] = f(x);
    }
  });
}

McEstimate mc_vector_probability(const CovarianceSpec& cov,
                                 const std::function<bool(const Eigen::VectorXd&)>& event,
                                 const McOptions& options) {
  const std::vector<double> v = mc_vector_values(
      cov, [&](const Eigen::VectorXd& x) { return event(x) ? 1.0 : 0.0; }, options);
  const auto hits =
      static_cast<std::uint64_t>(std::count(v.begin(), v.end(), 1.0));
  return probability_estimate(hits, options.reps, options.seed);
}

McEstimate mc_vector_sup_prob(const CovarianceSpec& cov, double theta, const McOptions& options,
                              SupKind kind) {
  return mc_vector_probability(
      cov,
      [&](const Eigen::VectorXd& x) {
        return (kind == SupKind::Max ? x.maxCoeff() : x.cwiseAbs().maxCoeff()) <= theta;
      },
      options);
}

McEstimate mc_vector_expectation(const CovarianceSpec& cov,
                                 const std::function<double(const Eigen::VectorXd&)>& f,
                                 const McOptions& options) {
  const std::vector<double> v = mc_vector_values(cov, f, options);
  return mean_estimate(v, options.seed);
}

}  // namespace gsup
