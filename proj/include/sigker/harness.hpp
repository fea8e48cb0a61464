#ifndef SIGKER_HARNESS_HPP
#define SIGKER_HARNESS_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "sigker/errors.hpp"
#include "sigker/goursat.hpp"
#include "sigker/path_lift.hpp"

namespace sigker {

/*
 * Standard normal variates from std::mt19937_64 via the Box-Muller transform.
 * Both ingredients are fully specified (the engine by the C++ standard, the
 * transform below), so sequences are reproducible across standard libraries,
 * unlike std::normal_distribution.  Uniforms use the top 53 bits of one draw.
 */
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
  }

  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1], u2 in [0, 1)
    const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Brownian motion on the uniform grid t_i = i T / n, started at the origin.
inline TimeSeries simulate_bm(std::size_t dim, std::size_t n, double horizon, std::uint64_t seed,
                              std::uint64_t stream = 0) {
  if (n == 0) throw DomainError("simulate_bm needs n >= 1");
  if (dim == 0) throw DomainError("simulate_bm needs dim >= 1");
  if (!(horizon > 0.0)) throw DomainError("simulate_bm needs a positive horizon");
  NormalSampler normal(seed, stream);
  const double scale = std::sqrt(horizon / static_cast<double>(n));
  std::vector<double> times(n + 1), values((n + 1) * dim, 0.0);
  for (std::size_t i = 0; i <= n; ++i) {
    times[i] = horizon * static_cast<double>(i) / static_cast<double>(n);
  }
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t k = 0; k < dim; ++k) {
      values[i * dim + k] = values[(i - 1) * dim + k] + scale * normal();
    }
  }
  return TimeSeries(std::move(times), std::move(values), dim);
}

/// Runs fn(i) for i in [0, count) on up to `threads` workers (0: hardware concurrency).
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

/// Degree-1 solution on the full sample grid of both series.
inline double reference_value(const TimeSeries& x, const TimeSeries& y) {
  if (x.dim() != y.dim()) throw ShapeError("time series differ in dimension");
  std::vector<std::vector<double>> dx, dy;
  dx.reserve(x.segments());
  dy.reserve(y.segments());
  for (std::size_t i = 0; i < x.segments(); ++i) dx.push_back(x.increment(i));
  for (std::size_t j = 0; j < y.segments(); ++j) dy.push_back(y.increment(j));
  return solve_order1(dx, dy).value;
}

inline void require_divisor(const TimeSeries& ts, std::size_t k) {
  if (k == 0 || ts.segments() % k != 0) {
    throw DomainError("coarsening factor " + std::to_string(k) + " does not divide " +
                      std::to_string(ts.segments()));
  }
}

/// |reference - degree-m solution on every k-th sample|, given a precomputed reference.
inline double error_estimate(const TimeSeries& x, const TimeSeries& y, std::size_t degree,
                             std::size_t k, double reference) {
  require_divisor(x, k);
  require_divisor(y, k);
  const auto px = build_pab(x, every_k_partition(x, k), degree);
  const auto py = build_pab(y, every_k_partition(y, k), degree);
  return std::abs(reference - solve(px, py).value);
}

inline double error_estimate(const TimeSeries& x, const TimeSeries& y, std::size_t degree,
                             std::size_t k) {
  return error_estimate(x, y, degree, k, reference_value(x, y));
}

struct ExperimentConfig {
  std::size_t dim = 2;
  std::size_t n_fine = 1024;
  std::vector<std::size_t> factors{4, 8, 16, 32, 64};
  std::vector<std::size_t> degrees{1, 2, 3, 4};
  std::size_t pairs = 20;
  double horizon = 1.0;
  std::uint64_t seed = 42;
  unsigned threads = 0;

  void validate() const {
    if (dim == 0) throw DomainError("dim must be >= 1");
    if (n_fine == 0) throw DomainError("n_fine must be >= 1");
    if (pairs == 0) throw DomainError("pairs must be >= 1");
    if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
    if (factors.empty() || degrees.empty()) throw DomainError("factors and degrees must be set");
    for (std::size_t k : factors) {
      if (k == 0 || n_fine % k != 0) {
        throw DomainError("factor " + std::to_string(k) + " does not divide n_fine");
      }
    }
    for (std::size_t m : degrees) {
      if (m == 0) throw DomainError("degrees must be >= 1");
    }
  }
};

struct ErrorRecord {
  std::size_t degree = 0;
  std::size_t factor = 0;
  double mean_error = 0.0;
  double std_error = 0.0;
  std::vector<double> errors;
};

/// The pair of Brownian paths used for repetition `pair` of an experiment.
inline std::pair<TimeSeries, TimeSeries> experiment_pair(const ExperimentConfig& cfg,
                                                         std::size_t pair) {
  return {simulate_bm(cfg.dim, cfg.n_fine, cfg.horizon, cfg.seed, 2 * pair),
          simulate_bm(cfg.dim, cfg.n_fine, cfg.horizon, cfg.seed, 2 * pair + 1)};
}

/*
 * Error of the degree-m scheme on the k-coarsened grid against the fine
 * degree-1 reference, for every (m, k) of the configuration.  The same path
 * pairs are reused across all cells.  Records come out degree-major in the
 * order of cfg.degrees, then cfg.factors.
 */
inline std::vector<ErrorRecord> convergence_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::size_t cells = cfg.degrees.size() * cfg.factors.size();
  // errors[pair][cell]
  std::vector<std::vector<double>> errors(cfg.pairs, std::vector<double>(cells));
  parallel_for(cfg.pairs, cfg.threads, [&](std::size_t p) {
    const auto [x, y] = experiment_pair(cfg, p);
    const double ref = reference_value(x, y);
    for (std::size_t a = 0; a < cfg.degrees.size(); ++a) {
      for (std::size_t b = 0; b < cfg.factors.size(); ++b) {
        errors[p][a * cfg.factors.size() + b] =
            error_estimate(x, y, cfg.degrees[a], cfg.factors[b], ref);
      }
    }
  });

  std::vector<ErrorRecord> out;
  out.reserve(cells);
  for (std::size_t a = 0; a < cfg.degrees.size(); ++a) {
    for (std::size_t b = 0; b < cfg.factors.size(); ++b) {
      ErrorRecord r;
      r.degree = cfg.degrees[a];
      r.factor = cfg.factors[b];
      for (std::size_t p = 0; p < cfg.pairs; ++p) r.errors.push_back(errors[p][a * cfg.factors.size() + b]);
      double sum = 0.0;
      for (double e : r.errors) sum += e;
      const double n = static_cast<double>(r.errors.size());
      r.mean_error = sum / n;
      if (r.errors.size() > 1) {
        double ss = 0.0;
        for (double e : r.errors) ss += (e - r.mean_error) * (e - r.mean_error);
        r.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
      }
      out.push_back(std::move(r));
    }
  }
  return out;
}

/// Symmetric Gram matrix of degree-m kernels, each series partitioned at every k-th sample.
inline Eigen::MatrixXd gram_matrix(const std::vector<TimeSeries>& dataset, std::size_t degree,
                                   std::size_t every_k, unsigned threads = 0) {
  if (dataset.empty()) return Eigen::MatrixXd(0, 0);
  const std::size_t d = dataset.front().dim();
  for (const auto& ts : dataset) {
    if (ts.dim() != d) throw ShapeError("dataset series differ in dimension");
  }
  std::vector<PiecewiseAbelianPath> paths;
  paths.reserve(dataset.size());
  for (const auto& ts : dataset) paths.push_back(build_pab(ts, every_k_partition(ts, every_k), degree));

  const std::size_t n = dataset.size();
  std::vector<std::pair<std::size_t, std::size_t>> entries;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) entries.emplace_back(i, j);
  }
  Eigen::MatrixXd g(n, n);
  parallel_for(entries.size(), threads, [&](std::size_t e) {
    const auto [i, j] = entries[e];
    g(i, j) = solve(paths[i], paths[j]).value;
  });
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) g(i, j) = g(j, i);
  }
  return g;
}

inline double min_eigenvalue(const Eigen::MatrixXd& symmetric) {
  if (symmetric.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetric, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace sigker

#endif  // SIGKER_HARNESS_HPP
