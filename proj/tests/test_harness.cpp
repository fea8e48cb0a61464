#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "sigker/harness.hpp"
#include "sigker/io.hpp"
#include "sigker/oracle.hpp"

namespace sigker {
namespace {

TEST(NormalSampler, Reproducible) {
  NormalSampler a(7), b(7), c(8), d(7, 1);
  bool differs_seed = false, differs_stream = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a();
    EXPECT_EQ(x, b());
    differs_seed |= x != c();
    differs_stream |= x != d();
  }
  EXPECT_TRUE(differs_seed);
  EXPECT_TRUE(differs_stream);
}

TEST(SimulateBm, ShapeAndGrid) {
  const auto ts = simulate_bm(2, 1024, 1.0, 3);
  EXPECT_EQ(ts.size(), 1025u);
  EXPECT_EQ(ts.dim(), 2u);
  EXPECT_EQ(ts.time(0), 0.0);
  EXPECT_EQ(ts.time(1024), 1.0);
  EXPECT_EQ(ts.point(0)[0], 0.0);
  EXPECT_THROW(simulate_bm(2, 0, 1.0, 3), DomainError);
}

TEST(SimulateBm, Deterministic) {
  const auto a = simulate_bm(3, 50, 2.0, 11, 4);
  const auto b = simulate_bm(3, 50, 2.0, 11, 4);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(a.point(i)[k], b.point(i)[k]);
  }
}

TEST(SimulateBm, IncrementVariance) {
  const std::size_t n = 10000;
  const double horizon = 2.0;
  const auto ts = simulate_bm(2, n, horizon, 2024);
  for (std::size_t k = 0; k < 2; ++k) {
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) ss += std::pow(ts.increment(i)[k], 2);
    const double var = ss / static_cast<double>(n);
    EXPECT_GE(var, 0.9 * horizon / n);
    EXPECT_LE(var, 1.1 * horizon / n);
  }
}

TEST(ReferenceValue, Examples) {
  const auto flat = TimeSeries::from_points({{0, 0}, {0, 0}, {0, 0}});
  EXPECT_EQ(reference_value(flat, flat), 1.0);

  std::vector<double> t(1025), v;
  for (std::size_t i = 0; i <= 1024; ++i) {
    t[i] = static_cast<double>(i) / 1024.0;
    v.insert(v.end(), {t[i], 0.0});
  }
  const TimeSeries seg(t, v, 2);
  EXPECT_NEAR(reference_value(seg, seg), 2.2795853023360673, 1e-5);

  const auto x = simulate_bm(2, 128, 1.0, 5, 0);
  const auto y = simulate_bm(2, 128, 1.0, 5, 1);
  EXPECT_NEAR(reference_value(x, y), reference_value(y, x), 1e-12);
}

TEST(ErrorEstimate, DegreeOneOnFineGridIsExactlyZero) {
  const auto x = simulate_bm(2, 64, 1.0, 9, 0);
  const auto y = simulate_bm(2, 64, 1.0, 9, 1);
  EXPECT_EQ(error_estimate(x, y, 1, 1), 0.0);
  EXPECT_TRUE(std::isfinite(error_estimate(x, y, 3, 1)));
  EXPECT_THROW(error_estimate(x, y, 2, 3), DomainError);
}

TEST(ErrorEstimate, HigherDegreeHelpsInTheMean) {
  ExperimentConfig cfg;
  cfg.n_fine = 256;
  cfg.pairs = 20;
  cfg.seed = 5;
  double e1 = 0.0, e2 = 0.0, e4 = 0.0;
  for (std::size_t p = 0; p < cfg.pairs; ++p) {
    const auto [x, y] = experiment_pair(cfg, p);
    const double ref = reference_value(x, y);
    e1 += error_estimate(x, y, 1, 32, ref);
    e2 += error_estimate(x, y, 2, 32, ref);
    e4 += error_estimate(x, y, 4, 32, ref);
  }
  EXPECT_LT(e2, e1);
  EXPECT_LT(e4, e1);
}

TEST(ConvergenceExperiment, RowsAndDeterminism) {
  ExperimentConfig cfg;
  cfg.n_fine = 64;
  cfg.factors = {4, 16};
  cfg.degrees = {1, 3};
  cfg.pairs = 3;
  cfg.seed = 17;
  const auto a = convergence_experiment(cfg);
  ASSERT_EQ(a.size(), 4u);
  EXPECT_EQ(a[0].degree, 1u);
  EXPECT_EQ(a[0].factor, 4u);
  EXPECT_EQ(a[1].factor, 16u);
  EXPECT_EQ(a[2].degree, 3u);
  for (const auto& r : a) {
    ASSERT_EQ(r.errors.size(), 3u);
    EXPECT_DOUBLE_EQ(r.mean_error, (r.errors[0] + r.errors[1] + r.errors[2]) / 3.0);
    EXPECT_GE(r.std_error, 0.0);
  }
  cfg.threads = 2;
  const auto b = convergence_experiment(cfg);
  std::ostringstream sa, sb;
  io::write_records_csv(sa, a);
  io::write_records_csv(sb, b);
  EXPECT_EQ(sa.str(), sb.str());

  cfg.pairs = 1;
  const auto single = convergence_experiment(cfg);
  EXPECT_EQ(single[0].std_error, 0.0);
}

TEST(ConvergenceExperiment, ConfigValidation) {
  ExperimentConfig cfg;
  cfg.factors = {3};
  EXPECT_THROW(convergence_experiment(cfg), DomainError);
  cfg.factors = {4};
  cfg.degrees = {0};
  EXPECT_THROW(convergence_experiment(cfg), DomainError);
  cfg.degrees = {1};
  cfg.pairs = 0;
  EXPECT_THROW(convergence_experiment(cfg), DomainError);
}

TEST(GramMatrix, Examples) {
  const auto flat = TimeSeries::from_points({{0, 0}, {0, 0}});
  const auto g1 = gram_matrix({flat}, 2, 1);
  ASSERT_EQ(g1.rows(), 1);
  EXPECT_EQ(g1(0, 0), 1.0);

  std::vector<TimeSeries> set;
  for (std::uint64_t s = 0; s < 10; ++s) set.push_back(simulate_bm(2, 64, 1.0, 99, s));
  const auto g = gram_matrix(set, 2, 4);
  EXPECT_EQ((g - g.transpose()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_GE(min_eigenvalue(g), -1e-8);

  // permutation equivariance
  std::vector<TimeSeries> perm{set[3], set[0], set[7]};
  const auto gp = gram_matrix(perm, 2, 4);
  const int idx[3] = {3, 0, 7};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) EXPECT_EQ(gp(i, j), g(idx[i], idx[j]));
  }

  std::vector<TimeSeries> mixed{set[0], TimeSeries::from_points({{0, 0, 0}, {1, 1, 1}})};
  EXPECT_THROW(gram_matrix(mixed, 2, 1), ShapeError);
}

TEST(ParallelFor, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(8, 4,
                            [](std::size_t i) {
                              if (i == 5) throw DomainError("boom");
                            }),
               DomainError);
}

}  // namespace
}  // namespace sigker
