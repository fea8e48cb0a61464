#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "sigker/path_lift.hpp"
#include "test_util.hpp"

namespace sigker {
namespace {

using testing::Rng;

const TimeSeries kRightThenUp = TimeSeries::from_points({{0, 0}, {1, 0}, {1, 1}});

TEST(TimeSeries, Validation) {
  EXPECT_THROW(TimeSeries({0.0}, {1.0}, 1), ShapeError);
  EXPECT_THROW(TimeSeries({0.0, 1.0}, {1.0}, 1), ShapeError);
  EXPECT_THROW(TimeSeries({0.0, 0.0}, {1.0, 2.0}, 1), DomainError);
  EXPECT_THROW(TimeSeries({0.0, 1.0}, {1.0, NAN}, 1), NumericError);
  const TimeSeries ts({0.0, 0.5, 2.0}, {0, 0, 1, 2, 3, 4}, 2);
  EXPECT_EQ(ts.index_of(0.5), 1u);
  EXPECT_THROW(ts.index_of(0.25), DomainError);
  EXPECT_EQ(ts.increment(1), (std::vector<double>{2, 2}));
}

TEST(SegmentSignature, Examples) {
  EXPECT_EQ(segment_signature(std::vector<double>{0, 0}, 3), TruncTensor::unit(2, 3));
  const auto s = segment_signature(std::vector<double>{1, 2}, 2);
  const std::vector<double> expected{1, 1, 2, 0.5, 1, 1, 2};
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_DOUBLE_EQ(s[i], expected[i]);

  const double a = 1.3;
  const auto s1 = segment_signature(std::vector<double>{a}, 4);
  EXPECT_DOUBLE_EQ(s1[2], a * a / 2);
  EXPECT_DOUBLE_EQ(s1[3], a * a * a / 6);
  EXPECT_NEAR(s1[4], a * a * a * a / 24, 1e-15);
}

TEST(SegmentSignature, EqualsExpOfIncrement) {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> dx{rng.uniform(), rng.uniform(), rng.uniform()};
    const auto s = segment_signature(dx, 4);
    EXPECT_LE(max_abs_diff(s, exp_trunc(TruncTensor::from_vector(dx, 4))), 1e-14);
  }
}

TEST(ChenSignature, Examples) {
  const auto one = TimeSeries::from_points({{0, 0}, {0.3, -0.4}});
  EXPECT_EQ(chen_signature(one, 3), segment_signature(std::vector<double>{0.3, -0.4}, 3));

  const auto s = chen_signature(kRightThenUp, 2);
  const std::vector<double> expected{1, 1, 1, 0.5, 1, 0, 0.5};
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(s[i], expected[i], 1e-15);

  // a path followed by its reversal is tree-like
  Rng rng(22);
  auto pts = rng.corners(2, 5, 1.5);
  auto back = pts;
  back.pop_back();
  pts.insert(pts.end(), back.rbegin(), back.rend());
  const auto loop = TimeSeries::from_points(pts);
  EXPECT_LE(max_abs_diff(chen_signature(loop, 4), TruncTensor::unit(2, 4)), 1e-14);
}

TEST(ChenSignature, WindowErrors) {
  EXPECT_THROW(chen_signature(kRightThenUp, 1.0, 1.0, 2), DomainError);
  EXPECT_THROW(chen_signature(kRightThenUp, 2.0, 1.0, 2), DomainError);
  EXPECT_THROW(chen_signature(kRightThenUp, 0.0, 1.5, 2), DomainError);
}

TEST(ChenSignature, MultiplicativeAtInteriorPoints) {
  Rng rng(23);
  const auto ts = rng.path(2, 8, 2.0);
  const auto whole = chen_signature(ts, 4);
  for (std::size_t u = 1; u < ts.size() - 1; ++u) {
    const auto left = chen_signature(ts, std::size_t{0}, u, 4);
    const auto right = chen_signature(ts, u, ts.size() - 1, 4);
    const auto prod = mul_trunc(left, right);
    for (std::size_t i = 0; i < whole.size(); ++i) {
      EXPECT_NEAR(prod[i], whole[i], 1e-12 * (1.0 + std::abs(whole[i])));
    }
  }
}

TEST(ChenSignature, InvariantUnderReparametrisation) {
  Rng rng(24);
  const auto pts = rng.corners(3, 6, 2.0);
  const auto uniform = TimeSeries::from_points(pts);
  std::vector<double> times{0.0};
  std::vector<double> values(pts.front());
  for (std::size_t i = 1; i < pts.size(); ++i) {
    times.push_back(times.back() + rng.uniform(0.01, 3.0));
    values.insert(values.end(), pts[i].begin(), pts[i].end());
  }
  const TimeSeries warped(times, values, 3);
  EXPECT_EQ(chen_signature(uniform, 4), chen_signature(warped, 4));
}

TEST(LogSignature, Examples) {
  const auto seg = TimeSeries::from_points({{0, 0}, {0.5, -2}});
  const auto l = log_signature(seg, 0.0, 1.0, 3);
  EXPECT_EQ(l.t_start, 0.0);
  EXPECT_EQ(l.t_end, 1.0);
  EXPECT_NEAR(l.tensor[1], 0.5, 1e-15);
  EXPECT_NEAR(l.tensor[2], -2, 1e-15);
  for (std::size_t i = 3; i < l.tensor.size(); ++i) EXPECT_NEAR(l.tensor[i], 0.0, 1e-15);

  const auto area = log_signature(kRightThenUp, 0.0, 2.0, 2).tensor;
  const std::vector<double> expected{0, 1, 1, 0, 0.5, -0.5, 0};
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(area[i], expected[i], 1e-15);

  Rng rng(25);
  const auto ts = rng.path(3, 7, 2.0);
  const auto l1 = log_signature(ts, 0.0, 7.0, 1).tensor;
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_NEAR(l1[1 + k], ts.point(7)[k] - ts.point(0)[k], 1e-15);
  }
}

TEST(LogSignature, DegreeConsistency) {
  Rng rng(26);
  const auto ts = rng.path(2, 6, 2.0);
  for (std::size_t m = 1; m <= 4; ++m) {
    const auto lo = log_signature(ts, 1.0, 5.0, m).tensor;
    const auto hi = log_signature(ts, 1.0, 5.0, m + 1).tensor;
    EXPECT_LE(max_abs_diff(project(hi, m), lo), 1e-14);
  }
}

TEST(LogSignature, ExpRecoversSignature) {
  Rng rng(27);
  const auto ts = rng.path(3, 5, 1.8);
  const auto sig = chen_signature(ts, 4);
  EXPECT_LE(max_abs_diff(exp_trunc(log_signature(ts, 0.0, 5.0, 4).tensor), sig), 1e-12);
}

TEST(BuildPab, DegreeOneOnFullGridGivesIncrements) {
  Rng rng(28);
  const auto ts = rng.path(2, 9, 2.0);
  const auto p = build_pab(ts, ts.times(), 1);
  ASSERT_EQ(p.intervals(), 9u);
  for (std::size_t i = 0; i < 9; ++i) {
    const auto dx = ts.increment(i);
    EXPECT_EQ(p.logsig(i)[1], dx[0]);
    EXPECT_EQ(p.logsig(i)[2], dx[1]);
    EXPECT_EQ(p.increments()[i].t_start, ts.time(i));
  }
}

TEST(BuildPab, SingleIntervalIsWholeLogSignature) {
  Rng rng(29);
  const auto ts = rng.path(2, 5, 2.0);
  const auto p = build_pab(ts, {0.0, 5.0}, 3);
  ASSERT_EQ(p.intervals(), 1u);
  EXPECT_EQ(p.logsig(0), log_signature(ts, 0.0, 5.0, 3).tensor);
}

TEST(BuildPab, CoarsenedPartition) {
  Rng rng(30);
  const auto ts = rng.path(2, 64, 2.0);
  const auto p = build_pab(ts, every_k_partition(ts, 8), 2);
  ASSERT_EQ(p.intervals(), 8u);
  EXPECT_EQ(p.partition()[1], ts.time(8));
  EXPECT_EQ(p.logsig(3), log_signature(ts, std::size_t{24}, std::size_t{32}, 2).tensor);
}

TEST(BuildPab, Errors) {
  const auto& ts = kRightThenUp;
  EXPECT_THROW(build_pab(ts, {0.0, 0.5, 2.0}, 2), DomainError);
  EXPECT_THROW(build_pab(ts, {0.0, 1.0}, 2), DomainError);
  EXPECT_THROW(build_pab(ts, {0.0}, 2), DomainError);
  EXPECT_THROW(build_pab(ts, {0.0, 1.0, 1.0, 2.0}, 2), DomainError);
}

TEST(PartialSignatures, AgreeWithSignatureOnPartition) {
  Rng rng(31);
  const auto ts = rng.path(2, 12, 2.0);
  const auto p = build_pab(ts, every_k_partition(ts, 3), 3);
  const auto g = pab_partial_signatures(p);
  ASSERT_EQ(g.size(), 5u);
  EXPECT_EQ(g[0], TruncTensor::unit(2, 3));
  for (std::size_t i = 1; i < g.size(); ++i) {
    EXPECT_LE(max_abs_diff(g[i], chen_signature(ts, std::size_t{0}, 3 * i, 3)), 1e-12);
  }
}

TEST(PartialSignatures, StraightLineDegreeOne) {
  const auto ts = TimeSeries::from_points({{0, 0}, {0.5, 1}, {1, 2}});
  const auto g = pab_partial_signatures(build_pab(ts, ts.times(), 1));
  EXPECT_NEAR(g[2][1], 1.0, 1e-15);
  EXPECT_NEAR(g[2][2], 2.0, 1e-15);
}

TEST(PiecewiseAbelianPath, Validation) {
  std::vector<LieIncrement> incs{{TruncTensor::unit(2, 2), 0.0, 1.0}};
  EXPECT_THROW(PiecewiseAbelianPath({0.0, 1.0}, incs), DomainError);
  incs[0].tensor = TruncTensor::zero(2, 2);
  EXPECT_THROW(PiecewiseAbelianPath({0.0, 2.0}, incs), DomainError);
  EXPECT_THROW(PiecewiseAbelianPath({0.0, 1.0, 2.0}, incs), ShapeError);
  const PiecewiseAbelianPath ok({0.0, 1.0}, incs);
  EXPECT_EQ(ok.embedded(4).degree(), 4u);
}

}  // namespace
}  // namespace sigker
