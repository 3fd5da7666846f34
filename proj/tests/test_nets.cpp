#include <gtest/gtest.h>

#include "sparsereg/nets.hpp"
#include "test_util.hpp"

using namespace sparsereg;
using namespace sparsereg::nets;

TEST(IntervalNet, HalfGivesSingleCenter) { EXPECT_EQ(interval_net(0.5), std::vector<double>{0.5}); }

TEST(IntervalNet, QuarterGivesTwoCenters) { EXPECT_EQ(interval_net(0.25), (std::vector<double>{0.25, 0.75})); }

TEST(IntervalNet, TenthCoversUnitInterval) {
  const auto net = interval_net(0.1);
  ASSERT_EQ(net.size(), 5u);
  for (int i = 0; i <= 1000; ++i) {
    const double t = i * 1e-3;
    double best = 1.0;
    for (double p : net) best = std::min(best, std::abs(p - t));
    EXPECT_LE(best, 0.1 + 1e-12) << "t = " << t;
  }
}

TEST(IntervalNet, InvalidDeltaIsDomainError) {
  EXPECT_THROW(interval_net(0.0), DomainError);
  EXPECT_THROW(interval_net(-1.0), DomainError);
  EXPECT_THROW(interval_net(1.5), DomainError);
}

TEST(BallNet, CoarseNetIsOrigin) {
  const Matrix net = ball_net(1, 1.0, 2.0);
  ASSERT_EQ(net.cols(), 1);
  EXPECT_EQ(net(0, 0), 0.0);
}

TEST(BallNet, SampledCoveringInThePlane) {
  const Matrix net = ball_net(2, 1.0, 0.5);
  std::mt19937_64 rng(11);
  for (int s = 0; s < 10000; ++s) {
    const Vector y = testutil::ball_sample(2, 1.0, rng);
    ASSERT_LE(testutil::scan_distance(net, y), 0.5 + 1e-12);
  }
}

TEST(BallNet, CountMatchesIndependentGridEnumeration) {
  const double delta = 0.5, radius = 1.0;
  const double h = 2 * delta / std::sqrt(2.0);
  long expected = 0;
  for (long i = -20; i <= 20; ++i)
    for (long j = -20; j <= 20; ++j)
      if (std::hypot(i * h, j * h) <= radius + delta + 1e-12) ++expected;
  EXPECT_EQ(ball_net(2, radius, delta).cols(), expected);
}

TEST(BallNet, DeterministicAndMonotone) {
  const Matrix a = ball_net(3, 1.0, 0.3);
  const Matrix b = ball_net(3, 1.0, 0.3);
  EXPECT_EQ(a, b);
  Index last = 0;
  for (double delta : {0.8, 0.4, 0.2, 0.1}) {
    const Index n = ball_net(3, 1.0, delta).cols();
    EXPECT_GE(n, last);
    last = n;
  }
}

TEST(BallNet, PredictedSizeBoundsActual) {
  for (Index dim = 1; dim <= 4; ++dim)
    for (double delta : {0.7, 0.3, 0.15})
      EXPECT_LE(static_cast<double>(ball_net(dim, 1.0, delta).cols()), predicted_ball_net_size(dim, 1.0, delta));
}

TEST(BallNet, CapacityGuard) {
  try {
    ball_net(6, 1.0, 0.01, 1e6);
    FAIL() << "expected CapacityError";
  } catch (const CapacityError& e) {
    EXPECT_GT(e.predicted(), 1e6);
  }
}

TEST(BallNet, ZeroDimensionIsSingleEmptyPoint) {
  const Matrix net = ball_net(0, 1.0, 0.5);
  EXPECT_EQ(net.rows(), 0);
  EXPECT_EQ(net.cols(), 1);
}

TEST(ImageNet, SingleUnitColumnCoarse) {
  Matrix A = Matrix::Zero(3, 2);
  A(1, 0) = 1.0;
  const std::vector<Index> T = {0};
  const auto net = image_net(A, T, 1.0, 2.0);
  ASSERT_EQ(net.size(), 1u);
  EXPECT_EQ(net[0].image_point.norm(), 0.0);
}

TEST(ImageNet, IdentityColumnsCoverImageDisc) {
  const Matrix A = Matrix::Identity(2, 2);
  const std::vector<Index> T = {0, 1};
  const auto net = image_net(A, T, 1.0, 0.3);
  Matrix pts(2, static_cast<Index>(net.size()));
  for (std::size_t j = 0; j < net.size(); ++j) pts.col(static_cast<Index>(j)) = net[j].image_point;
  std::mt19937_64 rng(12);
  for (int s = 0; s < 1000; ++s) ASSERT_LE(testutil::scan_distance(pts, testutil::ball_sample(2, 1.0, rng)), 0.3 + 1e-12);
}

TEST(ImageNet, EntriesReconstruct) {
  const Matrix A = testutil::gaussian(6, 4, 13);
  const std::vector<Index> T = {1, 3};
  for (const auto& e : image_net(A, T, 2.0, 0.4)) {
    ASSERT_EQ(e.support, T);
    const Vector img = A.col(1) * e.coeffs[0] + A.col(3) * e.coeffs[1];
    EXPECT_LE((img - e.image_point).norm(), 1e-10);
  }
}

TEST(ImageNet, RankDeficientSupportUsesImageDimension) {
  Matrix A = testutil::gaussian(5, 3, 14);
  A.col(2) = 2.0 * A.col(0);
  const std::vector<Index> T = {0, 2};
  const auto net = subspace_net(A, T, 1.0, 0.25);
  EXPECT_EQ(net.basis.cols(), 1);
  for (Index j = 0; j < net.size(); ++j)
    EXPECT_LE((A.col(0) * net.coeffs(j)[0] + A.col(2) * net.coeffs(j)[1] - net.image_point(j)).norm(), 1e-10);
}
