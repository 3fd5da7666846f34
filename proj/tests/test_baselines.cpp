#include <gtest/gtest.h>

#include "sparsereg/baselines.hpp"
#include "sparsereg/numlin.hpp"
#include "test_util.hpp"

using namespace sparsereg;
using namespace sparsereg::baselines;

namespace {

RobustInstance counterexample() {
  RobustInstance inst;
  inst.A = testutil::counterexample_A();
  inst.b = testutil::counterexample_b();
  inst.k = 1;
  return inst;
}

WeightedGraph triangle_plus() {
  // triangle 0-1-2 of weight 6 and a cheaper path 3-4-5 that is not a clique
  return {6, {{0, 1, 2}, {1, 2, 2}, {0, 2, 2}, {3, 4, 1}, {4, 5, 1}}};
}

}  // namespace

TEST(Greedy, CounterexampleDropsWrongRow) {
  const auto inst = counterexample();
  const Vector y = numlin::least_squares(inst.A, inst.b);
  EXPECT_NEAR(y[0], 7.0, 1e-9);
  EXPECT_NEAR(y[1], -3.0, 1e-9);
  const auto g = greedy_robust(inst);
  EXPECT_EQ(g.ignored_rows(), (std::vector<Index>{1}));
  EXPECT_GT(g.residual, 1.0);
  const auto refit = greedy_robust(inst, true);
  EXPECT_EQ(refit.ignored_rows(), (std::vector<Index>{1}));
  EXPECT_LE(refit.residual, g.residual + 1e-12);
}

TEST(Greedy, TiesGoToLowestIndex) {
  RobustInstance inst;
  inst.A = Matrix::Ones(4, 1);
  inst.b = Vector(4);
  inst.b << 1, -1, 1, -1;
  inst.k = 1;
  EXPECT_EQ(greedy_robust(inst).ignored_rows(), (std::vector<Index>{0}));
}

TEST(AltMin, TrappedFromEveryCleanStart) {
  const auto inst = counterexample();
  for (Index start : {1, 2, 3}) {
    std::vector<std::uint8_t> mask(4, 1);
    mask[static_cast<std::size_t>(start)] = 0;
    const auto trace = altmin_robust(inst, mask, 5);
    EXPECT_TRUE(trace.converged) << "start " << start;
    EXPECT_GT(trace.final.residual, 0.0);
    EXPECT_LE(trace.iterations.size(), 5u);
  }
}

TEST(AltMin, RejectsWrongMaskSize) {
  EXPECT_THROW(altmin_robust(counterexample(), {1, 1, 1, 1}, 3), ContractError);
}

TEST(BruteRobust, CounterexampleOptimum) {
  const auto inst = counterexample();
  const auto best = brute_robust_reg(inst.A, inst.b, 1);
  EXPECT_EQ(best.ignored_rows(), (std::vector<Index>{0}));
  EXPECT_LE(best.residual, 1e-12);
}

TEST(BruteSparse, MatchesHandEnumeration) {
  const Matrix A = testutil::gaussian(7, 5, 3);
  const Vector b = testutil::gaussian_vec(7, 4);
  const auto best = brute_sparse_reg(A, b, 2);
  double truth = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < 5; ++i)
    for (Index j = i + 1; j < 5; ++j) {
      Matrix As(7, 2);
      As << A.col(i), A.col(j);
      truth = std::min(truth, (As * As.colPivHouseholderQr().solve(b) - b).norm());
    }
  EXPECT_NEAR(best.residual, truth, 1e-10);
  EXPECT_LE(best.x.nnz(), 2u);
  EXPECT_NEAR((A * best.x.dense() - b).norm(), best.residual, 1e-10);
}

TEST(BruteSparse, KAboveDimensionUsesAllColumns) {
  const Matrix A = testutil::gaussian(5, 2, 5);
  const Vector b = testutil::gaussian_vec(5, 6);
  EXPECT_NEAR(brute_sparse_reg(A, b, 4).residual, (A * numlin::least_squares(A, b) - b).norm(), 1e-10);
}

TEST(BrutePca, DiagonalMatrix) {
  const Matrix A = Vector((Vector(4) << 1, 5, 2, 3).finished()).asDiagonal();
  const auto s = brute_sparse_pca(A, 2);
  EXPECT_NEAR(s.value, 5.0, 1e-12);
  EXPECT_NEAR(s.norm, 1.0, 1e-12);
}

TEST(BrutePca, RankOneAllOnes) {
  const Matrix A = Matrix::Ones(5, 5);
  EXPECT_NEAR(brute_sparse_pca(A, 3).value, 3.0, 1e-10);
  EXPECT_NEAR(brute_sparse_pca_alphabet(A, 3, 1).value, 9.0, 1e-12);
}

TEST(ExactCover, SmallCases) {
  EXPECT_TRUE(brute_exact_cover(3, {{0, 1}, {2}, {1, 2}}));
  EXPECT_FALSE(brute_exact_cover(3, {{0, 1}, {1, 2}}));
  EXPECT_TRUE(brute_exact_cover(0, {}));
  EXPECT_FALSE(brute_exact_cover(2, {{0}, {0}}));
  EXPECT_THROW(brute_exact_cover(2, {{2}}), ContractError);
}

TEST(Clique, TriangleWeight) {
  const auto g = triangle_plus();
  EXPECT_EQ(brute_min_weight_clique(g, 3), std::optional<long>(6));
  EXPECT_EQ(brute_min_weight_clique(g, 2), std::optional<long>(1));
  EXPECT_EQ(brute_min_weight_clique(g, 4), std::nullopt);
}

TEST(Clique, BlockRestriction) {
  // blocks {0,1}, {2,3}, {4,5}; triangle 1-2-4 crosses blocks, 0-1-2 does not
  const WeightedGraph g{6, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {1, 4, 3}, {2, 4, 3}}};
  EXPECT_EQ(brute_min_weight_clique(g, 3), std::optional<long>(3));
  EXPECT_EQ(brute_min_weight_block_clique(g, 3), std::optional<long>(7));
  EXPECT_THROW(brute_min_weight_block_clique(g, 4), ContractError);
}
