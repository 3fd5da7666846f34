#include <gtest/gtest.h>

#include "sparsereg/baselines.hpp"
#include "sparsereg/combinatorics.hpp"
#include "sparsereg/nets.hpp"
#include "sparsereg/sparse_reg.hpp"
#include "test_util.hpp"

using namespace sparsereg;
using namespace sparsereg::sparse_reg;

namespace {

SparseRegInstance planted(Index n, Index d, int k, std::uint64_t seed, Vector* x_out = nullptr) {
  SparseRegInstance inst;
  inst.A = testutil::gaussian(n, d, seed);
  Vector x = Vector::Zero(d);
  std::mt19937_64 rng(seed + 1000);
  std::vector<Index> cols(static_cast<std::size_t>(d));
  std::iota(cols.begin(), cols.end(), Index{0});
  std::shuffle(cols.begin(), cols.end(), rng);
  std::uniform_real_distribution<double> u(1.0, 2.0);
  for (int i = 0; i < k; ++i) x[cols[static_cast<std::size_t>(i)]] = (i % 2 ? -1.0 : 1.0) * u(rng);
  inst.b = inst.A * x;
  inst.k = k;
  if (x_out) *x_out = x;
  return inst;
}

}  // namespace

TEST(SparseRegression, PlantedResidualWithinEps) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    auto inst = planted(12, 8, 2, s);
    inst.eps = 0.1;
    const auto r = solve_sparse_regression(inst, s);
    EXPECT_LE(r.z.nnz(), 2u);
    EXPECT_LE(r.residual, 0.1 * inst.b.norm());
    EXPECT_NEAR(r.residual, (inst.A * r.z.dense() - inst.b).norm(), 1e-9);
  }
}

TEST(SparseRegression, OddKUsesUnevenHalves) {
  auto inst = planted(10, 6, 3, 21);
  inst.eps = 0.3;
  const auto r = solve_sparse_regression(inst, 1);
  EXPECT_LE(r.z.nnz(), 3u);
  EXPECT_LE(r.residual, 0.3 * inst.b.norm());
}

TEST(SparseRegression, CandidateCountIsSupportsTimesNet) {
  auto inst = planted(9, 7, 2, 3);
  inst.eps = 0.2;
  const auto r = solve_sparse_regression(inst, 0);
  const double delta = 0.2 / 4.0;
  const auto per_support = static_cast<std::uint64_t>(nets::ball_net(1, 2.0, delta).cols());
  EXPECT_EQ(r.stats.candidates, binomial(7, 1) * per_support);
  EXPECT_EQ(r.stats.supports, 7u);
  EXPECT_DOUBLE_EQ(r.stats.delta, delta);
}

TEST(SparseRegression, ZeroTargetGivesZeroVector) {
  auto inst = planted(6, 4, 2, 4);
  inst.b.setZero();
  const auto r = solve_sparse_regression(inst, 0);
  EXPECT_EQ(r.z.nnz(), 0u);
  EXPECT_EQ(r.residual, 0.0);
}

TEST(SparseRegression, SerialAndParallelAgree) {
  auto inst = planted(10, 7, 2, 5);
  inst.eps = 0.15;
  SolverOptions ser;
  ser.parallel = false;
  const auto a = solve_sparse_regression(inst, 2, ser);
  const auto b = solve_sparse_regression(inst, 2);
  EXPECT_EQ(a.z, b.z);
}

TEST(SparseRegression, NeverBeatsBruteForce) {
  // noisy target: the solver output is feasible, so brute force lower-bounds it
  auto inst = planted(10, 6, 2, 6);
  inst.b += 0.3 * testutil::gaussian_vec(10, 60);
  inst.eps = 0.2;
  const auto r = solve_sparse_regression(inst, 0);
  const auto brute = baselines::brute_sparse_reg(inst.A, inst.b, 2);
  EXPECT_GE(r.residual, brute.residual - 1e-9);
  EXPECT_LE(r.residual, brute.residual + 0.2 * inst.b.norm() * 2);
}

TEST(SparseRegression, CapacityGuard) {
  auto inst = planted(10, 10, 4, 7);
  inst.eps = 0.01;
  SolverOptions opts;
  opts.net_cap = 1e4;
  EXPECT_THROW(solve_sparse_regression(inst, 0, opts), CapacityError);
}

TEST(SparseRegression, HashedBackendRuns) {
  auto inst = planted(12, 8, 2, 8);
  inst.eps = 0.1;
  inst.c = 2.0;
  SolverOptions opts;
  opts.backend = ann::AnnBackend::hashed;
  const auto r = solve_sparse_regression(inst, 3, opts);
  EXPECT_LE(r.z.nnz(), 2u);
  EXPECT_LE(r.residual, inst.b.norm());
}

TEST(Recovery, CloseToPlantedVector) {
  Vector x;
  auto inst = planted(12, 6, 2, 9, &x);
  inst.eps = 0.2;
  const auto r = recover_sparse_vector(inst, 0);
  EXPECT_LE((r.z.dense() - x).norm(), 0.2);
  EXPECT_GT(r.sigma_floor, 0.0);
}

TEST(Recovery, SubmatrixModeFloorIsAtLeastFull) {
  auto inst = planted(12, 5, 2, 10);
  inst.eps = 0.3;
  const auto full = recover_sparse_vector(inst, 0, KappaMode::full);
  const auto sub = recover_sparse_vector(inst, 0, KappaMode::submatrix);
  EXPECT_GE(sub.sigma_floor, full.sigma_floor - 1e-12);
}

TEST(FiniteAlphabet, RecoversIntegerPlant) {
  Matrix A(4, 5);
  A << 1, 2, 0, -1, 3, 0, 1, 1, 2, -2, 2, 0, -1, 1, 1, 1, -3, 2, 0, 0;
  Vector x = Vector::Zero(5);
  x[1] = 1;
  x[4] = 1;
  const Vector b = A * x;
  const auto r = solve_finite_alphabet(A, b, 2, {1.0});
  EXPECT_EQ(r.x.dense(), x);
  EXPECT_GE(r.hits, 1u);
}

TEST(FiniteAlphabet, NoCollisionIsInfeasible) {
  const Matrix A = Matrix::Identity(3, 3);
  Vector b(3);
  b << 5, 5, 5;
  EXPECT_THROW(solve_finite_alphabet(A, b, 2, {1.0}), InfeasibleError);
}

TEST(FiniteAlphabet, IntegerModeRejectsFractions) {
  Matrix A = Matrix::Identity(2, 2) * 0.5;
  EXPECT_THROW(solve_finite_alphabet(A, Vector::Ones(2), 1, {1.0}), DomainError);
}

TEST(Merge, CombinesSupports) {
  SparseVector a{5, {0, 3}, {1.0, 2.0}};
  SparseVector b{5, {1, 3}, {4.0, 5.0}};
  const auto m = merge(a, b);
  EXPECT_EQ(m.support, (std::vector<Index>{0, 1, 3}));
  EXPECT_EQ(m.values, (std::vector<double>{1.0, 4.0, 7.0}));
}
