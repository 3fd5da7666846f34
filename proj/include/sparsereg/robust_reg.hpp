#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sparsereg/common.hpp"
#include "sparsereg/sparse_reg.hpp"

/// Robust regression (ignore k rows) through its reduction to sparse
/// regression over the left nullspace of A.
namespace sparsereg::robust_reg {

struct RobustInstance {
  Matrix A;
  Vector b;
  int k = 0;           // number of ignored rows
  double eps = 1e-3;   // relative accuracy for the sparse solver
  double delta = 0.0;  // threshold of the decision problem
};

struct RobustSolution {
  std::vector<std::uint8_t> keep_mask;  // 1 = kept, exactly n - k ones
  Vector x;
  double residual = 0.0;  // ||S(Ax - b)||_2

  int ignored() const;
  std::vector<Index> ignored_rows() const;
};

/// Mask with zeros exactly at `ignored` (plus padding at the lowest unused
/// indices until there are k zeros).
std::vector<std::uint8_t> make_mask(Index n, std::span<const Index> ignored, int k);

/// Residual recomputed from the fields.
double recompute_residual(const Matrix& A, const Vector& b, const RobustSolution& s);

/// (X, c = -Xb, k) with X an orthonormal-row basis of the left nullspace
/// of A. nullopt when the columns of A span R^n.
std::optional<sparse_reg::SparseRegInstance> reduce_to_sparse(const RobustInstance& inst);

struct RobustResult {
  RobustSolution solution;
  bool span_branch = false;
  sparse_reg::SparseRegStats stats;
};

RobustResult solve_robust_regression(const RobustInstance& inst, std::uint64_t seed,
                                     const sparse_reg::SolverOptions& options = {});

/// Masks enumerated by the brute-force decision are capped at this count.
inline constexpr double kDecisionMaskCap = 2e6;

/// true (yes) iff some mask with exactly k zeros reaches least-squares loss
/// <= delta + 1e-9. Brute force; throws CapacityError above the cap.
bool robust_decision(const RobustInstance& inst);

}  // namespace sparsereg::robust_reg
