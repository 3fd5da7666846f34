#pragma once

#include <optional>

#include "sparsereg/common.hpp"
#include "sparsereg/lp.hpp"
#include "sparsereg/robust_reg.hpp"

/// Robust regression on planted instances: the corruption vector is the
/// sparsest direction of span{b, A}, found with one l1 program per pinned
/// coordinate.
namespace sparsereg::planted {

inline constexpr double kDefaultTau = 1e-6;

/// argmin ||Q a||_1 subject to (Q a)_i = 1, returned as w = Q a.
/// Q must have orthonormal columns. nullopt when row i of Q vanishes.
std::optional<Vector> l1_pinned(const Matrix& Q, Index i, const lp::LpOptions& options = {});

struct SparsestResult {
  SparseVector v;   // entries above tau * ||w||_inf, unit 2-norm
  Vector w;         // raw LP optimum with w_pinned = 1
  Index pinned = -1;
  Index feasible = 0;  // LPs that returned a point
};

/// Columns of W span the subspace. Fewest entries above tau * ||w||_inf
/// wins; ties go to the lowest pinned index.
SparsestResult sparsest_in_subspace(const Matrix& W, double tau = kDefaultTau, const lp::LpOptions& options = {});

struct PlantedInstance {
  Matrix A;
  Vector b;
  int k = 0;
};

struct PlantedResult {
  robust_reg::RobustSolution solution;
  Vector corruption;  // recovered b - b', zero where below the threshold
  Index pinned = -1;
};

/// Throws RecoveryFailed when the recovered corruption has more than k entries.
PlantedResult solve_planted_robust(const PlantedInstance& inst, double tau = kDefaultTau);

}  // namespace sparsereg::planted
