#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sparsereg/common.hpp"
#include "sparsereg/graph.hpp"
#include "sparsereg/robust_reg.hpp"
#include "sparsereg/sparse_pca.hpp"

/// Heuristic baselines for robust regression and the exhaustive oracles
/// that certify every solver at small sizes.
namespace sparsereg::baselines {

using robust_reg::RobustInstance;
using robust_reg::RobustSolution;

/// Fits all rows, drops the k largest |residuals| (ties -> lowest index).
/// refit = false returns the full-fit x; refit = true refits on the kept rows.
RobustSolution greedy_robust(const RobustInstance& inst, bool refit = false);

struct TraceStep {
  std::vector<std::uint8_t> mask;  // mask the fit was computed on
  Vector x;
  double loss = 0.0;               // ||S(Ax - b)|| for that mask
};

struct BaselineTrace {
  std::vector<TraceStep> iterations;
  bool converged = false;  // two consecutive masks equal
  RobustSolution final;
};

/// Alternates a least-squares fit on the kept rows with re-selecting the k
/// largest residuals over all rows, for at most max_iterations rounds.
BaselineTrace altmin_robust(const RobustInstance& inst, std::vector<std::uint8_t> init_mask,
                            int max_iterations);

/// Size cap shared by the exhaustive oracles.
inline constexpr double kBruteCap = 5e6;

struct BruteSparse {
  SparseVector x;
  double residual = 0.0;
};

/// Exact minimum of ||Ax - b|| over supports of size min(k, d).
BruteSparse brute_sparse_reg(const Matrix& A, const Vector& b, int k);

/// Exact minimum over all masks with exactly k zeros.
RobustSolution brute_robust_reg(const Matrix& A, const Vector& b, int k);

/// max over supports of size k of lambda_max of the principal submatrix.
sparse_pca::PcaSolution brute_sparse_pca(const Matrix& A, int k);

/// max of v^T A v over k-sparse v with integer entries in [-L, L].
sparse_pca::PcaSolution brute_sparse_pca_alphabet(const Matrix& A, int k, int L);

/// Does a subcollection cover every element of {0..universe-1} exactly once?
bool brute_exact_cover(int universe, const std::vector<std::vector<int>>& sets);

/// Minimum total weight over all k-vertex cliques; nullopt if none.
std::optional<long> brute_min_weight_clique(const WeightedGraph& graph, int k);

/// Same, restricted to cliques with one vertex in each of the k consecutive
/// blocks of N/k vertices.
std::optional<long> brute_min_weight_block_clique(const WeightedGraph& graph, int k);

}  // namespace sparsereg::baselines
