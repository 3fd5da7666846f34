#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sparsereg/ann.hpp"
#include "sparsereg/common.hpp"
#include "sparsereg/nets.hpp"

/// Meet-in-the-middle sparse regression: nets over half-supports joined by
/// nearest-neighbor queries, plus the exact finite-alphabet variant.
namespace sparsereg::sparse_reg {

struct SparseRegInstance {
  Matrix A;
  Vector b;
  int k = 2;
  double eps = 0.1;
  double c = 1.0;                     // ANN factor used to size the net
  std::optional<double> net_radius;   // absolute; defaults to 2 ||b||
};

struct SolverOptions {
  ann::AnnBackend backend = ann::AnnBackend::exact;
  int tables = 8;
  int projections = 2;
  double hash_width = 0.0;  // 0 selects 8 * delta (in unit-b coordinates)
  double net_cap = nets::kDefaultPointCap;
  bool parallel = true;
};

struct SparseRegStats {
  std::uint64_t candidates = 0;     // net entries enumerated into the candidate set
  std::uint64_t supports = 0;       // half-supports enumerated
  std::uint64_t net_size = 0;       // points in the largest per-support net
  std::uint64_t queries = 0;
  double delta = 0.0;               // net resolution in unit-b coordinates
};

struct SparseRegResult {
  SparseVector z;
  double residual = 0.0;  // ||Az - b||_2
  SparseRegStats stats;
};

/// Predicted candidate count, used for the capacity guard.
double predicted_candidates(const SparseRegInstance& inst);

SparseRegResult solve_sparse_regression(const SparseRegInstance& inst, std::uint64_t seed,
                                        const SolverOptions& options = {});

enum class KappaMode {
  full,       // nonzero-singular-value condition number of A
  submatrix,  // worst case over column subsets of size min(2k, d)
};

struct RecoveryResult {
  SparseVector z;
  double residual = 0.0;
  double sigma_floor = 0.0;  // smallest singular value the net was tuned for
  double eps_used = 0.0;     // relative accuracy handed to the solver
  SparseRegStats stats;
};

/// Runs the solver with a net fine enough that ||z - x||_2 <= eps for the
/// planted k-sparse x.
RecoveryResult recover_sparse_vector(const SparseRegInstance& inst, std::uint64_t seed,
                                     KappaMode mode = KappaMode::full, const SolverOptions& options = {});

struct FiniteAlphabetOptions {
  double q_unit = 0.0;  // 0: integer-exact keys
};

struct FiniteAlphabetResult {
  SparseVector x;
  std::uint64_t table_size = 0;
  std::uint64_t hits = 0;
};

/// Exact recovery of the unique k-sparse x with entries in {0} u alphabet.
/// Throws InfeasibleError when no collision exists.
FiniteAlphabetResult solve_finite_alphabet(const Matrix& A, const Vector& b, int k,
                                           const std::vector<double>& alphabet,
                                           const FiniteAlphabetOptions& options = {});

/// Adds two sparse vectors, merging overlapping supports.
SparseVector merge(const SparseVector& a, const SparseVector& b);

}  // namespace sparsereg::sparse_reg
