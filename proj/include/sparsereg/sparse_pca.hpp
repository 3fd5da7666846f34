#pragma once

#include <cstdint>

#include "sparsereg/common.hpp"

/// Sparse PCA through farthest-pair geometry: nets of half-support
/// coefficient vectors joined by a bichromatic farthest pair, and the
/// limited-alphabet variant through the diameter.
namespace sparsereg::sparse_pca {

enum class GeometryBackend { exact, approximate, automatic };

struct FarthestPair {
  Index first = -1;
  Index second = -1;
  double distance = 0.0;
};

/// Above this many candidate pairs `automatic` switches to the approximate backend.
inline constexpr double kExactPairLimit = 4e6;

/// Pair of columns of `points` at distance >= (1 - eps) * diameter.
FarthestPair approx_diameter(const Matrix& points, double eps,
                             GeometryBackend backend = GeometryBackend::automatic, std::uint64_t seed = 0);

/// first indexes P, second indexes Q.
FarthestPair approx_bfp(const Matrix& P, const Matrix& Q, double eps,
                        GeometryBackend backend = GeometryBackend::automatic, std::uint64_t seed = 0);

/// B (r x n, r = numerical rank) with B^T B = A. Throws DomainError when A
/// is not symmetric PSD within tolerance.
Matrix factor_psd(const Matrix& A);

struct PcaInstance {
  Matrix A;
  int k = 2;
  double eps = 0.25;
  int L = 1;         // alphabet bound for the limited-alphabet variant
  int repeats = 10;  // independent random partitions
  GeometryBackend backend = GeometryBackend::automatic;
  double cap = 2e7;  // candidate points per (k1, k2, z) round
};

struct PcaSolution {
  SparseVector u;
  double value = 0.0;  // u^T A u
  double norm = 0.0;   // ||u||_2
};

struct PcaStats {
  std::uint64_t candidates = 0;
  std::uint64_t rounds = 0;
  double delta = 0.0;
  double winning_prenorm = 0.0;  // ||y1 - y2|| before normalization
};

struct PcaResult {
  PcaSolution solution;
  PcaStats stats;
};

PcaResult solve_sparse_pca(const PcaInstance& inst, std::uint64_t seed);

/// u = y - y' with entries in [-2L, 2L].
PcaResult solve_sparse_pca_alphabet(const PcaInstance& inst, std::uint64_t seed = 0);

/// u^T A u for a sparse u.
double quadratic_form(const Matrix& A, const SparseVector& u);

}  // namespace sparsereg::sparse_pca
