#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "sparsereg/combinatorics.hpp"
#include "sparsereg/common.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

// Data-parallel hot loops. Every kernel exists twice: a plain serial
// reference in `serial` and an OpenMP version in `parallel`. Both return
// bit-identical results; ties are broken toward the lowest index so the
// reduction order does not matter.
namespace sparsereg::kernels {

struct Nearest {
  Index index = -1;
  double dist2 = std::numeric_limits<double>::infinity();

  bool better_than(const Nearest& o) const {
    return dist2 < o.dist2 || (dist2 == o.dist2 && index >= 0 && (o.index < 0 || index < o.index));
  }
};

struct Pair {
  Index first = -1;
  Index second = -1;
  double dist2 = -1.0;

  bool better_than(const Pair& o) const {
    if (dist2 != o.dist2) return dist2 > o.dist2;
    if (first != o.first) return first < o.first;
    return second < o.second;
  }
};

struct CombinationArgmin {
  double value = std::numeric_limits<double>::infinity();
  std::uint64_t rank = std::numeric_limits<std::uint64_t>::max();
  std::vector<Index> combination;

  bool better_than(const CombinationArgmin& o) const {
    return value < o.value || (value == o.value && rank < o.rank);
  }
};

inline double squared_distance(const Matrix& points, Index i, const Eigen::Ref<const Vector>& q) {
  return (points.col(i) - q).squaredNorm();
}

namespace serial {

/// Points are the columns of `points`.
inline Nearest nearest(const Matrix& points, const Eigen::Ref<const Vector>& q) {
  Nearest best;
  for (Index i = 0; i < points.cols(); ++i) {
    const double d2 = squared_distance(points, i, q);
    if (d2 < best.dist2) best = {i, d2};
  }
  return best;
}

inline std::vector<Nearest> batch_nearest(const Matrix& points, const Matrix& queries) {
  std::vector<Nearest> out(static_cast<std::size_t>(queries.cols()));
  for (Index j = 0; j < queries.cols(); ++j) out[static_cast<std::size_t>(j)] = nearest(points, queries.col(j));
  return out;
}

inline Pair farthest_pair(const Matrix& points) {
  Pair best;
  for (Index i = 0; i < points.cols(); ++i) {
    for (Index j = i + 1; j < points.cols(); ++j) {
      const double d2 = (points.col(i) - points.col(j)).squaredNorm();
      if (d2 > best.dist2) best = {i, j, d2};
    }
  }
  return best;
}

inline Pair bichromatic_farthest_pair(const Matrix& P, const Matrix& Q) {
  Pair best;
  for (Index i = 0; i < P.cols(); ++i) {
    for (Index j = 0; j < Q.cols(); ++j) {
      const double d2 = (P.col(i) - Q.col(j)).squaredNorm();
      if (d2 > best.dist2) best = {i, j, d2};
    }
  }
  return best;
}

/// Minimizes fn(combination) over every k-subset of {0..n-1}.
template <class Fn>
CombinationArgmin argmin_combinations(Index n, Index k, Fn&& fn) {
  CombinationArgmin best;
  std::uint64_t rank = 0;
  for_each_combination(n, k, [&](const std::vector<Index>& comb) {
    const double v = fn(comb);
    if (best.rank == std::numeric_limits<std::uint64_t>::max() || v < best.value) {
      best.value = v;
      best.rank = rank;
      best.combination = comb;
    }
    ++rank;
  });
  return best;
}

}  // namespace serial

namespace parallel {

inline std::vector<Nearest> batch_nearest(const Matrix& points, const Matrix& queries) {
  std::vector<Nearest> out(static_cast<std::size_t>(queries.cols()));
  const Index m = queries.cols();
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < m; ++j) out[static_cast<std::size_t>(j)] = serial::nearest(points, queries.col(j));
  return out;
}

inline Pair farthest_pair(const Matrix& points) {
  Pair best;
  const Index m = points.cols();
#pragma omp parallel
  {
    Pair local;
#pragma omp for schedule(dynamic, 16)
    for (Index i = 0; i < m; ++i) {
      for (Index j = i + 1; j < m; ++j) {
        const double d2 = (points.col(i) - points.col(j)).squaredNorm();
        // a thread sees its rows in increasing order, so strict > keeps the lowest pair
        if (d2 > local.dist2) local = {i, j, d2};
      }
    }
#pragma omp critical(sparsereg_farthest_pair)
    if (local.better_than(best)) best = local;
  }
  return best;
}

inline Pair bichromatic_farthest_pair(const Matrix& P, const Matrix& Q) {
  Pair best;
  const Index m = P.cols();
#pragma omp parallel
  {
    Pair local;
#pragma omp for schedule(static)
    for (Index i = 0; i < m; ++i) {
      for (Index j = 0; j < Q.cols(); ++j) {
        const double d2 = (P.col(i) - Q.col(j)).squaredNorm();
        if (d2 > local.dist2) local = {i, j, d2};
      }
    }
#pragma omp critical(sparsereg_bfp)
    if (local.better_than(best)) best = local;
  }
  return best;
}

/// Same contract as serial::argmin_combinations; the rank range is split
/// into contiguous chunks, one lexicographic walk per chunk.
template <class Fn>
CombinationArgmin argmin_combinations(Index n, Index k, Fn&& fn) {
  CombinationArgmin best;
  const std::uint64_t total = binomial(n, k);
  if (total == 0) return best;
  constexpr std::uint64_t kChunk = 256;
  const auto chunks = static_cast<std::int64_t>((total + kChunk - 1) / kChunk);
#pragma omp parallel
  {
    CombinationArgmin local;
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t c = 0; c < chunks; ++c) {
      const std::uint64_t begin = static_cast<std::uint64_t>(c) * kChunk;
      const std::uint64_t end = std::min(total, begin + kChunk);
      auto comb = unrank_combination(n, k, begin);
      for (std::uint64_t r = begin; r < end; ++r) {
        const double v = fn(comb);
        if (local.rank == std::numeric_limits<std::uint64_t>::max() || v < local.value ||
            (v == local.value && r < local.rank)) {
          local.value = v;
          local.rank = r;
          local.combination = comb;
        }
        next_combination(comb, n);
      }
    }
#pragma omp critical(sparsereg_argmin_comb)
    if (local.rank != std::numeric_limits<std::uint64_t>::max() &&
        (best.rank == std::numeric_limits<std::uint64_t>::max() || local.better_than(best))) {
      best = local;
    }
  }
  return best;
}

}  // namespace parallel

}  // namespace sparsereg::kernels
