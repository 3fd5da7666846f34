#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "sparsereg/common.hpp"
#include "sparsereg/nets.hpp"

/// Nearest-neighbor indices: exact linear scan, multi-table random
/// projection hashing (c-approximate in practice, full-scan fallback), an
/// exact index over unions of subspace nets, and an exact collision table.
namespace sparsereg::ann {

enum class AnnBackend { exact, hashed };

struct AnnConfig {
  double c = 1.0;           // approximation factor the caller plans for
  int tables = 8;
  int projections = 2;      // hash functions concatenated per table
  double hash_width = 1.0;  // bucket width of each projection
  std::uint64_t seed = 0;
};

struct QueryResult {
  Index index = -1;  // insertion position
  std::size_t payload = 0;
  double distance = 0.0;
};

class AnnIndex {
 public:
  /// Points are the columns of `points`; payloads align with them.
  static AnnIndex build(Matrix points, std::vector<std::size_t> payloads, AnnBackend backend,
                        const AnnConfig& config = {});

  QueryResult query(const Eigen::Ref<const Vector>& q) const;

  /// One query per column; OpenMP-parallel over queries.
  std::vector<QueryResult> query_batch(const Matrix& queries) const;

  Index size() const { return points_.cols(); }
  Index dim() const { return points_.rows(); }
  AnnBackend backend() const { return backend_; }
  const Matrix& points() const { return points_; }
  std::size_t payload(Index i) const { return payloads_[static_cast<std::size_t>(i)]; }

  /// Number of queries answered by the full-scan fallback (hashed backend).
  std::uint64_t fallback_count() const;

 private:
  struct Table {
    Matrix projection;  // projections x dim
    Vector offset;      // projections
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets;
  };

  std::uint64_t bucket_key(const Table& t, const Eigen::Ref<const Vector>& v) const;
  QueryResult make_result(Index i, double dist2) const;

  Matrix points_;
  std::vector<std::size_t> payloads_;
  AnnBackend backend_ = AnnBackend::exact;
  AnnConfig config_;
  std::vector<Table> tables_;
  mutable std::uint64_t fallbacks_ = 0;
};

/// Exact nearest neighbor over a union of nets, each living in a
/// low-dimensional subspace. Distances split into the distance to the
/// subspace plus the in-subspace distance, which lets whole groups be
/// pruned and the in-group search run on sorted coordinates.
class SubspaceIndex {
 public:
  /// Appends every point of `net`; their ids continue the running count.
  void add(const nets::SubspaceNet& net);

  /// payload of the result is the global id.
  QueryResult query(const Eigen::Ref<const Vector>& q) const;

  Index size() const { return total_; }

 private:
  struct Group {
    Matrix basis;                 // n x r
    Matrix coords;                // r x m, sorted by first coordinate
    std::vector<Index> local_id;  // position in the original net
    Index offset = 0;
  };
  std::vector<Group> groups_;
  Index total_ = 0;
};

/// Hash table keyed by quantized vectors. q_unit == 0 selects integer-exact
/// mode where coordinates must already be integers.
class ExactTable {
 public:
  static ExactTable build(const Matrix& points, std::span<const std::size_t> payloads, double q_unit);

  /// Payloads sharing q's key, or nullopt when the key is absent.
  std::optional<std::span<const std::size_t>> lookup(const Eigen::Ref<const Vector>& q) const;

  std::size_t size() const { return inserted_; }
  std::size_t key_count() const { return map_.size(); }
  double q_unit() const { return q_unit_; }

 private:
  struct KeyHash {
    std::size_t operator()(const std::vector<std::int64_t>& key) const noexcept;
  };

  std::optional<std::vector<std::int64_t>> make_key(const Eigen::Ref<const Vector>& v) const;

  double q_unit_ = 0.0;
  Index dim_ = 0;
  std::size_t inserted_ = 0;
  std::unordered_map<std::vector<std::int64_t>, std::vector<std::size_t>, KeyHash> map_;
};

}  // namespace sparsereg::ann
