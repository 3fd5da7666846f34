#include "sparsereg/ann.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "sparsereg/kernels.hpp"

namespace sparsereg::ann {

AnnIndex AnnIndex::build(Matrix points, std::vector<std::size_t> payloads, AnnBackend backend,
                         const AnnConfig& config) {
  if (points.cols() == 0) throw DomainError("build_index: empty point set");
  require(static_cast<Index>(payloads.size()) == points.cols(), "build_index: payload count != point count");
  require(config.c >= 1.0, "build_index: c must be >= 1");
  require(config.tables >= 1 && config.projections >= 1, "build_index: tables and projections must be >= 1");
  require(config.hash_width > 0.0, "build_index: hash_width must be positive");

  AnnIndex index;
  index.points_ = std::move(points);
  index.payloads_ = std::move(payloads);
  index.backend_ = backend;
  index.config_ = config;
  if (backend == AnnBackend::exact) return index;

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> shift(0.0, config.hash_width);
  const Index dim = index.points_.rows();
  index.tables_.resize(static_cast<std::size_t>(config.tables));
  for (auto& table : index.tables_) {
    table.projection.resize(config.projections, dim);
    for (Index i = 0; i < table.projection.size(); ++i) table.projection.data()[i] = gauss(rng);
    table.offset.resize(config.projections);
    for (Index i = 0; i < config.projections; ++i) table.offset[i] = shift(rng);
    for (Index j = 0; j < index.points_.cols(); ++j) {
      table.buckets[index.bucket_key(table, index.points_.col(j))].push_back(static_cast<std::uint32_t>(j));
    }
  }
  return index;
}

std::uint64_t AnnIndex::bucket_key(const Table& t, const Eigen::Ref<const Vector>& v) const {
  const Vector proj = (t.projection * v + t.offset) / config_.hash_width;
  std::uint64_t h = 1469598103934665603ULL;
  for (Index i = 0; i < proj.size(); ++i) {
    const auto cell = static_cast<std::int64_t>(std::floor(proj[i]));
    h ^= static_cast<std::uint64_t>(cell) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

QueryResult AnnIndex::make_result(Index i, double dist2) const {
  return {i, payloads_[static_cast<std::size_t>(i)], std::sqrt(dist2)};
}

QueryResult AnnIndex::query(const Eigen::Ref<const Vector>& q) const {
  require(q.size() == dim(), "query_index: dimension mismatch");
  if (backend_ == AnnBackend::exact) {
    const auto nn = kernels::serial::nearest(points_, q);
    return make_result(nn.index, nn.dist2);
  }

  std::vector<std::uint32_t> candidates;
  for (const auto& table : tables_) {
    const auto it = table.buckets.find(bucket_key(table, q));
    if (it != table.buckets.end()) candidates.insert(candidates.end(), it->second.begin(), it->second.end());
  }
  if (candidates.empty()) {
#pragma omp atomic
    ++fallbacks_;
    const auto nn = kernels::serial::nearest(points_, q);
    return make_result(nn.index, nn.dist2);
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  kernels::Nearest best;
  for (const auto id : candidates) {
    const double d2 = kernels::squared_distance(points_, id, q);
    if (d2 < best.dist2) best = {static_cast<Index>(id), d2};
  }
  return make_result(best.index, best.dist2);
}

std::vector<QueryResult> AnnIndex::query_batch(const Matrix& queries) const {
  std::vector<QueryResult> out(static_cast<std::size_t>(queries.cols()));
  const Index m = queries.cols();
#pragma omp parallel for schedule(dynamic, 64)
  for (Index j = 0; j < m; ++j) out[static_cast<std::size_t>(j)] = query(queries.col(j));
  return out;
}

std::uint64_t AnnIndex::fallback_count() const { return fallbacks_; }

void SubspaceIndex::add(const nets::SubspaceNet& net) {
  Group g;
  g.basis = net.basis;
  g.offset = total_;
  const Index m = net.size();
  const Index r = net.coords.rows();
  g.local_id.resize(static_cast<std::size_t>(m));
  std::iota(g.local_id.begin(), g.local_id.end(), Index{0});
  if (r > 0) {
    std::stable_sort(g.local_id.begin(), g.local_id.end(),
                     [&](Index a, Index b) { return net.coords(0, a) < net.coords(0, b); });
  }
  g.coords.resize(r, m);
  for (Index j = 0; j < m; ++j) g.coords.col(j) = net.coords.col(g.local_id[static_cast<std::size_t>(j)]);
  total_ += m;
  groups_.push_back(std::move(g));
}

QueryResult SubspaceIndex::query(const Eigen::Ref<const Vector>& q) const {
  if (total_ == 0) throw DomainError("SubspaceIndex::query: empty index");
  struct Bound {
    double lb2;
    std::size_t group;
    Vector proj;
  };
  std::vector<Bound> bounds;
  bounds.reserve(groups_.size());
  for (std::size_t gi = 0; gi < groups_.size(); ++gi) {
    const auto& g = groups_[gi];
    if (g.coords.cols() == 0) continue;
    require(g.basis.rows() == q.size(), "SubspaceIndex::query: dimension mismatch");
    Vector proj = g.basis.transpose() * q;
    const double lb2 = (q - g.basis * proj).squaredNorm();
    bounds.push_back({lb2, gi, std::move(proj)});
  }
  std::stable_sort(bounds.begin(), bounds.end(), [](const Bound& a, const Bound& b) { return a.lb2 < b.lb2; });

  double best_d2 = std::numeric_limits<double>::infinity();
  Index best_id = -1;
  auto consider = [&](double d2, Index id) {
    if (d2 < best_d2 || (d2 == best_d2 && id < best_id)) {
      best_d2 = d2;
      best_id = id;
    }
  };

  for (const auto& bound : bounds) {
    if (bound.lb2 > best_d2) break;
    const auto& g = groups_[bound.group];
    const Index m = g.coords.cols();
    if (g.coords.rows() == 0) {
      consider(bound.lb2, g.offset);
      continue;
    }
    const double p0 = bound.proj[0];
    // first column with coords(0, j) >= p0
    Index lo = 0, hi = m;
    while (lo < hi) {
      const Index mid = (lo + hi) / 2;
      if (g.coords(0, mid) < p0) lo = mid + 1; else hi = mid;
    }
    auto visit = [&](Index j) {
      const double dx = g.coords(0, j) - p0;
      if (bound.lb2 + dx * dx > best_d2) return false;
      const double d2 = bound.lb2 + (g.coords.col(j) - bound.proj).squaredNorm();
      consider(d2, g.offset + g.local_id[static_cast<std::size_t>(j)]);
      return true;
    };
    for (Index j = lo; j < m && visit(j); ++j) {}
    for (Index j = lo - 1; j >= 0 && visit(j); --j) {}
  }
  return {best_id, static_cast<std::size_t>(best_id), std::sqrt(best_d2)};
}

std::size_t ExactTable::KeyHash::operator()(const std::vector<std::int64_t>& key) const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto v : key) {
    h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

std::optional<std::vector<std::int64_t>> ExactTable::make_key(const Eigen::Ref<const Vector>& v) const {
  constexpr double kLimit = 9007199254740992.0;  // 2^53
  std::vector<std::int64_t> key(static_cast<std::size_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) {
    const double scaled = q_unit_ > 0.0 ? std::round(v[i] / q_unit_) : v[i];
    if (!std::isfinite(scaled) || std::abs(scaled) >= kLimit) return std::nullopt;
    if (q_unit_ == 0.0 && scaled != std::round(scaled)) return std::nullopt;
    key[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(scaled);
  }
  return key;
}

ExactTable ExactTable::build(const Matrix& points, std::span<const std::size_t> payloads, double q_unit) {
  require(static_cast<Index>(payloads.size()) == points.cols(), "build_exact_table: payload count != point count");
  if (!(q_unit >= 0.0)) throw DomainError("build_exact_table: q_unit must be >= 0");
  ExactTable table;
  table.q_unit_ = q_unit;
  table.dim_ = points.rows();
  table.map_.reserve(static_cast<std::size_t>(points.cols()));
  for (Index j = 0; j < points.cols(); ++j) {
    auto key = table.make_key(points.col(j));
    if (!key) {
      throw DomainError(q_unit == 0.0 ? "build_exact_table: non-integer coordinate in integer-exact mode"
                                      : "build_exact_table: coordinate out of quantization range");
    }
    table.map_[std::move(*key)].push_back(payloads[static_cast<std::size_t>(j)]);
    ++table.inserted_;
  }
  return table;
}

std::optional<std::span<const std::size_t>> ExactTable::lookup(const Eigen::Ref<const Vector>& q) const {
  require(q.size() == dim_, "lookup_exact: dimension mismatch");
  const auto key = make_key(q);
  if (!key) return std::nullopt;
  const auto it = map_.find(*key);
  if (it == map_.end()) return std::nullopt;
  return std::span<const std::size_t>(it->second);
}

}  // namespace sparsereg::ann
