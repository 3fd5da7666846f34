#include "sparsereg/sparse_reg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sparsereg/combinatorics.hpp"
#include "sparsereg/numlin.hpp"

namespace sparsereg::sparse_reg {
namespace {

void validate(const SparseRegInstance& inst) {
  require(inst.A.rows() == inst.b.size(), "sparse regression: A.rows() != b.size()");
  require(inst.k >= 0 && inst.k <= inst.A.cols(), "sparse regression: need 0 <= k <= d");
  if (!(inst.eps > 0.0)) throw DomainError("sparse regression: eps must be positive");
  if (!(inst.c >= 1.0)) throw DomainError("sparse regression: c must be >= 1");
  if (inst.net_radius && !(*inst.net_radius >= 0.0)) throw DomainError("sparse regression: negative net radius");
}

SparseVector from_support(Index dim, const std::vector<Index>& support, const Vector& values) {
  SparseVector out;
  out.dim = dim;
  for (std::size_t i = 0; i < support.size(); ++i) {
    const double v = values[static_cast<Index>(i)];
    if (v != 0.0) {
      out.support.push_back(support[i]);
      out.values.push_back(v);
    }
  }
  return out;
}

double residual_of(const Matrix& A, const SparseVector& z, const Vector& b) {
  Vector r = -b;
  for (std::size_t i = 0; i < z.support.size(); ++i) r += z.values[i] * A.col(z.support[i]);
  return r.norm();
}

/// Total order used to pick the winner: residual, then support, then the
/// enumeration position. Parallel and serial runs agree because of it.
struct Candidate {
  double residual = std::numeric_limits<double>::infinity();
  SparseVector z;
  std::int64_t order = std::numeric_limits<std::int64_t>::max();

  bool better_than(const Candidate& o) const {
    if (residual != o.residual) return residual < o.residual;
    if (z.support != o.z.support) return z.support < o.z.support;
    return order < o.order;
  }
};

/// Flattened view of a list of nets: global id -> (net, local position).
struct NetList {
  std::vector<nets::SubspaceNet> nets;
  std::vector<Index> offsets;  // size nets + 1

  Index total() const { return offsets.back(); }

  std::pair<std::size_t, Index> locate(Index id) const {
    const auto it = std::upper_bound(offsets.begin(), offsets.end(), id);
    const auto net = static_cast<std::size_t>(it - offsets.begin() - 1);
    return {net, id - offsets[net]};
  }
};

NetList build_nets(const Matrix& A, Index half, double radius, double delta, double cap) {
  NetList list;
  list.offsets.push_back(0);
  for_each_combination(A.cols(), half, [&](const std::vector<Index>& comb) {
    list.nets.push_back(nets::subspace_net(A, comb, radius, delta, cap));
    list.offsets.push_back(list.offsets.back() + list.nets.back().size());
  });
  return list;
}

}  // namespace

SparseVector merge(const SparseVector& a, const SparseVector& b) {
  require(a.dim == b.dim, "merge: dimension mismatch");
  SparseVector out;
  out.dim = a.dim;
  std::size_t i = 0, j = 0;
  auto push = [&](Index idx, double v) {
    if (v != 0.0) {
      out.support.push_back(idx);
      out.values.push_back(v);
    }
  };
  while (i < a.support.size() || j < b.support.size()) {
    if (j == b.support.size() || (i < a.support.size() && a.support[i] < b.support[j])) {
      push(a.support[i], a.values[i]);
      ++i;
    } else if (i == a.support.size() || b.support[j] < a.support[i]) {
      push(b.support[j], b.values[j]);
      ++j;
    } else {
      push(a.support[i], a.values[i] + b.values[j]);
      ++i;
      ++j;
    }
  }
  return out;
}

double predicted_candidates(const SparseRegInstance& inst) {
  validate(inst);
  const double bnorm = inst.b.norm();
  if (bnorm == 0.0) return 0.0;
  const double radius = inst.net_radius ? *inst.net_radius / bnorm : 2.0;
  const double delta = inst.eps / (2.0 * inst.c + 2.0);
  const Index k1 = (inst.k + 1) / 2;
  const Index k2 = inst.k / 2;
  const Index d = inst.A.cols();
  double total = static_cast<double>(binomial(d, k1)) * nets::predicted_ball_net_size(k1, radius, delta);
  if (k2 != k1) total += static_cast<double>(binomial(d, k2)) * nets::predicted_ball_net_size(k2, radius, delta);
  return total;
}

SparseRegResult solve_sparse_regression(const SparseRegInstance& inst, std::uint64_t seed,
                                        const SolverOptions& options) {
  validate(inst);
  const Matrix& A = inst.A;
  const Index d = A.cols();
  SparseRegResult result;
  result.z.dim = d;
  const double bnorm = inst.b.norm();
  if (bnorm == 0.0) return result;

  // work with a unit target; everything is rescaled on the way out
  const Vector bhat = inst.b / bnorm;
  const double radius = inst.net_radius ? *inst.net_radius / bnorm : 2.0;
  const double delta = inst.eps / (2.0 * inst.c + 2.0);
  const Index k1 = (inst.k + 1) / 2;
  const Index k2 = inst.k / 2;

  const double predicted = predicted_candidates(inst);
  if (predicted > options.net_cap) throw CapacityError("sparse regression: candidate set exceeds cap", predicted);

  const NetList left = build_nets(A, k1, radius, delta, options.net_cap);
  NetList right_storage;
  if (k2 != k1) right_storage = build_nets(A, k2, radius, delta, options.net_cap);
  const NetList& right = (k2 != k1) ? right_storage : left;

  auto& stats = result.stats;
  stats.delta = delta;
  stats.supports = left.nets.size() + (k2 != k1 ? right.nets.size() : 0);
  stats.candidates = static_cast<std::uint64_t>(left.total()) +
                     (k2 != k1 ? static_cast<std::uint64_t>(right.total()) : 0);
  for (const auto* list : {&left, &right}) {
    for (const auto& net : list->nets) stats.net_size = std::max<std::uint64_t>(stats.net_size, net.size());
  }
  stats.queries = static_cast<std::uint64_t>(left.total());

  // nearest-neighbor structure over the right half
  ann::SubspaceIndex exact_index;
  std::optional<ann::AnnIndex> hashed_index;
  if (options.backend == ann::AnnBackend::exact) {
    for (const auto& net : right.nets) exact_index.add(net);
  } else {
    Matrix points(A.rows(), right.total());
    std::vector<std::size_t> payloads(static_cast<std::size_t>(right.total()));
    for (std::size_t ni = 0; ni < right.nets.size(); ++ni) {
      const auto& net = right.nets[ni];
      const Index off = right.offsets[ni];
      if (net.size() > 0) points.middleCols(off, net.size()) = net.basis * net.coords;
      for (Index j = 0; j < net.size(); ++j) payloads[static_cast<std::size_t>(off + j)] = static_cast<std::size_t>(off + j);
    }
    ann::AnnConfig cfg;
    cfg.c = inst.c;
    cfg.tables = options.tables;
    cfg.projections = options.projections;
    cfg.hash_width = options.hash_width > 0.0 ? options.hash_width : 8.0 * delta;
    cfg.seed = seed;
    hashed_index = ann::AnnIndex::build(std::move(points), std::move(payloads), ann::AnnBackend::hashed, cfg);
  }

  auto half_vector = [&](const NetList& list, Index id) {
    const auto [ni, j] = list.locate(id);
    const auto& net = list.nets[ni];
    return from_support(d, net.support, net.coeffs(j));
  };

  const Index n_left = left.total();
  Candidate best;
  const bool par = options.parallel;
#pragma omp parallel if (par)
  {
    Candidate local;
    auto offer = [&](SparseVector z, std::int64_t order) {
      Candidate cand{residual_of(A, z, bhat), std::move(z), order};
      if (cand.better_than(local)) local = std::move(cand);
    };
#pragma omp for schedule(dynamic, 64)
    for (Index id = 0; id < n_left; ++id) {
      const auto [ni, j] = left.locate(id);
      const auto& net = left.nets[ni];
      const Vector image = net.image_point(j);
      const Vector query = bhat - image;
      const ann::QueryResult hit =
          hashed_index ? hashed_index->query(query) : exact_index.query(query);
      SparseVector y = from_support(d, net.support, net.coeffs(j));
      SparseVector y_other = half_vector(right, static_cast<Index>(hit.payload));
      offer(merge(y, y_other), 2 * id);
      // the half alone covers targets that are at most k/2-sparse
      offer(std::move(y), 2 * id + 1);
    }
    if (k2 != k1) {
#pragma omp for schedule(static)
      for (Index id = 0; id < right.total(); ++id) offer(half_vector(right, id), 2 * n_left + id);
    }
#pragma omp critical(sparsereg_alg_best)
    if (local.better_than(best)) best = std::move(local);
  }

  result.z = std::move(best.z);
  for (auto& v : result.z.values) v *= bnorm;
  result.residual = residual_of(A, result.z, inst.b);
  return result;
}

RecoveryResult recover_sparse_vector(const SparseRegInstance& inst, std::uint64_t seed, KappaMode mode,
                                     const SolverOptions& options) {
  validate(inst);
  RecoveryResult out;
  const double bnorm = inst.b.norm();
  if (bnorm == 0.0) {
    out.z.dim = inst.A.cols();
    return out;
  }
  double sigma_floor = 0.0;
  if (mode == KappaMode::full) {
    sigma_floor = numlin::smallest_nonzero_singular_value(inst.A);
  } else {
    const Index d = inst.A.cols();
    const Index width = std::min<Index>(2 * inst.k, d);
    const std::uint64_t subsets = binomial(d, width);
    if (static_cast<double>(subsets) > 1e6) {
      throw CapacityError("recover_sparse_vector: too many column subsets", static_cast<double>(subsets));
    }
    sigma_floor = std::numeric_limits<double>::infinity();
    for_each_combination(d, width, [&](const std::vector<Index>& cols) {
      const Vector s = numlin::singular_values(numlin::select_columns(inst.A, cols));
      sigma_floor = std::min(sigma_floor, s.size() ? s[s.size() - 1] : 0.0);
    });
    if (!(sigma_floor > 0.0)) throw DomainError("recover_sparse_vector: rank-deficient column subset");
  }
  // ||A(x - z)|| <= eps * sigma_floor implies ||x - z|| <= eps
  SparseRegInstance tuned = inst;
  tuned.eps = inst.eps * sigma_floor / bnorm;
  auto solved = solve_sparse_regression(tuned, seed, options);
  out.z = std::move(solved.z);
  out.residual = solved.residual;
  out.sigma_floor = sigma_floor;
  out.eps_used = tuned.eps;
  out.stats = solved.stats;
  return out;
}

FiniteAlphabetResult solve_finite_alphabet(const Matrix& A, const Vector& b, int k,
                                           const std::vector<double>& alphabet,
                                           const FiniteAlphabetOptions& options) {
  require(A.rows() == b.size(), "solve_finite_alphabet: A.rows() != b.size()");
  require(k >= 0 && k <= A.cols(), "solve_finite_alphabet: need 0 <= k <= d");
  require(!alphabet.empty(), "solve_finite_alphabet: empty alphabet");
  for (double u : alphabet) require(u != 0.0, "solve_finite_alphabet: alphabet values must be nonzero");
  if (options.q_unit == 0.0) {
    auto integral = [](double v) { return std::isfinite(v) && v == std::round(v); };
    const bool ok = A.unaryExpr(integral).all() && b.unaryExpr(integral).all() &&
                    std::all_of(alphabet.begin(), alphabet.end(), integral);
    if (!ok) throw DomainError("solve_finite_alphabet: integer-exact mode needs integer A, b and alphabet");
  }

  const Index d = A.cols();
  const Index k1 = (k + 1) / 2;
  const Index k2 = k / 2;
  const auto U = static_cast<Index>(alphabet.size());

  struct Half {
    std::vector<SparseVector> vectors;
    Matrix points;  // A * vector, one column each
  };
  auto enumerate = [&](Index half) {
    Half h;
    std::vector<Vector> cols;
    for_each_combination(d, half, [&](const std::vector<Index>& T) {
      std::vector<Index> digit(static_cast<std::size_t>(half), 0);
      while (true) {
        SparseVector v;
        v.dim = d;
        v.support = T;
        Vector image = Vector::Zero(A.rows());
        for (Index i = 0; i < half; ++i) {
          const double w = alphabet[static_cast<std::size_t>(digit[static_cast<std::size_t>(i)])];
          v.values.push_back(w);
          image += w * A.col(T[static_cast<std::size_t>(i)]);
        }
        h.vectors.push_back(std::move(v));
        cols.push_back(std::move(image));
        Index pos = half - 1;
        while (pos >= 0 && ++digit[static_cast<std::size_t>(pos)] == U) digit[static_cast<std::size_t>(pos--)] = 0;
        if (pos < 0) break;
      }
    });
    h.points.resize(A.rows(), static_cast<Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) h.points.col(static_cast<Index>(j)) = cols[j];
    return h;
  };

  const Half left = enumerate(k1);
  const Half right_storage = (k2 != k1) ? enumerate(k2) : Half{};
  const Half& right = (k2 != k1) ? right_storage : left;

  std::vector<std::size_t> payloads(right.vectors.size());
  for (std::size_t i = 0; i < payloads.size(); ++i) payloads[i] = i;
  const ann::ExactTable table = ann::ExactTable::build(right.points, payloads, options.q_unit);

  FiniteAlphabetResult result;
  result.table_size = table.size();
  auto in_alphabet = [&](const SparseVector& z) {
    return std::all_of(z.values.begin(), z.values.end(), [&](double v) {
      return std::find(alphabet.begin(), alphabet.end(), v) != alphabet.end();
    });
  };

  // ranking: residual, alphabet-valid first, support, values
  bool found = false;
  double best_res = 0.0;
  bool best_valid = false;
  SparseVector best;
  for (std::size_t i = 0; i < left.vectors.size(); ++i) {
    const Vector query = b - left.points.col(static_cast<Index>(i));
    const auto hits = table.lookup(query);
    if (!hits) continue;
    for (const std::size_t j : *hits) {
      ++result.hits;
      SparseVector z = merge(left.vectors[i], right.vectors[j]);
      const double res = residual_of(A, z, b);
      const bool valid = in_alphabet(z);
      const bool better = !found || res < best_res ||
                          (res == best_res && (valid > best_valid ||
                                               (valid == best_valid && (z.support < best.support ||
                                                                        (z.support == best.support && z.values < best.values)))));
      if (better) {
        found = true;
        best_res = res;
        best_valid = valid;
        best = std::move(z);
      }
    }
  }
  if (!found) throw InfeasibleError("solve_finite_alphabet: no collision; the instance has no k-sparse alphabet solution");
  result.x = std::move(best);
  return result;
}

}  // namespace sparsereg::sparse_reg
