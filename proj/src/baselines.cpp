#include "sparsereg/baselines.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "sparsereg/combinatorics.hpp"
#include "sparsereg/kernels.hpp"
#include "sparsereg/numlin.hpp"

namespace sparsereg::baselines {
namespace {

/// Indices of the k largest |r_i|. Magnitudes are compared after rounding
/// to `tol` so that rounding noise cannot beat the lowest-index tie-break.
std::vector<std::uint8_t> drop_largest(const Vector& r, int k, double tol) {
  std::vector<Index> order(static_cast<std::size_t>(r.size()));
  std::iota(order.begin(), order.end(), Index{0});
  auto key = [&](Index i) { return std::round(std::abs(r[i]) / tol); };
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return key(a) > key(b); });
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(r.size()), 1);
  for (int i = 0; i < k; ++i) mask[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = 0;
  return mask;
}

double tie_tolerance(const Vector& b) { return 1e-9 * std::max(1.0, b.norm()); }

void check_guard(double count, const char* what) {
  if (count > kBruteCap) throw CapacityError(what, count);
}

}  // namespace

RobustSolution greedy_robust(const RobustInstance& inst, bool refit) {
  require(inst.A.rows() == inst.b.size(), "greedy_robust: A.rows() != b.size()");
  require(inst.k >= 0 && inst.k < inst.A.rows(), "greedy_robust: need 0 <= k < n");
  RobustSolution out;
  const Vector y = numlin::least_squares(inst.A, inst.b);
  out.keep_mask = drop_largest(inst.A * y - inst.b, inst.k, tie_tolerance(inst.b));
  out.x = refit ? numlin::masked_least_squares(inst.A, inst.b, out.keep_mask) : y;
  out.residual = numlin::masked_residual(inst.A, out.x, inst.b, out.keep_mask);
  return out;
}

BaselineTrace altmin_robust(const RobustInstance& inst, std::vector<std::uint8_t> init_mask,
                            int max_iterations) {
  require(inst.A.rows() == inst.b.size(), "altmin_robust: A.rows() != b.size()");
  require(static_cast<Index>(init_mask.size()) == inst.A.rows(), "altmin_robust: mask length");
  require(std::count(init_mask.begin(), init_mask.end(), std::uint8_t{0}) == inst.k,
          "altmin_robust: initial mask must have exactly k zeros");
  BaselineTrace trace;
  auto mask = std::move(init_mask);
  const double tol = tie_tolerance(inst.b);
  for (int it = 0; it < max_iterations; ++it) {
    TraceStep step;
    step.mask = mask;
    step.x = numlin::masked_least_squares(inst.A, inst.b, mask);
    step.loss = numlin::masked_residual(inst.A, step.x, inst.b, mask);
    auto next = drop_largest(inst.A * step.x - inst.b, inst.k, tol);
    trace.iterations.push_back(std::move(step));
    if (next == mask) {
      trace.converged = true;
      break;
    }
    mask = std::move(next);
  }
  trace.final.keep_mask = mask;
  trace.final.x = numlin::masked_least_squares(inst.A, inst.b, mask);
  trace.final.residual = numlin::masked_residual(inst.A, trace.final.x, inst.b, mask);
  return trace;
}

BruteSparse brute_sparse_reg(const Matrix& A, const Vector& b, int k) {
  require(A.rows() == b.size(), "brute_sparse_reg: A.rows() != b.size()");
  require(k >= 0, "brute_sparse_reg: negative k");
  const Index s = std::min<Index>(k, A.cols());
  check_guard(static_cast<double>(binomial(A.cols(), s)), "brute_sparse_reg: too many supports");
  const auto best = kernels::parallel::argmin_combinations(A.cols(), s, [&](const std::vector<Index>& cols) {
    const Matrix As = numlin::select_columns(A, cols);
    return (As * numlin::least_squares(As, b) - b).norm();
  });
  BruteSparse out;
  const Matrix As = numlin::select_columns(A, best.combination);
  const Vector coef = numlin::least_squares(As, b);
  out.x.dim = A.cols();
  for (std::size_t i = 0; i < best.combination.size(); ++i) {
    if (coef[static_cast<Index>(i)] != 0.0) {
      out.x.support.push_back(best.combination[i]);
      out.x.values.push_back(coef[static_cast<Index>(i)]);
    }
  }
  out.residual = (As * coef - b).norm();
  return out;
}

RobustSolution brute_robust_reg(const Matrix& A, const Vector& b, int k) {
  require(A.rows() == b.size(), "brute_robust_reg: A.rows() != b.size()");
  require(k >= 0 && k <= A.rows(), "brute_robust_reg: need 0 <= k <= n");
  check_guard(static_cast<double>(binomial(A.rows(), k)), "brute_robust_reg: too many masks");
  const Index n = A.rows();
  const auto best = kernels::parallel::argmin_combinations(n, k, [&](const std::vector<Index>& ignored) {
    const auto mask = robust_reg::make_mask(n, ignored, k);
    const Vector x = numlin::masked_least_squares(A, b, mask);
    return numlin::masked_residual(A, x, b, mask);
  });
  RobustSolution out;
  out.keep_mask = robust_reg::make_mask(n, best.combination, k);
  out.x = numlin::masked_least_squares(A, b, out.keep_mask);
  out.residual = numlin::masked_residual(A, out.x, b, out.keep_mask);
  return out;
}

sparse_pca::PcaSolution brute_sparse_pca(const Matrix& A, int k) {
  require(A.rows() == A.cols(), "brute_sparse_pca: A must be square");
  require(k >= 1, "brute_sparse_pca: k must be >= 1");
  const Index n = A.rows();
  const Index s = std::min<Index>(k, n);
  check_guard(static_cast<double>(binomial(n, s)), "brute_sparse_pca: too many supports");
  auto principal = [&](const std::vector<Index>& T) {
    Matrix sub(s, s);
    for (Index i = 0; i < s; ++i)
      for (Index j = 0; j < s; ++j) sub(i, j) = A(T[static_cast<std::size_t>(i)], T[static_cast<std::size_t>(j)]);
    return sub;
  };
  const auto best = kernels::parallel::argmin_combinations(n, s, [&](const std::vector<Index>& T) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(principal(T), Eigen::EigenvaluesOnly);
    return -es.eigenvalues()[s - 1];
  });
  Eigen::SelfAdjointEigenSolver<Matrix> es(principal(best.combination));
  const Vector v = es.eigenvectors().col(s - 1);
  sparse_pca::PcaSolution out;
  out.u.dim = n;
  for (Index i = 0; i < s; ++i) {
    if (v[i] != 0.0) {
      out.u.support.push_back(best.combination[static_cast<std::size_t>(i)]);
      out.u.values.push_back(v[i]);
    }
  }
  out.value = sparse_pca::quadratic_form(A, out.u);
  out.norm = v.norm();
  return out;
}

sparse_pca::PcaSolution brute_sparse_pca_alphabet(const Matrix& A, int k, int L) {
  require(A.rows() == A.cols(), "brute_sparse_pca_alphabet: A must be square");
  require(k >= 1 && L >= 1, "brute_sparse_pca_alphabet: need k >= 1 and L >= 1");
  const Index n = A.rows();
  const Index s = std::min<Index>(k, n);
  const double count = static_cast<double>(binomial(n, s)) * std::pow(2.0 * L + 1.0, static_cast<double>(s));
  check_guard(count, "brute_sparse_pca_alphabet: too many vectors");
  sparse_pca::PcaSolution best;
  best.value = -1.0;
  for_each_combination(n, s, [&](const std::vector<Index>& T) {
    std::vector<int> digit(static_cast<std::size_t>(s), -L);
    while (true) {
      SparseVector u;
      u.dim = n;
      for (Index i = 0; i < s; ++i) {
        if (digit[static_cast<std::size_t>(i)] != 0) {
          u.support.push_back(T[static_cast<std::size_t>(i)]);
          u.values.push_back(digit[static_cast<std::size_t>(i)]);
        }
      }
      const double value = sparse_pca::quadratic_form(A, u);
      if (value > best.value) {
        best.value = value;
        best.u = u;
      }
      Index pos = s - 1;
      while (pos >= 0 && ++digit[static_cast<std::size_t>(pos)] > L) digit[static_cast<std::size_t>(pos--)] = -L;
      if (pos < 0) break;
    }
  });
  best.norm = best.u.dense().norm();
  return best;
}

bool brute_exact_cover(int universe, const std::vector<std::vector<int>>& sets) {
  require(universe >= 0 && universe <= 64, "brute_exact_cover: universe must have at most 64 elements");
  require(sets.size() <= 26, "brute_exact_cover: too many sets");
  std::vector<std::uint64_t> masks;
  for (const auto& s : sets) {
    std::uint64_t m = 0;
    for (int e : s) {
      require(e >= 0 && e < universe, "brute_exact_cover: element outside the universe");
      m |= std::uint64_t{1} << e;
    }
    masks.push_back(m);
  }
  const std::uint64_t full = universe == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << universe) - 1;
  const std::uint64_t subsets = std::uint64_t{1} << sets.size();
  for (std::uint64_t pick = 0; pick < subsets; ++pick) {
    std::uint64_t covered = 0;
    bool overlap = false;
    for (std::size_t i = 0; i < masks.size() && !overlap; ++i) {
      if (!((pick >> i) & 1)) continue;
      overlap = (covered & masks[i]) != 0;
      covered |= masks[i];
    }
    if (!overlap && covered == full) return true;
  }
  return false;
}

namespace {

std::vector<long> weight_table(const WeightedGraph& graph) {
  const int N = graph.vertices;
  std::vector<long> w(static_cast<std::size_t>(N) * static_cast<std::size_t>(N), -1);
  for (const auto& e : graph.edges) {
    require(e.u >= 0 && e.u < N && e.v >= 0 && e.v < N && e.u != e.v, "brute_min_weight_clique: bad edge");
    w[static_cast<std::size_t>(e.u * N + e.v)] = e.weight;
    w[static_cast<std::size_t>(e.v * N + e.u)] = e.weight;
  }
  return w;
}

long clique_weight(const std::vector<long>& w, int N, const std::vector<Index>& T) {
  long total = 0;
  for (std::size_t i = 0; i < T.size(); ++i) {
    for (std::size_t j = i + 1; j < T.size(); ++j) {
      const long we = w[static_cast<std::size_t>(T[i] * N + T[j])];
      if (we < 0) return -1;
      total += we;
    }
  }
  return total;
}

}  // namespace

std::optional<long> brute_min_weight_clique(const WeightedGraph& graph, int k) {
  const int N = graph.vertices;
  require(k >= 0 && k <= N, "brute_min_weight_clique: need 0 <= k <= N");
  const auto w = weight_table(graph);
  check_guard(static_cast<double>(binomial(N, k)), "brute_min_weight_clique: too many vertex subsets");
  std::optional<long> best;
  for_each_combination(N, k, [&](const std::vector<Index>& T) {
    const long total = clique_weight(w, N, T);
    if (total >= 0 && (!best || total < *best)) best = total;
  });
  return best;
}

std::optional<long> brute_min_weight_block_clique(const WeightedGraph& graph, int k) {
  const int N = graph.vertices;
  require(k >= 1 && N % k == 0, "brute_min_weight_block_clique: N must be a multiple of k");
  const int block = N / k;
  check_guard(std::pow(static_cast<double>(block), k), "brute_min_weight_block_clique: too many vertex choices");
  const auto w = weight_table(graph);
  std::optional<long> best;
  std::vector<Index> T(static_cast<std::size_t>(k));
  std::vector<int> pick(static_cast<std::size_t>(k), 0);
  while (true) {
    for (int j = 0; j < k; ++j) T[static_cast<std::size_t>(j)] = j * block + pick[static_cast<std::size_t>(j)];
    const long total = clique_weight(w, N, T);
    if (total >= 0 && (!best || total < *best)) best = total;
    int pos = k - 1;
    while (pos >= 0 && ++pick[static_cast<std::size_t>(pos)] == block) pick[static_cast<std::size_t>(pos--)] = 0;
    if (pos < 0) break;
  }
  return best;
}

}  // namespace sparsereg::baselines
