#include "sparsereg/robust_reg.hpp"

#include <algorithm>

#include "sparsereg/baselines.hpp"
#include "sparsereg/combinatorics.hpp"
#include "sparsereg/numlin.hpp"

namespace sparsereg::robust_reg {

int RobustSolution::ignored() const {
  return static_cast<int>(std::count(keep_mask.begin(), keep_mask.end(), std::uint8_t{0}));
}

std::vector<Index> RobustSolution::ignored_rows() const {
  std::vector<Index> out;
  for (std::size_t i = 0; i < keep_mask.size(); ++i) {
    if (!keep_mask[i]) out.push_back(static_cast<Index>(i));
  }
  return out;
}

std::vector<std::uint8_t> make_mask(Index n, std::span<const Index> ignored, int k) {
  require(static_cast<Index>(k) <= n && k >= 0, "make_mask: need 0 <= k <= n");
  require(static_cast<int>(ignored.size()) <= k, "make_mask: more ignored rows than k");
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(n), 1);
  for (Index i : ignored) {
    require(i >= 0 && i < n, "make_mask: row index out of range");
    mask[static_cast<std::size_t>(i)] = 0;
  }
  int zeros = static_cast<int>(std::count(mask.begin(), mask.end(), std::uint8_t{0}));
  for (std::size_t i = 0; i < mask.size() && zeros < k; ++i) {
    if (mask[i]) {
      mask[i] = 0;
      ++zeros;
    }
  }
  return mask;
}

double recompute_residual(const Matrix& A, const Vector& b, const RobustSolution& s) {
  return numlin::masked_residual(A, s.x, b, s.keep_mask);
}

namespace {

void validate(const RobustInstance& inst) {
  require(inst.A.rows() == inst.b.size(), "robust regression: A.rows() != b.size()");
  require(inst.k >= 0 && inst.k <= inst.A.rows(), "robust regression: need 0 <= k <= n");
}

}  // namespace

std::optional<sparse_reg::SparseRegInstance> reduce_to_sparse(const RobustInstance& inst) {
  validate(inst);
  Matrix X = numlin::nullspace_basis(inst.A);
  if (X.rows() == 0) return std::nullopt;
  sparse_reg::SparseRegInstance out;
  out.b = -(X * inst.b);
  out.A = std::move(X);
  out.k = inst.k;
  out.eps = inst.eps;
  return out;
}

RobustResult solve_robust_regression(const RobustInstance& inst, std::uint64_t seed,
                                     const sparse_reg::SolverOptions& options) {
  validate(inst);
  if (!(inst.eps > 0.0)) throw DomainError("robust regression: eps must be positive");
  const Index n = inst.A.rows();
  RobustResult out;
  auto& sol = out.solution;

  auto reduced = reduce_to_sparse(inst);
  if (!reduced) {
    out.span_branch = true;
    sol.x = numlin::least_squares(inst.A, inst.b);
    sol.keep_mask = make_mask(n, {}, inst.k);
    sol.residual = recompute_residual(inst.A, inst.b, sol);
    return out;
  }
  if (inst.k == 0) {
    sol.x = numlin::least_squares(inst.A, inst.b);
    sol.keep_mask.assign(static_cast<std::size_t>(n), 1);
    sol.residual = recompute_residual(inst.A, inst.b, sol);
    return out;
  }

  auto sparse = sparse_reg::solve_sparse_regression(*reduced, seed, options);
  out.stats = sparse.stats;
  const Vector z = sparse.z.dense();
  sol.x = numlin::least_squares(inst.A, inst.b + z);
  sol.keep_mask = make_mask(n, sparse.z.support, inst.k);
  sol.residual = recompute_residual(inst.A, inst.b, sol);
  return out;
}

bool robust_decision(const RobustInstance& inst) {
  validate(inst);
  if (!(inst.delta >= 0.0)) throw DomainError("robust_decision: delta must be >= 0");
  const double masks = static_cast<double>(binomial(inst.A.rows(), inst.k));
  if (masks > kDecisionMaskCap) throw CapacityError("robust_decision: mask enumeration too large", masks);
  const auto best = baselines::brute_robust_reg(inst.A, inst.b, inst.k);
  return best.residual <= inst.delta + 1e-9;
}

}  // namespace sparsereg::robust_reg
