#include "sparsereg/planted.hpp"

#include <vector>

#include "sparsereg/numlin.hpp"

namespace sparsereg::planted {

std::optional<Vector> l1_pinned(const Matrix& Q, Index i, const lp::LpOptions& options) {
  const Index n = Q.rows();
  const Index r = Q.cols();
  require(i >= 0 && i < n, "l1_pinned: pinned index out of range");
  if (Q.row(i).norm() <= 1e-12) return std::nullopt;
  // variables: a (free, r), p (n), q (n) with Q a - p + q = 0
  lp::LinearProgram prog;
  const Index nv = r + 2 * n;
  prog.c = Vector::Zero(nv);
  prog.c.tail(2 * n).setOnes();
  prog.A_eq = Matrix::Zero(n + 1, nv);
  prog.A_eq.topLeftCorner(n, r) = Q;
  prog.A_eq.block(0, r, n, n) = -Matrix::Identity(n, n);
  prog.A_eq.block(0, r + n, n, n) = Matrix::Identity(n, n);
  prog.A_eq.block(n, 0, 1, r) = Q.row(i);
  prog.b_eq = Vector::Zero(n + 1);
  prog.b_eq[n] = 1.0;
  prog.lower = Vector::Zero(nv);
  prog.lower.head(r).setConstant(-lp::kInf);
  prog.upper = Vector::Constant(nv, lp::kInf);
  const auto res = lp::lp_solve(prog, options);
  if (res.status != lp::LpStatus::optimal) return std::nullopt;
  Vector w = Q * res.x.head(r);
  w[i] = 1.0;
  return w;
}

namespace {

Index count_above(const Vector& w, double tau) {
  const double cut = tau * w.cwiseAbs().maxCoeff();
  return (w.array().abs() > cut).count();
}

}  // namespace

SparsestResult sparsest_in_subspace(const Matrix& W, double tau, const lp::LpOptions& options) {
  require(W.cols() >= 1 && W.rows() >= 1, "sparsest_in_subspace: empty basis");
  require(tau >= 0.0, "sparsest_in_subspace: tau must be nonnegative");
  const Matrix Q = numlin::column_basis(W);
  require(Q.cols() == W.cols(), "sparsest_in_subspace: basis vectors must be linearly independent");
  const Index n = Q.rows();
  std::vector<std::optional<Vector>> sols(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic, 1)
  for (Index i = 0; i < n; ++i) sols[static_cast<std::size_t>(i)] = l1_pinned(Q, i, options);

  SparsestResult out;
  Index best_count = n + 1;
  for (Index i = 0; i < n; ++i) {
    const auto& s = sols[static_cast<std::size_t>(i)];
    if (!s) continue;
    ++out.feasible;
    const Index c = count_above(*s, tau);
    if (c < best_count) {
      best_count = c;
      out.pinned = i;
      out.w = *s;
    }
  }
  if (out.pinned < 0) throw std::runtime_error("sparsest_in_subspace: every pinned program was infeasible");
  const double cut = tau * out.w.cwiseAbs().maxCoeff();
  Vector kept = (out.w.array().abs() > cut).select(out.w, 0.0);
  out.v = SparseVector::from_dense(kept / kept.norm());
  return out;
}

PlantedResult solve_planted_robust(const PlantedInstance& inst, double tau) {
  const Index n = inst.A.rows();
  require(inst.b.size() == n, "solve_planted_robust: A.rows() != b.size()");
  require(inst.k >= 0 && inst.k <= n, "solve_planted_robust: need 0 <= k <= n");
  PlantedResult out;
  auto& sol = out.solution;

  const Vector x0 = numlin::least_squares(inst.A, inst.b);
  if ((inst.A * x0 - inst.b).norm() <= 1e-9 * std::max(1.0, inst.b.norm())) {
    sol.keep_mask = robust_reg::make_mask(n, {}, inst.k);
    sol.x = x0;
    sol.residual = numlin::masked_residual(inst.A, sol.x, inst.b, sol.keep_mask);
    out.corruption = Vector::Zero(n);
    return out;
  }

  Matrix M(n, inst.A.cols() + 1);
  M.col(0) = inst.b;
  M.rightCols(inst.A.cols()) = inst.A;
  const Matrix basis = numlin::column_basis(M);
  const auto sparsest = sparsest_in_subspace(basis, tau);
  out.pinned = sparsest.pinned;

  // w = gamma * b - A beta, so w / gamma is the corruption b - A x
  const Vector coef = numlin::least_squares(M, sparsest.w);
  const double gamma = coef[0];
  if (std::abs(gamma) <= 1e-12 * sparsest.w.norm()) throw RecoveryFailed("solve_planted_robust: recovered direction misses b");
  const Vector e = sparsest.w / gamma;
  const double cut = tau * e.cwiseAbs().maxCoeff();
  std::vector<Index> support;
  for (Index i = 0; i < n; ++i)
    if (std::abs(e[i]) > cut) support.push_back(i);
  if (static_cast<int>(support.size()) > inst.k) {
    throw RecoveryFailed("solve_planted_robust: recovered corruption has " + std::to_string(support.size()) +
                         " entries, more than k = " + std::to_string(inst.k));
  }
  out.corruption = (e.array().abs() > cut).select(e, 0.0);
  sol.keep_mask = robust_reg::make_mask(n, support, inst.k);
  sol.x = numlin::masked_least_squares(inst.A, inst.b, sol.keep_mask);
  sol.residual = numlin::masked_residual(inst.A, sol.x, inst.b, sol.keep_mask);
  return out;
}

}  // namespace sparsereg::planted
