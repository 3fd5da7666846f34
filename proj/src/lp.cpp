#include "sparsereg/lp.hpp"

#include <cmath>
#include <vector>

namespace sparsereg::lp {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// x_j = offset + sign * y_plus (- y_minus when free).
struct VarMap {
  double offset = 0.0;
  double sign = 1.0;
  Index plus = -1;
  Index minus = -1;
};

enum class RunStatus { optimal, unbounded, pivot_limit };

struct Tableau {
  RowMatrix T;  // m constraint rows + one cost row; last column is the rhs
  std::vector<Index> basis;
  Index m = 0;
  Index cols = 0;  // variable columns, rhs excluded

  double& rhs(Index i) { return T(i, cols); }

  void pivot(Index r, Index c) {
    T.row(r) /= T(r, c);
    for (Index i = 0; i <= m; ++i) {
      if (i == r) continue;
      const double f = T(i, c);
      if (f != 0.0) T.row(i) -= f * T.row(r);
    }
    basis[static_cast<std::size_t>(r)] = c;
  }

  RunStatus run(const std::vector<char>& allowed, const LpOptions& opt, long& pivots) {
    int degenerate_run = 0;
    while (true) {
      if (pivots >= opt.max_pivots) return RunStatus::pivot_limit;
      const bool bland = opt.rule == PivotRule::bland || degenerate_run > 50;
      Index enter = -1;
      double most = -opt.tol;
      for (Index j = 0; j < cols; ++j) {
        if (!allowed[static_cast<std::size_t>(j)]) continue;
        const double d = T(m, j);
        if (d < most) {
          enter = j;
          if (bland) break;
          most = d;
        }
      }
      if (enter < 0) return RunStatus::optimal;
      Index leave = -1;
      double best = 0.0;
      for (Index i = 0; i < m; ++i) {
        const double a = T(i, enter);
        if (a <= opt.tol) continue;
        const double ratio = T(i, cols) / a;
        if (leave < 0 || ratio < best - opt.tol ||
            (ratio <= best + opt.tol && basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
          if (leave < 0 || ratio < best - opt.tol) best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return RunStatus::unbounded;
      degenerate_run = T(leave, cols) <= opt.tol ? degenerate_run + 1 : 0;
      pivot(leave, enter);
      ++pivots;
    }
  }

  void price(const Vector& cost) {
    T.row(m).setZero();
    T.row(m).head(cost.size()) = cost.transpose();
    for (Index i = 0; i < m; ++i) {
      const double cb = basis[static_cast<std::size_t>(i)] < cost.size() ? cost[basis[static_cast<std::size_t>(i)]] : 0.0;
      if (cb != 0.0) T.row(m) -= cb * T.row(i);
    }
  }
};

}  // namespace

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
  }
  return "unknown";
}

LpResult lp_solve(const LinearProgram& lp, const LpOptions& options) {
  const Index n = lp.c.size();
  const Index meq = lp.A_eq.rows();
  const Index mub = lp.A_ub.rows();
  require(meq == 0 || lp.A_eq.cols() == n, "lp_solve: A_eq has the wrong column count");
  require(mub == 0 || lp.A_ub.cols() == n, "lp_solve: A_ub has the wrong column count");
  require(lp.b_eq.size() == meq && lp.b_ub.size() == mub, "lp_solve: rhs length mismatch");
  require(lp.lower.size() == 0 || lp.lower.size() == n, "lp_solve: lower bound length mismatch");
  require(lp.upper.size() == 0 || lp.upper.size() == n, "lp_solve: upper bound length mismatch");

  // substitute bounded / free variables by nonnegative ones
  std::vector<VarMap> map(static_cast<std::size_t>(n));
  std::vector<std::pair<Index, double>> extra_ub;  // y_plus <= width
  Index ny = 0;
  for (Index j = 0; j < n; ++j) {
    const double lo = lp.lower.size() ? lp.lower[j] : 0.0;
    const double hi = lp.upper.size() ? lp.upper[j] : kInf;
    require(!(lo > hi), "lp_solve: lower bound above upper bound");
    auto& v = map[static_cast<std::size_t>(j)];
    v.plus = ny++;
    if (std::isfinite(lo)) {
      v.offset = lo;
      if (std::isfinite(hi)) extra_ub.emplace_back(v.plus, hi - lo);
    } else if (std::isfinite(hi)) {
      v.offset = hi;
      v.sign = -1.0;
    } else {
      v.minus = ny++;
    }
  }

  const Index mb = static_cast<Index>(extra_ub.size());
  const Index m = meq + mub + mb;
  const Index ns = mub + mb;
  Matrix M = Matrix::Zero(m, ny + ns);
  Vector rhs(m);
  auto fill = [&](Index row, const Eigen::Ref<const Vector>& a, double b) {
    double shift = 0.0;
    for (Index j = 0; j < n; ++j) {
      const auto& v = map[static_cast<std::size_t>(j)];
      shift += a[j] * v.offset;
      M(row, v.plus) += v.sign * a[j];
      if (v.minus >= 0) M(row, v.minus) -= a[j];
    }
    rhs[row] = b - shift;
  };
  for (Index i = 0; i < meq; ++i) fill(i, lp.A_eq.row(i).transpose(), lp.b_eq[i]);
  for (Index i = 0; i < mub; ++i) {
    fill(meq + i, lp.A_ub.row(i).transpose(), lp.b_ub[i]);
    M(meq + i, ny + i) = 1.0;
  }
  for (Index i = 0; i < mb; ++i) {
    M(meq + mub + i, extra_ub[static_cast<std::size_t>(i)].first) = 1.0;
    rhs[meq + mub + i] = extra_ub[static_cast<std::size_t>(i)].second;
    M(meq + mub + i, ny + mub + i) = 1.0;
  }

  Vector cost = Vector::Zero(ny + ns);
  for (Index j = 0; j < n; ++j) {
    const auto& v = map[static_cast<std::size_t>(j)];
    cost[v.plus] += v.sign * lp.c[j];
    if (v.minus >= 0) cost[v.minus] -= lp.c[j];
  }

  // rows with a nonnegative rhs and a slack start with the slack basic,
  // every other row gets an artificial column
  std::vector<Index> artificial_rows;
  Tableau tab;
  tab.m = m;
  tab.basis.assign(static_cast<std::size_t>(m), -1);
  for (Index i = 0; i < m; ++i) {
    if (rhs[i] < 0.0) {
      M.row(i) *= -1.0;
      rhs[i] = -rhs[i];
    }
    if (i >= meq && M(i, ny + (i - meq)) == 1.0) {
      tab.basis[static_cast<std::size_t>(i)] = ny + (i - meq);
    } else {
      artificial_rows.push_back(i);
    }
  }
  const Index nart = static_cast<Index>(artificial_rows.size());
  const Index real_cols = ny + ns;
  tab.cols = real_cols + nart;
  tab.T = RowMatrix::Zero(m + 1, tab.cols + 1);
  tab.T.topLeftCorner(m, real_cols) = M;
  tab.T.block(0, tab.cols, m, 1) = rhs;
  for (Index a = 0; a < nart; ++a) {
    const Index row = artificial_rows[static_cast<std::size_t>(a)];
    tab.T(row, real_cols + a) = 1.0;
    tab.basis[static_cast<std::size_t>(row)] = real_cols + a;
  }

  LpResult out;
  const double scale = m > 0 ? std::max(1.0, rhs.cwiseAbs().maxCoeff()) : 1.0;
  if (nart > 0) {
    Vector phase1 = Vector::Zero(tab.cols);
    phase1.tail(nart).setOnes();
    tab.price(phase1);
    std::vector<char> all(static_cast<std::size_t>(tab.cols), 1);
    if (tab.run(all, options, out.pivots) == RunStatus::pivot_limit) {
      throw std::runtime_error("lp_solve: pivot limit reached in phase 1");
    }
    if (-tab.T(m, tab.cols) > 1e-7 * scale) {
      out.status = LpStatus::infeasible;
      return out;
    }
    // pivot remaining artificials out where possible; the rest sit on redundant rows
    for (Index i = 0; i < m; ++i) {
      if (tab.basis[static_cast<std::size_t>(i)] < real_cols) continue;
      Index col = -1;
      for (Index j = 0; j < real_cols && col < 0; ++j)
        if (std::abs(tab.T(i, j)) > options.tol) col = j;
      if (col >= 0) tab.pivot(i, col);
    }
  }

  std::vector<char> allowed(static_cast<std::size_t>(tab.cols), 0);
  std::fill(allowed.begin(), allowed.begin() + real_cols, 1);
  Vector full_cost = Vector::Zero(tab.cols);
  full_cost.head(real_cols) = cost;
  tab.price(full_cost);
  const auto status = tab.run(allowed, options, out.pivots);
  if (status == RunStatus::pivot_limit) throw std::runtime_error("lp_solve: pivot limit reached in phase 2");
  if (status == RunStatus::unbounded) {
    out.status = LpStatus::unbounded;
    return out;
  }

  Vector y = Vector::Zero(tab.cols);
  for (Index i = 0; i < m; ++i) y[tab.basis[static_cast<std::size_t>(i)]] = tab.T(i, tab.cols);
  out.x.resize(n);
  for (Index j = 0; j < n; ++j) {
    const auto& v = map[static_cast<std::size_t>(j)];
    out.x[j] = v.offset + v.sign * y[v.plus] - (v.minus >= 0 ? y[v.minus] : 0.0);
  }
  out.objective = lp.c.dot(out.x);
  out.status = LpStatus::optimal;
  return out;
}

}  // namespace sparsereg::lp
