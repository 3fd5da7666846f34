#include "sparsereg/reductions.hpp"

#include <algorithm>
#include <cmath>

namespace sparsereg::reductions {

robust_reg::RobustInstance exact_cover_to_robust(const ExactCoverInstance& inst) {
  require(inst.universe >= 1 && !inst.sets.empty(), "exact_cover_to_robust: empty instance");
  const auto s = static_cast<Index>(inst.sets.size());
  const Index x = inst.universe;
  robust_reg::RobustInstance out;
  out.A = Matrix::Zero(2 * s + x, s);
  out.b = Vector::Zero(2 * s + x);
  for (Index i = 0; i < s; ++i) {
    out.A(2 * i, i) = 1.0;
    out.A(2 * i + 1, i) = 1.0;
    out.b[2 * i + 1] = 1.0;
    for (int e : inst.sets[static_cast<std::size_t>(i)]) {
      require(e >= 0 && e < inst.universe, "exact_cover_to_robust: element outside the universe");
      out.A(2 * s + e, i) = 1.0;
    }
  }
  out.b.tail(x).setOnes();
  out.k = static_cast<int>(s);
  out.delta = 0.0;
  return out;
}

GadgetParams gadget_params(const WeightedGraph& g, long W) {
  GadgetParams p;
  p.sum_w = g.total_weight();
  const long n = g.vertices;
  p.non_edges = n * (n - 1) / 2 - static_cast<long>(g.edges.size());
  const double base = static_cast<double>(p.sum_w) + 8.0 * static_cast<double>(W);
  p.alpha = std::sqrt(std::max(1.0, base));
  const double a2z = p.alpha * p.alpha * static_cast<double>(p.non_edges);
  p.delta = std::sqrt(base + a2z);
  const double z = static_cast<double>(p.non_edges);
  p.beta = p.delta * std::max({8.0 * z, 50.0 * (a2z + static_cast<double>(p.sum_w)), 1.0});
  return p;
}

double build_beta(const WeightedGraph& g, int k, long W) {
  require(k >= 1, "build_beta: k must be >= 1");
  return gadget_params(g, W).beta;
}

CliqueGadget clique_gadget(const WeightedGraph& g, int k, long W, const CliqueGadgetOptions& options) {
  const int N = g.vertices;
  require(k >= 1 && N >= 1 && N % k == 0, "clique_gadget: N must be a positive multiple of k");
  std::vector<long> weight(static_cast<std::size_t>(N) * static_cast<std::size_t>(N), -1);
  for (const auto& e : g.edges) {
    require(e.u >= 0 && e.u < N && e.v >= 0 && e.v < N && e.u != e.v, "clique_gadget: bad edge");
    require(e.weight >= 0, "clique_gadget: weights must be nonnegative");
    auto& slot = weight[static_cast<std::size_t>(std::min(e.u, e.v) * N + std::max(e.u, e.v))];
    require(slot < 0, "clique_gadget: duplicate edge");
    slot = e.weight;
  }

  CliqueGadget out;
  out.k = k;
  out.params = gadget_params(g, W);
  const auto& p = out.params;
  out.penalty = options.penalty > 0.0 ? options.penalty : 1e3 * p.beta;
  out.c_rows = static_cast<Index>(N) * (N - 1) / 2;
  const int copies = options.robust_mode ? k + 1 : 1;
  out.d_rows = static_cast<Index>(k) * copies;
  out.penalty_rows = options.robust_mode ? N : 0;

  const Index rows = out.c_rows + out.d_rows + out.penalty_rows;
  out.A = Matrix::Zero(rows, N);
  out.b = Vector::Zero(rows);
  Index r = 0;
  for (int u = 0; u < N; ++u) {
    for (int v = u + 1; v < N; ++v, ++r) {
      const long w = weight[static_cast<std::size_t>(u * N + v)];
      const double entry = w < 0 ? p.alpha : std::sqrt(static_cast<double>(w));
      out.A(r, u) = 2.0 * entry;
      out.A(r, v) = 2.0 * entry;
      out.b[r] = entry;
    }
  }
  const int block = N / k;
  for (int j = 0; j < k; ++j) {
    for (int c = 0; c < copies; ++c, ++r) {
      out.A.block(r, j * block, 1, block).setConstant(p.beta);
      out.b[r] = p.beta;
    }
  }
  for (int i = 0; i < out.penalty_rows; ++i, ++r) out.A(r, i) = out.penalty;
  return out;
}

robust_reg::RobustInstance max3lin_system(const Max3LinInstance& inst, int ignored) {
  const auto n = static_cast<Index>(inst.equations.size());
  require(n >= 1 && inst.variables >= 1, "max3lin: empty instance");
  require(ignored >= 0 && ignored <= n, "max3lin: ignored count out of range");
  robust_reg::RobustInstance out;
  out.A = Matrix::Zero(n, inst.variables);
  out.b.resize(n);
  for (Index i = 0; i < n; ++i) {
    const auto& eq = inst.equations[static_cast<std::size_t>(i)];
    for (int v : {eq.i1, eq.i2, eq.i3}) require(v >= 0 && v < inst.variables, "max3lin: variable index out of range");
    require(inst.bound <= 0.0 || std::abs(eq.rhs) <= inst.bound, "max3lin: right-hand side exceeds the bound");
    out.A(i, eq.i1) += 1.0;
    out.A(i, eq.i2) += 1.0;
    out.A(i, eq.i3) -= 1.0;
    out.b[i] = eq.rhs;
  }
  out.k = ignored;
  return out;
}

robust_reg::RobustInstance max3lin_to_robust(const Max3LinInstance& inst, double eps) {
  const double n = static_cast<double>(inst.equations.size());
  require(eps * n >= 1.0, "max3lin_to_robust: need eps * n >= 1");
  return max3lin_system(inst, static_cast<int>(std::floor(eps * n)));
}

}  // namespace sparsereg::reductions
