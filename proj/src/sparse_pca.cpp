#include "sparsereg/sparse_pca.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "sparsereg/combinatorics.hpp"
#include "sparsereg/kernels.hpp"
#include "sparsereg/nets.hpp"
#include "sparsereg/numlin.hpp"

namespace sparsereg::sparse_pca {
namespace {

bool use_exact(GeometryBackend backend, double pairs) {
  if (backend == GeometryBackend::exact) return true;
  if (backend == GeometryBackend::approximate) return false;
  return pairs <= kExactPairLimit;
}

Matrix random_directions(Index dim, double eps, std::uint64_t seed) {
  const auto m = static_cast<Index>(std::max(32.0, std::ceil(8.0 / eps)));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Matrix U(dim, m);
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < dim; ++i) U(i, j) = gauss(rng);
    const double nrm = U.col(j).norm();
    if (nrm > 0.0) U.col(j) /= nrm;
  }
  return U;
}

/// Indices of the extreme points along each direction (both signs).
std::vector<Index> extremes(const Matrix& proj) {
  std::vector<Index> out;
  for (Index d = 0; d < proj.rows(); ++d) {
    Index lo = 0;
    Index hi = 0;
    for (Index i = 1; i < proj.cols(); ++i) {
      if (proj(d, i) < proj(d, lo)) lo = i;
      if (proj(d, i) > proj(d, hi)) hi = i;
    }
    out.push_back(lo);
    out.push_back(hi);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Index farthest_from(const Matrix& P, const Eigen::Ref<const Vector>& q) {
  Index best = 0;
  double bd = -1.0;
  for (Index i = 0; i < P.cols(); ++i) {
    const double d2 = (P.col(i) - q).squaredNorm();
    if (d2 > bd) {
      bd = d2;
      best = i;
    }
  }
  return best;
}

kernels::Pair approx_bfp_pair(const Matrix& P, const Matrix& Q, double eps, std::uint64_t seed) {
  const Matrix U = random_directions(P.rows(), eps, seed);
  const auto cp = extremes(U.transpose() * P);
  const auto cq = extremes(U.transpose() * Q);
  kernels::Pair best;
  for (Index i : cp) {
    for (Index j : cq) {
      const kernels::Pair cand{i, j, (P.col(i) - Q.col(j)).squaredNorm()};
      if (cand.better_than(best)) best = cand;
    }
  }
  // alternate farthest-point sweeps from the best pair found so far
  for (int it = 0; it < 4; ++it) {
    const Index i = farthest_from(P, Q.col(best.second));
    const Index j = farthest_from(Q, P.col(i));
    const kernels::Pair cand{i, j, (P.col(i) - Q.col(j)).squaredNorm()};
    if (!cand.better_than(best)) break;
    best = cand;
  }
  return best;
}

FarthestPair to_result(const kernels::Pair& p) { return {p.first, p.second, std::sqrt(std::max(0.0, p.dist2))}; }

}  // namespace

FarthestPair approx_diameter(const Matrix& points, double eps, GeometryBackend backend, std::uint64_t seed) {
  if (points.cols() < 2) throw DomainError("approx_diameter: need at least two points");
  require(eps > 0.0 && eps < 1.0, "approx_diameter: eps must lie in (0, 1)");
  const double m = static_cast<double>(points.cols());
  if (use_exact(backend, m * (m - 1) / 2)) return to_result(kernels::parallel::farthest_pair(points));
  auto pair = approx_bfp_pair(points, points, eps, seed);
  if (pair.first == pair.second) {
    // every point coincides with itself at distance 0; pick any distinct partner
    pair.second = pair.first == 0 ? 1 : 0;
    pair.dist2 = (points.col(pair.first) - points.col(pair.second)).squaredNorm();
  }
  if (pair.first > pair.second) std::swap(pair.first, pair.second);
  return to_result(pair);
}

FarthestPair approx_bfp(const Matrix& P, const Matrix& Q, double eps, GeometryBackend backend, std::uint64_t seed) {
  if (P.cols() < 1 || Q.cols() < 1) throw DomainError("approx_bfp: both sets must be nonempty");
  require(P.rows() == Q.rows(), "approx_bfp: dimension mismatch");
  require(eps > 0.0 && eps < 1.0, "approx_bfp: eps must lie in (0, 1)");
  const double pairs = static_cast<double>(P.cols()) * static_cast<double>(Q.cols());
  if (use_exact(backend, pairs)) return to_result(kernels::parallel::bichromatic_farthest_pair(P, Q));
  return to_result(approx_bfp_pair(P, Q, eps, seed));
}

Matrix factor_psd(const Matrix& A) {
  require(A.rows() == A.cols(), "factor_psd: matrix must be square");
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) throw DomainError("factor_psd: matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> es(A);
  const Vector& lambda = es.eigenvalues();
  const double top = lambda.size() ? std::max(0.0, lambda.maxCoeff()) : 0.0;
  if (lambda.size() && lambda.minCoeff() < -1e-10 * std::max(top, 1e-300)) {
    throw DomainError("factor_psd: matrix is not positive semidefinite");
  }
  std::vector<Index> keep;
  for (Index i = lambda.size() - 1; i >= 0; --i)
    if (lambda[i] > kTolRank * top) keep.push_back(i);
  Matrix B(static_cast<Index>(keep.size()), A.cols());
  for (std::size_t r = 0; r < keep.size(); ++r)
    B.row(static_cast<Index>(r)) = std::sqrt(lambda[keep[r]]) * es.eigenvectors().col(keep[r]).transpose();
  return B;
}

double quadratic_form(const Matrix& A, const SparseVector& u) {
  double total = 0.0;
  for (std::size_t i = 0; i < u.support.size(); ++i)
    for (std::size_t j = 0; j < u.support.size(); ++j) total += u.values[i] * u.values[j] * A(u.support[i], u.support[j]);
  return total;
}

namespace {

void check_instance(const PcaInstance& inst) {
  require(inst.A.rows() == inst.A.cols(), "sparse_pca: A must be square");
  require(inst.k >= 0, "sparse_pca: k must be nonnegative");
  require(inst.eps > 0.0 && inst.eps < 1.0, "sparse_pca: eps must lie in (0, 1)");
}

PcaSolution finish(const Matrix& A, const Vector& w) {
  PcaSolution s;
  s.u = SparseVector::from_dense(w);
  s.value = quadratic_form(A, s.u);
  s.norm = w.norm();
  return s;
}

/// Net of the unit ball in R^dim sorted by squared norm, so a norm band is
/// a contiguous range.
struct SortedNet {
  Matrix points;
  std::vector<double> norm2;

  std::pair<Index, Index> band(double lo, double hi) const {
    const auto a = std::lower_bound(norm2.begin(), norm2.end(), lo);
    const auto b = std::upper_bound(norm2.begin(), norm2.end(), hi);
    return {static_cast<Index>(a - norm2.begin()), static_cast<Index>(b - norm2.begin())};
  }
};

SortedNet sorted_ball_net(Index dim, double delta, double cap) {
  const Matrix g = nets::ball_net(dim, 1.0, delta, cap);
  std::vector<Index> order(static_cast<std::size_t>(g.cols()));
  std::iota(order.begin(), order.end(), Index{0});
  Vector n2(g.cols());
  for (Index j = 0; j < g.cols(); ++j) n2[j] = g.col(j).squaredNorm();
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return n2[a] < n2[b]; });
  SortedNet out;
  out.points.resize(dim, g.cols());
  for (std::size_t j = 0; j < order.size(); ++j) {
    out.points.col(static_cast<Index>(j)) = g.col(order[j]);
    out.norm2.push_back(n2[order[j]]);
  }
  return out;
}

struct HalfSet {
  Matrix points;                             // r x m
  std::vector<std::vector<Index>> supports;  // global indices
  std::vector<std::pair<std::size_t, Index>> origin;  // (support id, net column)
  double sign = 1.0;

  Vector coeffs(Index j, const SortedNet& net, Index n) const {
    Vector w = Vector::Zero(n);
    const auto& [sid, col] = origin[static_cast<std::size_t>(j)];
    const auto& T = supports[sid];
    for (std::size_t i = 0; i < T.size(); ++i) w[T[i]] = sign * net.points(static_cast<Index>(i), col);
    return w;
  }
};

HalfSet build_half(const Matrix& B, const std::vector<Index>& cell, Index size, const SortedNet& net, double lo,
                   double hi, double sign, double cap) {
  HalfSet h;
  h.sign = sign;
  const auto [first, last] = net.band(lo, hi);
  const double per_support = static_cast<double>(last - first);
  const double count = per_support * static_cast<double>(binomial(static_cast<Index>(cell.size()), size));
  if (count > cap) throw CapacityError("solve_sparse_pca: candidate set exceeds cap", count);
  h.points.resize(B.rows(), static_cast<Index>(count));
  Index m = 0;
  for_each_combination(static_cast<Index>(cell.size()), size, [&](const std::vector<Index>& pick) {
    std::vector<Index> T;
    for (Index p : pick) T.push_back(cell[static_cast<std::size_t>(p)]);
    const Matrix BT = numlin::select_columns(B, T);
    const std::size_t sid = h.supports.size();
    h.supports.push_back(std::move(T));
    for (Index j = first; j < last; ++j) {
      h.points.col(m++) = sign * (BT * net.points.col(j));
      h.origin.emplace_back(sid, j);
    }
  });
  return h;
}

}  // namespace

PcaResult solve_sparse_pca(const PcaInstance& inst, std::uint64_t seed) {
  check_instance(inst);
  const Matrix& A = inst.A;
  const Index n = A.rows();
  const Index k = std::min<Index>(inst.k, n);
  PcaResult res;
  const Matrix B = factor_psd(A);
  if (k == 0 || n == 0) {
    res.solution.u.dim = n;
    return res;
  }
  if (k == 1 || B.rows() == 0) {
    // best single coordinate: u = e_i maximizes A_ii
    Index best = 0;
    for (Index i = 1; i < n; ++i)
      if (A(i, i) > A(best, best)) best = i;
    res.solution = finish(A, Vector::Unit(n, best));
    res.stats.candidates = static_cast<std::uint64_t>(n);
    res.stats.winning_prenorm = 1.0;
    return res;
  }
  require(inst.repeats >= 1, "solve_sparse_pca: repeats must be >= 1");

  const double kappa = numlin::condition_number(A);
  const double delta = inst.eps / kappa;
  res.stats.delta = delta;
  const auto levels = nets::interval_net(inst.eps / 2.0);
  std::vector<SortedNet> nets_by_dim;
  for (Index d = 0; d <= k; ++d) nets_by_dim.push_back(sorted_ball_net(d, std::min(delta, 1.0), inst.cap));

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coin(0, 1);
  double best_value = -1.0;
  for (int rep = 0; rep < inst.repeats; ++rep) {
    std::vector<Index> U1, U2;
    for (Index i = 0; i < n; ++i) (coin(rng) ? U2 : U1).push_back(i);
    const std::uint64_t geo_seed = rng();
    for (Index k1 = 0; k1 <= k; ++k1) {
      const Index k2 = k - k1;
      if (k1 > static_cast<Index>(U1.size()) || k2 > static_cast<Index>(U2.size())) continue;
      for (double z : levels) {
        const double half = inst.eps / 2.0;
        const HalfSet S1 = build_half(B, U1, k1, nets_by_dim[static_cast<std::size_t>(k1)], z - half, z + half, 1.0, inst.cap);
        const HalfSet S2 =
            build_half(B, U2, k2, nets_by_dim[static_cast<std::size_t>(k2)], 1.0 - z - half, 1.0 - z + half, -1.0, inst.cap);
        ++res.stats.rounds;
        res.stats.candidates += static_cast<std::uint64_t>(S1.points.cols() + S2.points.cols());
        if (S1.points.cols() == 0 || S2.points.cols() == 0) continue;
        const auto pair = approx_bfp(S1.points, S2.points, inst.eps, inst.backend, geo_seed);
        const Vector w = S1.coeffs(pair.first, nets_by_dim[static_cast<std::size_t>(k1)], n) -
                         S2.coeffs(pair.second, nets_by_dim[static_cast<std::size_t>(k2)], n);
        const double nrm = w.norm();
        if (nrm == 0.0) continue;
        PcaSolution cand = finish(A, w / nrm);
        if (cand.value > best_value) {
          best_value = cand.value;
          res.solution = std::move(cand);
          res.stats.winning_prenorm = nrm;
        }
      }
    }
  }
  if (best_value < 0.0) {
    res.solution = finish(A, Vector::Unit(n, 0));
    res.stats.winning_prenorm = 1.0;
  }
  return res;
}

PcaResult solve_sparse_pca_alphabet(const PcaInstance& inst, std::uint64_t seed) {
  check_instance(inst);
  require(inst.L >= 1, "solve_sparse_pca_alphabet: L must be >= 1");
  require(inst.k >= 2, "solve_sparse_pca_alphabet: k must be >= 2");
  const Matrix& A = inst.A;
  const Index n = A.rows();
  const Index h = std::min<Index>(inst.k / 2, n);
  const Matrix B = factor_psd(A);
  const double per_support = std::pow(2.0 * inst.L + 1.0, static_cast<double>(h));
  const double count = per_support * static_cast<double>(binomial(n, h));
  if (count > inst.cap) throw CapacityError("solve_sparse_pca_alphabet: candidate set exceeds cap", count);

  const auto m = static_cast<Index>(count);
  Matrix points(B.rows(), m);
  std::vector<std::vector<Index>> supports;
  std::vector<std::vector<int>> digits;
  for_each_combination(n, h, [&](const std::vector<Index>& T) {
    std::vector<int> w(static_cast<std::size_t>(h), -inst.L);
    while (true) {
      Vector p = Vector::Zero(B.rows());
      for (Index i = 0; i < h; ++i) p += w[static_cast<std::size_t>(i)] * B.col(T[static_cast<std::size_t>(i)]);
      points.col(static_cast<Index>(supports.size())) = p;
      supports.push_back(T);
      digits.push_back(w);
      Index pos = h - 1;
      while (pos >= 0 && ++w[static_cast<std::size_t>(pos)] > inst.L) w[static_cast<std::size_t>(pos--)] = -inst.L;
      if (pos < 0) break;
    }
  });

  PcaResult res;
  res.stats.candidates = static_cast<std::uint64_t>(m);
  res.stats.rounds = 1;
  if (m < 2 || B.rows() == 0) {
    res.solution.u.dim = n;
    return res;
  }
  const auto pair = approx_diameter(points, inst.eps, inst.backend, seed);
  Vector u = Vector::Zero(n);
  auto add = [&](Index j, double sign) {
    const auto& T = supports[static_cast<std::size_t>(j)];
    for (std::size_t i = 0; i < T.size(); ++i) u[T[i]] += sign * digits[static_cast<std::size_t>(j)][i];
  };
  add(pair.first, 1.0);
  add(pair.second, -1.0);
  res.solution = finish(A, u);
  res.stats.winning_prenorm = res.solution.norm;
  return res;
}

}  // namespace sparsereg::sparse_pca
