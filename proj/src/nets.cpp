#include "sparsereg/nets.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <numbers>

#include "sparsereg/numlin.hpp"

namespace sparsereg::nets {

std::vector<double> interval_net(double delta) {
  if (!(delta > 0.0)) throw DomainError("interval_net: delta must be positive");
  if (delta > 1.0) throw DomainError("interval_net: delta must be at most 1");
  // tolerance keeps 1/(2*0.1) from rounding up to 6 points
  const auto count = static_cast<std::size_t>(std::ceil(1.0 / (2.0 * delta) - 1e-12));
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(std::min(1.0, (2.0 * static_cast<double>(i) + 1.0) * delta));
  }
  return out;
}

namespace {

double grid_spacing(Index dim, double delta) {
  return 2.0 * delta / std::sqrt(static_cast<double>(dim));
}

void validate(Index dim, double radius, double delta) {
  if (dim < 0) throw DomainError("ball_net: negative dimension");
  if (!(radius >= 0.0)) throw DomainError("ball_net: radius must be nonnegative");
  if (!(delta > 0.0)) throw DomainError("ball_net: delta must be positive");
}

}  // namespace

double predicted_ball_net_size(Index dim, double radius, double delta) {
  validate(dim, radius, delta);
  if (dim == 0) return 1.0;
  const double d = static_cast<double>(dim);
  const double h = grid_spacing(dim, delta);
  const double rho = radius + delta;
  const double per_axis = 2.0 * std::floor(rho / h) + 1.0;
  const double box = std::pow(per_axis, d);
  // every counted lattice cell lies inside the ball of radius rho + delta
  const double unit_ball = std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
  const double volume_bound = unit_ball * std::pow((rho + delta) / h, d);
  return std::min(box, volume_bound);
}

Matrix ball_net(Index dim, double radius, double delta, double cap) {
  validate(dim, radius, delta);
  if (dim == 0) return Matrix(0, 1);
  const double predicted = predicted_ball_net_size(dim, radius, delta);
  if (predicted > cap) throw CapacityError("ball_net: point count exceeds cap", predicted);

  const double h = grid_spacing(dim, delta);
  const double rho = radius + delta;
  const double rho2 = rho * rho * (1.0 + 1e-12);
  const auto max_step = static_cast<long>(std::floor(rho / h));

  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(predicted) * static_cast<std::size_t>(dim));
  std::vector<long> idx(static_cast<std::size_t>(dim), 0);
  std::vector<double> partial(static_cast<std::size_t>(dim) + 1, 0.0);

  // depth-first walk of the lattice, lexicographic in the integer coordinates
  auto recurse = [&](auto&& self, Index axis) -> void {
    if (axis == dim) {
      for (Index a = 0; a < dim; ++a) flat.push_back(h * static_cast<double>(idx[static_cast<std::size_t>(a)]));
      return;
    }
    const double budget = rho2 - partial[static_cast<std::size_t>(axis)];
    const auto lim = std::min(max_step, static_cast<long>(std::floor(std::sqrt(std::max(0.0, budget)) / h)));
    for (long m = -lim; m <= lim; ++m) {
      const double c = h * static_cast<double>(m);
      if (c * c > budget) continue;
      idx[static_cast<std::size_t>(axis)] = m;
      partial[static_cast<std::size_t>(axis) + 1] = partial[static_cast<std::size_t>(axis)] + c * c;
      self(self, axis + 1);
    }
  };
  recurse(recurse, 0);

  const auto count = static_cast<Index>(flat.size()) / dim;
  return Eigen::Map<const Matrix>(flat.data(), dim, count);
}

SubspaceNet subspace_net(const Matrix& A, std::span<const Index> support, double radius,
                         double delta, double cap) {
  SubspaceNet net;
  net.support.assign(support.begin(), support.end());
  for (std::size_t i = 1; i < net.support.size(); ++i) {
    require(net.support[i - 1] < net.support[i], "subspace_net: support must be strictly increasing");
  }
  const Matrix AT = numlin::select_columns(A, support);
  const auto t = static_cast<Index>(support.size());
  if (t == 0 || A.rows() == 0) {
    net.basis = Matrix(A.rows(), 0);
    net.coeff_map = Matrix::Zero(t, 0);
    net.coords = ball_net(0, radius, delta, cap);
    return net;
  }
  Eigen::JacobiSVD<Matrix> svd(AT, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sigma = svd.singularValues();
  Index r = 0;
  while (r < sigma.size() && sigma[r] > kTolRank * sigma[0]) ++r;
  net.basis = svd.matrixU().leftCols(r);
  net.coeff_map = svd.matrixV().leftCols(r) * sigma.head(r).cwiseInverse().asDiagonal();
  net.coords = ball_net(r, radius, delta, cap);
  return net;
}

std::vector<NetEntry> image_net(const Matrix& A, std::span<const Index> support, double radius,
                                double delta, double cap) {
  const SubspaceNet net = subspace_net(A, support, radius, delta, cap);
  std::vector<NetEntry> out;
  out.reserve(static_cast<std::size_t>(net.size()));
  for (Index j = 0; j < net.size(); ++j) out.push_back(net.entry(j));
  return out;
}

}  // namespace sparsereg::nets
