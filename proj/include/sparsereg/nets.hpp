#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sparsereg/common.hpp"

/// Grid-based delta-nets over the unit interval, Euclidean balls, and
/// images of column subsets.
namespace sparsereg::nets {

inline constexpr double kDefaultPointCap = 1e8;

/// Points {delta, 3 delta, 5 delta, ...} clipped to [0, 1].
std::vector<double> interval_net(double delta);

/// Rigorous upper bound on the number of points ball_net would return.
double predicted_ball_net_size(Index dim, double radius, double delta);

/// Grid of spacing 2 delta / sqrt(dim) intersected with the ball of radius
/// radius + delta; one point per column, lexicographic grid order.
/// dim = 0 yields a single empty point.
Matrix ball_net(Index dim, double radius, double delta, double cap = kDefaultPointCap);

struct NetEntry {
  Vector image_point;           // A_T * coeffs
  Vector coeffs;                // aligned with support
  std::vector<Index> support;   // T, strictly increasing
};

/// A delta-net over {A_T y : ||A_T y|| <= radius}, kept in factored form:
/// image point j is basis * coords.col(j) and its coefficient vector is
/// coeff_map * coords.col(j).
struct SubspaceNet {
  std::vector<Index> support;
  Matrix basis;      // n x r, orthonormal columns spanning range(A_T)
  Matrix coords;     // r x count
  Matrix coeff_map;  // |T| x r, maps image coordinates to min-norm coefficients

  Index size() const { return coords.cols(); }
  Vector image_point(Index j) const { return basis * coords.col(j); }
  Vector coeffs(Index j) const { return coeff_map * coords.col(j); }
  NetEntry entry(Index j) const { return {image_point(j), coeffs(j), support}; }
};

SubspaceNet subspace_net(const Matrix& A, std::span<const Index> support, double radius,
                         double delta, double cap = kDefaultPointCap);

std::vector<NetEntry> image_net(const Matrix& A, std::span<const Index> support, double radius,
                                double delta, double cap = kDefaultPointCap);

}  // namespace sparsereg::nets
