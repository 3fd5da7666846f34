#include "sparsereg/numlin.hpp"

#include <Eigen/SVD>

namespace sparsereg::numlin {
namespace {

Index effective_rank(const Vector& sigma) {
  if (sigma.size() == 0 || sigma[0] <= 0.0) return 0;
  const double cutoff = kTolRank * sigma[0];
  Index r = 0;
  while (r < sigma.size() && sigma[r] > cutoff) ++r;
  return r;
}

}  // namespace

Vector least_squares(const Matrix& A, const Vector& b) {
  require(A.rows() == b.size(), "least_squares: A.rows() != b.size()");
  if (A.cols() == 0) return Vector(0);
  if (A.rows() == 0) return Vector::Zero(A.cols());
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(kTolRank);
  return svd.solve(b);
}

Vector masked_least_squares(const Matrix& A, const Vector& b, std::span<const std::uint8_t> keep) {
  require(A.rows() == b.size(), "masked_least_squares: A.rows() != b.size()");
  require(static_cast<Index>(keep.size()) == A.rows(), "masked_least_squares: mask length");
  Index kept = 0;
  for (auto k : keep) kept += k ? 1 : 0;
  Matrix As(kept, A.cols());
  Vector bs(kept);
  Index r = 0;
  for (Index i = 0; i < A.rows(); ++i) {
    if (!keep[static_cast<std::size_t>(i)]) continue;
    As.row(r) = A.row(i);
    bs[r] = b[i];
    ++r;
  }
  return least_squares(As, bs);
}

double masked_residual(const Matrix& A, const Vector& x, const Vector& b,
                       std::span<const std::uint8_t> keep) {
  require(A.rows() == b.size() && A.cols() == x.size(), "masked_residual: dimensions");
  require(static_cast<Index>(keep.size()) == A.rows(), "masked_residual: mask length");
  const Vector r = A * x - b;
  double sq = 0.0;
  for (Index i = 0; i < r.size(); ++i) {
    if (keep[static_cast<std::size_t>(i)]) sq += r[i] * r[i];
  }
  return std::sqrt(sq);
}

Vector singular_values(const Matrix& A) {
  if (A.size() == 0) return Vector(0);
  Eigen::JacobiSVD<Matrix> svd(A);
  return svd.singularValues();
}

Index rank(const Matrix& A) { return effective_rank(singular_values(A)); }

Matrix nullspace_basis(const Matrix& A) {
  require(A.rows() >= 1, "nullspace_basis: A must have at least one row");
  if (A.cols() == 0) return Matrix::Identity(A.rows(), A.rows());
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeFullU);
  const Index r = effective_rank(svd.singularValues());
  const Matrix& U = svd.matrixU();
  return U.rightCols(A.rows() - r).transpose();
}

Matrix column_basis(const Matrix& A) {
  if (A.cols() == 0 || A.rows() == 0) return Matrix(A.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeThinU);
  const Index r = effective_rank(svd.singularValues());
  return svd.matrixU().leftCols(r);
}

Vector project_col_span(const Matrix& A, const Vector& v) {
  require(A.rows() == v.size(), "project_col_span: A.rows() != v.size()");
  const Matrix Q = column_basis(A);
  return Q * (Q.transpose() * v);
}

double smallest_nonzero_singular_value(const Matrix& A) {
  const Vector sigma = singular_values(A);
  const Index r = effective_rank(sigma);
  if (r == 0) throw DomainError("singular values of an all-zero matrix");
  return sigma[r - 1];
}

double condition_number(const Matrix& A) {
  const Vector sigma = singular_values(A);
  const Index r = effective_rank(sigma);
  if (r == 0) throw DomainError("condition_number: all-zero matrix");
  return sigma[0] / sigma[r - 1];
}

Matrix select_columns(const Matrix& A, std::span<const Index> cols) {
  Matrix out(A.rows(), static_cast<Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    require(cols[j] >= 0 && cols[j] < A.cols(), "select_columns: index out of range");
    out.col(static_cast<Index>(j)) = A.col(cols[j]);
  }
  return out;
}

}  // namespace sparsereg::numlin
