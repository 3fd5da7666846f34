#pragma once

#include <span>

#include "sparsereg/common.hpp"

/// Dense kernels shared by every solver. All functions are pure.
namespace sparsereg::numlin {

/// Minimum-norm minimizer of ||Ax - b||_2 (pseudo-inverse semantics).
Vector least_squares(const Matrix& A, const Vector& b);

/// Least squares restricted to the rows with keep[i] != 0. The result is
/// the minimum-norm minimizer of ||S(Ax - b)||_2.
Vector masked_least_squares(const Matrix& A, const Vector& b, std::span<const std::uint8_t> keep);

/// ||S(Ax - b)||_2 for the diagonal selector encoded by `keep`.
double masked_residual(const Matrix& A, const Vector& x, const Vector& b,
                       std::span<const std::uint8_t> keep);

/// Singular values in decreasing order.
Vector singular_values(const Matrix& A);

/// Number of singular values above kTolRank * sigma_max.
Index rank(const Matrix& A);

/// Rows form an orthonormal basis of the left nullspace: X * A = 0 and
/// X * X^T = I. Has A.rows() - rank(A) rows (possibly zero).
Matrix nullspace_basis(const Matrix& A);

/// Orthonormal basis (as columns) of the column span of A.
Matrix column_basis(const Matrix& A);

/// Orthogonal projection of v onto the column span of A.
Vector project_col_span(const Matrix& A, const Vector& v);

/// sigma_max / sigma_min over the nonzero singular values.
/// Throws DomainError for an all-zero matrix.
double condition_number(const Matrix& A);

/// Smallest nonzero singular value. Throws DomainError for an all-zero matrix.
double smallest_nonzero_singular_value(const Matrix& A);

/// Columns of A selected by `cols`, in order.
Matrix select_columns(const Matrix& A, std::span<const Index> cols);

}  // namespace sparsereg::numlin
