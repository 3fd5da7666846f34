#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sparsereg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Relative singular-value cutoff used for every rank decision.
inline constexpr double kTolRank = 1e-10;

/// A caller broke a documented precondition (dimension mismatch, bad mask, ...).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An argument lies outside the mathematical domain of the operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An enumeration would exceed its configured size cap.
class CapacityError : public std::runtime_error {
 public:
  CapacityError(const std::string& what, double predicted)
      : std::runtime_error(what + " (predicted " + std::to_string(predicted) + ")"),
        predicted_(predicted) {}

  double predicted() const noexcept { return predicted_; }

 private:
  double predicted_;
};

/// The input does not satisfy the hypothesis a solver relies on
/// (no exact collision, no unique planted vector, ...).
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A randomized recovery procedure hit its failure branch.
class RecoveryFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sparse vector with a strictly increasing support.
struct SparseVector {
  Index dim = 0;
  std::vector<Index> support;
  std::vector<double> values;

  std::size_t nnz() const { return support.size(); }

  Vector dense() const {
    Vector out = Vector::Zero(dim);
    for (std::size_t i = 0; i < support.size(); ++i) out[support[i]] = values[i];
    return out;
  }

  /// Keeps entries with |v_i| > threshold.
  static SparseVector from_dense(const Vector& v, double threshold = 0.0) {
    SparseVector out;
    out.dim = v.size();
    for (Index i = 0; i < v.size(); ++i) {
      if (std::abs(v[i]) > threshold) {
        out.support.push_back(i);
        out.values.push_back(v[i]);
      }
    }
    return out;
  }

  friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ContractError(message);
}

}  // namespace sparsereg
