#pragma once

#include <limits>

#include "sparsereg/common.hpp"

/// Dense two-phase simplex for small linear programs.
namespace sparsereg::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// minimize c^T x  s.t.  A_eq x = b_eq,  A_ub x <= b_ub,  lower <= x <= upper.
/// Empty lower/upper mean x >= 0 and no upper bound.
struct LinearProgram {
  Vector c;
  Matrix A_eq;
  Vector b_eq;
  Matrix A_ub;
  Vector b_ub;
  Vector lower;
  Vector upper;
};

enum class LpStatus { optimal, infeasible, unbounded };

enum class PivotRule {
  bland,     // lowest-index entering column
  dantzig,   // most negative reduced cost, Bland after a run of degenerate pivots
};

struct LpOptions {
  PivotRule rule = PivotRule::bland;
  double tol = 1e-9;
  long max_pivots = 1'000'000;
};

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Vector x;
  double objective = 0.0;
  long pivots = 0;
};

LpResult lp_solve(const LinearProgram& lp, const LpOptions& options = {});

const char* to_string(LpStatus status);

}  // namespace sparsereg::lp
