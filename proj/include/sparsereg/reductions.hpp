#pragma once

#include <string>
#include <vector>

#include "sparsereg/common.hpp"
#include "sparsereg/graph.hpp"
#include "sparsereg/robust_reg.hpp"

/// Instance generators for the hardness reductions: exact cover and
/// MAX-3-LIN to robust regression, and the weighted-clique gadget.
namespace sparsereg::reductions {

/// Universe {0..universe-1}; each set lists its elements.
struct ExactCoverInstance {
  int universe = 0;
  std::vector<std::vector<int>> sets;
};

/// Rows 2i and 2i+1 encode y_i = 0 and y_i = 1, followed by one membership
/// row per universe element with target 1. Ignored count = |S|.
robust_reg::RobustInstance exact_cover_to_robust(const ExactCoverInstance& inst);

/// Textual form of the clique-gadget beta as printed, and as evaluated.
inline constexpr const char* kBetaRawFormula =
    "beta = sqrt(sum_w + 8W + alpha^2 Z) * max(8Z, 50(alpha^2 Z, + sum_w))";
inline constexpr const char* kBetaResolvedFormula =
    "beta = sqrt(sum_w + 8W + alpha^2 Z) * max(8Z, 50 * (alpha^2 Z + sum_w), 1)";

struct GadgetParams {
  double alpha = 0.0;
  double beta = 0.0;
  double delta = 0.0;
  long sum_w = 0;
  long non_edges = 0;  // Z
};

GadgetParams gadget_params(const WeightedGraph& g, long W);

/// beta with the stray comma resolved as alpha^2 Z + sum_w, guarded below by 1.
double build_beta(const WeightedGraph& g, int k, long W);

struct CliqueGadgetOptions {
  bool robust_mode = false;
  double penalty = 0.0;  // C-tilde; 0 means 1e3 * beta
};

struct CliqueGadget {
  Matrix A;
  Vector b;
  int k = 0;
  GadgetParams params;
  double penalty = 0.0;
  Index c_rows = 0;
  Index d_rows = 0;
  Index penalty_rows = 0;
  std::string beta_raw = kBetaRawFormula;
  std::string beta_resolved = kBetaResolvedFormula;

  double delta() const { return params.delta; }
};

/// Vertices are split into k consecutive blocks of N/k. C has one row per
/// unordered vertex pair (lexicographic), D one row per block.
CliqueGadget clique_gadget(const WeightedGraph& g, int k, long W, const CliqueGadgetOptions& options = {});

/// Equation x_{i1} + x_{i2} - x_{i3} = rhs (variables 0-based).
struct Max3LinEquation {
  int i1 = 0;
  int i2 = 0;
  int i3 = 0;
  double rhs = 0.0;
};

struct Max3LinInstance {
  int variables = 0;
  double bound = 0.0;  // |rhs| <= bound; 0 disables the check
  std::vector<Max3LinEquation> equations;
};

/// Coefficient rows (repeated indices accumulate), ignored count floor(eps * n).
robust_reg::RobustInstance max3lin_to_robust(const Max3LinInstance& inst, double eps);

/// Same matrix with an explicit ignored count.
robust_reg::RobustInstance max3lin_system(const Max3LinInstance& inst, int ignored);

}  // namespace sparsereg::reductions
