#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sparsereg/ann.hpp"
#include "sparsereg/common.hpp"
#include "sparsereg/graph.hpp"
#include "sparsereg/reductions.hpp"

/// Batch front-end: instance files, generators, solver dispatch with oracle
/// verdicts, and benchmark CSV.
namespace sparsereg::cli {

using Json = nlohmann::json;

inline const std::vector<std::string> kKinds = {"sparse_reg", "robust_reg", "sparse_pca",
                                                "exact_cover", "graph", "max3lin"};

enum class OracleMode { on, off, automatic };
enum class Verdict { certified, uncertified, violated };

const char* to_string(Verdict v);
OracleMode parse_oracle(const std::string& s);
ann::AnnBackend parse_backend(const std::string& s);

/// Brute-force work (least-squares solves or points) that `automatic` still runs.
inline constexpr double kDeskScale = 2e5;

/// Unset fields (negative) take per-kind defaults.
struct GenParams {
  std::string preset;
  int n = -1;
  int d = -1;
  int k = -1;
  int r = -1;
  int L = -1;
  double eps = -1.0;
  long W = -1;
  double magnitude = 10.0;
};

/// Deterministic per (kind, params, seed); throws ContractError on unknown kinds.
Json generate(const std::string& kind, const GenParams& params, std::uint64_t seed);

/// Throws ContractError describing the first schema problem.
void validate_instance(const Json& inst);

Json load_json(const std::filesystem::path& path);
void save_json(const std::filesystem::path& path, const Json& value);

Json matrix_to_json(const Matrix& A);
Matrix matrix_from_json(const Json& rows);
Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& v);
WeightedGraph graph_from_json(const Json& payload);
reductions::ExactCoverInstance exact_cover_from_json(const Json& payload);
reductions::Max3LinInstance max3lin_from_json(const Json& payload);

struct SolveOptions {
  std::optional<std::uint64_t> seed;
  std::optional<double> eps;
  std::optional<int> k;
  std::optional<double> c;
  std::optional<ann::AnnBackend> backend;
  std::optional<int> repeats;
  OracleMode oracle = OracleMode::automatic;
};

struct RunReport {
  std::string instance_id;
  std::string kind;
  std::string solver;
  Index n = 0;
  Index d = 0;
  int k = 0;
  double eps = 0.0;
  std::uint64_t candidates = 0;
  double residual = std::numeric_limits<double>::quiet_NaN();
  double value = std::numeric_limits<double>::quiet_NaN();
  double wall_ms = 0.0;
  Verdict verdict = Verdict::uncertified;
  std::vector<Index> support;  // support of z / u, or ignored rows
  std::string note;

  Json to_json() const;
  std::string csv_row() const;
};

std::vector<std::string> solvers_for(const std::string& kind);
std::string default_solver(const std::string& kind);

RunReport solve(const Json& instance, const std::string& solver, const SolveOptions& options,
                const std::string& instance_id = "inline");

std::string csv_header();

/// Suite: {"entries": [{"id", "instance" (object or path), "solvers" (optional)}]}.
/// Rows are ordered by instance id, then by solver order.
std::string bench(const Json& suite, const SolveOptions& options, const std::filesystem::path& base_dir,
                  bool* any_violated = nullptr);

}  // namespace sparsereg::cli
