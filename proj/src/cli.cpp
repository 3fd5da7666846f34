#include "sparsereg/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "sparsereg/baselines.hpp"
#include "sparsereg/combinatorics.hpp"
#include "sparsereg/numlin.hpp"
#include "sparsereg/planted.hpp"
#include "sparsereg/robust_reg.hpp"
#include "sparsereg/sparse_pca.hpp"
#include "sparsereg/sparse_reg.hpp"

namespace sparsereg::cli {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::certified: return "certified";
    case Verdict::uncertified: return "uncertified";
    case Verdict::violated: return "violated";
  }
  return "unknown";
}

OracleMode parse_oracle(const std::string& s) {
  if (s == "on") return OracleMode::on;
  if (s == "off") return OracleMode::off;
  if (s == "auto") return OracleMode::automatic;
  throw ContractError("unknown oracle mode '" + s + "' (expected on, off or auto)");
}

ann::AnnBackend parse_backend(const std::string& s) {
  if (s == "exact") return ann::AnnBackend::exact;
  if (s == "hashed") return ann::AnnBackend::hashed;
  throw ContractError("unknown backend '" + s + "' (expected exact or hashed)");
}

// ---------------------------------------------------------------- json io

Json matrix_to_json(const Matrix& A) {
  Json rows = Json::array();
  for (Index i = 0; i < A.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < A.cols(); ++j) row.push_back(A(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& rows) {
  require(rows.is_array(), "matrix must be an array of rows");
  const auto n = static_cast<Index>(rows.size());
  const Index d = n ? static_cast<Index>(rows[0].size()) : 0;
  Matrix A(n, d);
  for (Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    require(row.is_array() && static_cast<Index>(row.size()) == d, "matrix rows must be arrays of equal length");
    for (Index j = 0; j < d; ++j) {
      require(row[static_cast<std::size_t>(j)].is_number(), "matrix entries must be numbers");
      A(i, j) = row[static_cast<std::size_t>(j)].get<double>();
      require(std::isfinite(A(i, j)), "matrix entries must be finite");
    }
  }
  return A;
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Vector vector_from_json(const Json& v) {
  require(v.is_array(), "vector must be an array");
  Vector out(static_cast<Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    require(v[i].is_number(), "vector entries must be numbers");
    out[static_cast<Index>(i)] = v[i].get<double>();
    require(std::isfinite(out[static_cast<Index>(i)]), "vector entries must be finite");
  }
  return out;
}

Json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ContractError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ContractError(path.string() + ": " + e.what());
  }
}

void save_json(const std::filesystem::path& path, const Json& value) {
  std::ofstream out(path);
  if (!out) throw ContractError("cannot write " + path.string());
  out << value.dump(2) << '\n';
}

WeightedGraph graph_from_json(const Json& p) {
  WeightedGraph g;
  g.vertices = p.at("vertices").get<int>();
  for (const auto& e : p.at("edges")) {
    require(e.is_array() && (e.size() == 2 || e.size() == 3), "edges are [u, v] or [u, v, weight]");
    g.edges.push_back({e[0].get<int>(), e[1].get<int>(), e.size() == 3 ? e[2].get<long>() : 1L});
  }
  return g;
}

reductions::ExactCoverInstance exact_cover_from_json(const Json& p) {
  reductions::ExactCoverInstance inst;
  inst.universe = p.at("universe").get<int>();
  inst.sets = p.at("sets").get<std::vector<std::vector<int>>>();
  return inst;
}

reductions::Max3LinInstance max3lin_from_json(const Json& p) {
  reductions::Max3LinInstance inst;
  inst.variables = p.at("variables").get<int>();
  inst.bound = p.value("bound", 0.0);
  for (const auto& e : p.at("equations")) {
    require(e.is_array() && e.size() == 4, "equations are [i1, i2, i3, rhs]");
    inst.equations.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<int>(), e[3].get<double>()});
  }
  return inst;
}

// ---------------------------------------------------------------- schema

namespace {

void need(const Json& obj, const char* key, bool ok_type, const std::string& what) {
  require(obj.contains(key), std::string("payload is missing '") + key + "'");
  require(ok_type, std::string("payload field '") + key + "' must be " + what);
}

void check_ab(const Json& p) {
  need(p, "A", p.contains("A") && p["A"].is_array(), "an array of rows");
  need(p, "b", p.contains("b") && p["b"].is_array(), "an array");
  const Matrix A = matrix_from_json(p["A"]);
  const Vector b = vector_from_json(p["b"]);
  require(A.rows() == b.size(), "payload: A has " + std::to_string(A.rows()) + " rows but b has " +
                                     std::to_string(b.size()) + " entries");
  if (p.contains("planted_x")) {
    require(vector_from_json(p["planted_x"]).size() == A.cols(), "payload: planted_x length must equal A's columns");
  }
}

}  // namespace

void validate_instance(const Json& inst) {
  require(inst.is_object(), "instance must be a JSON object");
  require(inst.contains("kind") && inst["kind"].is_string(), "instance is missing the string field 'kind'");
  require(inst.contains("seed") && inst["seed"].is_number_unsigned(), "instance is missing the integer field 'seed'");
  require(inst.contains("payload") && inst["payload"].is_object(), "instance is missing the object 'payload'");
  const auto kind = inst["kind"].get<std::string>();
  const auto& p = inst["payload"];
  if (kind == "sparse_reg") {
    check_ab(p);
    need(p, "k", p.contains("k") && p["k"].is_number_integer(), "an integer");
    need(p, "eps", p.contains("eps") && p["eps"].is_number(), "a number");
  } else if (kind == "robust_reg" || kind == "max3lin") {
    if (kind == "robust_reg") {
      check_ab(p);
      need(p, "k", p.contains("k") && p["k"].is_number_integer(), "an integer");
    } else {
      need(p, "variables", p.contains("variables") && p["variables"].is_number_integer(), "an integer");
      need(p, "equations", p.contains("equations") && p["equations"].is_array(), "an array");
      reductions::max3lin_system(max3lin_from_json(p), 0);
    }
  } else if (kind == "sparse_pca") {
    need(p, "A", p.contains("A") && p["A"].is_array(), "an array of rows");
    need(p, "k", p.contains("k") && p["k"].is_number_integer(), "an integer");
    const Matrix A = matrix_from_json(p["A"]);
    require(A.rows() == A.cols(), "payload: sparse_pca A must be square");
  } else if (kind == "exact_cover") {
    need(p, "universe", p.contains("universe") && p["universe"].is_number_integer(), "an integer");
    need(p, "sets", p.contains("sets") && p["sets"].is_array(), "an array of arrays");
    const auto ec = exact_cover_from_json(p);
    for (const auto& s : ec.sets)
      for (int e : s) require(e >= 0 && e < ec.universe, "payload: set element outside the universe");
  } else if (kind == "graph") {
    need(p, "vertices", p.contains("vertices") && p["vertices"].is_number_integer(), "an integer");
    need(p, "edges", p.contains("edges") && p["edges"].is_array(), "an array");
    need(p, "k", p.contains("k") && p["k"].is_number_integer(), "an integer");
    need(p, "W", p.contains("W") && p["W"].is_number_integer(), "an integer");
    const auto g = graph_from_json(p);
    require(g.vertices % p["k"].get<int>() == 0, "payload: vertices must be a multiple of k");
  } else {
    throw ContractError("unknown instance kind '" + kind + "'");
  }
}

// ---------------------------------------------------------------- generators

namespace {

using Rng = std::mt19937_64;

Matrix gaussian(Index n, Index d, Rng& rng) {
  std::normal_distribution<double> g;
  Matrix A(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < d; ++j) A(i, j) = g(rng);
  return A;
}

std::vector<Index> random_subset(Index n, Index k, Rng& rng) {
  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(static_cast<std::size_t>(k));
  std::sort(idx.begin(), idx.end());
  return idx;
}

int pick(int value, int fallback) { return value >= 0 ? value : fallback; }
double pick(double value, double fallback) { return value >= 0.0 ? value : fallback; }

Json make_file(const std::string& kind, std::uint64_t seed, Json payload, const std::string& generator) {
  return Json{{"kind", kind}, {"seed", seed}, {"payload", std::move(payload)}, {"metadata", {{"generator", generator}}}};
}

/// Exactly one k-sparse {0,1} vector solves A x = b.
bool unique_binary_solution(const Matrix& A, const Vector& b, int k) {
  int hits = 0;
  for (int s = 0; s <= k; ++s) {
    for_each_combination(A.cols(), s, [&](const std::vector<Index>& T) {
      Vector sum = Vector::Zero(A.rows());
      for (Index j : T) sum += A.col(j);
      if (sum == b) ++hits;
    });
  }
  return hits == 1;
}

Json gen_sparse_reg(const GenParams& p, std::uint64_t seed) {
  Rng rng(seed);
  const int n = pick(p.n, 16);
  const int d = pick(p.d, p.preset == "alphabet" ? 14 : 10);
  const int k = pick(p.k, p.preset == "alphabet" ? 4 : 2);
  require(n >= 1 && d >= 1 && k >= 1 && k <= d, "gen sparse_reg: need n, d >= 1 and 1 <= k <= d");
  Json payload;
  if (p.preset == "alphabet") {
    std::uniform_int_distribution<int> entry(-3, 3);
    for (int attempt = 0;; ++attempt) {
      require(attempt < 1000, "gen sparse_reg: no instance with a unique planted solution");
      Matrix A(n, d);
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < d; ++j) A(i, j) = entry(rng);
      Vector x = Vector::Zero(d);
      for (Index j : random_subset(d, k, rng)) x[j] = 1.0;
      const Vector b = A * x;
      if (!unique_binary_solution(A, b, k)) continue;
      payload = {{"A", matrix_to_json(A)}, {"b", vector_to_json(b)}, {"k", k}, {"eps", pick(p.eps, 0.1)},
                 {"planted_x", vector_to_json(x)}, {"alphabet", Json::array({1.0})}};
      break;
    }
  } else {
    const Matrix A = gaussian(n, d, rng);
    std::uniform_real_distribution<double> mag(1.0, 2.0);
    std::bernoulli_distribution sign;
    Vector x = Vector::Zero(d);
    for (Index j : random_subset(d, k, rng)) x[j] = (sign(rng) ? 1.0 : -1.0) * mag(rng);
    payload = {{"A", matrix_to_json(A)}, {"b", vector_to_json(A * x)}, {"k", k}, {"eps", pick(p.eps, 0.1)},
               {"planted_x", vector_to_json(x)}};
  }
  return make_file("sparse_reg", seed, std::move(payload), "planted k-sparse x, b = A x");
}

Json gen_robust_reg(const GenParams& p, std::uint64_t seed) {
  if (p.preset == "counterexample") {
    Matrix A(4, 2);
    A << 1, 0, 1, 1, 1, 2, 1, 3;
    Vector b(4);
    b << 10, 0, 0, 0;
    Json payload = {{"A", matrix_to_json(A)}, {"b", vector_to_json(b)}, {"k", 1}, {"eps", pick(p.eps, 1e-3)},
                    {"delta", 0.0}};
    return make_file("robust_reg", seed, std::move(payload), "points (0,10),(1,0),(2,0),(3,0) as rows [1, x]");
  }
  const bool lp = p.preset == "planted_lp";
  Rng rng(seed);
  const int n = pick(p.n, lp ? 60 : 14);
  const int d = pick(p.d, lp ? 4 : 3);
  const int k = pick(p.k, lp ? 5 : 2);
  require(n >= 1 && d >= 1 && k >= 0 && k <= n, "gen robust_reg: need n, d >= 1 and 0 <= k <= n");
  const Matrix A = gaussian(n, d, rng);
  const Vector x = gaussian(d, 1, rng).col(0);
  Vector b = A * x;
  const auto rows = random_subset(n, k, rng);
  for (Index i : rows) b[i] += p.magnitude;
  Json payload = {{"A", matrix_to_json(A)}, {"b", vector_to_json(b)}, {"k", k}, {"eps", pick(p.eps, 1e-3)},
                  {"delta", 0.0}, {"planted_x", vector_to_json(x)}, {"corrupted", rows}};
  return make_file("robust_reg", seed, std::move(payload), "b = A x* with k entries shifted by the magnitude");
}

Json gen_sparse_pca(const GenParams& p, std::uint64_t seed) {
  const bool alphabet = p.preset == "alphabet";
  Rng rng(seed);
  const int n = pick(p.n, alphabet ? 7 : 8);
  const int r = pick(p.r, 4);
  require(n >= 1 && r >= 1, "gen sparse_pca: need n, r >= 1");
  const Matrix B = gaussian(r, n, rng);
  const Matrix A = B.transpose() * B;
  Json payload = {{"A", matrix_to_json(A)}, {"k", pick(p.k, 2)},      {"eps", pick(p.eps, 0.25)},
                  {"L", pick(p.L, 1)},      {"repeats", 10},          {"rank", std::min(n, r)},
                  {"mode", alphabet ? "alphabet" : "continuous"}};
  return make_file("sparse_pca", seed, std::move(payload), "A = B^T B with Gaussian B (r x n)");
}

Json gen_exact_cover(const GenParams& p, std::uint64_t seed) {
  if (p.preset == "trivial") {
    return make_file("exact_cover", seed, Json{{"universe", 1}, {"sets", Json::array({Json::array({0})})}},
                     "universe {0}, sets {{0}}");
  }
  Rng rng(seed);
  const int x = pick(p.n, 4);
  const int s = pick(p.d, 4);
  require(x >= 1 && x <= 64 && s >= 1, "gen exact_cover: need 1 <= universe <= 64 and at least one set");
  std::bernoulli_distribution coin;
  Json sets = Json::array();
  for (int i = 0; i < s; ++i) {
    Json set = Json::array();
    for (int e = 0; e < x; ++e)
      if (coin(rng)) set.push_back(e);
    sets.push_back(std::move(set));
  }
  return make_file("exact_cover", seed, Json{{"universe", x}, {"sets", std::move(sets)}}, "independent fair coins");
}

Json gen_graph(const GenParams& p, std::uint64_t seed) {
  if (p.preset == "triangle") {
    Json payload = {{"vertices", 3},
                    {"edges", Json::array({Json::array({0, 1, 1}), Json::array({0, 2, 1}), Json::array({1, 2, 1})})},
                    {"k", 3},
                    {"W", p.W >= 0 ? p.W : 3L}};
    return make_file("graph", seed, std::move(payload), "unit-weight triangle");
  }
  Rng rng(seed);
  const int N = pick(p.n, 6);
  const int k = pick(p.k, 3);
  require(k >= 1 && N >= k && N % k == 0, "gen graph: vertices must be a positive multiple of k");
  std::bernoulli_distribution coin(0.6);
  std::uniform_int_distribution<long> weight(1, 3);
  Json edges = Json::array();
  for (int u = 0; u < N; ++u)
    for (int v = u + 1; v < N; ++v)
      if (coin(rng)) edges.push_back(Json::array({u, v, weight(rng)}));
  Json payload = {{"vertices", N}, {"edges", std::move(edges)}, {"k", k}, {"W", p.W >= 0 ? p.W : 2L * k}};
  return make_file("graph", seed, std::move(payload), "G(N, 0.6) with weights in {1,2,3}");
}

Json gen_max3lin(const GenParams& p, std::uint64_t seed) {
  Rng rng(seed);
  const int m = pick(p.n, 8);
  const int vars = pick(p.d, 5);
  const double eps = pick(p.eps, 0.125);
  require(vars >= 3 && m >= 1, "gen max3lin: need at least 3 variables and one equation");
  std::uniform_int_distribution<int> val(-2, 2);
  std::vector<int> assign(static_cast<std::size_t>(vars));
  for (int& a : assign) a = val(rng);
  Json eqs = Json::array();
  const auto broken = random_subset(m, static_cast<Index>(std::floor(eps * m)), rng);
  double bound = 0.0;
  for (int i = 0; i < m; ++i) {
    const auto v = random_subset(vars, 3, rng);
    std::vector<Index> order(v.begin(), v.end());
    std::shuffle(order.begin(), order.end(), rng);
    double rhs = assign[static_cast<std::size_t>(order[0])] + assign[static_cast<std::size_t>(order[1])] -
                 assign[static_cast<std::size_t>(order[2])];
    if (std::binary_search(broken.begin(), broken.end(), static_cast<Index>(i))) rhs += 1.0;
    bound = std::max(bound, std::abs(rhs));
    eqs.push_back(Json::array({order[0], order[1], order[2], rhs}));
  }
  Json payload = {{"variables", vars}, {"bound", bound}, {"equations", std::move(eqs)}, {"eps", eps}, {"delta", 0.0},
                  {"broken", broken}};
  return make_file("max3lin", seed, std::move(payload), "planted integer assignment, floor(eps m) equations shifted");
}

}  // namespace

Json generate(const std::string& kind, const GenParams& params, std::uint64_t seed) {
  if (kind == "sparse_reg") return gen_sparse_reg(params, seed);
  if (kind == "robust_reg") return gen_robust_reg(params, seed);
  if (kind == "sparse_pca") return gen_sparse_pca(params, seed);
  if (kind == "exact_cover") return gen_exact_cover(params, seed);
  if (kind == "graph") return gen_graph(params, seed);
  if (kind == "max3lin") return gen_max3lin(params, seed);
  throw ContractError("unknown instance kind '" + kind + "'");
}

// ---------------------------------------------------------------- reports

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

Json number_or_null(double v) { return std::isnan(v) ? Json(nullptr) : Json(v); }

}  // namespace

Json RunReport::to_json() const {
  return Json{{"instance_id", instance_id},
              {"kind", kind},
              {"solver", solver},
              {"n", n},
              {"d", d},
              {"k", k},
              {"eps", eps},
              {"candidates", candidates},
              {"residual", number_or_null(residual)},
              {"value", number_or_null(value)},
              {"wall_ms", wall_ms},
              {"verdict", to_string(verdict)},
              {"support", support},
              {"note", note}};
}

std::string csv_header() { return "instance_id,solver,n,d,k,eps,candidates,residual,value,wall_ms,verdict\n"; }

std::string RunReport::csv_row() const {
  std::ostringstream os;
  os << csv_field(instance_id) << ',' << csv_field(solver) << ',' << n << ',' << d << ',' << k << ',' << fmt(eps)
     << ',' << candidates << ',' << fmt(residual) << ',' << fmt(value) << ',' << fmt(wall_ms) << ','
     << to_string(verdict) << '\n';
  return os.str();
}

std::vector<std::string> solvers_for(const std::string& kind) {
  if (kind == "sparse_reg") return {"alg1", "recover", "finite_alphabet", "brute"};
  if (kind == "robust_reg") return {"alg3", "greedy", "greedy_refit", "altmin", "planted_lp", "decision", "brute"};
  if (kind == "sparse_pca") return {"alg4", "alg5", "brute", "brute_alphabet"};
  if (kind == "exact_cover") return {"decision", "brute"};
  if (kind == "graph") return {"gadget", "gadget_robust", "brute"};
  if (kind == "max3lin") return {"alg3", "greedy", "decision", "brute"};
  throw ContractError("unknown instance kind '" + kind + "'");
}

std::string default_solver(const std::string& kind) {
  if (kind == "sparse_pca") return "alg4";
  if (kind == "robust_reg" || kind == "max3lin") return "alg3";
  if (kind == "sparse_reg") return "alg1";
  if (kind == "graph") return "gadget";
  return solvers_for(kind).front();
}

// ---------------------------------------------------------------- dispatch

namespace {

bool run_oracle(OracleMode mode, double work) {
  if (mode == OracleMode::on) return true;
  if (mode == OracleMode::off) return false;
  return work <= kDeskScale;
}

double rel_tol(const Vector& b) { return 1e-9 * std::max(1.0, b.norm()); }

struct Context {
  const Json& payload;
  const SolveOptions& opt;
  std::uint64_t seed;
  RunReport& rep;

  int k(int fallback) const { return opt.k.value_or(payload.value("k", fallback)); }
  double eps(double fallback) const { return opt.eps.value_or(payload.value("eps", fallback)); }
};

/// Some split of the planted support has both halves within the net radius.
bool planted_halves_fit(const Matrix& A, const Vector& x, double radius) {
  std::vector<Index> supp;
  for (Index i = 0; i < x.size(); ++i)
    if (x[i] != 0.0) supp.push_back(i);
  const auto s = static_cast<Index>(supp.size());
  bool ok = false;
  for_each_combination(s, (s + 1) / 2, [&](const std::vector<Index>& left) {
    Vector l = Vector::Zero(x.size());
    for (Index p : left) l[supp[static_cast<std::size_t>(p)]] = x[supp[static_cast<std::size_t>(p)]];
    const Vector r = x - l;
    if ((A * l).norm() <= radius * (1 + 1e-12) && (A * r).norm() <= radius * (1 + 1e-12)) ok = true;
  });
  return ok;
}

void solve_sparse_reg(const Context& cx, const std::string& solver) {
  auto& rep = cx.rep;
  sparse_reg::SparseRegInstance inst;
  inst.A = matrix_from_json(cx.payload.at("A"));
  inst.b = vector_from_json(cx.payload.at("b"));
  inst.k = cx.k(2);
  inst.eps = cx.eps(0.1);
  inst.c = cx.opt.c.value_or(cx.payload.value("c", 1.0));
  if (cx.payload.contains("net_radius")) inst.net_radius = cx.payload["net_radius"].get<double>();
  sparse_reg::SolverOptions so;
  so.backend = cx.opt.backend.value_or(ann::AnnBackend::exact);
  rep.n = inst.A.rows();
  rep.d = inst.A.cols();
  rep.k = inst.k;
  rep.eps = inst.eps;
  std::optional<Vector> planted;
  if (cx.payload.contains("planted_x")) planted = vector_from_json(cx.payload["planted_x"]);

  const double supports = static_cast<double>(binomial(inst.A.cols(), std::min<Index>(inst.k, inst.A.cols())));
  const bool oracle = run_oracle(cx.opt.oracle, supports);
  std::optional<baselines::BruteSparse> brute;
  auto get_brute = [&]() -> const baselines::BruteSparse& {
    if (!brute) brute = baselines::brute_sparse_reg(inst.A, inst.b, inst.k);
    return *brute;
  };
  const double bnorm = inst.b.norm();

  if (solver == "brute") {
    const auto& br = get_brute();
    rep.residual = br.residual;
    rep.value = br.residual;
    rep.support = br.x.support;
    rep.candidates = static_cast<std::uint64_t>(supports);
    rep.verdict = Verdict::certified;
    return;
  }
  if (solver == "finite_alphabet") {
    std::vector<double> alphabet = cx.payload.value("alphabet", std::vector<double>{1.0});
    const auto res = sparse_reg::solve_finite_alphabet(inst.A, inst.b, inst.k, alphabet);
    rep.support = res.x.support;
    rep.candidates = res.table_size;
    rep.residual = (inst.A * res.x.dense() - inst.b).norm();
    if (planted) {
      rep.verdict = res.x.dense() == *planted ? Verdict::certified : Verdict::violated;
      if (rep.verdict == Verdict::violated) rep.note = "recovered vector differs from planted_x";
    } else {
      rep.verdict = rep.residual == 0.0 ? Verdict::certified : Verdict::uncertified;
    }
    return;
  }
  if (solver == "recover") {
    const auto res = sparse_reg::recover_sparse_vector(inst, cx.seed, sparse_reg::KappaMode::full, so);
    rep.support = res.z.support;
    rep.residual = res.residual;
    rep.candidates = res.stats.candidates;
    if (planted) {
      const double err = (res.z.dense() - *planted).norm();
      rep.value = err;
      rep.verdict = err <= inst.eps ? Verdict::certified : Verdict::uncertified;
      if (err > inst.eps) rep.note = "||z - x|| exceeds eps";
    }
    return;
  }
  if (solver != "alg1") throw ContractError("unknown solver '" + solver + "' for sparse_reg");

  const auto res = sparse_reg::solve_sparse_regression(inst, cx.seed, so);
  rep.support = res.z.support;
  rep.residual = res.residual;
  rep.candidates = res.stats.candidates;
  const double bound = inst.eps * bnorm + rel_tol(inst.b);
  const double radius = inst.net_radius.value_or(2.0 * bnorm);
  bool hypothesis = false;
  if (planted) {
    hypothesis = (inst.A * *planted - inst.b).norm() <= rel_tol(inst.b) && planted_halves_fit(inst.A, *planted, radius);
  }
  if (oracle) {
    const auto& br = get_brute();
    rep.value = br.residual;
    if (res.residual < br.residual - rel_tol(inst.b)) {
      rep.verdict = Verdict::violated;
      rep.note = "residual below the exhaustive minimum";
      return;
    }
    if (!planted && br.residual <= rel_tol(inst.b)) hypothesis = planted_halves_fit(inst.A, br.x.dense(), radius);
  }
  if (res.residual <= bound) {
    rep.verdict = Verdict::certified;
  } else if (hypothesis && so.backend == ann::AnnBackend::exact) {
    rep.verdict = Verdict::violated;
    rep.note = "planted guarantee missed with the exact backend";
  } else {
    rep.verdict = Verdict::uncertified;
  }
}

robust_reg::RobustInstance robust_from(const Context& cx, const std::string& kind) {
  robust_reg::RobustInstance inst;
  if (kind == "max3lin") {
    const auto m = max3lin_from_json(cx.payload);
    const double eps = cx.payload.value("eps", 0.0);
    inst = cx.opt.k ? reductions::max3lin_system(m, *cx.opt.k)
                    : (eps * static_cast<double>(m.equations.size()) >= 1.0 ? reductions::max3lin_to_robust(m, eps)
                                                                            : reductions::max3lin_system(m, 0));
    inst.eps = cx.opt.eps.value_or(1e-3);
  } else {
    inst.A = matrix_from_json(cx.payload.at("A"));
    inst.b = vector_from_json(cx.payload.at("b"));
    inst.k = cx.k(0);
    inst.eps = cx.eps(1e-3);
  }
  inst.delta = cx.payload.value("delta", 0.0);
  return inst;
}

void fill_robust(RunReport& rep, const robust_reg::RobustSolution& s) {
  rep.residual = s.residual;
  rep.support = s.ignored_rows();
}

void solve_robust(const Context& cx, const std::string& kind, const std::string& solver) {
  auto& rep = cx.rep;
  const auto inst = robust_from(cx, kind);
  rep.n = inst.A.rows();
  rep.d = inst.A.cols();
  rep.k = inst.k;
  rep.eps = inst.eps;
  const double masks = static_cast<double>(binomial(inst.A.rows(), inst.k));
  const bool oracle = run_oracle(cx.opt.oracle, masks);
  std::optional<robust_reg::RobustSolution> brute;
  if (oracle) {
    if (masks > baselines::kBruteCap) {
      rep.note = "oracle skipped: mask enumeration exceeds the cap";
    } else {
      brute = baselines::brute_robust_reg(inst.A, inst.b, inst.k);
      rep.value = brute->residual;
    }
  }
  const double tol = rel_tol(inst.b);
  std::optional<std::vector<Index>> corrupted;
  if (cx.payload.contains("corrupted")) corrupted = cx.payload["corrupted"].get<std::vector<Index>>();
  if (kind == "max3lin" && cx.payload.contains("broken")) corrupted = cx.payload["broken"].get<std::vector<Index>>();
  // zero-loss hypothesis: known from the generator or from the oracle
  bool zero_loss = brute && brute->residual <= tol;
  if (!brute && corrupted && static_cast<int>(corrupted->size()) <= inst.k && kind == "robust_reg") zero_loss = true;

  auto baseline_verdict = [&](double residual) {
    if (brute && residual < brute->residual - tol) {
      rep.note = "loss below the exhaustive minimum";
      return Verdict::violated;
    }
    return brute ? Verdict::certified : Verdict::uncertified;
  };

  if (solver == "brute") {
    if (!brute) brute = baselines::brute_robust_reg(inst.A, inst.b, inst.k);
    fill_robust(rep, *brute);
    rep.value = brute->residual;
    rep.candidates = static_cast<std::uint64_t>(masks);
    rep.verdict = Verdict::certified;
  } else if (solver == "decision") {
    const bool yes = robust_reg::robust_decision(inst);
    rep.value = yes ? 1.0 : 0.0;
    rep.candidates = static_cast<std::uint64_t>(masks);
    rep.verdict = Verdict::certified;
  } else if (solver == "greedy" || solver == "greedy_refit") {
    const auto s = baselines::greedy_robust(inst, solver == "greedy_refit");
    fill_robust(rep, s);
    rep.verdict = baseline_verdict(s.residual);
  } else if (solver == "altmin") {
    auto init = robust_reg::make_mask(inst.A.rows(), {}, inst.k);
    const auto trace = baselines::altmin_robust(inst, init, 5);
    fill_robust(rep, trace.final);
    rep.candidates = trace.iterations.size();
    rep.verdict = baseline_verdict(trace.final.residual);
    rep.note = trace.converged ? "mask fixpoint" : "iteration cap";
  } else if (solver == "planted_lp") {
    try {
      const auto res = planted::solve_planted_robust({inst.A, inst.b, inst.k});
      fill_robust(rep, res.solution);
      rep.candidates = static_cast<std::uint64_t>(inst.A.rows());
      const bool small = res.solution.residual <= 1e-6 * std::max(1.0, inst.b.norm());
      rep.verdict = small ? Verdict::certified : Verdict::uncertified;
      if (corrupted && small) {
        auto got = res.solution.ignored_rows();
        if (static_cast<int>(corrupted->size()) == inst.k && got != *corrupted) rep.note = "mask differs from the corruption set";
      }
    } catch (const RecoveryFailed& e) {
      rep.verdict = Verdict::uncertified;
      rep.note = e.what();
    }
  } else if (solver == "alg3") {
    sparse_reg::SolverOptions so;
    so.backend = cx.opt.backend.value_or(ann::AnnBackend::exact);
    const auto res = robust_reg::solve_robust_regression(inst, cx.seed, so);
    fill_robust(rep, res.solution);
    rep.candidates = res.stats.candidates;
    const double bound = inst.eps * inst.b.norm() + tol;
    if (brute && res.solution.residual < brute->residual - tol) {
      rep.verdict = Verdict::violated;
      rep.note = "loss below the exhaustive minimum";
    } else if (res.solution.residual <= bound) {
      rep.verdict = Verdict::certified;
    } else {
      // the zero-loss guarantee also needs the planted halves inside the net radius
      rep.verdict = Verdict::uncertified;
      if (zero_loss) rep.note = "zero-loss instance but residual above eps ||b||";
    }
  } else {
    throw ContractError("unknown solver '" + solver + "' for " + kind);
  }
}

void solve_pca(const Context& cx, const std::string& solver) {
  auto& rep = cx.rep;
  sparse_pca::PcaInstance inst;
  inst.A = matrix_from_json(cx.payload.at("A"));
  inst.k = cx.k(2);
  inst.eps = cx.eps(0.25);
  inst.L = cx.payload.value("L", 1);
  inst.repeats = cx.opt.repeats.value_or(cx.payload.value("repeats", 10));
  rep.n = inst.A.rows();
  rep.d = inst.A.cols();
  rep.k = inst.k;
  rep.eps = inst.eps;
  const Index n = inst.A.rows();
  const double scale = std::max(1.0, inst.A.cwiseAbs().maxCoeff());
  const bool alphabet = solver == "alg5" || solver == "brute_alphabet";
  const double work = static_cast<double>(binomial(n, std::min<Index>(inst.k, n))) *
                      (alphabet ? std::pow(2.0 * inst.L + 1.0, std::min<Index>(inst.k, n)) : 1.0);
  const bool oracle = run_oracle(cx.opt.oracle, work);
  std::optional<double> opt;
  if (oracle) {
    opt = alphabet ? baselines::brute_sparse_pca_alphabet(inst.A, inst.k, inst.L).value
                   : baselines::brute_sparse_pca(inst.A, inst.k).value;
  }
  auto report = [&](const sparse_pca::PcaSolution& s) {
    rep.value = s.value;
    rep.support = s.u.support;
  };

  if (solver == "brute" || solver == "brute_alphabet") {
    const auto s = alphabet ? baselines::brute_sparse_pca_alphabet(inst.A, inst.k, inst.L)
                            : baselines::brute_sparse_pca(inst.A, inst.k);
    report(s);
    rep.candidates = static_cast<std::uint64_t>(work);
    rep.verdict = Verdict::certified;
    return;
  }
  if (solver == "alg4") {
    const auto res = sparse_pca::solve_sparse_pca(inst, cx.seed);
    report(res.solution);
    rep.candidates = res.stats.candidates;
    const auto& s = res.solution;
    if (static_cast<int>(s.u.nnz()) > inst.k || (inst.k > 0 && std::abs(s.norm - 1.0) > 1e-9)) {
      rep.verdict = Verdict::violated;
      rep.note = "output is not a unit k-sparse vector";
    } else if (opt && s.value > *opt + 1e-9 * scale) {
      rep.verdict = Verdict::violated;
      rep.note = "value above the exhaustive maximum";
    } else if (opt && s.value >= (1.0 - inst.eps) * *opt - 1e-9 * scale) {
      rep.verdict = Verdict::certified;
    } else {
      rep.verdict = Verdict::uncertified;
    }
    return;
  }
  if (solver != "alg5") throw ContractError("unknown solver '" + solver + "' for sparse_pca");
  inst.backend = sparse_pca::GeometryBackend::exact;
  const auto res = sparse_pca::solve_sparse_pca_alphabet(inst, cx.seed);
  report(res.solution);
  rep.candidates = res.stats.candidates;
  bool integral = static_cast<int>(res.solution.u.nnz()) <= inst.k;
  for (double v : res.solution.u.values) integral = integral && v == std::round(v) && std::abs(v) <= 2.0 * inst.L;
  if (!integral) {
    rep.verdict = Verdict::violated;
    rep.note = "entries outside {-2L..2L} or too many nonzeros";
  } else if (opt) {
    rep.verdict = res.solution.value >= (1.0 - inst.eps) * *opt - 1e-9 * scale ? Verdict::certified : Verdict::violated;
  }
}

void solve_exact_cover(const Context& cx, const std::string& solver) {
  auto& rep = cx.rep;
  const auto ec = exact_cover_from_json(cx.payload);
  const auto inst = reductions::exact_cover_to_robust(ec);
  rep.n = inst.A.rows();
  rep.d = inst.A.cols();
  rep.k = inst.k;
  const bool oracle = run_oracle(cx.opt.oracle, std::ldexp(1.0, static_cast<int>(ec.sets.size())));
  if (solver == "brute") {
    rep.value = baselines::brute_exact_cover(ec.universe, ec.sets) ? 1.0 : 0.0;
    rep.candidates = static_cast<std::uint64_t>(std::ldexp(1.0, static_cast<int>(ec.sets.size())));
    rep.verdict = Verdict::certified;
    return;
  }
  if (solver != "decision") throw ContractError("unknown solver '" + solver + "' for exact_cover");
  const auto best = baselines::brute_robust_reg(inst.A, inst.b, inst.k);
  const bool yes = best.residual <= 1e-9;
  rep.residual = best.residual;
  rep.value = yes ? 1.0 : 0.0;
  rep.support = best.ignored_rows();
  rep.candidates = binomial(inst.A.rows(), inst.k);
  if (oracle) {
    const bool truth = baselines::brute_exact_cover(ec.universe, ec.sets);
    rep.verdict = truth == yes ? Verdict::certified : Verdict::violated;
    if (truth != yes) rep.note = "reduction disagrees with the exhaustive cover search";
  }
}

void solve_graph(const Context& cx, const std::string& solver) {
  auto& rep = cx.rep;
  const auto g = graph_from_json(cx.payload);
  const int k = cx.k(3);
  const long W = cx.payload.at("W").get<long>();
  rep.k = k;
  const auto truth = baselines::brute_min_weight_block_clique(g, k);
  if (solver == "brute") {
    rep.n = g.vertices;
    rep.value = truth ? static_cast<double>(*truth) : std::numeric_limits<double>::quiet_NaN();
    rep.verdict = Verdict::certified;
    return;
  }
  reductions::CliqueGadgetOptions go;
  go.robust_mode = solver == "gadget_robust";
  if (solver != "gadget" && !go.robust_mode) throw ContractError("unknown solver '" + solver + "' for graph");
  const auto gadget = reductions::clique_gadget(g, k, W, go);
  rep.n = gadget.A.rows();
  rep.d = gadget.A.cols();
  double best = 0.0;
  if (go.robust_mode) {
    const auto s = baselines::brute_robust_reg(gadget.A, gadget.b, k);
    best = s.residual;
    rep.support = s.ignored_rows();
    rep.candidates = binomial(gadget.A.rows(), k);
  } else {
    const auto s = baselines::brute_sparse_reg(gadget.A, gadget.b, k);
    best = s.residual;
    rep.support = s.x.support;
    rep.candidates = binomial(gadget.A.cols(), k);
  }
  const bool yes = best <= gadget.delta() * (1.0 + 1e-6);
  rep.residual = best;
  rep.value = yes ? 1.0 : 0.0;
  const bool expected = truth && *truth <= W;
  rep.verdict = expected == yes ? Verdict::certified : Verdict::violated;
  if (expected != yes) rep.note = "gadget decision disagrees with the block clique search";
}

}  // namespace

RunReport solve(const Json& instance, const std::string& solver_in, const SolveOptions& options,
                const std::string& instance_id) {
  validate_instance(instance);
  const auto kind = instance["kind"].get<std::string>();
  const std::string solver = solver_in.empty() ? default_solver(kind) : solver_in;
  const auto known = solvers_for(kind);
  if (std::find(known.begin(), known.end(), solver) == known.end()) {
    throw ContractError("unknown solver '" + solver + "' for " + kind);
  }
  RunReport rep;
  rep.instance_id = instance_id;
  rep.kind = kind;
  rep.solver = solver;
  const Context cx{instance["payload"], options, options.seed.value_or(instance["seed"].get<std::uint64_t>()), rep};
  const auto start = std::chrono::steady_clock::now();
  if (kind == "sparse_reg") {
    solve_sparse_reg(cx, solver);
  } else if (kind == "robust_reg" || kind == "max3lin") {
    solve_robust(cx, kind, solver);
  } else if (kind == "sparse_pca") {
    solve_pca(cx, solver);
  } else if (kind == "exact_cover") {
    solve_exact_cover(cx, solver);
  } else {
    solve_graph(cx, solver);
  }
  rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::string bench(const Json& suite, const SolveOptions& options, const std::filesystem::path& base_dir,
                  bool* any_violated) {
  require(suite.is_object() && suite.contains("entries") && suite["entries"].is_array(),
          "suite must be an object with an 'entries' array");
  struct Job {
    std::string id;
    Json instance;
    std::vector<std::string> solvers;
  };
  std::vector<Job> jobs;
  for (const auto& e : suite["entries"]) {
    Job job;
    require(e.contains("instance"), "suite entry is missing 'instance'");
    if (e["instance"].is_string()) {
      const std::filesystem::path p = base_dir / e["instance"].get<std::string>();
      job.instance = load_json(p);
      job.id = e.value("id", p.stem().string());
    } else {
      job.instance = e["instance"];
      job.id = e.value("id", "entry" + std::to_string(jobs.size()));
    }
    validate_instance(job.instance);
    job.solvers = e.contains("solvers") ? e["solvers"].get<std::vector<std::string>>()
                                        : std::vector<std::string>{default_solver(job.instance["kind"].get<std::string>())};
    jobs.push_back(std::move(job));
  }
  std::stable_sort(jobs.begin(), jobs.end(), [](const Job& a, const Job& b) { return a.id < b.id; });

  std::vector<std::vector<RunReport>> reports(jobs.size());
  std::vector<std::string> errors(jobs.size());
  const auto count = static_cast<std::int64_t>(jobs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t j = 0; j < count; ++j) {
    const auto& job = jobs[static_cast<std::size_t>(j)];
    try {
      for (const auto& s : job.solvers) reports[static_cast<std::size_t>(j)].push_back(solve(job.instance, s, options, job.id));
    } catch (const std::exception& ex) {
      errors[static_cast<std::size_t>(j)] = job.id + ": " + ex.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw std::runtime_error("bench: " + e);

  std::string out = csv_header();
  bool violated = false;
  for (const auto& rs : reports) {
    for (const auto& r : rs) {
      out += r.csv_row();
      violated = violated || r.verdict == Verdict::violated;
    }
  }
  if (any_violated) *any_violated = violated;
  return out;
}

}  // namespace sparsereg::cli
