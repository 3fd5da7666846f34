#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "sparsereg/cli.hpp"

namespace sc = sparsereg::cli;

namespace {

struct Flags {
  std::uint64_t seed = 0;
  bool seed_set = false;
  double eps = -1.0;
  int k = -1;
  double c = -1.0;
  std::string backend;
  int repeats = -1;
  std::string oracle = "auto";
  std::string out;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--seed", f.seed, "64-bit seed for every random choice");
  cmd->add_option("--eps", f.eps, "accuracy parameter");
  cmd->add_option("--k", f.k, "sparsity / ignored-row count");
  cmd->add_option("--c", f.c, "ANN approximation factor");
  cmd->add_option("--backend", f.backend, "ANN backend")->check(CLI::IsMember({"exact", "hashed"}));
  cmd->add_option("--repeats", f.repeats, "random partitions for sparse PCA");
  cmd->add_option("--oracle", f.oracle, "run the brute-force oracle")->check(CLI::IsMember({"on", "off", "auto"}));
  cmd->add_option("--out", f.out, "output path (stdout when omitted)");
}

sc::SolveOptions solve_options(const Flags& f, const CLI::App* cmd) {
  sc::SolveOptions o;
  if (cmd->count("--seed")) o.seed = f.seed;
  if (f.eps > 0) o.eps = f.eps;
  if (f.k >= 0) o.k = f.k;
  if (f.c > 0) o.c = f.c;
  if (!f.backend.empty()) o.backend = sc::parse_backend(f.backend);
  if (f.repeats > 0) o.repeats = f.repeats;
  o.oracle = sc::parse_oracle(f.oracle);
  return o;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(out);
  if (!os) throw sparsereg::ContractError("cannot write " + out);
  os << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse, robust and PCA regression solvers with exhaustive certification"};
  app.require_subcommand(1);
  Flags f;

  auto* gen = app.add_subcommand("gen", "generate an instance file");
  std::string kind;
  sc::GenParams gp;
  gen->add_option("kind", kind, "instance kind")->required()->check(CLI::IsMember(sc::kKinds));
  gen->add_option("--preset", gp.preset,
                  "named instance: alphabet (sparse_reg, sparse_pca), counterexample or planted_lp (robust_reg), "
                  "trivial (exact_cover), triangle (graph)");
  gen->add_option("--n", gp.n, "rows / vertices / universe size / equations");
  gen->add_option("--d", gp.d, "columns / sets / variables");
  gen->add_option("--r", gp.r, "rank of the PCA matrix");
  gen->add_option("--L", gp.L, "alphabet bound for sparse PCA");
  gen->add_option("--W", gp.W, "clique weight threshold");
  gen->add_option("--magnitude", gp.magnitude, "corruption size for robust_reg");
  add_common(gen, f);

  auto* solve = app.add_subcommand("solve", "run one solver on an instance file");
  std::string path;
  std::string solver;
  solve->add_option("instance", path, "instance JSON")->required()->check(CLI::ExistingFile);
  solve->add_option("--solver", solver, "solver id (kind default when omitted)");
  add_common(solve, f);

  auto* verify = app.add_subcommand("verify", "run every solver of the instance kind with the oracle on");
  verify->add_option("instance", path, "instance JSON")->required()->check(CLI::ExistingFile);
  add_common(verify, f);

  auto* bench = app.add_subcommand("bench", "run a suite file and write CSV");
  bench->add_option("suite", path, "suite JSON")->required()->check(CLI::ExistingFile);
  add_common(bench, f);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      if (f.k >= 0) gp.k = f.k;
      if (f.eps > 0) gp.eps = f.eps;
      emit(sc::generate(kind, gp, f.seed).dump(2) + "\n", f.out);
      return 0;
    }
    if (solve->parsed()) {
      const auto inst = sc::load_json(path);
      const auto id = std::filesystem::path(path).stem().string();
      const auto rep = sc::solve(inst, solver, solve_options(f, solve), id);
      emit(rep.to_json().dump(2) + "\n", f.out);
      return rep.verdict == sc::Verdict::violated ? 1 : 0;
    }
    if (verify->parsed()) {
      const auto inst = sc::load_json(path);
      sc::validate_instance(inst);
      auto opts = solve_options(f, verify);
      if (!verify->count("--oracle")) opts.oracle = sc::OracleMode::on;
      const auto id = std::filesystem::path(path).stem().string();
      std::string text = sc::csv_header();
      bool violated = false;
      for (const auto& s : sc::solvers_for(inst["kind"].get<std::string>())) {
        try {
          const auto rep = sc::solve(inst, s, opts, id);
          text += rep.csv_row();
          violated = violated || rep.verdict == sc::Verdict::violated;
        } catch (const sparsereg::ContractError& e) {
          std::cerr << "skip " << s << ": " << e.what() << '\n';
        } catch (const sparsereg::InfeasibleError& e) {
          std::cerr << "skip " << s << ": " << e.what() << '\n';
        } catch (const sparsereg::DomainError& e) {
          std::cerr << "skip " << s << ": " << e.what() << '\n';
        }
      }
      emit(text, f.out);
      return violated ? 1 : 0;
    }
    const auto suite = sc::load_json(path);
    bool violated = false;
    const auto csv = sc::bench(suite, solve_options(f, bench), std::filesystem::path(path).parent_path(), &violated);
    emit(csv, f.out);
    return violated ? 1 : 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
