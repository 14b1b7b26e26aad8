// pmwu: command-line front end.
//
//   pmwu solve  --problem KIND (--graph PATH | --instance PATH) [options]
//   pmwu verify --problem KIND (--graph PATH | --instance PATH) --solution RUN.json
//   pmwu bench  --problems LIST (--graphs LIST | --gen SPEC ...) [sweep options]
//   pmwu oracle --kind KIND --graph PATH
//
// Exit codes: 0 success (feasible/optimal, verify pass), 1 verify failure,
// 2 infeasible, 3 iteration limit, 64 bad flags, 65 bad input data or size
// refusal, 66 unreadable input, 70 internal error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pmwu/pmwu.hpp"

namespace {

using nlohmann::json;
using namespace pmwu;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitIterLimit = 3;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;
constexpr int kExitNoInput = 66;
constexpr int kExitInternal = 70;
constexpr int kSchemaVersion = 1;

const char* kCsvHeader =
    "problem,graph,epsilon,step,threads,status,value,iterations,search_evals,wall_s,matvec_s,search_s,vec_s";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string problem;
  std::string graph;
  std::string instance;
  double epsilon = 0.1;
  std::string step = "newton";
  std::size_t max_iter = 5000;
  int threads = 0;
  std::uint64_t seed = 1;
  bool deterministic = false;
  bool drop_satisfied = false;
  double lb = 0.0;
  double ub = 1.0;
  std::string bounds;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--problem", o.problem, "match|bmatch|domset|vcover|densesub|genmatch|feas")->required();
  cmd->add_option("--graph", o.graph, "Matrix Market graph (biadjacency matrix for bmatch)");
  cmd->add_option("--instance", o.instance, "JSON instance for --problem feas");
  cmd->add_option("--epsilon", o.epsilon, "approximation tolerance in (0,1)")->capture_default_str();
  cmd->add_option("--step", o.step, "standard|binary|newton")->capture_default_str();
  cmd->add_option("--max-iter", o.max_iter, "iteration cap per feasibility solve")->capture_default_str();
  cmd->add_option("--threads", o.threads, "worker count (default: PMWU_THREADS or all cores)");
  cmd->add_option("--seed", o.seed, "seed recorded in the run record")->capture_default_str();
  cmd->add_flag("--deterministic", o.deterministic, "fixed-order reductions");
  cmd->add_flag("--drop-satisfied", o.drop_satisfied, "drop covering rows once satisfied");
  cmd->add_option("--lb", o.lb, "genmatch: uniform lower bound")->capture_default_str();
  cmd->add_option("--ub", o.ub, "genmatch: uniform upper bound")->capture_default_str();
  cmd->add_option("--bounds", o.bounds, "genmatch: JSON file {\"lb\": [...], \"ub\": [...]}");
}

int env_threads() {
  if (const char* s = std::getenv("PMWU_THREADS")) {
    try {
      return std::max(0, std::stoi(s));
    } catch (const std::exception&) {
      throw UsageError("PMWU_THREADS must be an integer");
    }
  }
  return 0;
}

SolverConfig make_config(const CommonOptions& o) {
  SolverConfig cfg;
  if (!(o.epsilon > 0.0 && o.epsilon < 1.0)) throw UsageError("--epsilon must lie in (0, 1)");
  if (o.max_iter < 1) throw UsageError("--max-iter must be positive");
  cfg.epsilon = o.epsilon;
  cfg.max_iter = o.max_iter;
  const auto step = parse_step_mode(o.step);
  if (!step) throw UsageError("unknown --step '" + o.step + "'");
  cfg.step_mode = *step;
  cfg.workers = o.threads > 0 ? o.threads : env_threads();
  cfg.deterministic = o.deterministic;
  cfg.keep_satisfied_constraints = !o.drop_satisfied;
  return cfg;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  return in;
}

ProblemSpec make_spec(const CommonOptions& o) {
  const auto kind = parse_problem_kind(o.problem);
  if (!kind) throw UsageError("unknown --problem '" + o.problem + "'");
  ProblemSpec spec;
  spec.kind = *kind;
  if (spec.kind == ProblemKind::RawFeasibility) {
    if (o.instance.empty()) throw UsageError("--problem feas needs --instance");
    open_input(o.instance);
    spec.instance = read_instance(o.instance);
    return spec;
  }
  if (o.graph.empty()) throw UsageError("--problem " + o.problem + " needs --graph");
  auto in = open_input(o.graph);
  spec.graph = std::make_shared<const Graph>(spec.kind == ProblemKind::BMatch ? read_biadjacency(in)
                                                                              : read_matrix_market(in));
  if (spec.kind == ProblemKind::GenMatch) {
    const auto n = spec.graph->n();
    if (!o.bounds.empty()) {
      auto bin = open_input(o.bounds);
      json j;
      try {
        bin >> j;
        spec.lb = j.at("lb").get<std::vector<double>>();
        spec.ub = j.at("ub").get<std::vector<double>>();
      } catch (const json::exception& e) {
        throw FormatError(std::string("bounds JSON: ") + e.what());
      }
      if (spec.lb.size() != n || spec.ub.size() != n) throw FormatError("bounds must have one entry per vertex");
    } else {
      spec.lb.assign(n, o.lb);
      spec.ub.assign(n, o.ub);
    }
  }
  return spec;
}

int status_exit(SolveStatus s) {
  switch (s) {
    case SolveStatus::Feasible: return kExitOk;
    case SolveStatus::Infeasible: return kExitInfeasible;
    case SolveStatus::IterLimit: return kExitIterLimit;
  }
  return kExitInternal;
}

json strip_timing(json j) {
  if (j.is_object()) {
    j.erase("wall_seconds");
    j.erase("timings");
  }
  return j;
}

json run_record(const CommonOptions& o, const SolverConfig& cfg, const ProblemOutcome& r) {
  return {{"schema_version", kSchemaVersion},
          {"problem", o.problem},
          {"graph", o.graph.empty() ? o.instance : o.graph},
          {"epsilon", cfg.epsilon},
          {"step", to_string(cfg.step_mode)},
          {"threads", cfg.workers > 0 ? cfg.workers : num_workers()},
          {"seed", o.seed},
          {"deterministic", cfg.deterministic},
          {"status", to_string(r.status)},
          {"value", r.value},
          {"iterations", r.iterations},
          {"search_evaluations", r.search_evaluations},
          {"inner_solves", r.inner_solves},
          {"wall_seconds", r.wall_seconds},
          {"timings", to_json(r.timings)},
          {"detail", strip_timing(r.detail)}};
}

int cmd_solve(const CommonOptions& o, const std::string& out, bool with_x) {
  const auto cfg = make_config(o);
  const auto spec = make_spec(o);
  const auto r = solve_problem(spec, cfg);
  auto rec = run_record(o, cfg, r);
  if (!out.empty()) {
    auto full = rec;
    full["x"] = r.x;
    std::ofstream f(out);
    if (!f) throw std::ios_base::failure("cannot write " + out);
    f << full.dump(2) << "\n";
  }
  if (with_x) rec["x"] = r.x;
  std::cout << rec.dump(2) << "\n";
  return status_exit(r.status);
}

/// Rebuilds the instance a recorded solution certifies and checks it.
int cmd_verify(const CommonOptions& o, const std::string& solution) {
  auto in = open_input(solution);
  json rec;
  std::vector<double> x;
  double value = 0.0;
  try {
    in >> rec;
    x = rec.at("x").get<std::vector<double>>();
    value = rec.at("value").get<double>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("solution JSON: ") + e.what());
  }
  const auto spec = make_spec(o);
  MixedInstance inst;
  switch (spec.kind) {
    case ProblemKind::Match:
    case ProblemKind::BMatch: inst = make_pure_packing(matching_operator(spec.graph), ObjBound(value)); break;
    case ProblemKind::DomSet: inst = make_pure_covering(dominating_set_operator(*spec.graph), ObjBound(value)); break;
    case ProblemKind::VCover: inst = make_pure_covering(vertex_cover_operator(spec.graph), ObjBound(value)); break;
    case ProblemKind::DenseSub: inst = build_densest_feasibility(spec.graph, value); break;
    case ProblemKind::GenMatch: inst = build_generalized_matching(spec.graph, spec.lb, spec.ub).instance; break;
    case ProblemKind::RawFeasibility: inst = *spec.instance; break;
  }
  if (x.size() != inst.n()) throw FormatError("solution has " + std::to_string(x.size()) + " entries, expected " +
                                              std::to_string(inst.n()));
  const auto rep = verify_solution(inst, x, o.epsilon);
  json j = {{"passed", rep.passed},
            {"max_packing", rep.max_packing},
            {"min_covering", rep.min_covering},
            {"min_x", rep.min_x}};
  std::cout << j.dump(2) << "\n";
  return rep.passed ? kExitOk : kExitVerifyFail;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

/// rgg:N:AVGDEG[:SEED], er:N:AVGDEG[:SEED], bip:NL:NR:P[:SEED]
Graph generate(const std::string& spec, std::uint64_t default_seed) {
  const auto f = split(spec, ':');
  auto num = [&](std::size_t i) {
    if (i >= f.size()) throw UsageError("generator '" + spec + "' is missing fields");
    try {
      return std::stod(f[i]);
    } catch (const std::exception&) {
      throw UsageError("generator '" + spec + "' has a non-numeric field");
    }
  };
  auto seed_at = [&](std::size_t i) { return i < f.size() ? static_cast<std::uint64_t>(num(i)) : default_seed; };
  if (f.empty()) throw UsageError("empty generator spec");
  if (f[0] == "rgg") {
    const auto n = static_cast<std::size_t>(num(1));
    return random_geometric(n, rgg_radius_for_degree(n, num(2)), seed_at(3));
  }
  if (f[0] == "er") return erdos_renyi_avg_degree(static_cast<std::size_t>(num(1)), num(2), seed_at(3));
  if (f[0] == "bip") {
    return random_bipartite(static_cast<std::size_t>(num(1)), static_cast<std::size_t>(num(2)), num(3), seed_at(4));
  }
  throw UsageError("unknown generator '" + f[0] + "'");
}

struct BenchOptions {
  std::string problems = "match";
  std::string graphs;
  std::vector<std::string> gens;
  std::string steps = "standard,binary,newton";
  std::string threads = "1";
  double epsilon = 0.1;
  std::size_t max_iter = 5000;
  std::uint64_t seed = 1;
  bool deterministic = false;
  std::string out;
};

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

int cmd_bench(const BenchOptions& b) {
  std::ofstream file;
  if (!b.out.empty()) {
    file.open(b.out);
    if (!file) throw std::ios_base::failure("cannot write " + b.out);
  }
  std::ostream& out = b.out.empty() ? std::cout : file;
  out << kCsvHeader << "\n";

  std::vector<std::pair<std::string, std::shared_ptr<const Graph>>> graphs;
  for (const auto& path : split(b.graphs, ',')) graphs.emplace_back(path, nullptr);
  for (const auto& g : b.gens) graphs.emplace_back(g, std::make_shared<const Graph>(generate(g, b.seed)));

  std::vector<int> threads;
  for (const auto& t : split(b.threads, ',')) {
    try {
      threads.push_back(std::stoi(t));
    } catch (const std::exception&) {
      throw UsageError("--threads must be a comma-separated list of integers");
    }
  }
  const auto problems = split(b.problems, ',');
  const auto steps = split(b.steps, ',');
  for (const auto& p : problems) {
    if (!parse_problem_kind(p) || p == "feas" || p == "genmatch") throw UsageError("bench cannot run '" + p + "'");
  }
  for (const auto& s : steps) {
    if (!parse_step_mode(s)) throw UsageError("unknown step '" + s + "'");
  }

  for (auto& [name, graph] : graphs) {
    for (const auto& p : problems) {
      const auto kind = *parse_problem_kind(p);
      for (const auto& s : steps) {
        for (int t : threads) {
          std::ostringstream row;
          row << p << "," << csv_escape(name) << "," << b.epsilon << "," << s << "," << t << ",";
          try {
            ProblemSpec spec;
            spec.kind = kind;
            if (!graph) {
              auto in = open_input(name);
              graph = std::make_shared<const Graph>(kind == ProblemKind::BMatch ? read_biadjacency(in)
                                                                                : read_matrix_market(in));
            }
            spec.graph = graph;
            SolverConfig cfg;
            cfg.epsilon = b.epsilon;
            cfg.max_iter = b.max_iter;
            cfg.step_mode = *parse_step_mode(s);
            cfg.workers = t;
            cfg.deterministic = b.deterministic;
            const auto r = solve_problem(spec, cfg);
            row << to_string(r.status) << "," << r.value << "," << r.iterations << "," << r.search_evaluations
                << "," << r.wall_seconds << "," << r.timings.matvec << "," << r.timings.search << ","
                << r.timings.vec;
          } catch (const std::exception& e) {
            row << csv_escape(std::string("error: ") + e.what()) << ",,,,,,,";
          }
          out << row.str() << "\n" << std::flush;
        }
      }
    }
  }
  return kExitOk;
}

int cmd_oracle(const std::string& kind, const std::string& path) {
  auto in = open_input(path);
  const bool bip = kind == "hk";
  const Graph g = bip ? read_biadjacency(in) : read_matrix_market(in);
  json j = {{"oracle", kind}, {"graph", path}};
  if (kind == "densest") {
    j["value"] = brute_densest(g);
  } else if (kind == "vcover") {
    j["value"] = half_integral_vcover(g);
  } else if (kind == "hk") {
    j["value"] = hopcroft_karp(g);
  } else if (kind == "lp-match" || kind == "lp-vcover" || kind == "lp-domset") {
    const auto lp = kind == "lp-match" ? matching_lp(g) : kind == "lp-vcover" ? vertex_cover_lp(g) : dominating_set_lp(g);
    const auto sol = lp_vertex_enumeration(lp);
    if (!sol.feasible) {
      j["feasible"] = false;
    } else {
      j["value"] = sol.value;
    }
  } else {
    throw UsageError("unknown oracle '" + kind + "'");
  }
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parallel MWU solver for positive linear programs"};
  app.require_subcommand(1);

  CommonOptions solve_opts;
  std::string out;
  bool with_x = false;
  auto* solve = app.add_subcommand("solve", "solve one problem and print a JSON run record");
  add_common(solve, solve_opts);
  solve->add_option("--out", out, "also write the record, including x, to this file");
  solve->add_flag("--with-x", with_x, "include the solution vector in stdout");

  CommonOptions verify_opts;
  std::string solution;
  auto* verify = app.add_subcommand("verify", "check a recorded solution against its instance");
  add_common(verify, verify_opts);
  verify->add_option("--solution", solution, "run record written by solve --out")->required();

  BenchOptions bench_opts;
  auto* bench = app.add_subcommand("bench", "sweep problems, graphs, steps and threads; CSV output");
  bench->add_option("--problems", bench_opts.problems, "comma-separated problem kinds")->capture_default_str();
  bench->add_option("--graphs", bench_opts.graphs, "comma-separated Matrix Market files");
  bench->add_option("--gen", bench_opts.gens, "generated graph: rgg:N:DEG[:SEED], er:N:DEG[:SEED], bip:NL:NR:P[:SEED]");
  bench->add_option("--steps", bench_opts.steps, "comma-separated step modes")->capture_default_str();
  bench->add_option("--threads", bench_opts.threads, "comma-separated worker counts")->capture_default_str();
  bench->add_option("--epsilon", bench_opts.epsilon)->capture_default_str();
  bench->add_option("--max-iter", bench_opts.max_iter)->capture_default_str();
  bench->add_option("--seed", bench_opts.seed, "default generator seed")->capture_default_str();
  bench->add_flag("--deterministic", bench_opts.deterministic);
  bench->add_option("--out", bench_opts.out, "CSV file (default stdout)");

  std::string oracle_kind, oracle_graph;
  auto* oracle = app.add_subcommand("oracle", "exact reference value for a small graph");
  oracle->add_option("--kind", oracle_kind, "densest|vcover|hk|lp-match|lp-vcover|lp-domset")->required();
  oracle->add_option("--graph", oracle_graph, "Matrix Market graph (biadjacency for hk)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*solve) return cmd_solve(solve_opts, out, with_x);
    if (*verify) return cmd_verify(verify_opts, solution);
    if (*bench) return cmd_bench(bench_opts);
    if (*oracle) return cmd_oracle(oracle_kind, oracle_graph);
  } catch (const UsageError& e) {
    std::cerr << "pmwu: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "pmwu: " << e.what() << "\n";
    return kExitNoInput;
  } catch (const SizeLimitError& e) {
    std::cerr << "pmwu: refused: " << e.what() << "\n";
    return kExitData;
  } catch (const FormatError& e) {
    std::cerr << "pmwu: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "pmwu: " << e.what() << "\n";
    return kExitData;
  } catch (const std::out_of_range& e) {
    std::cerr << "pmwu: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "pmwu: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
