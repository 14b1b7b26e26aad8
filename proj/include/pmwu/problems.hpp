#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pmwu/graph.hpp"
#include "pmwu/implicit_ops.hpp"
#include "pmwu/instance.hpp"
#include "pmwu/operators.hpp"
#include "pmwu/solver.hpp"

namespace pmwu {

enum class ProblemKind { Match, BMatch, DomSet, VCover, DenseSub, GenMatch, RawFeasibility };

inline const char* to_string(ProblemKind k) {
  switch (k) {
    case ProblemKind::Match: return "match";
    case ProblemKind::BMatch: return "bmatch";
    case ProblemKind::DomSet: return "domset";
    case ProblemKind::VCover: return "vcover";
    case ProblemKind::DenseSub: return "densesub";
    case ProblemKind::GenMatch: return "genmatch";
    case ProblemKind::RawFeasibility: return "feas";
  }
  return "?";
}

inline std::optional<ProblemKind> parse_problem_kind(const std::string& s) {
  for (auto k : {ProblemKind::Match, ProblemKind::BMatch, ProblemKind::DomSet, ProblemKind::VCover,
                 ProblemKind::DenseSub, ProblemKind::GenMatch, ProblemKind::RawFeasibility}) {
    if (s == to_string(k)) return k;
  }
  return std::nullopt;
}

using GraphPtr = std::shared_ptr<const Graph>;

// ---------------------------------------------------------------------------
// Constraint operators

/// max <1,x> s.t. Mx <= 1, one variable per edge.
inline OperatorPtr matching_operator(GraphPtr g) {
  if (g->m() == 0) throw std::invalid_argument("matching needs at least one edge");
  return std::make_shared<IncidenceOp>(std::move(g));
}

/// min <1,x> s.t. (I + A)x >= 1. Edgeless graphs are fine (C = I).
inline OperatorPtr dominating_set_operator(const Graph& g, TileShape tile = {}) {
  return std::make_shared<CsbOperator>(explicit_closed_neighborhood(g), tile);
}

/// min <1,x> s.t. M^T x >= 1, one constraint per edge.
inline OperatorPtr vertex_cover_operator(GraphPtr g) {
  if (g->m() == 0) throw std::invalid_argument("vertex cover needs at least one edge");
  return std::make_shared<IncidenceTransposeOp>(std::move(g));
}

inline MixedInstance build_matching(GraphPtr g, ObjBound bound = ObjBound(1.0)) {
  return make_pure_packing(matching_operator(std::move(g)), bound);
}

inline MixedInstance build_bipartite_matching(GraphPtr g, ObjBound bound = ObjBound(1.0)) {
  if (!g->is_marked_bipartite()) throw std::invalid_argument("bipartite matching needs a bipartite graph");
  return build_matching(std::move(g), bound);
}

inline MixedInstance build_dominating_set(const Graph& g, ObjBound bound = ObjBound(1.0)) {
  return make_pure_covering(dominating_set_operator(g), bound);
}

inline MixedInstance build_vertex_cover(GraphPtr g, ObjBound bound = ObjBound(1.0)) {
  return make_pure_covering(vertex_cover_operator(std::move(g)), bound);
}

/// Does some z >= 0 satisfy Wz >= 1 and Oz <= D? Variables z[2e], z[2e+1]
/// are the shares of edge e assigned to its two endpoints. The packing side
/// is (1/D) O without the all-zero rows of isolated vertices.
inline MixedInstance build_densest_feasibility(GraphPtr g, double D) {
  if (!(D > 0.0) || !std::isfinite(D)) throw std::invalid_argument("density bound D must be positive");
  if (g->m() == 0) throw std::invalid_argument("densest subgraph needs at least one edge");
  std::vector<index_t> rows;
  for (std::size_t v = 0; v < g->n(); ++v) {
    if (g->degree(v) > 0) rows.push_back(static_cast<index_t>(v));
  }
  std::vector<double> scale(rows.size(), 1.0 / D);
  const auto m = g->m();
  auto pair = std::make_shared<PairOp>(std::move(g));
  OperatorPtr p = std::make_shared<ScaledRowsOperator>(pair, std::move(rows), std::move(scale));
  return make_mixed(std::move(p), std::make_shared<InterweaveOp>(m));
}

struct GenMatchInstance {
  MixedInstance instance;
  /// Vertices whose lower bound exceeds their degree.
  std::vector<index_t> trivially_infeasible;
};

/// lb <= Mx <= ub with both sides normalized to one: P = diag(1/ub) M and
/// C = diag(1/lb) M over the rows with lb > 0.
inline GenMatchInstance build_generalized_matching(GraphPtr g, std::span<const double> lb,
                                                   std::span<const double> ub) {
  check_dim(lb.size(), g->n(), "generalized matching lb");
  check_dim(ub.size(), g->n(), "generalized matching ub");
  if (g->m() == 0) throw std::invalid_argument("generalized matching needs at least one edge");
  GenMatchInstance out;
  std::vector<double> pscale(g->n());
  std::vector<index_t> crows;
  std::vector<double> cscale;
  for (std::size_t v = 0; v < g->n(); ++v) {
    if (!(lb[v] >= 0.0) || !(ub[v] >= lb[v])) {
      throw std::invalid_argument("need 0 <= lb <= ub at vertex " + std::to_string(v));
    }
    if (!(ub[v] > 0.0)) throw std::invalid_argument("upper bound must be positive at vertex " + std::to_string(v));
    pscale[v] = std::isfinite(ub[v]) ? 1.0 / ub[v] : 0.0;
    if (lb[v] > 0.0) {
      crows.push_back(static_cast<index_t>(v));
      cscale.push_back(1.0 / lb[v]);
    }
    if (lb[v] > static_cast<double>(g->degree(v))) out.trivially_infeasible.push_back(static_cast<index_t>(v));
  }
  auto inc = std::make_shared<IncidenceOp>(std::move(g));
  auto p = std::make_shared<ScaledRowsOperator>(inc, std::move(pscale));
  auto c = std::make_shared<ScaledRowsOperator>(inc, std::move(crows), std::move(cscale));
  out.instance = make_mixed(std::move(p), std::move(c));
  return out;
}

// ---------------------------------------------------------------------------
// Densest subgraph

struct DensestResult {
  double D_star = 0.0;
  /// Certificate: Wz >= 1 and max(Oz) = D_star.
  std::vector<double> z;
  OptResult search;
};

/// Smallest D for which the densest-subgraph LP is feasible, i.e. the
/// maximum subgraph density, within (1 + eps). Exponential search up from
/// m/n, capped by the always-feasible z = 1/2 (value max degree / 2), then
/// bisection to relative width eps/2. D_star is the packing value of the
/// best certificate found, so it never undershoots the optimum.
inline DensestResult solve_densest(GraphPtr g, const SolverConfig& cfg) {
  cfg.check();
  if (g->m() == 0) throw std::invalid_argument("densest subgraph needs at least one edge");
  detail::Stopwatch wall;
  ExecutionScope exec(cfg.workers, cfg.deterministic);
  const double eps = cfg.epsilon;
  const double bracket = eps / 2.0;
  SolverConfig inner = cfg;
  inner.epsilon = inner_epsilon(eps, bracket);

  DensestResult out;
  auto& s = out.search;
  out.z.assign(2 * g->m(), 0.5);
  out.D_star = 0.5 * static_cast<double>(g->max_degree());

  auto probe = [&](double D) {
    const auto r = solve_feasibility(build_densest_feasibility(g, D), inner);
    s.absorb(D, r);
    if (r.status != SolveStatus::Feasible) return false;
    const double value = r.max_packing * D;
    if (value < out.D_star) {
      out.D_star = value;
      out.z = r.x;
    }
    return true;
  };

  double lo = static_cast<double>(g->m()) / static_cast<double>(g->n());
  double hi = out.D_star;
  for (double D = lo; D < hi && s.inner_solves < kMaxBoundProbes; D *= 2.0) {
    if (probe(D)) {
      hi = D;
      break;
    }
    lo = D;
  }
  while (hi - lo > bracket * lo && s.inner_solves < kMaxBoundProbes) {
    const double D = 0.5 * (lo + hi);
    if (probe(D)) {
      hi = D;
    } else {
      lo = D;
    }
  }
  s.lower = lo;
  s.upper = hi;
  s.value = out.D_star;
  s.x = out.z;
  s.wall_seconds = wall.lap();
  return out;
}

// ---------------------------------------------------------------------------
// Dispatch

struct ProblemSpec {
  ProblemKind kind = ProblemKind::Match;
  GraphPtr graph;
  std::vector<double> lb, ub;            // GenMatch
  std::optional<MixedInstance> instance;  // RawFeasibility
};

/// Uniform outcome of any problem kind. `certificate` is a feasibility
/// instance that `x` satisfies within (1 + eps), usable by verify_solution.
struct ProblemOutcome {
  SolveStatus status = SolveStatus::Feasible;
  double value = 0.0;
  std::vector<double> x;
  std::size_t iterations = 0;
  std::size_t search_evaluations = 0;
  std::size_t inner_solves = 0;
  double wall_seconds = 0.0;
  PhaseTimings timings;
  std::optional<MixedInstance> certificate;
  nlohmann::json detail = nlohmann::json::object();
};

namespace detail {
inline ProblemOutcome from_opt(const OptResult& r) {
  ProblemOutcome o;
  o.status = r.status;
  o.value = r.value;
  o.x = r.x;
  o.iterations = r.iterations;
  o.search_evaluations = r.search_evaluations;
  o.inner_solves = r.inner_solves;
  o.wall_seconds = r.wall_seconds;
  o.timings = r.timings;
  o.detail = to_json(r);
  return o;
}

inline ProblemOutcome from_solve(const SolveResult& r, const MixedInstance& inst) {
  ProblemOutcome o;
  o.status = r.status;
  o.value = r.max_packing;
  o.x = r.x;
  o.iterations = r.iterations;
  o.search_evaluations = r.search_evaluations;
  o.inner_solves = 1;
  o.wall_seconds = r.wall_seconds;
  o.timings = r.timings;
  o.certificate = inst;
  o.detail = to_json(r);
  return o;
}
}  // namespace detail

inline ProblemOutcome solve_problem(const ProblemSpec& spec, const SolverConfig& cfg) {
  auto need_graph = [&] {
    if (!spec.graph) throw std::invalid_argument(std::string(to_string(spec.kind)) + " needs a graph");
  };
  switch (spec.kind) {
    case ProblemKind::Match:
    case ProblemKind::BMatch: {
      need_graph();
      if (spec.kind == ProblemKind::BMatch && !spec.graph->is_marked_bipartite()) {
        throw std::invalid_argument("bmatch needs a bipartite graph");
      }
      auto p = matching_operator(spec.graph);
      auto o = detail::from_opt(solve_pure_packing(p, cfg));
      if (o.value > 0.0) o.certificate = make_pure_packing(p, ObjBound(o.value));
      return o;
    }
    case ProblemKind::DomSet:
    case ProblemKind::VCover: {
      need_graph();
      auto c = spec.kind == ProblemKind::DomSet ? dominating_set_operator(*spec.graph)
                                                : vertex_cover_operator(spec.graph);
      auto o = detail::from_opt(solve_pure_covering(c, cfg));
      if (o.status == SolveStatus::Feasible && o.value > 0.0) o.certificate = make_pure_covering(c, ObjBound(o.value));
      return o;
    }
    case ProblemKind::DenseSub: {
      need_graph();
      const auto r = solve_densest(spec.graph, cfg);
      auto o = detail::from_opt(r.search);
      o.value = r.D_star;
      o.certificate = build_densest_feasibility(spec.graph, r.D_star);
      o.detail["D_star"] = r.D_star;
      return o;
    }
    case ProblemKind::GenMatch: {
      need_graph();
      const auto gm = build_generalized_matching(spec.graph, spec.lb, spec.ub);
      if (!gm.trivially_infeasible.empty()) {
        ProblemOutcome o;
        o.status = SolveStatus::Infeasible;
        o.detail["trivially_infeasible"] = gm.trivially_infeasible;
        o.certificate = gm.instance;
        return o;
      }
      return detail::from_solve(solve_feasibility(gm.instance, cfg), gm.instance);
    }
    case ProblemKind::RawFeasibility: {
      if (!spec.instance) throw std::invalid_argument("feas needs an instance");
      return detail::from_solve(solve_feasibility(*spec.instance, cfg), *spec.instance);
    }
  }
  throw std::invalid_argument("unknown problem kind");
}

}  // namespace pmwu
