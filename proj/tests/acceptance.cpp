// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if a gated
// criterion fails. Criterion 10 is measured and printed but not gated.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <type_traits>

#include "pmwu/pmwu.hpp"
#include "support/graph_enum.hpp"
#include "support/instances.hpp"

using namespace pmwu;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

GraphPtr share(Graph g) { return std::make_shared<const Graph>(std::move(g)); }

SolverConfig default_config() { return SolverConfig{}; }

double min_of(const std::vector<double>& v) { return v.empty() ? INFINITY : *std::min_element(v.begin(), v.end()); }
double max_of(const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); }

// ---------------------------------------------------------------------------

Outcome approximation_contract() {
  Clock clock;
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<std::size_t> size(20, 200);
  std::size_t feasible = 0, infeasible = 0, other = 0, violations = 0;
  double worst_pack = 0.0, worst_cover = INFINITY;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = size(rng), mp = size(rng), mc = size(rng);
    const double density = std::uniform_real_distribution<double>(0.02, 0.15)(rng);
    const auto planted = testsupport::planted_instance(n, mp, mc, density, 5000 + t);
    const auto r = solve_feasibility(planted.instance, default_config());
    if (r.status == SolveStatus::Infeasible) ++infeasible;
    if (r.status == SolveStatus::IterLimit) ++other;
    if (r.status != SolveStatus::Feasible) continue;
    ++feasible;
    const double yp = max_of(planted.instance.packing->apply(r.x));
    const double zc = min_of(planted.instance.covering->apply(r.x));
    worst_pack = std::max(worst_pack, yp);
    worst_cover = std::min(worst_cover, zc);
    if (yp > 1.1 + 1e-9 || zc < 1.0 - 1e-9) ++violations;
  }
  const double secs = clock.seconds();
  Outcome o;
  o.pass = feasible == 100 && infeasible == 0 && violations == 0 && secs < 60.0;
  o.detail = fmt("%zu/100 feasible, %zu infeasible, %zu iter-limit, %zu violations, max Px %.6f, min Cx %.6f, %.1fs",
                 feasible, infeasible, other, violations, worst_pack, worst_cover, secs);
  return o;
}

Outcome bipartite_integrality() {
  Clock clock;
  std::mt19937_64 rng(2002);
  std::uniform_int_distribution<std::size_t> side(20, 100);
  std::size_t bad = 0;
  double lo = INFINITY, hi = 0.0;
  for (int t = 0; t < 20; ++t) {
    const std::size_t nl = side(rng), nr = side(rng);
    const double p = std::uniform_real_distribution<double>(1.0, 5.0)(rng) / static_cast<double>(std::max(nl, nr));
    auto g = share(random_bipartite(nl, nr, p, 7000 + t));
    if (g->m() == 0) continue;
    const double hk = static_cast<double>(hopcroft_karp(*g));
    const auto r = solve_pure_packing(matching_operator(g), default_config());
    const double ratio = r.value / hk;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    if (!(r.value >= 0.9 * hk && r.value <= 1.1 * hk)) ++bad;
  }
  const double secs = clock.seconds();
  return {bad == 0 && secs < 60.0, fmt("V/HK in [%.4f, %.4f], %zu outside [0.9, 1.1], %.1fs", lo, hi, bad, secs)};
}

Graph double_cover(const Graph& g) {
  std::vector<std::pair<index_t, index_t>> e;
  const auto n = static_cast<index_t>(g.n());
  for (const auto& [u, v] : g.edges()) {
    e.emplace_back(u, n + v);
    e.emplace_back(v, n + u);
  }
  auto b = Graph::from_edges(2 * g.n(), std::move(e));
  b.mark_bipartite(g.n());
  return b;
}

Outcome vertex_cover() {
  Clock clock;
  std::vector<Graph> graphs;
  for (int n = 2; n <= 8; ++n) {
    for (auto mask : testsupport::connected_graphs(n)) graphs.push_back(testsupport::to_graph(mask, n));
  }
  const std::size_t exhaustive = graphs.size();
  std::mt19937_64 rng(3003);
  for (int t = 0; graphs.size() < exhaustive + 10; ++t) {
    const std::size_t n = 9 + rng() % 6;
    auto g = erdos_renyi(n, 0.3, 8000 + t);
    if (g.m() > 0) graphs.push_back(std::move(g));
  }
  std::size_t over = 0, uncovered = 0;
  double worst = 0.0;
  for (const auto& base : graphs) {
    auto g = share(base);
    const double exact = half_integral_vcover(*g);
    const auto r = solve_pure_covering(vertex_cover_operator(g), default_config());
    worst = std::max(worst, r.value / exact);
    if (r.value > 1.1 * exact + 1e-12) ++over;
    if (min_of(vertex_cover_operator(g)->apply(r.x)) < 1.0 - 1e-9) ++uncovered;
  }
  // Cross-oracle 1: vertex enumeration on every connected graph within its
  // basis budget, i.e. all of n <= 7 and n = 8 with up to 12 edges.
  // Cross-oracle 2, on every graph: the cover LP value is half the maximum
  // matching of the bipartite double cover (Konig), computed by Hopcroft-Karp.
  std::size_t cross = 0, mismatch = 0, doubled = 0;
  for (int n = 2; n <= 8; ++n) {
    for (auto mask : testsupport::connected_graphs(n)) {
      const auto g = testsupport::to_graph(mask, n);
      const double half = half_integral_vcover(g);
      if (n < 8 || g.m() <= 12) {
        ++cross;
        if (std::abs(lp_vertex_enumeration(vertex_cover_lp(g)).value - half) > 1e-9) ++mismatch;
      }
      ++doubled;
      if (std::abs(0.5 * static_cast<double>(hopcroft_karp(double_cover(g))) - half) > 1e-9) ++mismatch;
    }
  }
  for (std::size_t i = exhaustive; i < graphs.size(); ++i) {
    ++doubled;
    const double half = half_integral_vcover(graphs[i]);
    if (std::abs(0.5 * static_cast<double>(hopcroft_karp(double_cover(graphs[i]))) - half) > 1e-9) ++mismatch;
  }
  const double secs = clock.seconds();
  return {over == 0 && uncovered == 0 && mismatch == 0,
          fmt("%zu graphs (%zu exhaustive n<=8), worst ratio %.4f, %zu over 1.1x, %zu not covering; "
              "cross-oracle: enumeration %zu graphs, double cover %zu graphs, %zu mismatches, %.1fs",
              graphs.size(), exhaustive, worst, over, uncovered, cross, doubled, mismatch, secs)};
}

Outcome dominating_set() {
  Clock clock;
  std::size_t count = 0, over = 0;
  double worst = 0.0;
  for (int n = 1; n <= 8; ++n) {
    for (auto mask : testsupport::all_graphs(n)) {
      const auto g = testsupport::to_graph(mask, n);
      const double exact = lp_vertex_enumeration(dominating_set_lp(g)).value;
      const auto r = solve_pure_covering(dominating_set_operator(g), default_config());
      worst = std::max(worst, r.value / exact);
      if (r.value > 1.1 * exact + 1e-12) ++over;
      ++count;
    }
  }
  return {over == 0, fmt("%zu graphs (all n<=8), worst ratio %.4f, %zu over 1.1x, %.1fs", count, worst, over,
                         clock.seconds())};
}

Outcome densest_subgraph() {
  Clock clock;
  std::vector<Graph> graphs;
  for (int n = 2; n <= 6; ++n) {
    for (auto mask : testsupport::connected_graphs(n)) graphs.push_back(testsupport::to_graph(mask, n));
  }
  std::mt19937_64 rng(5005);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 7 + rng() % 6;
    const double p = std::uniform_real_distribution<double>(0.15, 0.8)(rng);
    auto g = erdos_renyi(n, p, 9000 + t);
    if (g.m() > 0) graphs.push_back(std::move(g));
  }
  std::size_t bad = 0;
  double lo = INFINITY, hi = 0.0;
  for (const auto& base : graphs) {
    auto g = share(base);
    const double exact = brute_densest(*g);
    const auto r = solve_densest(g, default_config());
    lo = std::min(lo, r.D_star - exact);
    hi = std::max(hi, r.D_star / exact);
    if (r.D_star < exact - 1e-6 || r.D_star > 1.1 * exact) ++bad;
  }
  return {bad == 0, fmt("%zu graphs (n<=12), min D*-opt %.2e, max D*/opt %.4f, %zu out of range, %.1fs",
                        graphs.size(), lo, hi, bad, clock.seconds())};
}

Outcome step_search() {
  Clock clock;
  constexpr std::size_t n = 4000;
  constexpr double eps = 0.1;
  auto g = share(random_geometric(n, rgg_radius_for_degree(n, 8.0), 1));
  // Feasibility instances at (1 + eps) of reference optima on the right side.
  const auto ref = default_config();
  const double match = solve_pure_packing(matching_operator(g), ref).value;
  const double cover = solve_pure_covering(vertex_cover_operator(g), ref).value;
  const double dom = solve_pure_covering(dominating_set_operator(*g), ref).value;
  const double dense = solve_densest(g, ref).D_star;
  const std::vector<std::pair<const char*, MixedInstance>> cases = {
      {"match", make_pure_packing(matching_operator(g), ObjBound(match / (1 + eps)))},
      {"vcover", make_pure_covering(vertex_cover_operator(g), ObjBound(cover * (1 + eps)))},
      {"domset", make_pure_covering(dominating_set_operator(*g), ObjBound(dom * (1 + eps)))},
      {"densesub", build_densest_feasibility(g, dense * (1 + eps))}};
  bool pass = true;
  std::ostringstream detail;
  detail << "rgg n=" << n << " m=" << g->m() << ";";
  for (const auto& [name, inst] : cases) {
    std::size_t iters[3];
    int k = 0;
    for (auto mode : {StepMode::Standard, StepMode::BinarySearch, StepMode::Newton}) {
      auto cfg = default_config();
      cfg.step_mode = mode;
      cfg.max_iter = 200000;
      const auto r = solve_feasibility(inst, cfg);
      if (r.status != SolveStatus::Feasible) pass = false;
      iters[k++] = r.iterations;
    }
    const bool ok = 10 * iters[1] <= iters[0] && 10 * iters[2] <= iters[0];
    pass = pass && ok;
    detail << " " << name << " std/bin/nwt " << iters[0] << "/" << iters[1] << "/" << iters[2];
  }
  detail << fmt(", %.1fs", clock.seconds());
  return {pass, detail.str()};
}

Outcome infeasibility() {
  std::size_t detected = 0, total = 0;
  std::ostringstream detail;
  {
    auto p = std::make_shared<CsbOperator>([] {
      CooMatrix a(1, 1);
      a.add(0, 0, 2.0);
      return a;
    }());
    auto c = std::make_shared<CsbOperator>([] {
      CooMatrix a(1, 1);
      a.add(0, 0, 1.0);
      return a;
    }());
    const auto r = solve_feasibility(make_mixed(p, c), default_config());
    ++total;
    detected += r.status == SolveStatus::Infeasible;
    detail << "P=[[2]],C=[[1]] " << to_string(r.status);
  }
  struct Gm {
    const char* name;
    Graph g;
    std::vector<double> lb, ub;
  };
  auto star = [](std::size_t leaves) {
    std::vector<std::pair<index_t, index_t>> e;
    for (std::size_t i = 1; i <= leaves; ++i) e.emplace_back(0, static_cast<index_t>(i));
    return Graph::from_edges(leaves + 1, std::move(e));
  };
  std::vector<Gm> cases;
  // Every lower bound is within the vertex degree and every ub exceeds its
  // lb, so no case is trivially rejected and P differs from C; each needs a
  // counting argument.
  const std::vector<double> u4(4, 1.2), u5(5, 1.2);
  cases.push_back({"K1,3", star(3), {1, 1, 1, 1}, u4});
  cases.push_back({"P3", Graph::from_edges(3, {{0, 1}, {1, 2}}), {1, 1, 1}, {1.2, 1.2, 1.2}});
  cases.push_back({"K1,4 center<=2", star(4), {0, 1, 1, 1, 1}, {2, 1.2, 1.2, 1.2, 1.2}});
  cases.push_back({"K2,3", Graph::from_edges(5, {{0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}}), {1, 1, 1, 1, 1}, u5});
  cases.push_back({"C4 unbalanced", Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}), {1, 0.3, 1, 0.3},
                   {1.2, 0.5, 1.2, 0.5}});
  for (auto& c : cases) {
    auto g = share(std::move(c.g));
    const auto gm = build_generalized_matching(g, c.lb, c.ub);
    const auto r = solve_feasibility(gm.instance, default_config());
    ++total;
    const bool ok = gm.trivially_infeasible.empty() && r.status == SolveStatus::Infeasible;
    detected += ok;
    detail << "; " << c.name << " " << to_string(r.status) << " after " << r.iterations;
  }
  // Controls with the same bound pattern that are feasible, so a blanket
  // Infeasible verdict cannot pass.
  std::size_t controls = 0;
  for (auto& g : {Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}}), Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}})}) {
    const std::vector<double> lb(g.n(), 1.0), ub(g.n(), 1.2);
    const auto gm = build_generalized_matching(share(g), lb, ub);
    const auto r = solve_feasibility(gm.instance, default_config());
    controls += r.status == SolveStatus::Feasible && verify_solution(gm.instance, r.x, 0.1).passed;
  }
  detail << "; feasible controls K3, C4: " << controls << "/2";
  return {detected == total && controls == 2, fmt("%zu/%zu infeasible: ", detected, total) + detail.str()};
}

CooMatrix incidence_matrix(const Graph& g) {
  CooMatrix a(g.n(), g.m());
  for (std::size_t e = 0; e < g.m(); ++e) {
    a.add(g.edge(e).r, e, 1.0);
    a.add(g.edge(e).c, e, 1.0);
  }
  return a;
}

CooMatrix pair_matrix(const Graph& g) {
  CooMatrix a(g.n(), 2 * g.m());
  for (std::size_t e = 0; e < g.m(); ++e) {
    a.add(g.edge(e).r, 2 * e, 1.0);
    a.add(g.edge(e).c, 2 * e + 1, 1.0);
  }
  return a;
}

CooMatrix interweave_matrix(std::size_t m) {
  CooMatrix a(m, 2 * m);
  for (std::size_t e = 0; e < m; ++e) {
    a.add(e, 2 * e, 1.0);
    a.add(e, 2 * e + 1, 1.0);
  }
  return a;
}

Outcome implicit_operators() {
  Clock clock;
  std::mt19937_64 rng(8008);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  std::size_t nonidentical = 0, max_edges = 0;
  auto rel = [](const std::vector<double>& a, const std::vector<double>& b) {
    double w = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) w = std::max(w, std::abs(a[i] - b[i]) / std::max(std::abs(b[i]), 1e-300));
    return a.size() == b.size() ? w : INFINITY;
  };
  auto under = [](int workers, const std::function<std::vector<double>()>& f) {
    ExecutionScope scope(workers, true);
    return f();
  };
  for (int t = 0; t < 50; ++t) {
    const double target_edges = std::exp(std::log(100.0) + (std::log(1e5) - std::log(100.0)) * t / 49.0);
    const std::size_t n = 50 + rng() % 20000;
    const double avg = std::min(2.0 * target_edges / n, static_cast<double>(n - 1));
    auto g = share(erdos_renyi_avg_degree(n, avg, 10000 + t));
    max_edges = std::max(max_edges, g->m());
    const std::vector<std::pair<OperatorPtr, CooMatrix>> ops = {
        {std::make_shared<IncidenceOp>(g), incidence_matrix(*g)},
        {std::make_shared<IncidenceTransposeOp>(g), incidence_matrix(*g).transposed()},
        {std::make_shared<PairOp>(g), pair_matrix(*g)},
        {std::make_shared<InterweaveOp>(g->m()), interweave_matrix(g->m())}};
    for (const auto& [op, ref] : ops) {
      std::vector<double> x(op->cols()), xt(op->rows());
      for (auto& v : x) v = unit(rng);
      for (auto& v : xt) v = unit(rng);
      const auto fwd1 = under(1, [&] { return op->apply(x); });
      const auto fwd8 = under(8, [&] { return op->apply(x); });
      const auto tr1 = under(1, [&] { return op->apply_t(xt); });
      const auto tr8 = under(8, [&] { return op->apply_t(xt); });
      worst = std::max({worst, rel(fwd1, ref.multiply(x)), rel(tr1, ref.multiply_t(xt))});
      const bool same = fwd1.size() == fwd8.size() && tr1.size() == tr8.size() &&
                        std::memcmp(fwd1.data(), fwd8.data(), fwd1.size() * sizeof(double)) == 0 &&
                        std::memcmp(tr1.data(), tr8.data(), tr1.size() * sizeof(double)) == 0;
      nonidentical += !same;
    }
  }
  return {worst <= 1e-12 && nonidentical == 0,
          fmt("50 graphs up to %zu edges, M/M^T/O/W worst rel err %.2e, %zu non-identical 1 vs 8 workers, %.1fs",
              max_edges, worst, nonidentical, clock.seconds())};
}

Outcome property_suites() {
  std::mt19937_64 rng(9009);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t grad_bad = 0, sandwich_bad = 0, monotone_bad = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t len = 1 + rng() % 200;
    std::vector<double> v(len);
    for (auto& e : v) e = 10.0 * unit(rng) - 5.0;
    const double eta = std::exp(7.0 * unit(rng));
    const auto mx = smax_with_grad(v, eta), mn = smin_with_grad(v, eta);
    double sx = 0.0, sn = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      sx += mx.weights[i];
      sn += mn.weights[i];
    }
    if (std::abs(sx - 1.0) > 1e-12 || std::abs(sn - 1.0) > 1e-12) ++grad_bad;
    const double slack = std::log(static_cast<double>(len)) / eta + 1e-12;
    const double hi = max_of(v), lo = min_of(v);
    if (mx.value < hi - 1e-12 || mx.value > hi + slack || mn.value > lo + 1e-12 || mn.value < lo - slack) {
      ++sandwich_bad;
    }
  }
  for (int t = 0; t < 1000; ++t) {
    const std::size_t mp = 1 + rng() % 60, mc = 1 + rng() % 60;
    std::vector<double> y(mp), dy(mp), z(mc), dz(mc);
    for (std::size_t i = 0; i < mp; ++i) {
      y[i] = unit(rng);
      dy[i] = unit(rng) < 0.2 ? 0.0 : 0.05 * unit(rng);
    }
    for (std::size_t i = 0; i < mc; ++i) {
      z[i] = unit(rng);
      dz[i] = unit(rng) < 0.2 ? 0.0 : 0.05 * unit(rng);
    }
    dy[0] = std::max(dy[0], 1e-3);
    dz[0] = std::max(dz[0], 1e-3);
    const Mode mode = t % 3 == 0 ? Mode::Mixed : t % 3 == 1 ? Mode::PurePacking : Mode::PureCovering;
    const auto si = make_search_inputs(y, dy, z, dz, std::exp(7.0 * unit(rng)), 0.1, mode, 0.5 + 2.0 * unit(rng), 0.3);
    double prev = INFINITY;
    for (double a = 1e-3; a < 1e4; a *= 1.7) {
      const double f = bang_for_buck(si, a);
      if (f > prev * (1.0 + 1e-9) + 1e-12) ++monotone_bad;
      prev = f;
    }
  }
  // Full solves: potential nonincreasing, x nondecreasing, and exactly one
  // product each way per operator per iteration (so none inside the search).
  static_assert(std::is_trivially_copyable_v<SearchInputs>, "search must not hold operators");
  std::size_t potential_bad = 0, x_bad = 0, count_bad = 0, solves = 0;
  for (int t = 0; t < 12; ++t) {
    const auto planted = testsupport::planted_instance(60, 40, 40, 0.08, 11000 + t);
    auto P = std::make_shared<CountingOperator>(planted.instance.packing);
    auto C = std::make_shared<CountingOperator>(planted.instance.covering);
    auto cfg = default_config();
    cfg.step_mode = static_cast<StepMode>(t % 3);
    cfg.max_iter = 100000;
    cfg.resync_interval = 1u << 30;
    double prev_phi = INFINITY;
    std::vector<double> prev_x;
    std::size_t pf = 0, pt = 0, cf = 0, ct = 0;
    bool first = true;
    cfg.observer = [&](const SolverState& s) {
      const double phi = potential(s.y, s.z, s.eta);
      if (phi > prev_phi + 1e-9 * std::max(1.0, std::abs(prev_phi))) ++potential_bad;
      prev_phi = phi;
      for (std::size_t i = 0; i < prev_x.size(); ++i) x_bad += s.x[i] < prev_x[i];
      prev_x = s.x;
      if (!first && (P->forward_count() - pf != 1 || C->forward_count() - cf != 1 || P->transpose_count() - pt != 1 ||
                     C->transpose_count() - ct != 1)) {
        ++count_bad;
      }
      first = false;
      pf = P->forward_count();
      pt = P->transpose_count();
      cf = C->forward_count();
      ct = C->transpose_count();
    };
    const auto r = solve_feasibility(make_mixed(P, C), cfg);
    solves += r.status == SolveStatus::Feasible;
  }
  const bool pass = grad_bad + sandwich_bad + monotone_bad + potential_bad + x_bad + count_bad == 0 && solves == 12;
  return {pass, fmt("gradient %zu, sandwich %zu, f(alpha) monotone %zu, potential %zu, x monotone %zu, "
                    "products per iteration %zu failures; %zu/12 solves feasible",
                    grad_bad, sandwich_bad, monotone_bad, potential_bad, x_bad, count_bad, solves)};
}

Outcome parallel_sanity() {
  constexpr std::size_t n = 200000;
  auto g = share(erdos_renyi_avg_degree(n, 10.0, 12345));
  auto op = matching_operator(g);
  std::vector<double> x(op->cols(), 1.0), y(op->rows()), xt(op->rows(), 1.0), yt(op->cols());
  auto time_with = [&](int workers) {
    ExecutionScope scope(workers, false);
    double best = INFINITY;
    for (int rep = 0; rep < 5; ++rep) {
      Clock c;
      op->apply(x, y);
      op->apply_t(xt, yt);
      best = std::min(best, c.seconds());
    }
    return best;
  };
  const double t1 = time_with(1), t4 = time_with(4);
  const double ratio = t4 / t1;
  return {ratio <= 0.6, fmt("m=%zu edges, matvec 1 worker %.4fs, 4 workers %.4fs, ratio %.2f, hardware threads %d",
                            g->m(), t1, t4, ratio, static_cast<int>(std::thread::hardware_concurrency()))};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    Outcome (*run)();
    bool gated;
  };
  const Criterion criteria[] = {{1, approximation_contract, true}, {2, bipartite_integrality, true},
                                {3, vertex_cover, true},           {4, dominating_set, true},
                                {5, densest_subgraph, true},       {6, step_search, true},
                                {7, infeasibility, true},          {8, implicit_operators, true},
                                {9, property_suites, true},        {10, parallel_sanity, false}};
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d: %s%s  %s\n", c.id, o.pass ? "PASS" : "FAIL", c.gated ? "" : " (informational)",
                o.detail.c_str());
    std::fflush(stdout);
    if (c.gated && !o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
