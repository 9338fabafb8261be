#include "mtrpp/benders.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <set>

namespace mtrpp {

ReplicatedGraph build_replicated_graph(const Instance& instance) { return ReplicatedGraph(instance); }

MilpModel build_reduced_master(const ReplicatedGraph& g, const Time& beta,
                               const std::vector<FeasibilityCut>& feasibility_cuts,
                               const std::vector<CostCut>& cost_cuts) {
  MilpModel m;
  const std::size_t nx = g.arc_count();
  for (std::size_t c = 0; c < nx; ++c) m.add_binary("x" + std::to_string(c), 0.0);
  const std::size_t z = m.add_column("z", 1.0, 0.0, kInfinity, false);
  std::vector<std::size_t> d;
  for (std::size_t k = 0; k < g.agent_count(); ++k)
    d.push_back(m.add_column("d" + std::to_string(k), 1.0, 0.0, kInfinity, false));

  const auto b1 = g.flow_rhs();
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    std::vector<std::pair<std::size_t, double>> row;
    for (std::size_t c : g.in_arcs(v)) row.emplace_back(c, 1.0);
    for (std::size_t c : g.out_arcs(v)) row.emplace_back(c, -1.0);
    m.add_row("flow" + std::to_string(v), std::move(row), Sense::Equal, b1[v]);
  }
  const auto services = g.service_rows();
  for (std::size_t s = 0; s < services.size(); ++s) {
    std::vector<std::pair<std::size_t, double>> row;
    for (std::size_t c : services[s]) row.emplace_back(c, 1.0);
    m.add_row("service" + std::to_string(s), std::move(row), Sense::Equal, 1.0);
  }

  // z >= (beta + 1) W^T X
  {
    const double f = to_double(beta) + 1.0;
    std::vector<std::pair<std::size_t, double>> row{{z, 1.0}};
    for (std::size_t c = 0; c < nx; ++c)
      if (g.arcs()[c].weight != Time{0}) row.emplace_back(c, -f * to_double(g.arcs()[c].weight));
    m.add_row("approx", std::move(row), Sense::GreaterEqual, 0.0);
  }
  for (std::size_t i = 0; i < cost_cuts.size(); ++i) {
    const CostCut& cut = cost_cuts[i];
    const double delta = to_double(cut.delta);
    std::vector<std::pair<std::size_t, double>> row{{d[cut.agent], 1.0}, {cut.trigger_arc, -delta}};
    for (std::size_t c : cut.neighbor_arcs) row.emplace_back(c, delta);
    m.add_row("cost" + std::to_string(i), std::move(row), Sense::GreaterEqual, 0.0);
  }
  for (std::size_t i = 0; i < feasibility_cuts.size(); ++i) {
    const auto& cols = feasibility_cuts[i].arc_columns;
    std::vector<std::pair<std::size_t, double>> row;
    for (std::size_t c : cols) row.emplace_back(c, 1.0);
    m.add_row("cycle" + std::to_string(i), std::move(row), Sense::LessEqual,
              static_cast<double>(cols.size()) - 1.0);
  }
  return m;
}

std::vector<FeasibilityCut> find_cycles(const std::vector<bool>& x, const ReplicatedGraph& g) {
  std::set<FeasibilityCut> found;
  std::vector<std::vector<std::size_t>> out(g.vertex_count());
  std::vector<std::size_t> touched;
  for (std::size_t c = 0; c < g.arc_count(); ++c) {
    if (!x[c]) continue;
    out[g.arcs()[c].tail].push_back(c);
    touched.push_back(g.arcs()[c].tail);
  }
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());

  std::vector<bool> on_path(g.vertex_count(), false);
  std::vector<std::size_t> path;
  // Cycles are enumerated from their smallest vertex so each appears once.
  std::function<void(std::size_t, std::size_t)> dfs = [&](std::size_t s, std::size_t v) {
    for (std::size_t c : out[v]) {
      const std::size_t h = g.arcs()[c].head;
      if (h == s) {
        FeasibilityCut cut{path};
        cut.arc_columns.push_back(c);
        std::sort(cut.arc_columns.begin(), cut.arc_columns.end());
        found.insert(std::move(cut));
      } else if (h > s && !on_path[h]) {
        on_path[h] = true;
        path.push_back(c);
        dfs(s, h);
        path.pop_back();
        on_path[h] = false;
      }
    }
  };
  for (std::size_t s : touched) {
    on_path[s] = true;
    dfs(s, s);
    on_path[s] = false;
  }
  return {found.begin(), found.end()};
}

std::vector<FeasibilityCut> replicate_feasibility_cuts(const std::vector<FeasibilityCut>& cuts,
                                                       const ReplicatedGraph& g) {
  std::set<FeasibilityCut> out;
  for (const auto& cut : cuts) {
    // Cycles live inside one layer and use deadhead copies only.
    bool copyable = !cut.arc_columns.empty();
    for (std::size_t c : cut.arc_columns)
      if (g.arcs()[c].kind != RepArcKind::Deadhead) copyable = false;
    if (!copyable) {
      out.insert(cut);
      continue;
    }
    for (std::size_t k = 0; k < g.agent_count(); ++k) {
      for (std::size_t l = 1; l <= g.layer_count(); ++l) {
        FeasibilityCut copy;
        for (std::size_t c : cut.arc_columns) copy.arc_columns.push_back(*g.column(k, g.arcs()[c].parent_arc, l));
        std::sort(copy.arc_columns.begin(), copy.arc_columns.end());
        out.insert(std::move(copy));
      }
    }
  }
  return {out.begin(), out.end()};
}

std::vector<CostCut> replicate_cost_cuts(const std::vector<CostCut>& cuts, const ReplicatedGraph& g,
                                         bool homogeneous) {
  std::vector<CostCut> out;
  for (const auto& cut : cuts) {
    out.push_back(cut);
    if (!homogeneous) continue;
    for (std::size_t k = 0; k < g.agent_count(); ++k) {
      if (k == cut.agent) continue;
      CostCut copy;
      copy.agent = k;
      copy.delta = cut.delta;
      copy.trigger_arc = g.map_column(cut.trigger_arc, k);
      for (std::size_t c : cut.neighbor_arcs) copy.neighbor_arcs.push_back(g.map_column(c, k));
      std::sort(copy.neighbor_arcs.begin(), copy.neighbor_arcs.end());
      out.push_back(std::move(copy));
    }
  }
  return out;
}

TimingPass timing_pass(const std::vector<bool>& x, const ReplicatedGraph& g) {
  TimingPass p;
  p.y.assign(g.vertex_count(), Time{0});
  p.order.resize(g.agent_count());
  p.out_arc.resize(g.agent_count());
  for (std::size_t k = 0; k < g.agent_count(); ++k) {
    std::size_t v = g.source(k);
    p.order[k].push_back(v);
    while (v != g.sink(k)) {
      std::size_t next = g.arc_count();
      for (std::size_t c : g.out_arcs(v)) {
        if (x[c]) {
          next = c;
          break;
        }
      }
      if (next == g.arc_count()) throw std::logic_error("selected arcs do not form a source-sink path");
      const RepArc& a = g.arcs()[next];
      p.y[a.head] = p.y[v] + a.weight;
      p.out_arc[k].push_back(next);
      v = a.head;
      p.order[k].push_back(v);
      if (p.order[k].size() > g.vertex_count() + 1) throw std::logic_error("selected arcs contain a cycle");
    }
  }
  return p;
}

PolycutResult polycut(const TimingPass& pass, const ReplicatedGraph& g) {
  PolycutResult r;
  r.y = pass.y;
  const Instance& in = g.instance();
  for (std::size_t k = 0; k < g.agent_count(); ++k) {
    const auto& order = pass.order[k];
    const auto& out = pass.out_arc[k];
    Time shift{0};
    for (std::size_t i = 1; i < order.size(); ++i) {
      const std::size_t v = order[i];
      r.y[v] = pass.y[v] + shift;
      if (i + 1 == order.size()) break;  // sink
      const RepArc& a = g.arcs()[out[i]];
      if (a.is_virtual()) continue;
      const Time t = in.arc(a.parent_arc).unavailability.earliest_departure(r.y[v], a.weight);
      if (t == r.y[v]) continue;
      shift += t - r.y[v];
      r.y[v] = t;

      CostCut cut;
      cut.agent = k;
      cut.delta = shift;
      // The delay belongs to the blocked arc, so the path runs up to its head
      // and that arc is the trigger.
      cut.trigger_arc = out[i];
      std::set<std::size_t> prefix_arcs(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(i) + 1);
      std::set<std::size_t> neighbors;
      for (std::size_t j = 0; j <= i; ++j)
        for (std::size_t c : g.in_arcs(order[j]))
          if (!prefix_arcs.count(c)) neighbors.insert(c);
      cut.neighbor_arcs.assign(neighbors.begin(), neighbors.end());
      r.cuts.push_back(std::move(cut));
    }
  }
  return r;
}

bool convergence_check(double lb, double ub, double epsilon) {
  return ub - lb <= epsilon * std::max(1.0, std::fabs(ub));
}

namespace {

using Clock = std::chrono::steady_clock;

std::vector<Route> decode_routes(const ReplicatedGraph& g, const TimingPass& pass, const std::vector<Time>& y) {
  std::vector<Route> routes;
  for (std::size_t k = 0; k < g.agent_count(); ++k) {
    Route r;
    r.agent = k;
    for (std::size_t i = 0; i < pass.out_arc[k].size(); ++i) {
      const RepArc& a = g.arcs()[pass.out_arc[k][i]];
      if (a.is_virtual()) continue;
      const Time dep = y[pass.order[k][i]];
      r.steps.push_back({a.parent_arc, dep, dep + a.weight});
      r.movement += a.weight;
    }
    r.completion = y[g.sink(k)];
    routes.push_back(std::move(r));
  }
  return routes;
}

}  // namespace

SolveReport solve_mtrpp(const Instance& in, const BendersOptions& options) {
  const auto start = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

  SolveReport report;
  report.method = "benders";
  const ReplicatedGraph g(in);
  const bool homogeneous = in.homogeneous_agents();
  if (in.period() && !check_periodic_connectivity(in, *in.period()))
    report.message = "warning: periodic connectivity does not hold for the stated period; ";

  std::vector<FeasibilityCut> fcuts;
  std::set<FeasibilityCut> fseen;
  std::vector<CostCut> ccuts;
  std::set<CostCut> cseen;

  double best_lb = -kInfinity;
  std::optional<Time> best_ub;
  std::optional<TimingPass> best_pass;
  std::vector<Time> best_y;
  std::vector<bool> best_x;
  bool converged = false;
  bool stalled = false;
  bool out_of_time = false;

  for (std::size_t iter = 1; iter <= options.max_iterations; ++iter) {
    MilpOptions mo = options.master;
    mo.time_limit = std::min(mo.time_limit, options.time_limit - elapsed());
    if (mo.time_limit <= 0) {
      out_of_time = true;
      break;
    }
    const MilpModel master = build_reduced_master(g, in.beta(), fcuts, ccuts);
    if (iter == 1) {
      report.variables_integer = master.integer_count();
      report.variables_linear = master.column_count() - master.integer_count();
    }
    report.constraints = master.row_count();
    const MilpSolution sol = solve(master, mo);
    report.iterations = iter;
    report.nodes += sol.node_count;
    if (sol.status == MilpStatus::Infeasible) {
      if (!best_ub) {
        report.status = SolveStatus::Infeasible;
        report.message += "spatial problem is infeasible";
        report.time_seconds = elapsed();
        return report;
      }
      stalled = true;
      break;
    }
    if (sol.status == MilpStatus::TimeLimit) {
      out_of_time = true;
      best_lb = std::max(best_lb, sol.best_bound);
      break;
    }

    IterationLog log;
    log.iteration = iter;
    log.master_objective = sol.objective_value;
    best_lb = std::max(best_lb, sol.objective_value);
    log.lower_bound = best_lb;

    std::vector<bool> x(g.arc_count());
    for (std::size_t c = 0; c < g.arc_count(); ++c) x[c] = sol.values[c] > 0.5;

    std::size_t added = 0;
    const auto cycles = find_cycles(x, g);
    log.cycles = cycles.size();
    if (!cycles.empty()) {
      for (auto& cut : replicate_feasibility_cuts(cycles, g)) {
        if (fseen.insert(cut).second) {
          fcuts.push_back(std::move(cut));
          ++added;
        }
      }
      log.feasibility_cuts = added;
      report.total_feasibility_cuts += added;
    } else {
      const TimingPass pass = timing_pass(x, g);
      PolycutResult pc = polycut(pass, g);
      for (auto& cut : replicate_cost_cuts(pc.cuts, g, homogeneous)) {
        if (cseen.insert(cut).second) {
          ccuts.push_back(std::move(cut));
          ++added;
        }
      }
      log.cost_cuts = added;
      report.total_cost_cuts += added;

      Time ub{0};
      for (std::size_t c = 0; c < g.arc_count(); ++c)
        if (x[c]) ub += in.beta() * g.arcs()[c].weight;
      for (std::size_t k = 0; k < g.agent_count(); ++k) ub += pc.y[g.sink(k)];
      if (!best_ub || ub < *best_ub) {
        best_ub = ub;
        best_pass = pass;
        best_y = pc.y;
        best_x = x;
      }
      const double gap = gap_percent(best_lb, to_double(*best_ub));
      if (!report.gap_initial) report.gap_initial = gap;
      log.upper_bound = to_double(*best_ub);
      log.gap = gap;
    }
    if (best_ub && !log.upper_bound) {
      log.upper_bound = to_double(*best_ub);
      log.gap = gap_percent(best_lb, to_double(*best_ub));
    }
    log.elapsed_seconds = elapsed();
    report.log.push_back(log);
    if (options.on_iteration) options.on_iteration(log);

    if (best_ub && convergence_check(best_lb, to_double(*best_ub), options.epsilon)) {
      converged = true;
      break;
    }
    if (added == 0) {
      stalled = true;
      break;
    }
    if (elapsed() >= options.time_limit) {
      out_of_time = true;
      break;
    }
  }

  report.time_seconds = elapsed();
  report.lower_bound = best_lb;
  if (!best_ub) {
    report.status = SolveStatus::TimeLimit;
    report.message += "no cycle-free solution found before the limit";
    return report;
  }
  report.objective = *best_ub;
  report.gap_final = gap_percent(best_lb, to_double(*best_ub));
  report.x_bar = best_x;
  report.y_bar = best_y;
  report.routes = decode_routes(g, *best_pass, best_y);
  for (const auto& r : report.routes) {
    report.movement_cost += in.beta() * r.movement;
    report.completion_sum += r.completion;
  }
  if (converged) {
    report.status = SolveStatus::Optimal;
  } else {
    report.status = SolveStatus::TimeLimit;
    if (stalled) report.message += "stopped: no new cuts could be generated";
    else if (out_of_time) report.message += "time limit reached";
    else report.message += "iteration limit reached";
  }
  return report;
}

// ---------------------------------------------------------------------------
// Full formulation

FullMp build_full_mp(const ReplicatedGraph& g) {
  const Instance& in = g.instance();
  FullMp mp;
  Time tau{0}, max_upper{0};
  for (const auto& a : g.arcs()) tau += a.weight;
  for (std::size_t a = 0; a < in.arc_count(); ++a) {
    if (in.arc(a).unavailability.periodic())
      throw InstanceError("the full formulation needs explicit windows only");
    max_upper = std::max(max_upper, in.arc(a).unavailability.last_explicit_upper());
  }
  tau += max_upper;
  mp.tau = tau;
  const double big = 2.0 * to_double(tau);
  const double beta = to_double(in.beta());

  MilpModel& m = mp.milp;
  for (std::size_t c = 0; c < g.arc_count(); ++c)
    m.add_binary("x" + std::to_string(c), beta * to_double(g.arcs()[c].weight));
  mp.y_offset = m.column_count();
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    m.add_column("y" + std::to_string(v), g.vertices()[v].cost_coeff, 0.0, to_double(tau), false);

  const auto b1 = g.flow_rhs();
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    std::vector<std::pair<std::size_t, double>> row;
    for (std::size_t c : g.in_arcs(v)) row.emplace_back(c, 1.0);
    for (std::size_t c : g.out_arcs(v)) row.emplace_back(c, -1.0);
    m.add_row("flow" + std::to_string(v), std::move(row), Sense::Equal, b1[v]);
  }
  const auto services = g.service_rows();
  for (std::size_t s = 0; s < services.size(); ++s) {
    std::vector<std::pair<std::size_t, double>> row;
    for (std::size_t c : services[s]) row.emplace_back(c, 1.0);
    m.add_row("service" + std::to_string(s), std::move(row), Sense::Equal, 1.0);
  }
  for (std::size_t c = 0; c < g.arc_count(); ++c) {
    const RepArc& a = g.arcs()[c];
    const double w = to_double(a.weight);
    const std::size_t yt = mp.y_offset + a.tail, yh = mp.y_offset + a.head;
    // y_head - y_tail >= W - M (1 - x)
    m.add_row("run" + std::to_string(c), {{yh, 1.0}, {yt, -1.0}, {c, -big}}, Sense::GreaterEqual, w - big);
    if (a.is_virtual()) continue;
    for (const auto& win : in.arc(a.parent_arc).unavailability.windows()) {
      const std::size_t q = m.add_binary("q" + std::to_string(c) + "_" + std::to_string(mp.selector_count), 0.0);
      ++mp.selector_count;
      const double lo = to_double(win.lower), hi = to_double(win.upper);
      // Either y_tail <= lower - W or y_tail >= upper, enforced when x = 1.
      m.add_row("before" + std::to_string(q), {{yt, 1.0}, {c, big}, {q, -big}}, Sense::LessEqual, lo - w + big);
      m.add_row("after" + std::to_string(q), {{yt, 1.0}, {c, -big}, {q, -big}}, Sense::GreaterEqual,
                hi - 2.0 * big);
    }
  }
  return mp;
}

std::vector<std::string> check_mp_solution(const ReplicatedGraph& g, const std::vector<bool>& x,
                                           const std::vector<Time>& y) {
  std::vector<std::string> bad;
  const Instance& in = g.instance();
  const auto b1 = g.flow_rhs();
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    int balance = 0;
    for (std::size_t c : g.in_arcs(v)) balance += x[c] ? 1 : 0;
    for (std::size_t c : g.out_arcs(v)) balance -= x[c] ? 1 : 0;
    if (balance != b1[v]) bad.push_back("flow balance violated at " + g.vertex_label(v));
    if (y[v] < 0) bad.push_back("negative time at " + g.vertex_label(v));
  }
  const auto services = g.service_rows();
  for (std::size_t s = 0; s < services.size(); ++s) {
    std::size_t n = 0;
    for (std::size_t c : services[s]) n += x[c] ? 1 : 0;
    if (n != 1) bad.push_back("service arc " + in.arc(in.service_arcs()[s]).id + " covered " + std::to_string(n) + " times");
  }
  for (std::size_t c = 0; c < g.arc_count(); ++c) {
    if (!x[c]) continue;
    const RepArc& a = g.arcs()[c];
    if (y[a.head] < y[a.tail] + a.weight)
      bad.push_back("running time violated on column " + std::to_string(c));
    if (a.is_virtual()) continue;
    const Time t = y[a.tail];
    for (const auto& win : in.arc(a.parent_arc).unavailability.windows_until(t + a.weight + 1)) {
      if (win.lower - a.weight < t && t < win.upper) {
        bad.push_back("departure on column " + std::to_string(c) + " at " + to_exact_string(t) +
                      " overlaps window (" + to_exact_string(win.lower) + ", " + to_exact_string(win.upper) + ")");
        break;
      }
    }
  }
  return bad;
}

}  // namespace mtrpp
