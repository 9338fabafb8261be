#include "mtrpp/tsn.hpp"

#include <chrono>
#include <cmath>

namespace mtrpp {

namespace {

void require_multiple(const Time& t, const Time& dt, const std::string& what) {
  if (!is_multiple_of(t, dt))
    throw InstanceError(what + " (" + to_exact_string(t) + ") is not a multiple of dt = " + to_exact_string(dt));
}

}  // namespace

TsnModel build_tsn(const Instance& in, const TsnConfig& config) {
  if (config.dt <= 0) throw InstanceError("dt must be positive");
  if (config.horizon <= 0) throw InstanceError("horizon must be positive");
  require_multiple(config.horizon, config.dt, "horizon");
  for (std::size_t a = 0; a < in.arc_count(); ++a) {
    const auto& arc = in.arc(a);
    for (std::size_t k = 0; k < in.agent_count(); ++k)
      require_multiple(in.running_time(k, a), config.dt, "running time of " + arc.id);
    for (const auto& w : arc.unavailability.windows()) {
      require_multiple(w.lower, config.dt, "window bound of " + arc.id);
      require_multiple(w.upper, config.dt, "window bound of " + arc.id);
    }
    if (const auto& p = arc.unavailability.periodic()) {
      require_multiple(p->offset, config.dt, "periodic offset of " + arc.id);
      require_multiple(p->period, config.dt, "periodic period of " + arc.id);
      require_multiple(p->duration, config.dt, "periodic duration of " + arc.id);
    }
  }

  TsnModel m;
  m.config = config;
  const Time q = config.horizon / config.dt;
  const auto steps = static_cast<std::size_t>(q.numerator());
  const std::size_t stamps = steps + 1;
  const std::size_t nv = in.vertex_count();
  const double beta = to_double(in.beta());

  // Row layout per agent: nodes (v, t) row-major by stamp, then source, sink.
  const std::size_t per_agent = nv * stamps + 2;
  std::vector<std::vector<std::pair<std::size_t, double>>> flow(per_agent * in.agent_count());
  std::vector<std::vector<std::pair<std::size_t, double>>> service(in.service_count());
  std::vector<std::size_t> service_row(in.arc_count(), 0);
  for (std::size_t s = 0; s < in.service_count(); ++s) service_row[in.service_arcs()[s]] = s;

  auto node = [&](std::size_t k, std::size_t v, std::size_t s) { return k * per_agent + s * nv + v; };
  auto source = [&](std::size_t k) { return k * per_agent + nv * stamps; };
  auto sink = [&](std::size_t k) { return k * per_agent + nv * stamps + 1; };
  auto add = [&](TsnArc arc, const std::string& name, double cost, std::size_t tail, std::size_t head) {
    const std::size_t c = m.milp.add_binary(name, cost);
    m.arcs.push_back(arc);
    flow[tail].emplace_back(c, -1.0);
    flow[head].emplace_back(c, 1.0);
    return c;
  };

  for (std::size_t k = 0; k < in.agent_count(); ++k) {
    const std::string ag = in.agent(k).id;
    for (std::size_t s = 0; s < stamps; ++s) {
      const Time t = config.dt * static_cast<std::int64_t>(s);
      for (std::size_t a = 0; a < in.arc_count(); ++a) {
        const Time& w = in.running_time(k, a);
        if (t + w > config.horizon) continue;
        if (in.arc(a).unavailability.blocks(t, w)) continue;
        const auto s2 = static_cast<std::size_t>((w / config.dt).numerator()) + s;
        const std::size_t c = add({TsnArcKind::Movement, k, a, in.tail(a), t},
                                  "m_" + ag + "_" + in.arc(a).id + "_" + std::to_string(s), beta * to_double(w),
                                  node(k, in.tail(a), s), node(k, in.head(a), s2));
        ++m.counts.movement;
        if (in.is_service(a)) service[service_row[a]].emplace_back(c, 1.0);
      }
      if (s + 1 < stamps) {
        for (std::size_t v = 0; v < nv; ++v) {
          add({TsnArcKind::Waiting, k, 0, v, t}, "w_" + ag + "_" + in.vertex(v) + "_" + std::to_string(s), 0.0,
              node(k, v, s), node(k, v, s + 1));
          ++m.counts.waiting;
        }
      }
      for (std::size_t e : in.exits(k)) {
        add({TsnArcKind::Sink, k, 0, e, t}, "t_" + ag + "_" + in.vertex(e) + "_" + std::to_string(s), to_double(t),
            node(k, e, s), sink(k));
        ++m.counts.sink;
      }
    }
    for (std::size_t d : in.depots(k)) {
      add({TsnArcKind::Source, k, 0, d, Time{0}}, "s_" + ag + "_" + in.vertex(d), 0.0, source(k), node(k, d, 0));
      ++m.counts.source;
    }
    add({TsnArcKind::SourceSink, k, 0, 0, Time{0}}, "st_" + ag, 0.0, source(k), sink(k));
    ++m.counts.source_sink;
  }

  for (std::size_t k = 0; k < in.agent_count(); ++k) {
    for (std::size_t r = 0; r < per_agent; ++r) {
      const std::size_t idx = k * per_agent + r;
      double rhs = 0.0;
      if (idx == source(k)) rhs = -1.0;
      if (idx == sink(k)) rhs = 1.0;
      m.milp.add_row("f" + std::to_string(idx), std::move(flow[idx]), Sense::Equal, rhs);
      ++m.counts.flow_rows;
    }
  }
  for (std::size_t s = 0; s < in.service_count(); ++s) {
    m.milp.add_row("svc_" + in.arc(in.service_arcs()[s]).id, std::move(service[s]), Sense::Equal, 1.0);
    ++m.counts.service_rows;
  }
  return m;
}

SolveReport solve_tsn(const Instance& in, const TsnConfig& config, const MilpOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  SolveReport r;
  r.method = "tsn";
  const TsnModel m = build_tsn(in, config);
  r.variables_integer = m.counts.variables();
  r.constraints = m.counts.constraints();
  r.iterations = 1;

  const MilpSolution sol = solve(m.milp, options);
  r.nodes = sol.node_count;
  r.time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.lower_bound = sol.best_bound;
  if (!sol.has_solution()) {
    r.status = sol.status == MilpStatus::TimeLimit ? SolveStatus::TimeLimit : SolveStatus::Infeasible;
    r.message = r.status == SolveStatus::Infeasible
                    ? "time-expanded model is infeasible; try a larger horizon"
                    : "time limit reached without a feasible expansion solution";
    return r;
  }
  r.status = sol.status == MilpStatus::Optimal ? SolveStatus::Optimal : SolveStatus::TimeLimit;

  // Follow each agent's unit flow from its source.
  const std::size_t nv = in.vertex_count();
  for (std::size_t k = 0; k < in.agent_count(); ++k) {
    Route route;
    route.agent = k;
    std::size_t at_vertex = nv;
    Time at_time{0};
    for (std::size_t c = 0; c < m.arcs.size(); ++c) {
      const auto& a = m.arcs[c];
      if (a.agent == k && a.kind == TsnArcKind::Source && sol.values[c] > 0.5) at_vertex = a.vertex;
    }
    while (at_vertex < nv) {
      std::size_t next = m.arcs.size();
      for (std::size_t c = 0; c < m.arcs.size(); ++c) {
        const auto& a = m.arcs[c];
        if (a.agent != k || a.vertex != at_vertex || a.time != at_time || sol.values[c] <= 0.5) continue;
        if (a.kind == TsnArcKind::Movement || a.kind == TsnArcKind::Waiting || a.kind == TsnArcKind::Sink) {
          next = c;
          break;
        }
      }
      if (next == m.arcs.size()) break;
      const auto& a = m.arcs[next];
      if (a.kind == TsnArcKind::Sink) {
        route.completion = a.time;
        break;
      }
      if (a.kind == TsnArcKind::Waiting) {
        at_time += config.dt;
        continue;
      }
      const Time& w = in.running_time(k, a.parent_arc);
      route.steps.push_back({a.parent_arc, a.time, a.time + w});
      route.movement += w;
      at_vertex = in.head(a.parent_arc);
      at_time = a.time + w;
    }
    r.movement_cost += in.beta() * route.movement;
    r.completion_sum += route.completion;
    r.routes.push_back(std::move(route));
  }
  r.objective = r.movement_cost + r.completion_sum;
  r.gap_initial = r.gap_final = gap_percent(sol.best_bound, to_double(*r.objective));
  return r;
}

}  // namespace mtrpp
