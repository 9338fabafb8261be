#include <doctest.h>

#include <cmath>

#include "mtrpp/benders.hpp"
#include "mtrpp/generators.hpp"
#include "mtrpp/oracle.hpp"

using namespace mtrpp;

namespace {

std::size_t virtual_column(const ReplicatedGraph& g, RepArcKind kind, std::size_t agent, std::size_t vertex) {
  for (std::size_t c = 0; c < g.arc_count(); ++c) {
    const RepArc& a = g.arcs()[c];
    if (a.kind != kind || a.agent != agent) continue;
    if (kind == RepArcKind::VirtualSource && a.head == vertex) return c;
    if (kind == RepArcKind::VirtualSink && a.tail == vertex) return c;
    if (kind == RepArcKind::SourceSink) return c;
  }
  FAIL("no such virtual column");
  return 0;
}

// One agent, vertices u0..u2, path arcs p0 (u0->u1) and p1 (u1->u2) with
// the given running times and windows on p1; return arcs close the graph.
Instance path_instance(const Time& w0, const Time& w1, std::vector<UnavailabilityWindow> windows) {
  Instance::Data d;
  d.vertices = {"u0", "u1", "u2"};
  d.arcs.push_back({"p0", "u0", "u1", {}});
  d.arcs.push_back({"p1", "u1", "u2", Unavailability(std::move(windows), std::nullopt)});
  d.arcs.push_back({"r", "u2", "u0", {}});
  d.running_times[{"k", "p0"}] = w0;
  d.running_times[{"k", "p1"}] = w1;
  d.running_times[{"k", "r"}] = Time{1};
  d.agents.push_back({"k", {"u0"}, {"u2"}});
  return Instance(std::move(d));
}

std::vector<bool> path_x(const ReplicatedGraph& g) {
  std::vector<bool> x(g.arc_count(), false);
  x[*g.column(0, 0, 1)] = true;
  x[*g.column(0, 1, 1)] = true;
  x[virtual_column(g, RepArcKind::VirtualSource, 0, g.vertex(0, 0, 1))] = true;
  x[virtual_column(g, RepArcKind::VirtualSink, 0, g.vertex(0, 2, 1))] = true;
  return x;
}

std::vector<std::string> service_order(const Instance& in, const SolveReport& r) {
  std::vector<std::string> out;
  for (const auto& route : r.routes)
    for (const auto& s : route.steps)
      if (in.is_service(s.arc)) out.push_back(in.arc(s.arc).id);
  return out;
}

}  // namespace

TEST_CASE("master without cuts prices movement twice") {
  const Instance in = gen_t1(false);
  const ReplicatedGraph g(in);
  const MilpModel m = build_reduced_master(g, in.beta(), {}, {});
  CHECK(m.integer_count() == g.arc_count());
  CHECK(m.column_count() == g.arc_count() + 2);
  const auto s = solve(m);
  REQUIRE(s.status == MilpStatus::Optimal);
  CHECK(s.objective_value == doctest::Approx(10.0));
  CHECK(s.values[g.arc_count()] == doctest::Approx(10.0));
}

TEST_CASE("cut rows") {
  const Instance in = gen_t1(false);
  const ReplicatedGraph g(in);
  const std::size_t d12 = *g.column(0, in.arc_index("d12"), 1), d21 = *g.column(0, in.arc_index("d21"), 1);
  const MilpModel m = build_reduced_master(g, in.beta(), {FeasibilityCut{{d12, d21}}},
                                           {CostCut{0, Time{3}, d21, {}}});
  const MilpRow& cost = m.rows()[m.row_count() - 2];
  const MilpRow& cycle = m.rows().back();
  CHECK(cycle.sense == Sense::LessEqual);
  CHECK(cycle.rhs == 1.0);
  CHECK(cycle.coeffs == std::vector<std::pair<std::size_t, double>>{{d12, 1.0}, {d21, 1.0}});
  CHECK(cost.sense == Sense::GreaterEqual);
  CHECK(cost.coeffs == std::vector<std::pair<std::size_t, double>>{{g.arc_count() + 1, 1.0}, {d21, -3.0}});
}

TEST_CASE("cycle detection") {
  const Instance in = gen_ex1('a');
  const ReplicatedGraph g(in);
  const auto col = [&](const char* id, std::size_t layer) { return *g.column(0, in.arc_index(id), layer); };

  std::vector<bool> path(g.arc_count(), false);
  for (std::size_t c : {virtual_column(g, RepArcKind::VirtualSource, 0, g.vertex(0, 0, 1)), col("a2", 1), col("a5", 2),
                        virtual_column(g, RepArcKind::VirtualSink, 0, g.vertex(0, 0, 3))})
    path[c] = true;
  CHECK(find_cycles(path, g).empty());

  std::vector<bool> two = path;
  two[col("a1", 1)] = two[col("a3", 1)] = true;
  const auto one_cut = find_cycles(two, g);
  REQUIRE(one_cut.size() == 1);
  CHECK(one_cut[0].arc_columns == std::vector<std::size_t>{col("a1", 1), col("a3", 1)});

  // v1 -a1-> v2 -a3-> v1 and v2 -a4-> v3 -a6-> v2 share v2.
  std::vector<bool> eight = two;
  eight[col("a4", 1)] = eight[col("a6", 1)] = true;
  const auto cuts = find_cycles(eight, g);
  REQUIRE(cuts.size() == 2);
  CHECK(cuts[0].arc_columns != cuts[1].arc_columns);
}

TEST_CASE("feasibility cuts are copied to every layer and component") {
  const Instance in = gen_ex1('c');
  const ReplicatedGraph g(in);
  const FeasibilityCut cut{{*g.column(0, in.arc_index("a1"), 2), *g.column(0, in.arc_index("a3"), 2)}};
  const auto all = replicate_feasibility_cuts({cut}, g);
  CHECK(all.size() == 6);
  for (const auto& c : all) {
    REQUIRE(c.arc_columns.size() == 2);
    CHECK(g.arcs()[c.arc_columns[0]].parent_arc == in.arc_index("a1"));
    CHECK(g.arcs()[c.arc_columns[0]].layer == g.arcs()[c.arc_columns[1]].layer);
  }
}

TEST_CASE("cost cuts are copied only between homogeneous agents") {
  const Instance in = gen_ex1('c');
  const ReplicatedGraph g(in);
  const CostCut cut{0, Time{2}, *g.column(0, 1, 1), {*g.column(0, 2, 1)}};
  const auto same = replicate_cost_cuts({cut}, g, true);
  REQUIRE(same.size() == 2);
  CHECK(same[1].agent == 1);
  CHECK(same[1].trigger_arc == g.map_column(cut.trigger_arc, 1));
  CHECK(replicate_cost_cuts({cut}, g, false).size() == 1);

  Instance::Data d = in.data();
  d.running_times[{"k2", "a1"}] = Time{5};
  CHECK_FALSE(Instance(d).homogeneous_agents());
  CHECK(in.homogeneous_agents());
}

TEST_CASE("timing pass") {
  const Instance in = gen_t1(false);
  const ReplicatedGraph g(in);
  std::vector<bool> x(g.arc_count(), false);
  x[virtual_column(g, RepArcKind::VirtualSource, 0, g.vertex(0, 0, 1))] = true;
  x[*g.column(0, in.arc_index("s12"), 1)] = true;
  x[*g.column(0, in.arc_index("d21"), 2)] = true;
  x[virtual_column(g, RepArcKind::VirtualSink, 0, g.vertex(0, 0, 2))] = true;
  const TimingPass p = timing_pass(x, g);
  CHECK(p.y[g.vertex(0, 1, 2)] == Time{3});
  CHECK(p.y[g.vertex(0, 0, 2)] == Time{5});
  CHECK(p.y[g.sink(0)] == Time{5});
  CHECK(p.order[0].front() == g.source(0));
  CHECK(p.order[0].back() == g.sink(0));

  std::vector<bool> idle(g.arc_count(), false);
  idle[virtual_column(g, RepArcKind::SourceSink, 0, 0)] = true;
  CHECK(timing_pass(idle, g).y[g.sink(0)] == Time{0});
}

TEST_CASE("polycut shifts out of a window") {
  const Instance in = path_instance(Time{3}, Time{2}, {{Time{4}, Time{6}}});
  const ReplicatedGraph g(in);
  const PolycutResult r = polycut(timing_pass(path_x(g), g), g);
  CHECK(r.y[g.vertex(0, 1, 1)] == Time{6});
  CHECK(r.y[g.sink(0)] == Time{8});
  REQUIRE(r.cuts.size() == 1);
  CHECK(r.cuts[0].delta == Time{3});
  CHECK(r.cuts[0].trigger_arc == *g.column(0, 1, 1));
  CHECK(std::find(r.cuts[0].neighbor_arcs.begin(), r.cuts[0].neighbor_arcs.end(), r.cuts[0].trigger_arc) ==
        r.cuts[0].neighbor_arcs.end());
  // The return arc r enters u0, which is on the path.
  CHECK(std::find(r.cuts[0].neighbor_arcs.begin(), r.cuts[0].neighbor_arcs.end(), *g.column(0, 2, 1)) !=
        r.cuts[0].neighbor_arcs.end());
}

TEST_CASE("polycut leaves boundary departures alone") {
  const Instance in = path_instance(Time{2}, Time{2}, {{Time{4}, Time{6}}});
  const ReplicatedGraph g(in);
  const PolycutResult r = polycut(timing_pass(path_x(g), g), g);
  CHECK(r.y[g.vertex(0, 1, 1)] == Time{2});
  CHECK(r.cuts.empty());
}

TEST_CASE("polycut cascades over overlapping windows") {
  const Instance in = path_instance(Time{3}, Time{2}, {{Time{4}, Time{6}}, {Time(11, 2), Time{9}}});
  const ReplicatedGraph g(in);
  const PolycutResult r = polycut(timing_pass(path_x(g), g), g);
  CHECK(r.y[g.vertex(0, 1, 1)] == Time{9});
  REQUIRE(r.cuts.size() == 1);
  CHECK(r.cuts[0].delta == Time{6});
}

TEST_CASE("polycut agrees with the oracle timing") {
  const Instance in = path_instance(Time{3}, Time{2}, {{Time{4}, Time{6}}, {Time{7}, Time{10}}});
  const ReplicatedGraph g(in);
  const PolycutResult r = polycut(timing_pass(path_x(g), g), g);
  const auto steps = earliest_feasible_timing(in, 0, {0, 1}, Time{0}, Time{1000});
  REQUIRE(steps);
  CHECK((*steps)[1].departure == r.y[g.vertex(0, 1, 1)]);
  CHECK((*steps)[1].arrival == r.y[g.sink(0)]);
}

TEST_CASE("convergence check") {
  CHECK(convergence_check(10.0, 10.0, 1e-6));
  CHECK_FALSE(convergence_check(9.0, 10.0, 1e-6));
  CHECK(convergence_check(10.0 - 1e-9, 10.0, 1e-6));
}

TEST_CASE("solves the small fixtures exactly") {
  struct Case {
    Instance instance;
    Time expected;
  };
  const std::vector<Case> cases = {
      {gen_t1(false), Time{10}},   {gen_t1(true), Time{13}},          {gen_ex1('a'), Time{12}},
      {gen_ex1('b'), Time{20}},    {gen_ex1('c'), Time(219, 10)},     {gen_ex1('c', 1), Time(229, 10)},
  };
  for (const auto& c : cases) {
    const SolveReport r = solve_mtrpp(c.instance);
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(*r.objective == c.expected);
    CHECK(*r.objective == r.movement_cost + r.completion_sum);
    const ReplicatedGraph g(c.instance);
    CHECK(check_mp_solution(g, r.x_bar, r.y_bar).empty());
    for (std::size_t i = 1; i < r.log.size(); ++i) CHECK(r.log[i].lower_bound >= r.log[i - 1].lower_bound);
    REQUIRE(r.gap_initial);
    CHECK(*r.gap_final <= *r.gap_initial);
  }
}

TEST_CASE("Ex-I service orders and the extra agent") {
  const Instance a = gen_ex1('a'), b = gen_ex1('b');
  CHECK(service_order(a, solve_mtrpp(a)) == std::vector<std::string>{"a2", "a5"});
  CHECK(service_order(b, solve_mtrpp(b)) == std::vector<std::string>{"a5", "a2"});
  CHECK(*solve_mtrpp(gen_ex1('c')).objective < *solve_mtrpp(gen_ex1('c', 1)).objective);
}

TEST_CASE("no windows means no cost cuts") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Instance in = gen_tiny(seed, {true, false});
    const SolveReport r = solve_mtrpp(in);
    CHECK(r.total_cost_cuts == 0);
    std::size_t with_cycles = 0;
    for (const auto& it : r.log) with_cycles += it.cycles > 0;
    CHECK(r.iterations == with_cycles + 1);
  }
}

TEST_CASE("full formulation agrees on tiny instances") {
  for (const Instance& in : {gen_t1(false), gen_t1(true), gen_ex1('a')}) {
    const ReplicatedGraph g(in);
    const FullMp mp = build_full_mp(g);
    const auto s = solve(mp.milp);
    REQUIRE(s.status == MilpStatus::Optimal);
    CHECK(s.objective_value == doctest::Approx(to_double(*solve_mtrpp(in).objective)));
    std::size_t windows = 0;
    for (std::size_t a = 0; a < in.arc_count(); ++a) windows += in.arc(a).unavailability.windows().size();
    CHECK((mp.selector_count > 0) == (windows > 0));
  }
}

TEST_CASE("checker reports violations") {
  const Instance in = gen_t1(true);
  const ReplicatedGraph g(in);
  std::vector<bool> x(g.arc_count(), false);
  x[virtual_column(g, RepArcKind::VirtualSource, 0, g.vertex(0, 0, 1))] = true;
  x[*g.column(0, in.arc_index("s12"), 1)] = true;
  x[*g.column(0, in.arc_index("d21"), 2)] = true;
  x[virtual_column(g, RepArcKind::VirtualSink, 0, g.vertex(0, 0, 2))] = true;
  std::vector<Time> y = timing_pass(x, g).y;
  CHECK_FALSE(check_mp_solution(g, x, y).empty());  // d21 departs at 3 inside (4 - 2, 6)
  y[g.vertex(0, 1, 2)] = Time{6};
  y[g.vertex(0, 0, 2)] = Time{8};
  y[g.sink(0)] = Time{8};
  CHECK(check_mp_solution(g, x, y).empty());
  x[*g.column(0, in.arc_index("s12"), 1)] = false;
  CHECK_FALSE(check_mp_solution(g, x, y).empty());
}

TEST_CASE("stalling is reported as a time limit") {
  BendersOptions o;
  o.max_iterations = 1;
  const SolveReport r = solve_mtrpp(gen_ex1('b'), o);
  CHECK(r.status == SolveStatus::TimeLimit);
  CHECK_FALSE(r.message.empty());
}
