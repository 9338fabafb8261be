/**
 * @file benders.hpp
 * @brief Modified Benders decomposition over the replicated graph.
 *
 * The master chooses the spatial solution X and estimates its cost with
 * z >= (beta+1) W^T X plus per-agent delay variables d_k bounded by cost
 * cuts. Cycles in the chosen X are excluded by feasibility cuts. Timing is
 * recovered by a forward pass along each agent's path that shifts departures
 * out of unavailability windows.
 */
#pragma once

#include <cstddef>
#include <functional>
#include <set>
#include <vector>

#include "mtrpp/instance.hpp"
#include "mtrpp/milp.hpp"
#include "mtrpp/replicated_graph.hpp"
#include "mtrpp/report.hpp"

namespace mtrpp {

/// Sum of x over the cycle columns <= size - 1.
struct FeasibilityCut {
  std::vector<std::size_t> arc_columns;  ///< sorted
  friend auto operator<=>(const FeasibilityCut&, const FeasibilityCut&) = default;
};

/// d_agent >= delta * (x_trigger - sum of x over neighbors). The trigger is
/// the blocked arc; neighbors enter the path before its head.
struct CostCut {
  std::size_t agent = 0;
  Time delta{0};
  std::size_t trigger_arc = 0;
  std::vector<std::size_t> neighbor_arcs;  ///< sorted
  friend bool operator==(const CostCut&, const CostCut&) = default;
  friend bool operator<(const CostCut& a, const CostCut& b) {
    if (a.agent != b.agent) return a.agent < b.agent;
    if (a.trigger_arc != b.trigger_arc) return a.trigger_arc < b.trigger_arc;
    if (a.neighbor_arcs != b.neighbor_arcs) return a.neighbor_arcs < b.neighbor_arcs;
    return a.delta < b.delta;
  }
};

struct TimingPass {
  std::vector<Time> y;  ///< per replicated vertex; zero when unvisited
  /// Visited vertices per agent in path order, source first, sink last.
  std::vector<std::vector<std::size_t>> order;
  /// Column used to leave each visited vertex (same shape as order, sink excluded).
  std::vector<std::vector<std::size_t>> out_arc;
};

struct PolycutResult {
  std::vector<Time> y;
  std::vector<CostCut> cuts;
};

struct BendersOptions {
  double epsilon = 1e-6;
  double time_limit = kInfinity;  ///< seconds, whole run
  std::size_t max_iterations = 100000;
  MilpOptions master;
  /// Called after each iteration (for streaming logs).
  std::function<void(const IterationLog&)> on_iteration;
};

ReplicatedGraph build_replicated_graph(const Instance& instance);
ReplicatedGraph build_replicated_graph(Instance&&) = delete;

MilpModel build_reduced_master(const ReplicatedGraph& graph, const Time& beta,
                               const std::vector<FeasibilityCut>& feasibility_cuts,
                               const std::vector<CostCut>& cost_cuts);

/// Every elementary directed cycle of the subgraph selected by x, once each.
std::vector<FeasibilityCut> find_cycles(const std::vector<bool>& x, const ReplicatedGraph& graph);

/// Feasibility cuts go to every layer of every component; cost cuts go to
/// every other component when the agents are homogeneous.
std::vector<FeasibilityCut> replicate_feasibility_cuts(const std::vector<FeasibilityCut>& cuts,
                                                       const ReplicatedGraph& graph);
std::vector<CostCut> replicate_cost_cuts(const std::vector<CostCut>& cuts, const ReplicatedGraph& graph,
                                         bool homogeneous);

/// Running-time-only forward pass on a cycle-free x.
TimingPass timing_pass(const std::vector<bool>& x, const ReplicatedGraph& graph);

/// Shifts departures out of unavailability windows, one cut per corrected vertex.
PolycutResult polycut(const TimingPass& pass, const ReplicatedGraph& graph);

bool convergence_check(double lb, double ub, double epsilon);

SolveReport solve_mtrpp(const Instance& instance, const BendersOptions& options = {});

// ---------------------------------------------------------------------------
// Full formulation with finite tau (debug and cross-checking only).

struct FullMp {
  MilpModel milp;
  Time tau;
  std::size_t y_offset = 0;  ///< columns [0, |arcs|) are X, then one Y per replicated vertex
  std::size_t selector_count = 0;
};

/// tau = sum of running times over replicated arcs + max window upper limit.
FullMp build_full_mp(const ReplicatedGraph& graph);

/// Flow, service, running-time and unavailability conditions checked exactly.
/// Returns human-readable violations; empty means feasible.
std::vector<std::string> check_mp_solution(const ReplicatedGraph& graph, const std::vector<bool>& x,
                                           const std::vector<Time>& y);

}  // namespace mtrpp
