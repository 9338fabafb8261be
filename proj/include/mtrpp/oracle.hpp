/**
 * @file oracle.hpp
 * @brief Exhaustive reference solver for tiny instances.
 *
 * Agents are independent given the split of service arcs between them, so
 * the optimum is the cheapest partition of A_* over agents. For each agent
 * and service subset every route is enumerated: service orders, depot and
 * exit choices, and vertex-simple deadhead paths between services. Each
 * route is timed by earliest feasible departures.
 */
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mtrpp/instance.hpp"

namespace mtrpp {

struct RouteStep {
  std::size_t arc;
  Time departure;
  Time arrival;
};

struct Route {
  std::size_t agent = 0;
  std::vector<RouteStep> steps;  ///< empty for an idle agent
  Time completion{0};
  Time movement{0};              ///< sum of running times
};

struct OracleOptions {
  std::size_t size_limit = 400;  ///< on |A| * (|A_*|+1) * |K|
  std::optional<Time> bound;     ///< latest admissible time; default derived from the data
};

struct OracleResult {
  bool feasible = false;
  Time objective{0};
  Time movement_cost{0};   ///< beta * sum of running times
  Time completion_sum{0};
  std::vector<Route> routes;  ///< one per agent, input order
  std::size_t routes_enumerated = 0;
};

class OracleSizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Departures along a fixed arc sequence for one agent starting at `start`.
/// Candidate departures are the arrival time and the upper limits of windows;
/// nullopt when some departure would exceed `bound`.
std::optional<std::vector<RouteStep>> earliest_feasible_timing(const Instance& instance,
                                                                std::size_t agent,
                                                                const std::vector<std::size_t>& arcs,
                                                                const Time& start, const Time& bound);

/// Default latest admissible time used by the oracle.
Time oracle_default_bound(const Instance& instance);

OracleResult brute_force_solve(const Instance& instance, const OracleOptions& options = {});

}  // namespace mtrpp
