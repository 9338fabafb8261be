/**
 * @file report.hpp
 * @brief Solve report shared by the decomposition, TSN and oracle methods.
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mtrpp/instance.hpp"
#include "mtrpp/oracle.hpp"

namespace mtrpp {

enum class SolveStatus { Optimal, Infeasible, TimeLimit };

std::string to_string(SolveStatus status);

struct IterationLog {
  std::size_t iteration = 0;
  double master_objective = 0.0;  ///< raw z + sum d_k of this master solve
  double lower_bound = 0.0;       ///< best master objective so far
  std::optional<double> upper_bound;
  std::optional<double> gap;      ///< percent
  std::size_t cycles = 0;
  std::size_t feasibility_cuts = 0;  ///< added this iteration (after replication)
  std::size_t cost_cuts = 0;
  double elapsed_seconds = 0.0;
};

struct SolveReport {
  std::string method;
  SolveStatus status = SolveStatus::Infeasible;
  std::optional<Time> objective;  ///< exact cost of the incumbent
  Time movement_cost{0};
  Time completion_sum{0};
  double lower_bound = 0.0;
  std::vector<Route> routes;

  std::size_t iterations = 0;
  double time_seconds = 0.0;
  std::optional<double> gap_initial;  ///< percent, first feasible iteration
  std::optional<double> gap_final;    ///< percent
  std::size_t total_feasibility_cuts = 0;
  std::size_t total_cost_cuts = 0;

  std::size_t variables_linear = 0;
  std::size_t variables_integer = 0;
  std::size_t constraints = 0;
  std::size_t nodes = 0;

  std::vector<IterationLog> log;
  std::string message;

  /// Decomposition only: selected columns and vertex times of the replicated graph.
  std::vector<bool> x_bar;
  std::vector<Time> y_bar;
};

/// Relative gap in percent; zero when both bounds vanish.
double gap_percent(double lower, double upper);

nlohmann::ordered_json iteration_to_json(const IterationLog& it, bool include_timing);
nlohmann::ordered_json report_to_json(const Instance& instance, const SolveReport& report,
                                      bool include_timing);

}  // namespace mtrpp
