/**
 * @file milp.hpp
 * @brief Small dense MILP solver: bounded dual simplex plus depth-first
 *        branch and bound over integer columns.
 *
 * Intended for models with up to a few thousand columns and rows. The
 * tableau is dense, so memory grows with rows * (columns + rows).
 */
#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace mtrpp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Sense { LessEqual, Equal, GreaterEqual };

struct MilpColumn {
  std::string name;
  double objective = 0.0;
  double lower = 0.0;
  double upper = kInfinity;
  bool integer = false;
};

struct MilpRow {
  std::string name;
  std::vector<std::pair<std::size_t, double>> coeffs;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
};

class MilpModel {
 public:
  std::size_t add_column(std::string name, double objective, double lower, double upper, bool integer);
  std::size_t add_binary(std::string name, double objective) {
    return add_column(std::move(name), objective, 0.0, 1.0, true);
  }
  std::size_t add_row(std::string name, std::vector<std::pair<std::size_t, double>> coeffs, Sense sense,
                      double rhs);

  const std::vector<MilpColumn>& columns() const { return columns_; }
  const std::vector<MilpRow>& rows() const { return rows_; }
  std::size_t column_count() const { return columns_.size(); }
  std::size_t row_count() const { return rows_.size(); }
  std::size_t integer_count() const;

  /// Throws std::invalid_argument on inconsistent dimensions or bounds.
  void check() const;

  /// Objective value of an arbitrary point.
  double evaluate(const std::vector<double>& x) const;
  /// Max violation over rows and bounds (integrality not included).
  double max_violation(const std::vector<double>& x) const;

  /// CPLEX LP text format.
  void write_lp(std::ostream& os) const;

 private:
  std::vector<MilpColumn> columns_;
  std::vector<MilpRow> rows_;
};

enum class MilpStatus { Optimal, Infeasible, Unbounded, TimeLimit };

std::string to_string(MilpStatus status);

struct MilpSolution {
  MilpStatus status = MilpStatus::Infeasible;
  std::vector<double> values;      ///< empty when no solution is known
  double objective_value = kInfinity;
  double best_bound = -kInfinity;  ///< proven lower bound
  std::size_t node_count = 0;
  std::size_t lp_iterations = 0;
  bool has_solution() const { return !values.empty(); }
};

struct MilpOptions {
  double time_limit = kInfinity;  ///< seconds
  double gap_tol = 1e-9;          ///< relative optimality gap for pruning
  double int_tol = 1e-6;
  double pivot_tol = 1e-9;
  double feas_tol = 1e-8;
  /// Consecutive degenerate pivots before switching to Bland's rule.
  std::size_t bland_threshold = 50;
  /// Pivots between refactorisations of the basis inverse.
  std::size_t refactor_interval = 100;
  /// Stand-in for infinite bounds of structural columns.
  double big_bound = 1e9;
  /// Largest dense tableau (rows times rows+columns) the solver will allocate.
  std::size_t max_tableau_entries = 100'000'000;
};

MilpSolution solve(const MilpModel& model, const MilpOptions& options = {});
MilpSolution solve_lp_relaxation(const MilpModel& model, const MilpOptions& options = {});

}  // namespace mtrpp
