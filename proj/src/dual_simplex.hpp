// Dense bounded dual simplex used by the branch and bound driver.
#pragma once

#include <chrono>
#include <cstddef>
#include <vector>

#include "mtrpp/milp.hpp"

namespace mtrpp::detail {

/**
 * Every row i gets a slack s_i with a_i x + s_i = b_i. The slack bounds
 * encode the sense: <= gives [0, inf), >= gives (-inf, 0], = gives [0, 0].
 * The starting basis is all slacks; nonbasic structurals sit on the bound
 * that makes their reduced cost dual feasible, so any bound change keeps the
 * basis dual feasible and only primal repair is needed.
 */
class DualSimplex {
 public:
  enum class Result { Optimal, Infeasible, Unbounded, Cutoff, TimeLimit };

  DualSimplex(const MilpModel& model, const MilpOptions& options);

  /// Change bounds of a structural column; the basis is kept.
  void set_bounds(std::size_t j, double lower, double upper);
  double lower(std::size_t j) const { return lo_[j]; }
  double upper(std::size_t j) const { return hi_[j]; }

  /// Reoptimise. Stops early with Cutoff once the dual objective exceeds cutoff.
  Result solve(double cutoff, std::chrono::steady_clock::time_point deadline);

  double objective() const;
  std::vector<double> primal() const;
  std::size_t iterations() const { return iterations_; }

 private:
  double value(std::size_t j) const;
  void place_nonbasic(std::size_t j);
  void refactor();
  void recompute_basic_values();
  bool artificial_active() const;
  double* row(std::size_t i) { return &tab_[i * total_]; }
  const double* row(std::size_t i) const { return &tab_[i * total_]; }

  const MilpOptions opt_;
  std::size_t m_ = 0;      // rows
  std::size_t n_ = 0;      // structural columns
  std::size_t total_ = 0;  // n + m
  std::vector<double> a_;  // original structural matrix, m x n dense
  std::vector<double> b_;
  std::vector<double> c_;  // costs, slacks zero
  std::vector<double> lo_, hi_;
  std::vector<bool> artificial_lo_, artificial_hi_;

  std::vector<double> tab_;   // B^-1 [A I], m x total
  std::vector<double> beta_;  // B^-1 b
  std::vector<double> d_;     // reduced costs
  std::vector<double> xb_;    // basic values
  std::vector<std::size_t> basis_;
  std::vector<std::ptrdiff_t> pos_;  // row of a basic variable, -1 if nonbasic
  std::vector<bool> at_upper_;
  std::size_t iterations_ = 0;
  std::size_t since_refactor_ = 0;
};

}  // namespace mtrpp::detail
