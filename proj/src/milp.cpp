#include "mtrpp/milp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include "dual_simplex.hpp"

namespace mtrpp {

std::size_t MilpModel::add_column(std::string name, double objective, double lower, double upper,
                                  bool integer) {
  columns_.push_back({std::move(name), objective, lower, upper, integer});
  return columns_.size() - 1;
}

std::size_t MilpModel::add_row(std::string name, std::vector<std::pair<std::size_t, double>> coeffs,
                               Sense sense, double rhs) {
  rows_.push_back({std::move(name), std::move(coeffs), sense, rhs});
  return rows_.size() - 1;
}

std::size_t MilpModel::integer_count() const {
  return static_cast<std::size_t>(
      std::count_if(columns_.begin(), columns_.end(), [](const auto& c) { return c.integer; }));
}

void MilpModel::check() const {
  for (const auto& c : columns_) {
    if (std::isnan(c.lower) || std::isnan(c.upper) || c.lower > c.upper)
      throw std::invalid_argument("column '" + c.name + "' has invalid bounds");
    if (!std::isfinite(c.objective)) throw std::invalid_argument("column '" + c.name + "' has non-finite cost");
  }
  for (const auto& r : rows_) {
    if (!std::isfinite(r.rhs)) throw std::invalid_argument("row '" + r.name + "' has non-finite rhs");
    for (const auto& [j, v] : r.coeffs) {
      if (j >= columns_.size()) throw std::invalid_argument("row '" + r.name + "' references a missing column");
      if (!std::isfinite(v)) throw std::invalid_argument("row '" + r.name + "' has a non-finite coefficient");
    }
  }
}

double MilpModel::evaluate(const std::vector<double>& x) const {
  double s = 0.0;
  for (std::size_t j = 0; j < columns_.size(); ++j) s += columns_[j].objective * x[j];
  return s;
}

double MilpModel::max_violation(const std::vector<double>& x) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    worst = std::max(worst, columns_[j].lower - x[j]);
    worst = std::max(worst, x[j] - columns_[j].upper);
  }
  for (const auto& r : rows_) {
    double lhs = 0.0;
    for (const auto& [j, v] : r.coeffs) lhs += v * x[j];
    switch (r.sense) {
      case Sense::LessEqual: worst = std::max(worst, lhs - r.rhs); break;
      case Sense::GreaterEqual: worst = std::max(worst, r.rhs - lhs); break;
      case Sense::Equal: worst = std::max(worst, std::fabs(lhs - r.rhs)); break;
    }
  }
  return worst;
}

namespace {

std::string lp_name(const std::string& name, const char* prefix, std::size_t index) {
  if (name.empty()) return prefix + std::to_string(index);
  std::string out;
  for (char ch : name) out += (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '.') ? ch : '_';
  if (std::isdigit(static_cast<unsigned char>(out[0]))) out = "_" + out;
  return out;
}

void write_terms(std::ostream& os, const std::vector<std::pair<std::size_t, double>>& terms,
                 const std::vector<std::string>& names) {
  if (terms.empty()) {
    os << " 0 " << names.front();
    return;
  }
  for (const auto& [j, v] : terms) os << (v < 0 ? " - " : " + ") << std::fabs(v) << ' ' << names[j];
}

}  // namespace

void MilpModel::write_lp(std::ostream& os) const {
  std::vector<std::string> names;
  for (std::size_t j = 0; j < columns_.size(); ++j) names.push_back(lp_name(columns_[j].name, "x", j));
  os.precision(17);
  os << "Minimize\n obj:";
  std::vector<std::pair<std::size_t, double>> obj;
  for (std::size_t j = 0; j < columns_.size(); ++j)
    if (columns_[j].objective != 0.0) obj.emplace_back(j, columns_[j].objective);
  if (!columns_.empty()) write_terms(os, obj, names);
  os << "\nSubject To\n";
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto& r = rows_[i];
    os << ' ' << lp_name(r.name, "r", i) << ':';
    write_terms(os, r.coeffs, names);
    os << (r.sense == Sense::LessEqual ? " <= " : r.sense == Sense::Equal ? " = " : " >= ") << r.rhs << '\n';
  }
  os << "Bounds\n";
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    const auto& c = columns_[j];
    os << ' ';
    if (std::isinf(c.lower)) os << "-inf"; else os << c.lower;
    os << " <= " << names[j] << " <= ";
    if (std::isinf(c.upper)) os << "+inf"; else os << c.upper;
    os << '\n';
  }
  bool any = false;
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    if (!columns_[j].integer) continue;
    if (!any) os << "General\n";
    any = true;
    os << ' ' << names[j] << '\n';
  }
  os << "End\n";
}

std::string to_string(MilpStatus status) {
  switch (status) {
    case MilpStatus::Optimal: return "optimal";
    case MilpStatus::Infeasible: return "infeasible";
    case MilpStatus::Unbounded: return "unbounded";
    case MilpStatus::TimeLimit: return "time-limit";
  }
  return "unknown";
}

namespace {

using Clock = std::chrono::steady_clock;

Clock::time_point deadline_from(double seconds) {
  if (!std::isfinite(seconds) || seconds > 1e8) return Clock::time_point::max();
  return Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds));
}

}  // namespace

MilpSolution solve_lp_relaxation(const MilpModel& model, const MilpOptions& options) {
  model.check();
  detail::DualSimplex lp(model, options);
  const auto result = lp.solve(kInfinity, deadline_from(options.time_limit));
  MilpSolution sol;
  sol.lp_iterations = lp.iterations();
  sol.node_count = 1;
  switch (result) {
    case detail::DualSimplex::Result::Optimal:
      sol.status = MilpStatus::Optimal;
      sol.values = lp.primal();
      sol.objective_value = lp.objective();
      sol.best_bound = sol.objective_value;
      break;
    case detail::DualSimplex::Result::Unbounded:
      sol.status = MilpStatus::Unbounded;
      sol.objective_value = -kInfinity;
      break;
    case detail::DualSimplex::Result::TimeLimit: sol.status = MilpStatus::TimeLimit; break;
    default: sol.status = MilpStatus::Infeasible; break;
  }
  return sol;
}

MilpSolution solve(const MilpModel& model, const MilpOptions& options) {
  model.check();
  const auto deadline = deadline_from(options.time_limit);
  detail::DualSimplex lp(model, options);
  const std::size_t n = model.column_count();

  struct Node {
    std::vector<std::tuple<std::size_t, double, double>> changes;
    double bound;
  };
  std::vector<Node> stack;
  stack.push_back({{}, -kInfinity});

  MilpSolution sol;
  double incumbent = kInfinity;
  auto cutoff = [&]() {
    if (!std::isfinite(incumbent)) return kInfinity;
    return incumbent - std::max(options.gap_tol * std::max(1.0, std::fabs(incumbent)), 1e-9);
  };
  std::vector<std::pair<double, double>> root_bounds(n);
  for (std::size_t j = 0; j < n; ++j) root_bounds[j] = {model.columns()[j].lower, model.columns()[j].upper};
  std::vector<std::pair<double, double>> current = root_bounds;

  bool timed_out = false;
  double open_bound = kInfinity;
  while (!stack.empty()) {
    if (Clock::now() > deadline) {
      timed_out = true;
      break;
    }
    Node node = std::move(stack.back());
    stack.pop_back();
    if (node.bound >= cutoff()) continue;

    std::vector<std::pair<double, double>> want = root_bounds;
    for (const auto& [j, lo, hi] : node.changes) want[j] = {lo, hi};
    for (std::size_t j = 0; j < n; ++j) {
      if (want[j] != current[j]) {
        lp.set_bounds(j, want[j].first, want[j].second);
        current[j] = want[j];
      }
    }

    const auto result = lp.solve(cutoff(), deadline);
    ++sol.node_count;
    if (result == detail::DualSimplex::Result::TimeLimit) {
      timed_out = true;
      open_bound = std::min(open_bound, node.bound);
      break;
    }
    if (result == detail::DualSimplex::Result::Infeasible || result == detail::DualSimplex::Result::Cutoff)
      continue;
    if (result == detail::DualSimplex::Result::Unbounded) {
      sol.status = MilpStatus::Unbounded;
      sol.objective_value = -kInfinity;
      sol.lp_iterations = lp.iterations();
      return sol;
    }
    const double obj = lp.objective();
    if (obj >= cutoff()) continue;
    std::vector<double> x = lp.primal();

    // Most fractional integer column, ties to the lowest index.
    std::size_t branch = n;
    double best_frac = options.int_tol;
    for (std::size_t j = 0; j < n; ++j) {
      if (!model.columns()[j].integer) continue;
      const double f = std::min(x[j] - std::floor(x[j]), std::ceil(x[j]) - x[j]);
      if (f > best_frac + 1e-12) {
        best_frac = f;
        branch = j;
      }
    }
    if (branch == n) {
      for (std::size_t j = 0; j < n; ++j)
        if (model.columns()[j].integer) x[j] = std::round(x[j]);
      incumbent = model.evaluate(x);
      sol.values = std::move(x);
      sol.objective_value = incumbent;
      continue;
    }
    const double v = x[branch];
    Node down{node.changes, obj};
    down.changes.emplace_back(branch, current[branch].first, std::floor(v));
    Node up{std::move(node.changes), obj};
    up.changes.emplace_back(branch, std::ceil(v), current[branch].second);
    // Explore the nearer rounding first (pushed last).
    if (v - std::floor(v) >= 0.5) {
      stack.push_back(std::move(down));
      stack.push_back(std::move(up));
    } else {
      stack.push_back(std::move(up));
      stack.push_back(std::move(down));
    }
  }
  sol.lp_iterations = lp.iterations();

  if (timed_out) {
    for (const auto& node : stack) open_bound = std::min(open_bound, node.bound);
    sol.status = MilpStatus::TimeLimit;
    sol.best_bound = std::min(open_bound, incumbent);
    return sol;
  }
  if (std::isfinite(incumbent)) {
    sol.status = MilpStatus::Optimal;
    sol.best_bound = incumbent;
  } else {
    sol.status = MilpStatus::Infeasible;
  }
  return sol;
}

}  // namespace mtrpp
