#include "mtrpp/report.hpp"

#include <cmath>

namespace mtrpp {

using ojson = nlohmann::ordered_json;

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::TimeLimit: return "time-limit";
  }
  return "unknown";
}

double gap_percent(double lower, double upper) {
  const double diff = upper - lower;
  if (std::fabs(diff) <= 1e-9 * std::max(1.0, std::fabs(upper))) return 0.0;
  return 100.0 * diff / std::max(std::fabs(upper), 1e-9);
}

namespace {

ojson time_json(const Time& t) {
  if (t.denominator() == 1) return t.numerator();
  return to_double(t);
}

template <class T>
ojson opt_json(const std::optional<T>& v) {
  return v ? ojson(*v) : ojson(nullptr);
}

}  // namespace

ojson iteration_to_json(const IterationLog& it, bool include_timing) {
  ojson j;
  j["iteration"] = it.iteration;
  j["master_objective"] = it.master_objective;
  j["lower_bound"] = it.lower_bound;
  j["upper_bound"] = opt_json(it.upper_bound);
  j["gap"] = opt_json(it.gap);
  j["cycles"] = it.cycles;
  j["feasibility_cuts"] = it.feasibility_cuts;
  j["cost_cuts"] = it.cost_cuts;
  if (include_timing) j["elapsed_seconds"] = it.elapsed_seconds;
  return j;
}

ojson report_to_json(const Instance& in, const SolveReport& r, bool include_timing) {
  ojson j;
  j["schema"] = "mtrpp-report/1";
  j["method"] = r.method;
  j["status"] = to_string(r.status);
  if (r.objective) {
    j["objective"] = time_json(*r.objective);
    j["objective_exact"] = to_exact_string(*r.objective);
  } else {
    j["objective"] = nullptr;
    j["objective_exact"] = nullptr;
  }
  j["movement_cost"] = time_json(r.movement_cost);
  j["completion_sum"] = time_json(r.completion_sum);
  j["lower_bound"] = r.lower_bound;

  ojson routes = ojson::array();
  for (const auto& route : r.routes) {
    ojson jr;
    jr["agent"] = in.agent(route.agent).id;
    jr["completion"] = time_json(route.completion);
    jr["movement"] = time_json(route.movement);
    ojson steps = ojson::array();
    for (const auto& s : route.steps) {
      steps.push_back({{"arc", in.arc(s.arc).id},
                       {"service", in.is_service(s.arc)},
                       {"departure", time_json(s.departure)},
                       {"arrival", time_json(s.arrival)}});
    }
    jr["steps"] = std::move(steps);
    routes.push_back(std::move(jr));
  }
  j["routes"] = std::move(routes);

  j["iterations"] = r.iterations;
  if (include_timing) j["time_seconds"] = r.time_seconds;
  j["gap_initial"] = opt_json(r.gap_initial);
  j["gap_final"] = opt_json(r.gap_final);
  j["feasibility_cuts"] = r.total_feasibility_cuts;
  j["cost_cuts"] = r.total_cost_cuts;
  j["variables"] = {{"linear", r.variables_linear},
                    {"integer", r.variables_integer},
                    {"total", r.variables_linear + r.variables_integer}};
  j["constraints"] = r.constraints;
  j["nodes"] = r.nodes;
  ojson log = ojson::array();
  for (const auto& it : r.log) log.push_back(iteration_to_json(it, include_timing));
  j["log"] = std::move(log);
  j["message"] = r.message;
  return j;
}

}  // namespace mtrpp
