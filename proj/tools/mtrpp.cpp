// Command-line front end: solve, compare, generate, validate, export-dot.
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mtrpp/benders.hpp"
#include "mtrpp/generators.hpp"
#include "mtrpp/instance.hpp"
#include "mtrpp/oracle.hpp"
#include "mtrpp/replicated_graph.hpp"
#include "mtrpp/report.hpp"
#include "mtrpp/tsn.hpp"

using namespace mtrpp;

namespace {

constexpr int kExitOptimal = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitTimeLimit = 3;
constexpr int kExitMismatch = 4;

struct SolveArgs {
  std::string instance;
  std::string method = "benders";
  std::string methods = "benders,tsn,oracle";
  std::optional<double> beta;
  double dt = 1.0;
  std::optional<double> horizon;
  double time_limit = 3600.0;
  std::uint64_t seed = 0;
  double epsilon = 1e-6;
  std::string out;
  std::string log;
  bool no_timing = false;
};

Instance with_beta(const Instance& in, const std::optional<double>& beta) {
  if (!beta) return in;
  Instance::Data d = in.data();
  d.beta = time_from_double(*beta);
  return Instance(std::move(d));
}

Time default_horizon(const Instance& in, const Time& dt) {
  const Time bound = oracle_default_bound(in);
  const Time steps = bound / dt;
  std::int64_t n = floor_int(steps);
  if (Time(n) != steps) ++n;
  return dt * n;
}

int exit_code(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return kExitOptimal;
    case SolveStatus::Infeasible: return kExitInfeasible;
    case SolveStatus::TimeLimit: return kExitTimeLimit;
  }
  return kExitError;
}

SolveReport oracle_report(const Instance& in) {
  const auto start = std::chrono::steady_clock::now();
  const OracleResult o = brute_force_solve(in);
  SolveReport r;
  r.method = "oracle";
  r.iterations = 1;
  r.time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!o.feasible) {
    r.status = SolveStatus::Infeasible;
    r.message = "no route set covers the service arcs within the search bound";
    return r;
  }
  r.status = SolveStatus::Optimal;
  r.objective = o.objective;
  r.movement_cost = o.movement_cost;
  r.completion_sum = o.completion_sum;
  r.routes = o.routes;
  r.lower_bound = to_double(o.objective);
  r.gap_initial = r.gap_final = 0.0;
  r.message = std::to_string(o.routes_enumerated) + " routes enumerated";
  return r;
}

SolveReport run_method(const Instance& in, const std::string& method, const SolveArgs& a, std::ostream* log) {
  if (method == "benders") {
    BendersOptions opt;
    opt.epsilon = a.epsilon;
    opt.time_limit = a.time_limit;
    if (log) {
      opt.on_iteration = [&](const IterationLog& it) {
        *log << iteration_to_json(it, !a.no_timing).dump() << '\n';
        log->flush();
      };
    }
    return solve_mtrpp(in, opt);
  }
  if (method == "tsn") {
    TsnConfig cfg;
    cfg.dt = time_from_double(a.dt);
    cfg.horizon = a.horizon ? time_from_double(*a.horizon) : default_horizon(in, cfg.dt);
    MilpOptions mo;
    mo.time_limit = a.time_limit;
    return solve_tsn(in, cfg, mo);
  }
  if (method == "oracle") return oracle_report(in);
  throw CLI::ValidationError("--method", "unknown method '" + method + "'");
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InstanceError("cannot write '" + path + "'");
  out << text;
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

std::string fmt_opt(const std::optional<double>& v) {
  if (!v) return "";
  std::ostringstream os;
  os << *v;
  return os.str();
}

int cmd_solve(const SolveArgs& a) {
  const Instance in = with_beta(load_instance(a.instance), a.beta);
  std::ofstream log_file;
  std::ostream* log = nullptr;
  if (!a.log.empty()) {
    log_file.open(a.log);
    if (!log_file) throw InstanceError("cannot write '" + a.log + "'");
    log = &log_file;
  }
  const SolveReport r = run_method(in, a.method, a, log);
  auto j = report_to_json(in, r, !a.no_timing);
  j["seed"] = a.seed;
  write_text(a.out, j.dump(2) + "\n");
  return exit_code(r.status);
}

int cmd_compare(const SolveArgs& a) {
  const Instance in = with_beta(load_instance(a.instance), a.beta);
  std::vector<SolveReport> reports;
  std::vector<std::string> failed;
  for (const auto& m : split_csv(a.methods)) {
    // A method that cannot handle the instance (size limits) gets an error row.
    try {
      reports.push_back(run_method(in, m, a, nullptr));
    } catch (const CLI::Error&) {
      throw;
    } catch (const std::exception& e) {
      std::cerr << m << ": " << e.what() << '\n';
      failed.push_back(m);
    }
  }

  std::ostringstream csv;
  csv << "method,status,objective,OPT,ITER" << (a.no_timing ? "" : ",TIME")
      << ",GAP_i,GAP_f,vars_linear,vars_integer,constraints\n";
  for (const auto& m : failed) csv << m << ",error,,0,0" << (a.no_timing ? "" : ",") << ",,,,,\n";
  for (const auto& r : reports) {
    csv << r.method << ',' << to_string(r.status) << ',' << (r.objective ? to_exact_string(*r.objective) : "") << ','
        << (r.status == SolveStatus::Optimal ? 1 : 0) << ',' << r.iterations;
    if (!a.no_timing) csv << ',' << r.time_seconds;
    csv << ',' << fmt_opt(r.gap_initial) << ',' << fmt_opt(r.gap_final) << ',' << r.variables_linear << ','
        << r.variables_integer << ',' << r.constraints << '\n';
  }
  write_text(a.out, csv.str());

  std::optional<Time> ref;
  std::string ref_method;
  bool mismatch = false;
  for (const auto& r : reports) {
    if (r.status != SolveStatus::Optimal) continue;
    if (!ref) {
      ref = r.objective;
      ref_method = r.method;
    } else if (*r.objective != *ref) {
      std::cerr << "mismatch: " << r.method << " objective " << to_exact_string(*r.objective) << " differs from "
                << ref_method << " objective " << to_exact_string(*ref) << '\n';
      mismatch = true;
    }
  }
  return mismatch ? kExitMismatch : kExitOptimal;
}

int cmd_validate(const std::string& path, const std::optional<double>& period_arg) {
  const Instance in = load_instance(path);
  nlohmann::ordered_json j;
  const auto violations = validate_well_defined(in);
  j["well_defined"] = violations.empty();
  j["violations"] = nlohmann::ordered_json::array();
  for (const auto& v : violations)
    j["violations"].push_back({{"kind", to_string(v.kind)}, {"arc", v.arc}, {"agent", v.agent}, {"message", v.message}});
  j["vertices"] = in.vertex_count();
  j["arcs"] = in.arc_count();
  j["service_arcs"] = in.service_count();
  j["agents"] = in.agent_count();
  const bool connected = deadhead_strongly_connected(in);
  j["deadhead_strongly_connected"] = connected;
  if (connected) j["deadhead_diameter"] = deadhead_diameter(in);
  std::optional<Time> tp;
  if (period_arg) tp = time_from_double(*period_arg);
  else if (in.period()) tp = in.period();
  if (tp && connected) {
    j["period"] = to_double(*tp);
    j["periodic_connectivity"] = check_periodic_connectivity(in, *tp);
    j["inspection_time_bound"] = to_double(inspection_time_bound(in, *tp));
  }
  std::cout << j.dump(2) << '\n';
  return violations.empty() ? kExitOptimal : kExitInfeasible;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact solvers for the multi-agent temporal rural postman problem"};
  app.require_subcommand(1);
  SolveArgs a;

  auto add_common = [&](CLI::App* c) {
    c->add_option("instance", a.instance, "Instance JSON file")->required();
    c->add_option("--beta", a.beta, "Override the movement penalty weight");
    c->add_option("--tsn-dt", a.dt, "Time step of the time-space network (minutes)");
    c->add_option("--tsn-horizon", a.horizon, "Horizon of the time-space network (minutes)");
    c->add_option("--time-limit", a.time_limit, "Time limit in seconds");
    c->add_option("--seed", a.seed, "Seed recorded in the report");
    c->add_option("--epsilon", a.epsilon, "Relative convergence tolerance");
    c->add_option("--out", a.out, "Output file (default stdout)");
    c->add_flag("--no-timing", a.no_timing, "Omit wall-clock fields for reproducible output");
  };

  auto* solve_cmd = app.add_subcommand("solve", "Solve an instance and write a JSON report");
  add_common(solve_cmd);
  solve_cmd->add_option("--method", a.method, "benders, tsn or oracle")
      ->check(CLI::IsMember({"benders", "tsn", "oracle"}));
  solve_cmd->add_option("--log", a.log, "Write the iteration log as JSON lines");

  auto* compare_cmd = app.add_subcommand("compare", "Run several methods and print a CSV table");
  add_common(compare_cmd);
  compare_cmd->add_option("--methods", a.methods, "Comma-separated list of methods");

  std::string preset, gen_out = "-";
  std::vector<double> tdrpp;
  std::uint64_t gen_seed = 1;
  std::size_t gen_agents = 0;
  auto* gen_cmd = app.add_subcommand("generate", "Write a generated instance");
  gen_cmd->add_option("--preset", preset, "ex1a, ex1b, ex1c, ex2, ex2-noservice, t1 or t1w")
      ->check(CLI::IsMember({"ex1a", "ex1b", "ex1c", "ex2", "ex2-noservice", "t1", "t1w"}));
  gen_cmd->add_option("--tdrpp", tdrpp, "Random protocol: n_vertices arc_factor service_frac")->expected(3);
  gen_cmd->add_option("--seed", gen_seed, "Generator seed");
  gen_cmd->add_option("--agents", gen_agents, "Agent count override for ex1 presets");
  gen_cmd->add_option("--out", gen_out, "Output file (default stdout)");

  std::string val_path;
  std::optional<double> val_period;
  auto* val_cmd = app.add_subcommand("validate", "Check well-definedness and periodic properties");
  val_cmd->add_option("instance", val_path, "Instance JSON file")->required();
  val_cmd->add_option("--period", val_period, "Period to check (default: the instance period)");

  std::string dot_path, dot_out = "-";
  bool dot_solve = false;
  auto* dot_cmd = app.add_subcommand("export-dot", "Write the replicated graph as Graphviz DOT");
  dot_cmd->add_option("instance", dot_path, "Instance JSON file")->required();
  dot_cmd->add_flag("--solve", dot_solve, "Highlight the arcs of the decomposition solution");
  dot_cmd->add_option("--out", dot_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitError;
  }

  try {
    if (*solve_cmd) return cmd_solve(a);
    if (*compare_cmd) return cmd_compare(a);
    if (*gen_cmd) {
      if (preset.empty() == tdrpp.empty()) {
        std::cerr << "generate: give exactly one of --preset or --tdrpp\n";
        return kExitError;
      }
      std::optional<Instance> in;
      if (!tdrpp.empty()) {
        if (tdrpp[0] < 2 || tdrpp[0] != std::floor(tdrpp[0])) throw InstanceError("n_vertices must be an integer >= 2");
        in = gen_random_tdrpp(gen_seed, static_cast<std::size_t>(tdrpp[0]), tdrpp[1], tdrpp[2]);
      } else if (preset.rfind("ex1", 0) == 0) {
        in = gen_ex1(preset[3], gen_agents);
      } else if (preset == "ex2") {
        in = gen_ex2_synthetic(gen_seed);
      } else if (preset == "ex2-noservice") {
        in = gen_ex2_synthetic(gen_seed, false);
      } else {
        in = gen_t1(preset == "t1w");
      }
      write_text(gen_out, instance_to_json_text(*in));
      return kExitOptimal;
    }
    if (*val_cmd) return cmd_validate(val_path, val_period);
    if (*dot_cmd) {
      const Instance in = load_instance(dot_path);
      const ReplicatedGraph g(in);
      std::vector<bool> selected;
      if (dot_solve) selected = solve_mtrpp(in).x_bar;
      write_text(dot_out, g.to_dot(dot_solve ? &selected : nullptr));
      return kExitOptimal;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
