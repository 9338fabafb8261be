#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "mtrpp/benders.hpp"
#include "mtrpp/generators.hpp"
#include "mtrpp/milp.hpp"

using namespace mtrpp;

namespace {

// Exhaustive minimum over binary points; infinity when infeasible.
double enumerate(const MilpModel& m) {
  const std::size_t n = m.column_count();
  double best = kInfinity;
  std::vector<double> x(n);
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    for (std::size_t j = 0; j < n; ++j) x[j] = static_cast<double>((mask >> j) & 1U);
    if (m.max_violation(x) < 1e-9) best = std::min(best, m.evaluate(x));
  }
  return best;
}

MilpModel random_binary_model(std::mt19937& g) {
  MilpModel m;
  const int n = 2 + static_cast<int>(g() % 12), rows = 1 + static_cast<int>(g() % 5);
  for (int j = 0; j < n; ++j) m.add_binary("x" + std::to_string(j), static_cast<int>(g() % 21) - 10);
  for (int i = 0; i < rows; ++i) {
    std::vector<std::pair<std::size_t, double>> c;
    for (int j = 0; j < n; ++j)
      if (g() % 2) c.emplace_back(j, static_cast<int>(g() % 11) - 5);
    const auto s = g() % 3;
    m.add_row("r" + std::to_string(i), c, s == 0 ? Sense::LessEqual : s == 1 ? Sense::GreaterEqual : Sense::Equal,
              static_cast<int>(g() % 7) - 3);
  }
  return m;
}

}  // namespace

TEST_CASE("continuous lower bound") {
  MilpModel m;
  const auto x = m.add_column("x", 1.0, 0.0, kInfinity, false);
  m.add_row("r", {{x, 1.0}}, Sense::GreaterEqual, 3.0);
  const auto s = solve(m);
  REQUIRE(s.status == MilpStatus::Optimal);
  CHECK(s.objective_value == doctest::Approx(3.0));
  CHECK(solve_lp_relaxation(m).objective_value == doctest::Approx(3.0));
}

TEST_CASE("covering two binaries") {
  MilpModel m;
  const auto a = m.add_binary("a", 1.0), b = m.add_binary("b", 1.0);
  m.add_row("r", {{a, 1.0}, {b, 1.0}}, Sense::GreaterEqual, 1.0);
  CHECK(solve(m).objective_value == doctest::Approx(1.0));
  CHECK(solve_lp_relaxation(m).objective_value == doctest::Approx(1.0));
}

TEST_CASE("fractional relaxation is branched") {
  MilpModel m;
  const auto a = m.add_binary("a", -1.0), b = m.add_binary("b", -1.0), c = m.add_binary("c", -1.0);
  m.add_row("r", {{a, 2.0}, {b, 2.0}, {c, 2.0}}, Sense::LessEqual, 3.0);
  CHECK(solve_lp_relaxation(m).objective_value == doctest::Approx(-1.5));
  const auto s = solve(m);
  CHECK(s.objective_value == doctest::Approx(-1.0));
  CHECK(s.node_count > 1);
}

TEST_CASE("infeasible and unbounded models") {
  MilpModel inf;
  const auto x = inf.add_binary("x", 1.0);
  inf.add_row("r", {{x, 1.0}}, Sense::GreaterEqual, 2.0);
  CHECK(solve(inf).status == MilpStatus::Infeasible);
  CHECK(solve_lp_relaxation(inf).status == MilpStatus::Infeasible);

  MilpModel unb;
  unb.add_column("y", -1.0, 0.0, kInfinity, false);
  CHECK(solve_lp_relaxation(unb).status == MilpStatus::Unbounded);
}

TEST_CASE("free columns and equality rows") {
  MilpModel m;
  const auto x = m.add_column("x", 1.0, -kInfinity, kInfinity, false);
  const auto y = m.add_column("y", 2.0, -kInfinity, kInfinity, true);
  m.add_row("sum", {{x, 1.0}, {y, 1.0}}, Sense::Equal, 2.5);
  m.add_row("ylow", {{y, 1.0}}, Sense::GreaterEqual, -1.5);
  m.add_row("xcap", {{x, 1.0}}, Sense::LessEqual, 10.0);
  const auto s = solve(m);
  REQUIRE(s.status == MilpStatus::Optimal);
  CHECK(s.values[y] == doctest::Approx(-1.0));
  CHECK(s.values[x] == doctest::Approx(3.5));
}

TEST_CASE("branch and bound matches enumeration") {
  std::mt19937 g(20261019);
  for (int t = 0; t < 200; ++t) {
    const MilpModel m = random_binary_model(g);
    const double best = enumerate(m);
    const auto s = solve(m);
    if (std::isinf(best)) {
      CHECK(s.status == MilpStatus::Infeasible);
      continue;
    }
    REQUIRE(s.status == MilpStatus::Optimal);
    CHECK(s.objective_value == doctest::Approx(best));
    CHECK(m.max_violation(s.values) < 1e-6);
    const auto lp = solve_lp_relaxation(m);
    REQUIRE(lp.status == MilpStatus::Optimal);
    CHECK(lp.objective_value <= best + 1e-6);
  }
}

TEST_CASE("reduced master matches enumeration") {
  const Instance in = gen_t1(true);
  const ReplicatedGraph g(in);
  const MilpModel m = build_reduced_master(g, in.beta(), {}, {});
  // z and d are continuous; fix them at their least feasible value per X.
  const std::size_t nx = g.arc_count();
  double best = kInfinity;
  std::vector<double> x(m.column_count(), 0.0);
  for (std::size_t mask = 0; mask < (std::size_t{1} << nx); ++mask) {
    double w = 0.0;
    for (std::size_t j = 0; j < nx; ++j) {
      x[j] = static_cast<double>((mask >> j) & 1U);
      w += x[j] * to_double(g.arcs()[j].weight);
    }
    x[nx] = 2.0 * w;
    if (m.max_violation(x) < 1e-9) best = std::min(best, m.evaluate(x));
  }
  CHECK(solve(m).objective_value == doctest::Approx(best));
  CHECK(best == doctest::Approx(10.0));
}

TEST_CASE("model checks and lp text") {
  MilpModel m;
  const auto x = m.add_binary("x", 1.0);
  m.add_row("r", {{x, 1.0}}, Sense::LessEqual, 1.0);
  CHECK_NOTHROW(m.check());
  std::ostringstream os;
  m.write_lp(os);
  CHECK(os.str().find("Minimize") != std::string::npos);
  MilpModel bad;
  bad.add_column("y", 0.0, 2.0, 1.0, false);
  CHECK_THROWS_AS(bad.check(), std::invalid_argument);
  MilpModel dangling;
  dangling.add_row("r", {{5, 1.0}}, Sense::LessEqual, 1.0);
  CHECK_THROWS_AS(dangling.check(), std::invalid_argument);
}

TEST_CASE("dense size guard") {
  MilpModel m;
  for (int j = 0; j < 50; ++j) m.add_binary("x" + std::to_string(j), 1.0);
  for (int i = 0; i < 50; ++i) m.add_row("r" + std::to_string(i), {{static_cast<std::size_t>(i), 1.0}}, Sense::LessEqual, 1.0);
  MilpOptions o;
  o.max_tableau_entries = 100;
  CHECK_THROWS_AS(solve(m, o), std::length_error);
}
