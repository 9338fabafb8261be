#include <doctest.h>

#include <cmath>

#include "mtrpp/generators.hpp"

using namespace mtrpp;

TEST_CASE("Ex-I cases share one topology") {
  const Instance a = gen_ex1('a'), b = gen_ex1('b'), c = gen_ex1('c');
  CHECK(a.agent_count() == 1);
  CHECK(b.agent_count() == 1);
  CHECK(c.agent_count() == 2);
  CHECK(gen_ex1('c', 1).agent_count() == 1);
  for (const Instance* in : {&a, &b, &c}) {
    CHECK(in->vertex_count() == 3);
    CHECK(in->arc_count() == 6);
    CHECK(in->service_count() == 2);
    for (std::size_t i = 0; i < 6; ++i) {
      CHECK(in->tail(i) == a.tail(i));
      CHECK(in->head(i) == a.head(i));
    }
    CHECK(validate_well_defined(*in).empty());
  }
  CHECK_THROWS_AS(gen_ex1('d'), InstanceError);
}

TEST_CASE("Ex-II synthetic network") {
  const Instance in = gen_ex2_synthetic(74);
  CHECK(in.vertex_count() == 36);
  CHECK(in.deadhead_arcs().size() == 45);
  CHECK(in.service_count() == 9);
  CHECK(in.agent_count() == 2);
  CHECK(deadhead_diameter(in) == 21);
  CHECK(check_periodic_connectivity(in, Time{74}));
  CHECK(validate_well_defined(in).empty());
  // Every service arc parallels a deadhead arc.
  for (std::size_t s : in.service_arcs()) {
    bool parallel = false;
    for (std::size_t d : in.deadhead_arcs()) parallel |= in.tail(d) == in.tail(s) && in.head(d) == in.head(s);
    CHECK(parallel);
  }
  CHECK(gen_ex2_synthetic(74, false).service_count() == 0);
}

TEST_CASE("random TDRPP protocol") {
  const Instance in = gen_random_tdrpp(1, 20, 1.2, 0.3);
  CHECK(in.vertex_count() == 20);
  CHECK(in.deadhead_arcs().size() == 24);
  CHECK(in.service_count() == 7);
  CHECK(deadhead_strongly_connected(in));
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Instance r = gen_random_tdrpp(seed, 40, 1.6, 0.5);
    CHECK(r.deadhead_arcs().size() == 64);
    CHECK(r.service_count() == 32);
    CHECK(deadhead_strongly_connected(r));
    CHECK(validate_well_defined(r).empty());
  }
  // Windows sit on the tour arcs only.
  for (std::size_t a = 20; a < in.arc_count(); ++a) CHECK(in.arc(a).unavailability.empty());
}

TEST_CASE("generation is a pure function of seed and parameters") {
  CHECK(gen_random_tdrpp(7, 20, 2.0, 0.7) == gen_random_tdrpp(7, 20, 2.0, 0.7));
  CHECK_FALSE(gen_random_tdrpp(7, 20, 2.0, 0.7) == gen_random_tdrpp(8, 20, 2.0, 0.7));
  CHECK(gen_ex2_synthetic(5) == gen_ex2_synthetic(5));
  CHECK(gen_tiny(9) == gen_tiny(9));
}

TEST_CASE("tiny instances stay within their limits") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const Instance in = gen_tiny(seed, {seed % 2 == 0, true});
    CHECK(in.vertex_count() <= 4);
    CHECK(in.arc_count() <= 8);
    CHECK(in.service_count() >= 1);
    CHECK(in.service_count() <= 2);
    CHECK(in.agent_count() <= 2);
    for (std::size_t a = 0; a < in.arc_count(); ++a) CHECK(in.arc(a).unavailability.windows().size() <= 2);
    CHECK(deadhead_strongly_connected(in));
    CHECK(validate_well_defined(in).empty());
  }
}

TEST_CASE("invalid parameters") {
  CHECK_THROWS_AS(gen_random_tdrpp(1, 1, 1.2, 0.3), InstanceError);
  CHECK_THROWS_AS(gen_random_tdrpp(1, 20, 0.5, 0.3), InstanceError);
  CHECK_THROWS_AS(gen_random_tdrpp(1, 20, 1.2, 1.5), InstanceError);
}
