/**
 * @file generators.hpp
 * @brief Seeded instance generators: the Ex-I fixtures, the Ex-II synthetic
 *        network, the random TDRPP protocol and tiny test instances.
 */
#pragma once

#include <cstdint>

#include "mtrpp/instance.hpp"

namespace mtrpp {

/// Ex-I on three vertices and six arcs; case is 'a', 'b' or 'c'.
/// `agents` overrides the case default (1 for a and b, 2 for c) when nonzero.
Instance gen_ex1(char which, std::size_t agents = 0);

/// Two-vertex instance with one service arc; optional window (4, 6) on d21.
Instance gen_t1(bool with_window);

/// 36 stations on a directed loop with 9 express chords (deadhead diameter
/// 21), 9 service arcs paralleling loop arcs, period-74 train schedules and
/// two identical agents.
/// With `with_services` false the service list is left empty.
Instance gen_ex2_synthetic(std::uint64_t seed, bool with_services = true);

/// Random Hamiltonian tour plus random arcs, round(service_frac*|A|) service
/// duplicates, periodic train windows on the tour arcs, one agent.
Instance gen_random_tdrpp(std::uint64_t seed, std::size_t n_vertices, double arc_factor, double service_frac);

struct TinyOptions {
  bool integer_data = true;        ///< otherwise some values are half-integers
  bool with_windows = true;
};

/// |V| <= 4, |A| <= 8, 1 <= |A_*| <= 2, <= 2 windows per arc, 1 or 2 agents;
/// strongly connected deadheads and well-defined.
Instance gen_tiny(std::uint64_t seed, const TinyOptions& options = {});

}  // namespace mtrpp
