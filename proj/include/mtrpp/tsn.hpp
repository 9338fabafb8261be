/**
 * @file tsn.hpp
 * @brief Time-space network baseline: static expansion over discrete stamps.
 *
 * Counting convention (used for the reported sizes): variables are movement,
 * waiting, sink, source and source-sink arcs; constraints are one flow row
 * per time-expanded node, per source and per sink, plus one coverage row per
 * service arc. Column bounds are not counted as constraints.
 */
#pragma once

#include <cstddef>
#include <vector>

#include "mtrpp/instance.hpp"
#include "mtrpp/milp.hpp"
#include "mtrpp/report.hpp"

namespace mtrpp {

struct TsnConfig {
  Time dt{1};
  Time horizon{0};
};

enum class TsnArcKind { Movement, Waiting, Sink, Source, SourceSink };

struct TsnArc {
  TsnArcKind kind;
  std::size_t agent;
  std::size_t parent_arc;  ///< movement arcs only
  std::size_t vertex;      ///< tail vertex (head vertex for source arcs)
  Time time;               ///< departure stamp
};

struct TsnCounts {
  std::size_t movement = 0, waiting = 0, sink = 0, source = 0, source_sink = 0;
  std::size_t flow_rows = 0, service_rows = 0;
  std::size_t variables() const { return movement + waiting + sink + source + source_sink; }
  std::size_t constraints() const { return flow_rows + service_rows; }
};

struct TsnModel {
  TsnConfig config;
  std::vector<TsnArc> arcs;  ///< one per MILP column
  MilpModel milp;
  TsnCounts counts;
};

/// Throws InstanceError when dt does not divide the time data or horizon.
TsnModel build_tsn(const Instance& instance, const TsnConfig& config);

SolveReport solve_tsn(const Instance& instance, const TsnConfig& config, const MilpOptions& options = {});

}  // namespace mtrpp
