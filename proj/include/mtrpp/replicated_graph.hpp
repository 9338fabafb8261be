/**
 * @file replicated_graph.hpp
 * @brief Layered per-agent decision graph used by the MILP formulation.
 *
 * Each agent owns one component with layers 1..L, L = |A_*| + 1. Deadhead
 * arcs are copied inside every layer, service arcs link layer l to l + 1.
 * A virtual source feeds the layer-1 depots, every exit of every layer
 * drains to a virtual sink, and a source-sink arc lets an agent stay idle.
 *
 * Ordering contract: components in agent input order; inside a component the
 * source vertex, then layers ascending with parent vertices in input order,
 * then the sink. Columns follow layers ascending with parent arcs in input
 * order, then the virtual arcs of the component.
 */
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mtrpp/instance.hpp"

namespace mtrpp {

enum class RepArcKind { Deadhead, Service, VirtualSource, VirtualSink, SourceSink };
enum class RepVertexKind { Regular, Source, Sink };

std::string to_string(RepArcKind kind);

struct RepVertex {
  RepVertexKind kind;
  std::size_t parent_vertex;  ///< meaningful for Regular only
  std::size_t agent;
  std::size_t layer;          ///< 1..L, 0 for source and sink
  int cost_coeff;             ///< 1 for sink vertices
};

struct RepArc {
  RepArcKind kind;
  std::size_t parent_arc;     ///< meaningful for Deadhead and Service only
  std::size_t agent;
  std::size_t layer;          ///< layer of the tail vertex; 0 for arcs leaving the source
  std::size_t tail;           ///< replicated vertex index (-1 entry in the incidence column)
  std::size_t head;           ///< replicated vertex index (+1 entry)
  Time weight;

  bool is_virtual() const {
    return kind != RepArcKind::Deadhead && kind != RepArcKind::Service;
  }
};

class ReplicatedGraph {
 public:
  explicit ReplicatedGraph(const Instance& instance);
  /// The graph refers to the instance, so it must outlive the graph.
  explicit ReplicatedGraph(Instance&&) = delete;

  const Instance& instance() const { return *instance_; }
  std::size_t layer_count() const { return layers_; }
  std::size_t agent_count() const { return agents_; }

  const std::vector<RepVertex>& vertices() const { return vertices_; }
  const std::vector<RepArc>& arcs() const { return arcs_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t arc_count() const { return arcs_.size(); }
  std::size_t non_virtual_arc_count() const;

  std::size_t source(std::size_t agent) const { return source_[agent]; }
  std::size_t sink(std::size_t agent) const { return sink_[agent]; }
  /// Replicated vertex (v, k, l) for l in 1..L.
  std::size_t vertex(std::size_t agent, std::size_t parent_vertex, std::size_t layer) const;
  /// Column of parent arc a in layer l of component k, if it exists.
  std::optional<std::size_t> column(std::size_t agent, std::size_t parent_arc, std::size_t layer) const;

  const std::vector<std::size_t>& out_arcs(std::size_t v) const { return out_[v]; }
  const std::vector<std::size_t>& in_arcs(std::size_t v) const { return in_[v]; }

  /// Half-open column range [first, second) of one component.
  std::pair<std::size_t, std::size_t> component_columns(std::size_t agent) const {
    return {col_begin_[agent], col_begin_[agent + 1]};
  }
  std::pair<std::size_t, std::size_t> component_vertices(std::size_t agent) const {
    return {vtx_begin_[agent], vtx_begin_[agent + 1]};
  }

  /// Right-hand side b1 of the flow rows: -1 at sources, +1 at sinks.
  std::vector<int> flow_rhs() const;

  /// One entry per service arc (in service order): the columns copying it.
  std::vector<std::vector<std::size_t>> service_rows() const;

  /// Column of a replicated arc in another component, for cut replication
  /// across isomorphic components.
  std::size_t map_column(std::size_t column, std::size_t to_agent) const;

  /// Column of the same parent arc and component in another layer, if present.
  std::optional<std::size_t> shift_layer(std::size_t column, std::size_t to_layer) const;

  std::string vertex_label(std::size_t v) const;

  /// Graphviz text; columns with selected[c] set are drawn bold.
  std::string to_dot(const std::vector<bool>* selected = nullptr) const;

 private:
  const Instance* instance_;
  std::size_t layers_ = 0;
  std::size_t agents_ = 0;
  std::vector<RepVertex> vertices_;
  std::vector<RepArc> arcs_;
  std::vector<std::size_t> source_, sink_;
  std::vector<std::size_t> vtx_begin_, col_begin_;
  /// (agent * L + layer-1) * |A| + arc -> column or -1.
  std::vector<std::ptrdiff_t> column_of_;
  std::vector<std::vector<std::size_t>> out_, in_;
};

}  // namespace mtrpp
