#include "mtrpp/replicated_graph.hpp"

#include <sstream>
#include <stdexcept>

namespace mtrpp {

std::string to_string(RepArcKind kind) {
  switch (kind) {
    case RepArcKind::Deadhead: return "deadhead";
    case RepArcKind::Service: return "service";
    case RepArcKind::VirtualSource: return "virtual-source";
    case RepArcKind::VirtualSink: return "virtual-sink";
    case RepArcKind::SourceSink: return "source-sink";
  }
  return "unknown";
}

ReplicatedGraph::ReplicatedGraph(const Instance& in)
    : instance_(&in), layers_(in.service_count() + 1), agents_(in.agent_count()) {
  const std::size_t nv = in.vertex_count();
  const std::size_t na = in.arc_count();
  const std::size_t L = layers_;
  column_of_.assign(agents_ * L * na, -1);

  for (std::size_t k = 0; k < agents_; ++k) {
    vtx_begin_.push_back(vertices_.size());
    source_.push_back(vertices_.size());
    vertices_.push_back({RepVertexKind::Source, 0, k, 0, 0});
    for (std::size_t l = 1; l <= L; ++l)
      for (std::size_t v = 0; v < nv; ++v) vertices_.push_back({RepVertexKind::Regular, v, k, l, 0});
    sink_.push_back(vertices_.size());
    vertices_.push_back({RepVertexKind::Sink, 0, k, 0, 1});
  }
  vtx_begin_.push_back(vertices_.size());

  for (std::size_t k = 0; k < agents_; ++k) {
    col_begin_.push_back(arcs_.size());
    for (std::size_t l = 1; l <= L; ++l) {
      for (std::size_t a = 0; a < na; ++a) {
        const bool service = in.is_service(a);
        if (service && l == L) continue;
        const std::size_t tail = vertex(k, in.tail(a), l);
        const std::size_t head = vertex(k, in.head(a), service ? l + 1 : l);
        column_of_[(k * L + l - 1) * na + a] = static_cast<std::ptrdiff_t>(arcs_.size());
        arcs_.push_back({service ? RepArcKind::Service : RepArcKind::Deadhead, a, k, l, tail, head,
                         in.running_time(k, a)});
      }
    }
    for (std::size_t d : in.depots(k))
      arcs_.push_back({RepArcKind::VirtualSource, 0, k, 0, source_[k], vertex(k, d, 1), Time{0}});
    for (std::size_t l = 1; l <= L; ++l)
      for (std::size_t e : in.exits(k))
        arcs_.push_back({RepArcKind::VirtualSink, 0, k, l, vertex(k, e, l), sink_[k], Time{0}});
    arcs_.push_back({RepArcKind::SourceSink, 0, k, 0, source_[k], sink_[k], Time{0}});
  }
  col_begin_.push_back(arcs_.size());

  out_.resize(vertices_.size());
  in_.resize(vertices_.size());
  for (std::size_t c = 0; c < arcs_.size(); ++c) {
    out_[arcs_[c].tail].push_back(c);
    in_[arcs_[c].head].push_back(c);
  }
}

std::size_t ReplicatedGraph::non_virtual_arc_count() const {
  std::size_t n = 0;
  for (const auto& a : arcs_) n += a.is_virtual() ? 0 : 1;
  return n;
}

std::size_t ReplicatedGraph::vertex(std::size_t agent, std::size_t v, std::size_t layer) const {
  if (layer < 1 || layer > layers_) throw std::out_of_range("layer out of range");
  return vtx_begin_[agent] + 1 + (layer - 1) * instance_->vertex_count() + v;
}

std::optional<std::size_t> ReplicatedGraph::column(std::size_t agent, std::size_t a,
                                                   std::size_t layer) const {
  if (layer < 1 || layer > layers_) return std::nullopt;
  const auto c = column_of_[(agent * layers_ + layer - 1) * instance_->arc_count() + a];
  if (c < 0) return std::nullopt;
  return static_cast<std::size_t>(c);
}

std::vector<int> ReplicatedGraph::flow_rhs() const {
  std::vector<int> b(vertices_.size(), 0);
  for (std::size_t k = 0; k < agents_; ++k) {
    b[source_[k]] = -1;
    b[sink_[k]] = 1;
  }
  return b;
}

std::vector<std::vector<std::size_t>> ReplicatedGraph::service_rows() const {
  std::vector<std::vector<std::size_t>> rows(instance_->service_count());
  std::vector<std::size_t> row_of(instance_->arc_count(), 0);
  for (std::size_t s = 0; s < instance_->service_count(); ++s) row_of[instance_->service_arcs()[s]] = s;
  for (std::size_t c = 0; c < arcs_.size(); ++c)
    if (arcs_[c].kind == RepArcKind::Service) rows[row_of[arcs_[c].parent_arc]].push_back(c);
  return rows;
}

std::size_t ReplicatedGraph::map_column(std::size_t c, std::size_t to_agent) const {
  const std::size_t from = arcs_[c].agent;
  const std::size_t offset = c - col_begin_[from];
  const std::size_t mapped = col_begin_[to_agent] + offset;
  if (mapped >= col_begin_[to_agent + 1] || arcs_[mapped].kind != arcs_[c].kind)
    throw std::logic_error("components are not isomorphic");
  return mapped;
}

std::optional<std::size_t> ReplicatedGraph::shift_layer(std::size_t c, std::size_t to_layer) const {
  const RepArc& a = arcs_[c];
  if (a.is_virtual()) return std::nullopt;
  return column(a.agent, a.parent_arc, to_layer);
}

std::string ReplicatedGraph::vertex_label(std::size_t v) const {
  const RepVertex& x = vertices_[v];
  const std::string agent = instance_->agent(x.agent).id;
  switch (x.kind) {
    case RepVertexKind::Source: return "s_" + agent;
    case RepVertexKind::Sink: return "t_" + agent;
    case RepVertexKind::Regular: break;
  }
  return instance_->vertex(x.parent_vertex) + "_" + agent + "_" + std::to_string(x.layer);
}

std::string ReplicatedGraph::to_dot(const std::vector<bool>* selected) const {
  std::ostringstream os;
  os << "digraph replicated {\n  rankdir=LR;\n";
  for (std::size_t v = 0; v < vertices_.size(); ++v)
    os << "  n" << v << " [label=\"" << vertex_label(v) << "\"];\n";
  for (std::size_t c = 0; c < arcs_.size(); ++c) {
    const RepArc& a = arcs_[c];
    os << "  n" << a.tail << " -> n" << a.head << " [label=\"";
    if (a.is_virtual()) {
      os << to_string(a.kind);
    } else {
      os << instance_->arc(a.parent_arc).id << " (" << to_exact_string(a.weight) << ")";
    }
    os << "\"";
    if (a.kind == RepArcKind::Service) os << ", color=red";
    if (a.is_virtual()) os << ", style=dashed";
    if (selected && c < selected->size() && (*selected)[c]) os << ", penwidth=3";
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace mtrpp
