#include "mtrpp/instance.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace mtrpp {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Unavailability

Unavailability::Unavailability(std::vector<UnavailabilityWindow> windows,
                               std::optional<PeriodicRule> periodic)
    : windows_(std::move(windows)), periodic_(std::move(periodic)) {
  for (const auto& w : windows_) {
    if (w.lower < 0) throw InstanceError("unavailability lower limit must be nonnegative");
    if (!(w.lower < w.upper)) throw InstanceError("unavailability window needs lower < upper");
  }
  std::stable_sort(windows_.begin(), windows_.end(),
                   [](const auto& a, const auto& b) { return a.lower < b.lower; });
  if (periodic_) {
    if (periodic_->offset < 0) throw InstanceError("periodic offset must be nonnegative");
    if (periodic_->period <= 0) throw InstanceError("periodic period must be positive");
    if (periodic_->duration <= 0) throw InstanceError("periodic duration must be positive");
  }
}

namespace {

// Index of the last generated window whose lower limit is below x, or -1.
std::int64_t last_window_below(const PeriodicRule& p, const Time& x) {
  if (x <= p.offset) return -1;
  const Time q = (x - p.offset) / p.period;
  std::int64_t k = floor_int(q);
  if (q.denominator() == 1) --k;  // strict: lower < x
  return k;
}

}  // namespace

bool Unavailability::blocks(const Time& t, const Time& w) const {
  for (const auto& win : windows_) {
    if (win.lower - w >= t) break;
    if (t < win.upper) return true;
  }
  if (periodic_) {
    const std::int64_t k = last_window_below(*periodic_, t + w);
    if (k >= 0) {
      const Time lo = periodic_->offset + periodic_->period * k;
      if (t < lo + periodic_->duration) return true;
    }
  }
  return false;
}

Time Unavailability::earliest_departure(const Time& start, const Time& w) const {
  Time t = start;
  for (;;) {
    const Time before = t;
    for (const auto& win : windows_) {
      if (win.lower - w >= t) break;
      if (t < win.upper) t = win.upper;
    }
    if (periodic_) {
      for (;;) {
        const std::int64_t k = last_window_below(*periodic_, t + w);
        if (k < 0) break;
        const Time hi = periodic_->offset + periodic_->period * k + periodic_->duration;
        if (t < hi) {
          if (periodic_->period - periodic_->duration < w)
            throw InstanceError("arc is never available long enough for running time " +
                                to_exact_string(w));
          t = hi;
        } else {
          break;
        }
      }
    }
    if (t == before) return t;
  }
}

std::vector<UnavailabilityWindow> Unavailability::windows_until(const Time& horizon) const {
  std::vector<UnavailabilityWindow> out;
  for (const auto& w : windows_)
    if (w.lower < horizon) out.push_back(w);
  if (periodic_) {
    for (std::int64_t k = 0;; ++k) {
      const Time lo = periodic_->offset + periodic_->period * k;
      if (lo >= horizon) break;
      out.push_back({lo, lo + periodic_->duration});
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.lower < b.lower; });
  return out;
}

Time Unavailability::last_explicit_upper() const {
  Time m{0};
  for (const auto& w : windows_) m = std::max(m, w.upper);
  return m;
}

// ---------------------------------------------------------------------------
// Instance

Instance::Instance(Data data) : data_(std::move(data)) {
  for (std::size_t v = 0; v < data_.vertices.size(); ++v) {
    if (!vertex_ids_.emplace(data_.vertices[v], v).second)
      throw InstanceError("duplicate vertex id '" + data_.vertices[v] + "'");
  }
  auto vidx = [&](const std::string& id, const std::string& ctx) {
    auto it = vertex_ids_.find(id);
    if (it == vertex_ids_.end()) throw InstanceError(ctx + " references unknown vertex '" + id + "'");
    return it->second;
  };
  for (std::size_t a = 0; a < data_.arcs.size(); ++a) {
    const Arc& arc = data_.arcs[a];
    if (!arc_ids_.emplace(arc.id, a).second)
      throw InstanceError("duplicate arc id '" + arc.id + "'");
    arc_tail_.push_back(vidx(arc.tail, "arc '" + arc.id + "'"));
    arc_head_.push_back(vidx(arc.head, "arc '" + arc.id + "'"));
  }
  for (const auto& sid : data_.service_arcs) {
    auto it = arc_ids_.find(sid);
    if (it == arc_ids_.end()) throw InstanceError("service arc '" + sid + "' is not an arc");
    if (!service_index_.emplace(it->second, services_.size()).second)
      throw InstanceError("service arc '" + sid + "' listed twice");
    services_.push_back(it->second);
  }
  for (std::size_t a = 0; a < data_.arcs.size(); ++a)
    if (!service_index_.count(a)) deadheads_.push_back(a);

  std::set<std::string> agent_ids;
  for (const auto& k : data_.agents) {
    if (!agent_ids.insert(k.id).second) throw InstanceError("duplicate agent id '" + k.id + "'");
    if (k.depots.empty()) throw InstanceError("agent '" + k.id + "' has no depot");
    if (k.exits.empty()) throw InstanceError("agent '" + k.id + "' has no exit");
    std::vector<std::size_t> d, e;
    for (const auto& v : k.depots) d.push_back(vidx(v, "agent '" + k.id + "' depot"));
    for (const auto& v : k.exits) e.push_back(vidx(v, "agent '" + k.id + "' exit"));
    std::sort(d.begin(), d.end());
    d.erase(std::unique(d.begin(), d.end()), d.end());
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    depots_.push_back(std::move(d));
    exits_.push_back(std::move(e));
  }

  running_.assign(data_.agents.size() * data_.arcs.size(), Time{0});
  for (std::size_t k = 0; k < data_.agents.size(); ++k) {
    for (std::size_t a = 0; a < data_.arcs.size(); ++a) {
      auto it = data_.running_times.find({data_.agents[k].id, data_.arcs[a].id});
      if (it == data_.running_times.end())
        throw InstanceError("missing running time for (" + data_.agents[k].id + ", " +
                            data_.arcs[a].id + ")");
      if (it->second <= 0)
        throw InstanceError("running time for (" + data_.agents[k].id + ", " + data_.arcs[a].id +
                            ") must be positive");
      running_[k * data_.arcs.size() + a] = it->second;
    }
  }
  for (const auto& [key, value] : data_.running_times) {
    if (!agent_ids.count(key.first) || !arc_ids_.count(key.second))
      throw InstanceError("running time given for unknown pair (" + key.first + ", " + key.second +
                          ")");
  }
  if (data_.beta < 0) throw InstanceError("beta must be nonnegative");
  if (data_.period && *data_.period <= 0) throw InstanceError("period must be positive");
}

std::size_t Instance::vertex_index(const std::string& id) const {
  auto it = vertex_ids_.find(id);
  if (it == vertex_ids_.end()) throw InstanceError("unknown vertex '" + id + "'");
  return it->second;
}

std::size_t Instance::arc_index(const std::string& id) const {
  auto it = arc_ids_.find(id);
  if (it == arc_ids_.end()) throw InstanceError("unknown arc '" + id + "'");
  return it->second;
}

Time Instance::max_running_time(std::size_t a) const {
  Time m{0};
  for (std::size_t k = 0; k < agent_count(); ++k) m = std::max(m, running_time(k, a));
  return m;
}

bool Instance::homogeneous_agents() const {
  for (std::size_t k = 1; k < agent_count(); ++k) {
    if (depots_[k] != depots_[0] || exits_[k] != exits_[0]) return false;
    for (std::size_t a = 0; a < arc_count(); ++a)
      if (running_time(k, a) != running_time(0, a)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Structural properties

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::ArcNeverAvailable: return "arc-never-available";
    case ViolationKind::AvailabilityGap: return "availability-gap";
    case ViolationKind::DeadheadDisconnected: return "deadhead-disconnected";
    case ViolationKind::SelfLoop: return "self-loop";
  }
  return "unknown";
}

namespace {

std::vector<std::vector<std::size_t>> deadhead_adjacency(const Instance& in) {
  std::vector<std::vector<std::size_t>> adj(in.vertex_count());
  for (std::size_t a : in.deadhead_arcs()) adj[in.tail(a)].push_back(in.head(a));
  return adj;
}

std::vector<std::size_t> bfs_hops(const std::vector<std::vector<std::size_t>>& adj, std::size_t s) {
  constexpr std::size_t kInf = static_cast<std::size_t>(-1);
  std::vector<std::size_t> dist(adj.size(), kInf);
  std::deque<std::size_t> q{s};
  dist[s] = 0;
  while (!q.empty()) {
    const std::size_t u = q.front();
    q.pop_front();
    for (std::size_t v : adj[u]) {
      if (dist[v] == kInf) {
        dist[v] = dist[u] + 1;
        q.push_back(v);
      }
    }
  }
  return dist;
}

// Overlapping windows are merged; touching windows stay separate (zero gap).
std::vector<UnavailabilityWindow> merge_overlaps(std::vector<UnavailabilityWindow> ws) {
  std::vector<UnavailabilityWindow> out;
  for (const auto& w : ws) {
    if (!out.empty() && w.lower < out.back().upper) {
      out.back().upper = std::max(out.back().upper, w.upper);
    } else {
      out.push_back(w);
    }
  }
  return out;
}

Time check_horizon(const Instance& in) {
  Time h{0};
  Time max_w{0};
  for (std::size_t a = 0; a < in.arc_count(); ++a) {
    const auto& u = in.arc(a).unavailability;
    h = std::max(h, u.last_explicit_upper());
    if (u.periodic()) {
      const auto& p = *u.periodic();
      h = std::max(h, p.offset + p.period * 2 + p.duration);
    }
    max_w = std::max(max_w, in.max_running_time(a));
  }
  return h + max_w;
}

}  // namespace

bool deadhead_strongly_connected(const Instance& in) {
  if (in.vertex_count() == 0) return true;
  const auto adj = deadhead_adjacency(in);
  std::vector<std::vector<std::size_t>> rev(in.vertex_count());
  for (std::size_t u = 0; u < adj.size(); ++u)
    for (std::size_t v : adj[u]) rev[v].push_back(u);
  constexpr std::size_t kInf = static_cast<std::size_t>(-1);
  for (const auto& g : {adj, rev}) {
    const auto d = bfs_hops(g, 0);
    if (std::find(d.begin(), d.end(), kInf) != d.end()) return false;
  }
  return true;
}

std::size_t deadhead_diameter(const Instance& in) {
  if (!deadhead_strongly_connected(in))
    throw InstanceError("deadhead graph is not strongly connected");
  const auto adj = deadhead_adjacency(in);
  std::size_t best = 0;
  for (std::size_t s = 0; s < in.vertex_count(); ++s) {
    const auto d = bfs_hops(adj, s);
    best = std::max(best, *std::max_element(d.begin(), d.end()));
  }
  return best;
}

Time inspection_time_bound(const Instance& in, const Time& tp) {
  if (tp <= 0) throw InstanceError("period must be positive");
  const auto d = static_cast<std::int64_t>(deadhead_diameter(in));
  return tp * static_cast<std::int64_t>(in.service_count() + 1) * d;
}

std::vector<Violation> validate_well_defined(const Instance& in) {
  std::vector<Violation> out;
  for (std::size_t a = 0; a < in.arc_count(); ++a) {
    if (in.tail(a) == in.head(a))
      out.push_back({ViolationKind::SelfLoop, in.arc(a).id, "", "arc '" + in.arc(a).id + "' is a self-loop"});
  }

  Time horizon = check_horizon(in);
  if (in.period() && deadhead_strongly_connected(in))
    horizon = std::max(horizon, std::max(*in.period(), inspection_time_bound(in, *in.period())));

  for (std::size_t a = 0; a < in.arc_count(); ++a) {
    const auto& arc = in.arc(a);
    const auto& u = arc.unavailability;
    if (u.empty()) continue;
    const auto merged = merge_overlaps(u.windows_until(horizon));
    for (std::size_t k = 0; k < in.agent_count(); ++k) {
      const Time& w = in.running_time(k, a);
      if (u.periodic() && u.periodic()->period - u.periodic()->duration < w) {
        // Every availability interval after the explicit list is too short.
        out.push_back({ViolationKind::ArcNeverAvailable, arc.id, in.agent(k).id,
                       "arc '" + arc.id + "' is never available for " + to_exact_string(w) +
                           " minutes to agent '" + in.agent(k).id + "'"});
        continue;
      }
      for (std::size_t i = 1; i < merged.size(); ++i) {
        const Time gap = merged[i].lower - merged[i - 1].upper;
        if (gap < w) {
          out.push_back({ViolationKind::AvailabilityGap, arc.id, in.agent(k).id,
                         "arc '" + arc.id + "' has a gap of " + to_exact_string(gap) +
                             " minutes between windows, shorter than running time " +
                             to_exact_string(w) + " of agent '" + in.agent(k).id + "'"});
          break;
        }
      }
    }
  }
  if (!deadhead_strongly_connected(in))
    out.push_back({ViolationKind::DeadheadDisconnected, "", "", "deadhead graph is not strongly connected"});
  return out;
}

bool check_periodic_connectivity(const Instance& in, const Time& tp) {
  if (tp <= 0) throw InstanceError("period must be positive");
  if (!deadhead_strongly_connected(in)) return false;
  const Time bound = std::max(tp, inspection_time_bound(in, tp));
  for (std::size_t a : in.deadhead_arcs()) {
    const auto& u = in.arc(a).unavailability;
    if (u.empty()) continue;
    const Time w = in.max_running_time(a);
    const auto merged = merge_overlaps(u.windows_until(bound + tp));
    for (Time start{0}; start < bound; start += tp) {
      const Time end = start + tp;
      // Walk the free intervals clipped to [start, end].
      bool ok = false;
      Time free_from = start;
      for (const auto& win : merged) {
        if (win.upper <= free_from) continue;
        if (win.lower >= end) break;
        if (win.lower - free_from >= w) {
          ok = true;
          break;
        }
        free_from = std::max(free_from, win.upper);
        if (free_from >= end) break;
      }
      if (!ok && end - free_from >= w) ok = true;
      if (!ok) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// JSON I/O

namespace {

Time read_time(const json& j, const std::string& what) {
  if (!j.is_number()) throw InstanceError(what + " must be a number");
  return time_from_double(j.get<double>());
}

nlohmann::ordered_json write_time(const Time& t) {
  if (t.denominator() == 1) return t.numerator();
  return to_double(t);
}

std::vector<std::string> read_strings(const json& j, const std::string& what) {
  if (!j.is_array()) throw InstanceError(what + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw InstanceError(what + " must be an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

const json& require(const json& j, const char* key, const std::string& ctx) {
  auto it = j.find(key);
  if (it == j.end()) throw InstanceError(ctx + " is missing field '" + key + "'");
  return *it;
}

}  // namespace

Instance instance_from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InstanceError(std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) throw InstanceError("instance must be a JSON object");

  Instance::Data d;
  d.vertices = read_strings(require(root, "vertices", "instance"), "vertices");

  const json& arcs = require(root, "arcs", "instance");
  if (!arcs.is_array()) throw InstanceError("arcs must be an array");
  for (const auto& ja : arcs) {
    if (!ja.is_object()) throw InstanceError("arc entries must be objects");
    Arc arc;
    arc.id = require(ja, "id", "arc").get<std::string>();
    const std::string ctx = "arc '" + arc.id + "'";
    arc.tail = require(ja, "tail", ctx).get<std::string>();
    arc.head = require(ja, "head", ctx).get<std::string>();
    std::vector<UnavailabilityWindow> windows;
    if (auto it = ja.find("unavailabilities"); it != ja.end()) {
      if (!it->is_array()) throw InstanceError(ctx + " unavailabilities must be an array");
      for (const auto& jw : *it) {
        if (!jw.is_array() || jw.size() != 2)
          throw InstanceError(ctx + " unavailability entries must be [lower, upper]");
        windows.push_back({read_time(jw[0], ctx + " window"), read_time(jw[1], ctx + " window")});
      }
    }
    std::optional<PeriodicRule> periodic;
    if (auto it = ja.find("periodic_unavailability"); it != ja.end() && !it->is_null()) {
      const std::string pctx = ctx + " periodic_unavailability";
      periodic = PeriodicRule{read_time(require(*it, "offset", pctx), pctx),
                              read_time(require(*it, "period", pctx), pctx),
                              read_time(require(*it, "duration", pctx), pctx)};
    }
    try {
      arc.unavailability = Unavailability(std::move(windows), periodic);
    } catch (const InstanceError& e) {
      throw InstanceError(ctx + ": " + e.what());
    }
    d.arcs.push_back(std::move(arc));
  }

  if (auto it = root.find("service_arcs"); it != root.end())
    d.service_arcs = read_strings(*it, "service_arcs");

  const json& agents = require(root, "agents", "instance");
  if (!agents.is_array()) throw InstanceError("agents must be an array");
  for (const auto& jk : agents) {
    Agent k;
    k.id = require(jk, "id", "agent").get<std::string>();
    k.depots = read_strings(require(jk, "depots", "agent '" + k.id + "'"), "depots");
    k.exits = read_strings(require(jk, "exits", "agent '" + k.id + "'"), "exits");
    d.agents.push_back(std::move(k));
  }

  const json& rt = require(root, "running_times", "instance");
  if (!rt.is_object()) throw InstanceError("running_times must be an object");
  std::set<std::string> agent_ids, arc_ids;
  for (const auto& k : d.agents) agent_ids.insert(k.id);
  for (const auto& a : d.arcs) arc_ids.insert(a.id);
  for (const auto& [key, value] : rt.items()) {
    // Ids may themselves contain ':'; pick the split that names a known pair.
    bool matched = false;
    for (std::size_t pos = key.find(':'); pos != std::string::npos; pos = key.find(':', pos + 1)) {
      const std::string k = key.substr(0, pos), a = key.substr(pos + 1);
      if (agent_ids.count(k) && arc_ids.count(a)) {
        d.running_times[{k, a}] = read_time(value, "running time '" + key + "'");
        matched = true;
        break;
      }
    }
    if (!matched) throw InstanceError("running_times key '" + key + "' does not name an (agent, arc) pair");
  }

  if (auto it = root.find("beta"); it != root.end()) d.beta = read_time(*it, "beta");
  if (auto it = root.find("period"); it != root.end() && !it->is_null())
    d.period = read_time(*it, "period");

  try {
    return Instance(std::move(d));
  } catch (const json::exception& e) {
    throw InstanceError(std::string("schema error: ") + e.what());
  }
}

std::string instance_to_json_text(const Instance& instance) {
  const auto& d = instance.data();
  nlohmann::ordered_json root;
  root["vertices"] = d.vertices;
  root["arcs"] = nlohmann::ordered_json::array();
  for (const auto& a : d.arcs) {
    nlohmann::ordered_json ja{{"id", a.id}, {"tail", a.tail}, {"head", a.head}};
    ja["unavailabilities"] = nlohmann::ordered_json::array();
    for (const auto& w : a.unavailability.windows())
      ja["unavailabilities"].push_back({write_time(w.lower), write_time(w.upper)});
    if (const auto& p = a.unavailability.periodic())
      ja["periodic_unavailability"] = {{"offset", write_time(p->offset)},
                                       {"period", write_time(p->period)},
                                       {"duration", write_time(p->duration)}};
    root["arcs"].push_back(std::move(ja));
  }
  root["service_arcs"] = d.service_arcs;
  root["agents"] = nlohmann::ordered_json::array();
  for (const auto& k : d.agents)
    root["agents"].push_back({{"id", k.id}, {"depots", k.depots}, {"exits", k.exits}});
  root["running_times"] = nlohmann::ordered_json::object();
  // Emit in agent-then-arc input order for readable files.
  for (const auto& k : d.agents)
    for (const auto& a : d.arcs)
      root["running_times"][k.id + ":" + a.id] = write_time(d.running_times.at({k.id, a.id}));
  root["beta"] = write_time(d.beta);
  if (d.period) root["period"] = write_time(*d.period);
  return root.dump(2) + "\n";
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InstanceError("cannot open instance file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return instance_from_json_text(ss.str());
  } catch (const json::exception& e) {
    throw InstanceError(path.string() + ": schema error: " + e.what());
  }
}

void save_instance(const Instance& instance, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InstanceError("cannot write instance file '" + path.string() + "'");
  out << instance_to_json_text(instance);
}

}  // namespace mtrpp
