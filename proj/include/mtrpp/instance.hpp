/**
 * @file instance.hpp
 * @brief The temporal graph-agent tuple (G, Z, R) and its structural checks.
 */
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mtrpp/time.hpp"

namespace mtrpp {

/// Raised for malformed files, schema violations and invalid parameters.
class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Open interval (lower, upper) during which an arc cannot be occupied.
struct UnavailabilityWindow {
  Time lower;
  Time upper;

  friend bool operator==(const UnavailabilityWindow&, const UnavailabilityWindow&) = default;
};

/// Windows [offset + k*period, offset + k*period + duration] for k = 0, 1, ...
struct PeriodicRule {
  Time offset;
  Time period;
  Time duration;

  friend bool operator==(const PeriodicRule&, const PeriodicRule&) = default;
};

/**
 * Unavailability list of one parent arc: an explicit list sorted by lower
 * limit plus an optional generator rule for infinitely repeating windows.
 *
 * Feasibility is tied to the departure time t from the tail vertex: t is
 * blocked by a window iff lower - W < t < upper, where W is the running time
 * of the traversing agent. Both boundaries are feasible.
 */
class Unavailability {
 public:
  Unavailability() = default;
  Unavailability(std::vector<UnavailabilityWindow> windows, std::optional<PeriodicRule> periodic);

  const std::vector<UnavailabilityWindow>& windows() const { return windows_; }
  const std::optional<PeriodicRule>& periodic() const { return periodic_; }
  bool empty() const { return windows_.empty() && !periodic_; }

  bool blocks(const Time& departure, const Time& running_time) const;

  /// Smallest t' >= t that is not blocked (cascades across consecutive windows).
  Time earliest_departure(const Time& t, const Time& running_time) const;

  /// All windows (explicit and generated) with lower limit below horizon,
  /// sorted by lower limit. Overlapping windows are not merged.
  std::vector<UnavailabilityWindow> windows_until(const Time& horizon) const;

  /// Largest upper limit of the explicit list (zero when empty).
  Time last_explicit_upper() const;

  friend bool operator==(const Unavailability&, const Unavailability&) = default;

 private:
  std::vector<UnavailabilityWindow> windows_;
  std::optional<PeriodicRule> periodic_;
};

struct Arc {
  std::string id;
  std::string tail;
  std::string head;
  Unavailability unavailability;

  friend bool operator==(const Arc&, const Arc&) = default;
};

struct Agent {
  std::string id;
  std::vector<std::string> depots;
  std::vector<std::string> exits;

  friend bool operator==(const Agent&, const Agent&) = default;
};

/**
 * Immutable graph-agent data. Vertices, arcs and agents are addressed by
 * their position in input order; string ids are kept for I/O.
 */
class Instance {
 public:
  struct Data {
    std::vector<std::string> vertices;
    std::vector<Arc> arcs;
    std::vector<std::string> service_arcs;
    std::vector<Agent> agents;
    /// Keyed by (agent id, arc id).
    std::map<std::pair<std::string, std::string>, Time> running_times;
    Time beta{1};
    std::optional<Time> period;

    friend bool operator==(const Data&, const Data&) = default;
  };

  /// Checks structural invariants (unique ids, references, full positive
  /// running-time coverage, nonempty depot/exit sets). Throws InstanceError.
  explicit Instance(Data data);

  const Data& data() const { return data_; }

  std::size_t vertex_count() const { return data_.vertices.size(); }
  std::size_t arc_count() const { return data_.arcs.size(); }
  std::size_t agent_count() const { return data_.agents.size(); }
  std::size_t service_count() const { return service_index_.size(); }

  const std::string& vertex(std::size_t v) const { return data_.vertices[v]; }
  const Arc& arc(std::size_t a) const { return data_.arcs[a]; }
  const Agent& agent(std::size_t k) const { return data_.agents[k]; }

  std::size_t vertex_index(const std::string& id) const;
  std::size_t arc_index(const std::string& id) const;
  std::size_t tail(std::size_t a) const { return arc_tail_[a]; }
  std::size_t head(std::size_t a) const { return arc_head_[a]; }

  bool is_service(std::size_t a) const { return service_index_.count(a) > 0; }
  /// Service arcs in input order of the service_arcs list.
  const std::vector<std::size_t>& service_arcs() const { return services_; }
  /// Non-service arcs in input order.
  const std::vector<std::size_t>& deadhead_arcs() const { return deadheads_; }

  const Time& running_time(std::size_t agent, std::size_t arc) const {
    return running_[agent * arc_count() + arc];
  }
  const std::vector<std::size_t>& depots(std::size_t agent) const { return depots_[agent]; }
  const std::vector<std::size_t>& exits(std::size_t agent) const { return exits_[agent]; }

  const Time& beta() const { return data_.beta; }
  const std::optional<Time>& period() const { return data_.period; }

  /// Max over agents of the running time of arc a.
  Time max_running_time(std::size_t a) const;

  /// Agents with identical running times, depots and exits.
  bool homogeneous_agents() const;

  friend bool operator==(const Instance& a, const Instance& b) { return a.data_ == b.data_; }

 private:
  Data data_;
  std::unordered_map<std::string, std::size_t> vertex_ids_;
  std::unordered_map<std::string, std::size_t> arc_ids_;
  std::vector<std::size_t> arc_tail_;
  std::vector<std::size_t> arc_head_;
  std::unordered_map<std::size_t, std::size_t> service_index_;
  std::vector<std::size_t> services_;
  std::vector<std::size_t> deadheads_;
  std::vector<Time> running_;
  std::vector<std::vector<std::size_t>> depots_;
  std::vector<std::vector<std::size_t>> exits_;
};

// ---------------------------------------------------------------------------
// Structural properties

enum class ViolationKind {
  ArcNeverAvailable,   ///< no availability interval as long as the running time
  AvailabilityGap,     ///< gap between consecutive windows shorter than running time
  DeadheadDisconnected,
  SelfLoop,
};

struct Violation {
  ViolationKind kind;
  std::string arc;    ///< empty for graph-level violations
  std::string agent;  ///< empty unless agent-specific
  std::string message;
};

std::string to_string(ViolationKind kind);

/// Empty report means well-defined.
std::vector<Violation> validate_well_defined(const Instance& instance);

/// Strong connectivity of the deadhead graph G' = (V, A \ A_*).
bool deadhead_strongly_connected(const Instance& instance);

/// Max over ordered vertex pairs of the min-hop distance in G'. Throws if
/// G' is not strongly connected.
std::size_t deadhead_diameter(const Instance& instance);

/// tp * (|A_*| + 1) * deadhead_diameter.
Time inspection_time_bound(const Instance& instance, const Time& tp);

/// Every deadhead arc has, inside every interval [k*tp, (k+1)*tp] up to the
/// inspection bound, an availability gap of at least its max running time.
bool check_periodic_connectivity(const Instance& instance, const Time& tp);

// ---------------------------------------------------------------------------
// JSON I/O

Instance instance_from_json_text(const std::string& text);
std::string instance_to_json_text(const Instance& instance);

Instance load_instance(const std::filesystem::path& path);
void save_instance(const Instance& instance, const std::filesystem::path& path);

}  // namespace mtrpp
