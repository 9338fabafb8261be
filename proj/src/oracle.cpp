#include "mtrpp/oracle.hpp"

#include <algorithm>
#include <functional>

namespace mtrpp {

namespace {

// Smallest departure >= t avoiding every (lower - w, upper); nullopt past bound.
std::optional<Time> first_free(const std::vector<UnavailabilityWindow>& windows, const Time& w,
                               const Time& t, const Time& bound) {
  std::vector<Time> candidates{t};
  for (const auto& win : windows)
    if (win.upper > t) candidates.push_back(win.upper);
  std::sort(candidates.begin(), candidates.end());
  for (const Time& c : candidates) {
    if (c > bound) return std::nullopt;
    const bool blocked = std::any_of(windows.begin(), windows.end(), [&](const auto& win) {
      return win.lower - w < c && c < win.upper;
    });
    if (!blocked) return c;
  }
  return std::nullopt;
}

}  // namespace

Time oracle_default_bound(const Instance& in) {
  Time total_w{0}, last{0};
  bool periodic = false;
  for (std::size_t a = 0; a < in.arc_count(); ++a) {
    total_w += in.max_running_time(a);
    const auto& u = in.arc(a).unavailability;
    last = std::max(last, u.last_explicit_upper());
    if (u.periodic()) {
      periodic = true;
      last = std::max(last, u.periodic()->offset + u.periodic()->period + u.periodic()->duration);
    }
  }
  // Past the last explicit window every arc is free; a route never needs more
  // than one full wait per step on top of that.
  Time bound = last + total_w * static_cast<std::int64_t>(in.service_count() + 1) * 2 + 1;
  if (periodic) {
    Time longest{0};
    for (std::size_t a = 0; a < in.arc_count(); ++a)
      if (const auto& p = in.arc(a).unavailability.periodic()) longest = std::max(longest, p->period);
    bound += longest * static_cast<std::int64_t>(in.arc_count() * (in.service_count() + 1) + 1);
  }
  return bound;
}

std::optional<std::vector<RouteStep>> earliest_feasible_timing(const Instance& in, std::size_t agent,
                                                                const std::vector<std::size_t>& arcs,
                                                                const Time& start, const Time& bound) {
  std::vector<RouteStep> steps;
  Time t = start;
  for (std::size_t a : arcs) {
    const Time& w = in.running_time(agent, a);
    const auto windows = in.arc(a).unavailability.windows_until(bound + w);
    const auto dep = first_free(windows, w, t, bound);
    if (!dep) return std::nullopt;
    steps.push_back({a, *dep, *dep + w});
    t = *dep + w;
  }
  return steps;
}

OracleResult brute_force_solve(const Instance& in, const OracleOptions& options) {
  const std::size_t size = in.arc_count() * (in.service_count() + 1) * in.agent_count();
  if (size > options.size_limit)
    throw OracleSizeError("instance too large for the oracle: |A|*(|A_*|+1)*|K| = " +
                          std::to_string(size) + " exceeds limit " + std::to_string(options.size_limit));
  if (in.service_count() > 20) throw OracleSizeError("too many service arcs for the oracle");

  const Time bound = options.bound ? *options.bound : oracle_default_bound(in);
  const std::size_t ns = in.service_count();
  const std::size_t full = (std::size_t{1} << ns) - 1;
  std::vector<std::size_t> service_bit(in.arc_count(), ns);
  for (std::size_t s = 0; s < ns; ++s) service_bit[in.service_arcs()[s]] = s;

  std::vector<std::vector<std::size_t>> out(in.vertex_count());
  for (std::size_t a = 0; a < in.arc_count(); ++a) out[in.tail(a)].push_back(a);

  OracleResult result;

  struct Best {
    bool found = false;
    Time cost;
    Route route;
  };
  // best[k][mask]: cheapest route of agent k servicing exactly `mask`.
  std::vector<std::vector<Best>> best(in.agent_count(), std::vector<Best>(full + 1));

  for (std::size_t k = 0; k < in.agent_count(); ++k) {
    best[k][0] = {true, Time{0}, Route{k, {}, Time{0}, Time{0}}};
    std::vector<bool> is_exit(in.vertex_count(), false);
    for (std::size_t e : in.exits(k)) is_exit[e] = true;

    std::vector<RouteStep> path;
    std::vector<bool> visited(in.vertex_count(), false);  // within the current layer
    std::function<void(std::size_t, const Time&, std::size_t, const Time&)> dfs =
        [&](std::size_t v, const Time& t, std::size_t mask, const Time& movement) {
          if (is_exit[v] && !path.empty()) {
            ++result.routes_enumerated;
            const Time cost = in.beta() * movement + t;
            Best& b = best[k][mask];
            if (!b.found || cost < b.cost) b = {true, cost, Route{k, path, t, movement}};
          }
          for (std::size_t a : out[v]) {
            const std::size_t h = in.head(a);
            const bool service = in.is_service(a);
            if (service && (mask >> service_bit[a] & 1)) continue;
            if (!service && visited[h]) continue;
            const Time& w = in.running_time(k, a);
            const auto windows = in.arc(a).unavailability.windows_until(bound + w);
            const auto dep = first_free(windows, w, t, bound);
            if (!dep) continue;
            path.push_back({a, *dep, *dep + w});
            if (service) {
              // New layer: only the arrival vertex has been seen.
              std::vector<bool> saved(in.vertex_count(), false);
              std::swap(saved, visited);
              visited[h] = true;
              dfs(h, *dep + w, mask | (std::size_t{1} << service_bit[a]), movement + w);
              std::swap(saved, visited);
            } else {
              visited[h] = true;
              dfs(h, *dep + w, mask, movement + w);
              visited[h] = false;
            }
            path.pop_back();
          }
        };
    for (std::size_t d : in.depots(k)) {
      std::fill(visited.begin(), visited.end(), false);
      visited[d] = true;
      dfs(d, Time{0}, 0, Time{0});
    }
  }

  // Partition services over agents: g[k][mask] = best cost using agents < k.
  const std::size_t K = in.agent_count();
  std::vector<std::vector<std::optional<Time>>> g(K + 1, std::vector<std::optional<Time>>(full + 1));
  std::vector<std::vector<std::size_t>> choice(K + 1, std::vector<std::size_t>(full + 1, 0));
  g[0][0] = Time{0};
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t mask = 0; mask <= full; ++mask) {
      // Enumerate submasks taken by agent k.
      for (std::size_t sub = mask;; sub = (sub - 1) & mask) {
        if (g[k][mask ^ sub] && best[k][sub].found) {
          const Time c = *g[k][mask ^ sub] + best[k][sub].cost;
          if (!g[k + 1][mask] || c < *g[k + 1][mask]) {
            g[k + 1][mask] = c;
            choice[k + 1][mask] = sub;
          }
        }
        if (sub == 0) break;
      }
    }
  }
  if (!g[K][full]) return result;

  result.feasible = true;
  result.objective = *g[K][full];
  result.routes.resize(K);
  std::size_t mask = full;
  for (std::size_t k = K; k-- > 0;) {
    const std::size_t sub = choice[k + 1][mask];
    result.routes[k] = best[k][sub].route;
    mask ^= sub;
  }
  for (const auto& r : result.routes) {
    result.movement_cost += in.beta() * r.movement;
    result.completion_sum += r.completion;
  }
  return result;
}

}  // namespace mtrpp
