#include "mtrpp/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace mtrpp {

namespace {

Arc make_arc(std::string id, std::string tail, std::string head, std::vector<UnavailabilityWindow> windows = {},
             std::optional<PeriodicRule> periodic = std::nullopt) {
  return Arc{std::move(id), std::move(tail), std::move(head), Unavailability(std::move(windows), periodic)};
}

Agent make_agent(std::string id, std::vector<std::string> depots, std::vector<std::string> exits) {
  return Agent{std::move(id), std::move(depots), std::move(exits)};
}

// Uniform integer in [lo, hi].
std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

std::string vname(std::size_t i) { return "v" + std::to_string(i); }

}  // namespace

Instance gen_ex1(char which, std::size_t agents) {
  if (which != 'a' && which != 'b' && which != 'c') throw InstanceError("Ex-I case must be a, b or c");
  Instance::Data d;
  d.vertices = {"v1", "v2", "v3"};
  std::map<std::string, std::vector<UnavailabilityWindow>> win;
  const Time tenth(1, 10);
  switch (which) {
    case 'a':
      win["a1"] = {{4, 5}};
      win["a2"] = {{4, 5}};
      win["a5"] = {{7, 8}};
      win["a6"] = {{7, 8}};
      break;
    case 'b':
      win["a4"] = {{4, 5}};
      win["a5"] = {{5, 14}};
      break;
    default:
      win["a3"] = {{tenth * 41, tenth * 49}, {tenth * 81, tenth * 109}};
      win["a4"] = {{tenth * 41, tenth * 49}};
      win["a5"] = {{tenth * 55, 14}};
      break;
  }
  const std::vector<std::tuple<std::string, std::string, std::string, std::int64_t>> arcs{
      {"a1", "v1", "v2", 2}, {"a2", "v1", "v2", 3}, {"a3", "v2", "v1", 2},
      {"a4", "v2", "v3", 3}, {"a5", "v2", "v1", 3}, {"a6", "v3", "v2", 4}};
  for (const auto& [id, t, h, w] : arcs) d.arcs.push_back(make_arc(id, t, h, win[id]));
  d.service_arcs = {"a2", "a5"};
  if (agents == 0) agents = which == 'c' ? 2 : 1;
  for (std::size_t k = 1; k <= agents; ++k) {
    const std::string id = "k" + std::to_string(k);
    d.agents.push_back(make_agent(id, {"v1"}, {"v1"}));
    for (const auto& [aid, t, h, w] : arcs) d.running_times[{id, aid}] = Time(w);
  }
  return Instance(std::move(d));
}

Instance gen_t1(bool with_window) {
  Instance::Data d;
  d.vertices = {"v1", "v2"};
  d.arcs.push_back(make_arc("d12", "v1", "v2"));
  std::vector<UnavailabilityWindow> w;
  if (with_window) w.push_back({4, 6});
  d.arcs.push_back(make_arc("d21", "v2", "v1", w));
  d.arcs.push_back(make_arc("s12", "v1", "v2"));
  d.service_arcs = {"s12"};
  d.agents.push_back(make_agent("k1", {"v1"}, {"v1"}));
  d.running_times[{"k1", "d12"}] = 2;
  d.running_times[{"k1", "d21"}] = 2;
  d.running_times[{"k1", "s12"}] = 3;
  return Instance(std::move(d));
}

Instance gen_ex2_synthetic(std::uint64_t seed, bool with_services) {
  constexpr std::size_t n = 36;
  constexpr std::int64_t period = 74;
  std::mt19937_64 rng(seed);
  Instance::Data d;
  for (std::size_t i = 0; i < n; ++i) d.vertices.push_back("s" + std::to_string(i));
  d.period = Time(period);

  struct Spec {
    std::string id;
    std::size_t tail, head;
    std::int64_t w;
    std::optional<PeriodicRule> rule;
  };
  std::vector<Spec> specs;
  auto schedule = [&](std::int64_t w) {
    // A train blocks the track once per period, leaving room to traverse
    // before it in every period.
    const std::int64_t duration = uniform(rng, 4, 16);
    const std::int64_t offset = uniform(rng, w, period - duration);
    return PeriodicRule{Time(offset), Time(period), Time(duration)};
  };
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t w = uniform(rng, 2, 5);
    specs.push_back({"r" + std::to_string(i), i, (i + 1) % n, w, std::nullopt});
  }
  for (std::size_t i = 0; i < 9; ++i) {
    const std::int64_t w = uniform(rng, 6, 12);
    specs.push_back({"x" + std::to_string(i), 3 * i, (3 * i + 5) % n, w, std::nullopt});
  }
  const std::size_t base = specs.size();
  if (with_services) {
    for (std::size_t j = 0; j < 9; ++j) {
      const Spec& ring = specs[4 * j];
      specs.push_back({"svc" + std::to_string(j), ring.tail, ring.head, ring.w + 2, std::nullopt});
    }
  }
  // Service duplicates share the track, hence the schedule, of their loop arc.
  std::int64_t max_w = 0;
  for (const auto& s : specs) max_w = std::max(max_w, s.w);
  for (std::size_t i = 0; i < base; ++i) specs[i].rule = schedule(max_w);
  for (std::size_t j = base; j < specs.size(); ++j) specs[j].rule = specs[4 * (j - base)].rule;

  for (const auto& s : specs) d.arcs.push_back(make_arc(s.id, d.vertices[s.tail], d.vertices[s.head], {}, s.rule));
  for (std::size_t j = base; j < specs.size(); ++j) d.service_arcs.push_back(specs[j].id);
  for (const char* id : {"k1", "k2"}) {
    d.agents.push_back(make_agent(id, {"s0"}, {"s0"}));
    for (const auto& s : specs) d.running_times[{id, s.id}] = Time(s.w);
  }
  return Instance(std::move(d));
}

Instance gen_random_tdrpp(std::uint64_t seed, std::size_t n, double arc_factor, double service_frac) {
  if (n < 2) throw InstanceError("need at least two vertices");
  if (arc_factor < 1.0) throw InstanceError("arc factor must be at least 1");
  if (service_frac < 0.0 || service_frac > 1.0) throw InstanceError("service fraction must be in [0, 1]");
  std::mt19937_64 rng(seed);
  Instance::Data d;
  for (std::size_t i = 0; i < n; ++i) d.vertices.push_back(vname(i));

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);

  struct Spec {
    std::size_t tail, head;
    std::int64_t w;
  };
  std::vector<Spec> deadheads;
  for (std::size_t i = 0; i < n; ++i) deadheads.push_back({perm[i], perm[(i + 1) % n], uniform(rng, 1, 10)});
  const auto total = static_cast<std::size_t>(std::llround(arc_factor * static_cast<double>(n)));
  while (deadheads.size() < total) {
    const auto u = static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(n) - 1));
    const auto v = static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(n) - 1));
    if (u == v) continue;
    deadheads.push_back({u, v, uniform(rng, 1, 10)});
  }

  // One train runs around the tour; it occupies tour arc i for tau_i minutes
  // each lap, so every track is free for the rest of the lap.
  std::vector<std::int64_t> tau(n);
  for (auto& t : tau) t = uniform(rng, 1, 10);
  const std::int64_t lap = std::accumulate(tau.begin(), tau.end(), std::int64_t{0});
  std::int64_t at = uniform(rng, 0, lap - 1);
  std::vector<std::optional<PeriodicRule>> rules(deadheads.size());
  for (std::size_t i = 0; i < n; ++i) {
    rules[i] = PeriodicRule{Time(at % lap), Time(lap), Time(tau[i])};
    at += tau[i];
  }
  // Keep every tour arc traversable between two passes of the train.
  for (std::size_t i = 0; i < n; ++i) deadheads[i].w = std::min(deadheads[i].w, lap - tau[i]);

  for (std::size_t i = 0; i < deadheads.size(); ++i)
    d.arcs.push_back(make_arc("a" + std::to_string(i), vname(deadheads[i].tail), vname(deadheads[i].head), {}, rules[i]));

  const auto ns = static_cast<std::size_t>(std::llround(service_frac * static_cast<double>(deadheads.size())));
  std::vector<std::size_t> pick(deadheads.size());
  std::iota(pick.begin(), pick.end(), 0);
  std::shuffle(pick.begin(), pick.end(), rng);
  pick.resize(ns);
  std::sort(pick.begin(), pick.end());
  std::vector<std::int64_t> service_w;
  for (std::size_t j = 0; j < ns; ++j) {
    const Spec& s = deadheads[pick[j]];
    const std::string id = "s" + std::to_string(j);
    d.arcs.push_back(make_arc(id, vname(s.tail), vname(s.head)));
    d.service_arcs.push_back(id);
    service_w.push_back(s.w + uniform(rng, 1, 3));
  }

  const std::string depot = vname(perm[0]);
  d.agents.push_back(make_agent("k1", {depot}, {depot}));
  for (std::size_t i = 0; i < deadheads.size(); ++i) d.running_times[{"k1", "a" + std::to_string(i)}] = Time(deadheads[i].w);
  for (std::size_t j = 0; j < ns; ++j) d.running_times[{"k1", "s" + std::to_string(j)}] = Time(service_w[j]);
  d.period = Time(2 * lap);
  return Instance(std::move(d));
}

Instance gen_tiny(std::uint64_t seed, const TinyOptions& options) {
  std::mt19937_64 rng(seed);
  const auto nv = static_cast<std::size_t>(uniform(rng, 2, 4));
  const auto ns = static_cast<std::size_t>(uniform(rng, 1, 2));
  const auto na = static_cast<std::size_t>(uniform(rng, static_cast<std::int64_t>(nv + ns), 8));
  const auto nk = static_cast<std::size_t>(uniform(rng, 1, 2));
  const Time half(1, 2);
  auto value = [&](std::int64_t lo, std::int64_t hi) {
    Time t(uniform(rng, lo, hi));
    if (!options.integer_data && uniform(rng, 0, 2) == 0) t += half;
    return t;
  };

  Instance::Data d;
  for (std::size_t i = 0; i < nv; ++i) d.vertices.push_back(vname(i));
  std::vector<std::size_t> perm(nv);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::pair<std::size_t, std::size_t>> ends;
  for (std::size_t i = 0; i < nv; ++i) ends.emplace_back(perm[i], perm[(i + 1) % nv]);
  while (ends.size() < na) {
    const auto u = static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(nv) - 1));
    const auto v = static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(nv) - 1));
    if (u != v) ends.emplace_back(u, v);
  }
  // The last ns arcs are the service arcs; the tour stays deadhead.
  const bool shared = nk == 1 || uniform(rng, 0, 1) == 0;
  std::vector<std::vector<Time>> running(nk, std::vector<Time>(na));
  for (std::size_t a = 0; a < na; ++a) {
    running[0][a] = value(1, 4);
    for (std::size_t k = 1; k < nk; ++k) running[k][a] = shared ? running[0][a] : value(1, 4);
  }
  for (std::size_t a = 0; a < na; ++a) {
    std::vector<UnavailabilityWindow> windows;
    if (options.with_windows) {
      Time max_w{0};
      for (std::size_t k = 0; k < nk; ++k) max_w = std::max(max_w, running[k][a]);
      const auto count = uniform(rng, 0, 2);
      Time at = value(0, 8);
      for (std::int64_t i = 0; i < count; ++i) {
        const Time hi = at + value(1, 4);
        windows.push_back({at, hi});
        at = hi + max_w + value(0, 3);
      }
    }
    d.arcs.push_back(make_arc("a" + std::to_string(a), vname(ends[a].first), vname(ends[a].second), windows));
  }
  for (std::size_t s = 0; s < ns; ++s) d.service_arcs.push_back("a" + std::to_string(na - ns + s));

  std::vector<std::string> depots, exits;
  for (std::size_t k = 0; k < nk; ++k) {
    if (k == 0 || !shared) {
      depots = {vname(static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(nv) - 1)))};
      exits = {vname(static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(nv) - 1)))};
      if (uniform(rng, 0, 3) == 0) exits.push_back(vname((perm[0] + 1) % nv));
    }
    const std::string id = "k" + std::to_string(k + 1);
    d.agents.push_back(make_agent(id, depots, exits));
    for (std::size_t a = 0; a < na; ++a) d.running_times[{id, "a" + std::to_string(a)}] = running[k][a];
  }
  return Instance(std::move(d));
}

}  // namespace mtrpp
