#include "percoroute/routers.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <unordered_map>
#include <unordered_set>

namespace percoroute {

const char* route_status_name(RouteStatus status) {
  switch (status) {
    case RouteStatus::found: return "found";
    case RouteStatus::no_path: return "no_path";
    case RouteStatus::budget_exceeded: return "budget_exceeded";
  }
  return "?";
}

namespace {

// Per-attempt probe state shared by all routers.
struct Attempt {
  const PercolationConfig& cfg;
  ProbeLedger ledger;
  std::uint64_t budget;

  Attempt(const PercolationConfig& c, const RouteOptions& options)
      : cfg(c), budget(options.budget.value_or(c.topology().edge_count())) {}

  // True when probing `e` would need a new distinct slot beyond the budget.
  bool over_budget(EdgeId e) const {
    return !ledger.was_probed(e) && ledger.distinct_probes() >= budget;
  }

  RoutingResult finish(RouteStatus status, std::vector<VertexId> path = {}) {
    RoutingResult r;
    r.status = status;
    r.path = std::move(path);
    r.probes = ledger.distinct_probes();
    r.calls = ledger.total_calls();
    r.budget = budget;
    r.ledger = std::move(ledger);
    return r;
  }
};

}  // namespace

RoutingResult bfs_local(const PercolationConfig& cfg, VertexId u, VertexId v,
                        const RouteOptions& options) {
  const Topology& t = cfg.topology();
  t.check_vertex(u);
  t.check_vertex(v);
  Attempt at(cfg, options);
  LocalityGuard guard(u);
  if (u == v) return at.finish(RouteStatus::found, {u});

  std::vector<std::uint64_t> queue{u.code};
  std::unordered_set<std::uint64_t> visited{u.code};
  std::vector<Neighbor> nbrs;
  bool hit = false;
  for (std::size_t qi = 0; qi < queue.size() && !hit; ++qi) {
    const VertexId x{queue[qi]};
    t.neighbors(x, nbrs);
    for (const Neighbor& nb : nbrs) {
      if (at.over_budget(nb.edge)) return at.finish(RouteStatus::budget_exceeded);
      const bool open = local_probe(cfg, guard, nb.edge, at.ledger);
      if (open && !visited.count(nb.vertex.code)) {
        visited.insert(nb.vertex.code);
        queue.push_back(nb.vertex.code);
        if (nb.vertex == v) {
          hit = true;
          break;
        }
      }
    }
  }
  if (hit) return at.finish(RouteStatus::found, guard.path_from_source(v));
  return at.finish(RouteStatus::no_path);
}

namespace {

enum class StageOutcome { advanced, exhausted, depth_capped, over_budget };

// One guarded BFS burst from `from`, looking for any waypoint with index
// greater than `current`. Completes the closing layer and advances to the
// largest index discovered there. depth_limit == 0 means unlimited.
StageOutcome waypoint_stage(Attempt& at, LocalityGuard& guard, VertexId from,
                            const std::unordered_map<std::uint64_t, std::size_t>& wp_index,
                            std::size_t current, int depth_limit, std::size_t* advance_to) {
  const Topology& t = at.cfg.topology();
  std::unordered_set<std::uint64_t> stage_visited{from.code};
  std::vector<std::uint64_t> layer{from.code}, next_layer;
  std::vector<Neighbor> nbrs;
  bool advanced = false;
  int depth = 0;
  while (!layer.empty() && !advanced) {
    if (depth_limit > 0 && depth == depth_limit) return StageOutcome::depth_capped;
    ++depth;
    next_layer.clear();
    for (const std::uint64_t xc : layer) {
      t.neighbors(VertexId{xc}, nbrs);
      for (const Neighbor& nb : nbrs) {
        if (at.over_budget(nb.edge)) return StageOutcome::over_budget;
        const bool open = local_probe(at.cfg, guard, nb.edge, at.ledger);
        if (!open || stage_visited.count(nb.vertex.code)) continue;
        stage_visited.insert(nb.vertex.code);
        next_layer.push_back(nb.vertex.code);
        const auto it = wp_index.find(nb.vertex.code);
        if (it != wp_index.end() && it->second > current) {
          if (!advanced || it->second > *advance_to) *advance_to = it->second;
          advanced = true;
        }
      }
    }
    layer.swap(next_layer);
  }
  return advanced ? StageOutcome::advanced : StageOutcome::exhausted;
}

// Largest waypoint index beyond `current` that is already reached, if any.
std::size_t skip_ahead(const LocalityGuard& guard, const std::vector<VertexId>& waypoints,
                       std::size_t current) {
  for (std::size_t j = waypoints.size(); j-- > current + 1;) {
    if (guard.reached(waypoints[j])) return j;
  }
  return current;
}

}  // namespace

RoutingResult mesh_waypoint_route(const PercolationConfig& cfg, VertexId u, VertexId v,
                                  const RouteOptions& options) {
  const Topology& t = cfg.topology();
  if (t.family() != Family::mesh) {
    throw FamilyError("mesh_waypoint_route needs a mesh topology");
  }
  t.check_vertex(u);
  t.check_vertex(v);
  Attempt at(cfg, options);
  LocalityGuard guard(u);
  const std::vector<VertexId> waypoints = t.shortest_path_waypoints(u, v);
  const std::size_t m = waypoints.size() - 1;
  if (m == 0) return at.finish(RouteStatus::found, {u});

  std::unordered_map<std::uint64_t, std::size_t> wp_index;
  for (std::size_t j = 0; j < waypoints.size(); ++j) wp_index.emplace(waypoints[j].code, j);

  std::size_t i = 0;
  while (i < m) {
    const std::size_t ahead = skip_ahead(guard, waypoints, i);
    if (ahead > i) {
      i = ahead;
      continue;
    }
    std::size_t advance_to = 0;
    switch (waypoint_stage(at, guard, waypoints[i], wp_index, i, /*depth_limit=*/0,
                           &advance_to)) {
      case StageOutcome::advanced: i = advance_to; break;
      case StageOutcome::exhausted: return at.finish(RouteStatus::no_path);
      case StageOutcome::over_budget: return at.finish(RouteStatus::budget_exceeded);
      case StageOutcome::depth_capped: return at.finish(RouteStatus::no_path);  // unreachable
    }
  }
  return at.finish(RouteStatus::found, guard.path_from_source(v));
}

RoutingResult hypercube_waypoint_route(const PercolationConfig& cfg, VertexId u, VertexId v,
                                       const RouteOptions& options) {
  const Topology& t = cfg.topology();
  if (t.family() != Family::hypercube) {
    throw FamilyError("hypercube_waypoint_route needs a hypercube topology");
  }
  t.check_vertex(u);
  t.check_vertex(v);
  if (options.stage_radius < 1) throw ConfigError("stage radius must be >= 1");
  Attempt at(cfg, options);
  LocalityGuard guard(u);
  if (u == v) return at.finish(RouteStatus::found, {u});

  VertexId start = u;
  if (options.greedy_first) {
    // Stage 0: greedy dimension fixing while open distance-reducing edges
    // are found from the current vertex.
    VertexId cur = u;
    while (cur != v) {
      bool moved = false;
      const std::uint64_t diff = cur.code ^ v.code;
      for (int d = 0; d < t.dimension() && !moved; ++d) {
        const std::uint64_t bit = std::uint64_t(1) << d;
        if (!(diff & bit)) continue;
        const EdgeId e = t.hypercube_edge(VertexId{cur.code & ~bit}, d);
        if (at.over_budget(e)) return at.finish(RouteStatus::budget_exceeded);
        if (local_probe(cfg, guard, e, at.ledger)) {
          cur.code ^= bit;
          moved = true;
        }
      }
      if (!moved) break;
    }
    if (cur == v) return at.finish(RouteStatus::found, guard.path_from_source(v));
    start = cur;
  }

  const std::vector<VertexId> waypoints = t.shortest_path_waypoints(start, v);
  const std::size_t m = waypoints.size() - 1;
  std::unordered_map<std::uint64_t, std::size_t> wp_index;
  for (std::size_t j = 0; j < waypoints.size(); ++j) wp_index.emplace(waypoints[j].code, j);

  std::size_t i = 0;
  bool fall_back = false;
  while (i < m && !fall_back) {
    const std::size_t ahead = skip_ahead(guard, waypoints, i);
    if (ahead > i) {
      i = ahead;
      continue;
    }
    std::size_t advance_to = 0;
    switch (waypoint_stage(at, guard, waypoints[i], wp_index, i, options.stage_radius,
                           &advance_to)) {
      case StageOutcome::advanced: i = advance_to; break;
      case StageOutcome::over_budget: return at.finish(RouteStatus::budget_exceeded);
      case StageOutcome::exhausted:
      case StageOutcome::depth_capped: fall_back = true; break;
    }
  }
  if (!fall_back) return at.finish(RouteStatus::found, guard.path_from_source(v));

  // Fallback: resume an unbounded local BFS from everything reached so far,
  // seeking v directly. Keeps found <=> u ~ v under an unlimited budget.
  std::vector<std::uint64_t> queue(guard.reached_set().begin(), guard.reached_set().end());
  std::sort(queue.begin(), queue.end());
  std::unordered_set<std::uint64_t> visited(queue.begin(), queue.end());
  std::vector<Neighbor> nbrs;
  bool hit = guard.reached(v);
  for (std::size_t qi = 0; qi < queue.size() && !hit; ++qi) {
    const VertexId x{queue[qi]};
    t.neighbors(x, nbrs);
    for (const Neighbor& nb : nbrs) {
      if (at.over_budget(nb.edge)) return at.finish(RouteStatus::budget_exceeded);
      const bool open = local_probe(cfg, guard, nb.edge, at.ledger);
      if (open && !visited.count(nb.vertex.code)) {
        visited.insert(nb.vertex.code);
        queue.push_back(nb.vertex.code);
        if (nb.vertex == v) {
          hit = true;
          break;
        }
      }
    }
  }
  if (hit) return at.finish(RouteStatus::found, guard.path_from_source(v));
  return at.finish(RouteStatus::no_path);
}

RoutingResult doubletree_local_route(const PercolationConfig& cfg, const RouteOptions& options) {
  const Topology& t = cfg.topology();
  if (t.family() != Family::doubletree) {
    throw FamilyError("doubletree_local_route needs a doubletree topology");
  }
  return bfs_local(cfg, t.doubletree_root(TreeSide::first), t.doubletree_root(TreeSide::second),
                   options);
}

RoutingResult doubletree_oracle_route(const PercolationConfig& cfg, const RouteOptions& options) {
  const Topology& t = cfg.topology();
  if (t.family() != Family::doubletree) {
    throw FamilyError("doubletree_oracle_route needs a doubletree topology");
  }
  const int depth = t.dimension();
  Attempt at(cfg, options);

  // Depth-first descent over mirrored edge pairs, left child first. A child
  // edge is usable iff both it and its mirror are open; both probes of a
  // pair are charged.
  struct Frame {
    int level;
    std::uint64_t index;
    int next_child;
  };
  std::vector<Frame> stack{{0, 0, 0}};
  bool success = false;
  while (!stack.empty()) {
    if (stack.back().level == depth) {
      success = true;
      break;
    }
    if (stack.back().next_child == 2) {
      stack.pop_back();
      continue;
    }
    const Frame f = stack.back();
    ++stack.back().next_child;
    const EdgeId e = t.doubletree_edge(TreeSide::first, f.level, f.index, f.next_child);
    const EdgeId mirrored = t.mirror_edge(e);
    if (at.over_budget(e)) return at.finish(RouteStatus::budget_exceeded);
    const bool first_open = edge_state(cfg, e, at.ledger);
    if (at.over_budget(mirrored)) return at.finish(RouteStatus::budget_exceeded);
    const bool second_open = edge_state(cfg, mirrored, at.ledger);
    if (first_open && second_open) {
      stack.push_back({f.level + 1, 2 * f.index + std::uint64_t(f.next_child), 0});
    }
  }
  if (!success) return at.finish(RouteStatus::no_path);

  std::vector<VertexId> path;
  path.reserve(2 * depth + 1);
  for (const Frame& f : stack) {
    path.push_back(t.doubletree_vertex(TreeSide::first, f.level, f.index));
  }
  const std::uint64_t leaf = stack.back().index;
  for (int level = depth - 1; level >= 0; --level) {
    path.push_back(t.doubletree_vertex(TreeSide::second, level, leaf >> (depth - level)));
  }
  return at.finish(RouteStatus::found, std::move(path));
}

namespace {

// Min-heap entry keyed by canonical edge code.
struct EdgeCandidate {
  std::uint64_t code;
  std::uint64_t x;
  std::uint64_t y;
  friend bool operator>(const EdgeCandidate& a, const EdgeCandidate& b) {
    return a.code > b.code;
  }
};
using EdgeMinHeap =
    std::priority_queue<EdgeCandidate, std::vector<EdgeCandidate>, std::greater<EdgeCandidate>>;

}  // namespace

RoutingResult gnp_local_route(const PercolationConfig& cfg, VertexId u, VertexId v,
                              const RouteOptions& options) {
  const Topology& t = cfg.topology();
  if (t.family() != Family::complete) {
    throw FamilyError("gnp_local_route needs a complete topology");
  }
  t.check_vertex(u);
  t.check_vertex(v);
  Attempt at(cfg, options);
  LocalityGuard guard(u);
  if (u == v) return at.finish(RouteStatus::found, {u});

  const std::uint64_t n = t.vertex_count();
  EdgeMinHeap view_of_target;  // unprobed (x, v), x reached
  EdgeMinHeap growth;          // (x, w), x reached and w unreached at push time

  const auto on_join = [&](std::uint64_t x) {
    view_of_target.push({t.complete_edge(x, v.code).code, x, v.code});
    for (std::uint64_t w = 0; w < n; ++w) {
      if (w == x || w == v.code || guard.reached(VertexId{w})) continue;
      growth.push({t.complete_edge(x, w).code, x, w});
    }
  };
  on_join(u.code);

  while (true) {
    if (guard.reached(v)) return at.finish(RouteStatus::found, guard.path_from_source(v));
    if (!view_of_target.empty()) {
      const EdgeCandidate c = view_of_target.top();
      view_of_target.pop();
      const EdgeId e{c.code};
      if (at.ledger.was_probed(e)) continue;
      if (at.over_budget(e)) return at.finish(RouteStatus::budget_exceeded);
      local_probe(cfg, guard, e, at.ledger);
      continue;
    }
    // Smallest unprobed cut edge.
    bool probed_one = false;
    while (!growth.empty()) {
      const EdgeCandidate c = growth.top();
      const EdgeId e{c.code};
      if (guard.reached(VertexId{c.y}) || at.ledger.was_probed(e)) {
        growth.pop();
        continue;
      }
      if (at.over_budget(e)) return at.finish(RouteStatus::budget_exceeded);
      growth.pop();
      if (local_probe(cfg, guard, e, at.ledger)) on_join(c.y);
      probed_one = true;
      break;
    }
    if (!probed_one) return at.finish(RouteStatus::no_path);
  }
}

RoutingResult gnp_oracle_route(const PercolationConfig& cfg, VertexId u, VertexId v,
                               const RouteOptions& options) {
  const Topology& t = cfg.topology();
  if (t.family() != Family::complete) {
    throw FamilyError("gnp_oracle_route needs a complete topology");
  }
  t.check_vertex(u);
  t.check_vertex(v);
  Attempt at(cfg, options);
  if (u == v) return at.finish(RouteStatus::found, {u});

  const std::uint64_t n = t.vertex_count();
  std::unordered_set<std::uint64_t> side_u{u.code}, side_v{v.code};
  std::unordered_map<std::uint64_t, std::uint64_t> parent_u, parent_v;
  EdgeMinHeap cross, grow_u, grow_v;

  const auto unreached = [&](std::uint64_t w) {
    return !side_u.count(w) && !side_v.count(w);
  };
  cross.push({t.complete_edge(u.code, v.code).code, u.code, v.code});
  for (std::uint64_t w = 0; w < n; ++w) {
    if (w == u.code || w == v.code) continue;
    grow_u.push({t.complete_edge(u.code, w).code, u.code, w});
    grow_v.push({t.complete_edge(v.code, w).code, v.code, w});
  }

  const auto join = [&](bool to_u, std::uint64_t z, std::uint64_t via) {
    auto& mine = to_u ? side_u : side_v;
    auto& theirs = to_u ? side_v : side_u;
    auto& parents = to_u ? parent_u : parent_v;
    auto& grow = to_u ? grow_u : grow_v;
    mine.insert(z);
    parents.emplace(z, via);
    for (const std::uint64_t y : theirs) {
      cross.push({t.complete_edge(z, y).code, to_u ? z : y, to_u ? y : z});
    }
    for (std::uint64_t w = 0; w < n; ++w) {
      if (w != z && unreached(w)) grow.push({t.complete_edge(z, w).code, z, w});
    }
  };

  const auto walk = [](const std::unordered_map<std::uint64_t, std::uint64_t>& parents,
                       std::uint64_t from, std::uint64_t root) {
    std::vector<std::uint64_t> seq{from};
    while (seq.back() != root) seq.push_back(parents.at(seq.back()));
    return seq;
  };

  while (true) {
    // Step 1: drain unqueried cross edges.
    bool found = false;
    EdgeCandidate hit{};
    while (!cross.empty()) {
      const EdgeCandidate c = cross.top();
      const EdgeId e{c.code};
      if (at.ledger.was_probed(e)) {
        cross.pop();
        continue;
      }
      if (at.over_budget(e)) return at.finish(RouteStatus::budget_exceeded);
      cross.pop();
      if (edge_state(cfg, e, at.ledger)) {
        found = true;
        hit = c;
        break;
      }
    }
    if (found) {
      std::vector<std::uint64_t> left = walk(parent_u, hit.x, u.code);
      std::reverse(left.begin(), left.end());
      const std::vector<std::uint64_t> right = walk(parent_v, hit.y, v.code);
      std::vector<VertexId> path;
      path.reserve(left.size() + right.size());
      for (const std::uint64_t c : left) path.push_back(VertexId{c});
      for (const std::uint64_t c : right) path.push_back(VertexId{c});
      return at.finish(RouteStatus::found, std::move(path));
    }

    // Step 2: grow the smaller side toward an unreached vertex; fall back to
    // the other side so no growth probe is left unprobed before giving up.
    const bool u_smaller = side_u.size() <= side_v.size();
    bool probed_one = false;
    for (const bool to_u : {u_smaller, !u_smaller}) {
      auto& grow = to_u ? grow_u : grow_v;
      while (!grow.empty()) {
        const EdgeCandidate c = grow.top();
        const EdgeId e{c.code};
        if (!unreached(c.y) || at.ledger.was_probed(e)) {
          grow.pop();
          continue;
        }
        if (at.over_budget(e)) return at.finish(RouteStatus::budget_exceeded);
        grow.pop();
        if (edge_state(cfg, e, at.ledger)) join(to_u, c.y, c.x);
        probed_one = true;
        break;
      }
      if (probed_one) break;
    }
    if (!probed_one) return at.finish(RouteStatus::no_path);  // Step 3
  }
}

const std::vector<std::string>& router_names() {
  static const std::vector<std::string> names = {"bfs",      "mesh-waypoint", "hc-waypoint",
                                                 "tt-local", "tt-oracle",     "gnp-local",
                                                 "gnp-oracle"};
  return names;
}

bool router_known(std::string_view name) {
  const auto& names = router_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

bool router_is_local(std::string_view name) {
  return name == "bfs" || name == "mesh-waypoint" || name == "hc-waypoint" ||
         name == "tt-local" || name == "gnp-local";
}

RoutingResult route(const PercolationConfig& cfg, std::string_view router, VertexId u,
                    VertexId v, const RouteOptions& options) {
  const Topology& t = cfg.topology();
  if (router == "bfs") return bfs_local(cfg, u, v, options);
  if (router == "mesh-waypoint") return mesh_waypoint_route(cfg, u, v, options);
  if (router == "hc-waypoint") return hypercube_waypoint_route(cfg, u, v, options);
  if (router == "tt-local" || router == "tt-oracle") {
    if (t.family() != Family::doubletree) {
      throw FamilyError(std::string(router) + " needs a doubletree topology");
    }
    if (u != t.doubletree_root(TreeSide::first) || v != t.doubletree_root(TreeSide::second)) {
      throw ConfigError(std::string(router) + " routes between the two roots");
    }
    return router == "tt-local" ? doubletree_local_route(cfg, options)
                                : doubletree_oracle_route(cfg, options);
  }
  if (router == "gnp-local") return gnp_local_route(cfg, u, v, options);
  if (router == "gnp-oracle") return gnp_oracle_route(cfg, u, v, options);
  throw ConfigError("unknown router: " + std::string(router));
}

}  // namespace percoroute
