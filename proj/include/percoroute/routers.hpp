#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "percoroute/percolation.hpp"
#include "percoroute/topology.hpp"

namespace percoroute {

enum class RouteStatus { found, no_path, budget_exceeded };

const char* route_status_name(RouteStatus status);

struct RouteOptions {
  // Distinct-probe ceiling; defaults to edge_count(topology), which bounds a
  // full BFS and guarantees termination without changing found/no_path
  // semantics.
  std::optional<std::uint64_t> budget;
  // Per-stage percolation-depth limit of the hypercube waypoint router.
  int stage_radius = 3;
  // Optional stage-0 greedy dimension-fixing walk for the hypercube router.
  bool greedy_first = false;
};

struct RoutingResult {
  RouteStatus status = RouteStatus::no_path;
  std::vector<VertexId> path;  // nonempty iff found; starts at u, ends at v
  std::uint64_t probes = 0;    // distinct edges probed at termination
  std::uint64_t calls = 0;     // oracle calls including cached re-queries
  std::uint64_t budget = 0;    // effective ceiling used for this attempt
  ProbeLedger ledger;          // full probe history of the attempt
};

// Locality-guarded breadth-first search; found <=> u ~ v under an unlimited
// budget, and the returned path is shortest in G_p.
RoutingResult bfs_local(const PercolationConfig& cfg, VertexId u, VertexId v,
                        const RouteOptions& options = {});

// Mesh router: fixes the deterministic shortest-path waypoints, then bursts
// of guarded BFS from the current waypoint until a later one is reached.
RoutingResult mesh_waypoint_route(const PercolationConfig& cfg, VertexId u, VertexId v,
                                  const RouteOptions& options = {});

// Hypercube router: Hamming-minimal waypoints with depth-limited stage BFS
// and an unbounded local-BFS fallback, so completeness matches bfs_local.
RoutingResult hypercube_waypoint_route(const PercolationConfig& cfg, VertexId u, VertexId v,
                                       const RouteOptions& options = {});

// bfs_local specialized to the two roots of the double tree.
RoutingResult doubletree_local_route(const PercolationConfig& cfg,
                                     const RouteOptions& options = {});

// Oracle (not locality-guarded) root-to-root router over mirrored edge
// pairs: depth-first descent where a child edge is usable iff both it and
// its mirror are open. Complete only w.r.t. mirrored-branch paths.
RoutingResult doubletree_oracle_route(const PercolationConfig& cfg,
                                      const RouteOptions& options = {});

// Local router on the faulty complete graph: grows the reached set one cut
// probe at a time, edges into v first, otherwise ascending edge order.
RoutingResult gnp_local_route(const PercolationConfig& cfg, VertexId u, VertexId v,
                              const RouteOptions& options = {});

// Oracle router on the faulty complete graph: probe unqueried cross edges
// between the two reached sets whenever any exist, otherwise grow the
// smaller set toward an unreached vertex; report no_path when neither probe
// remains.
RoutingResult gnp_oracle_route(const PercolationConfig& cfg, VertexId u, VertexId v,
                               const RouteOptions& options = {});

// Router registry: bfs, mesh-waypoint, hc-waypoint, tt-local, tt-oracle,
// gnp-local, gnp-oracle.
const std::vector<std::string>& router_names();
bool router_known(std::string_view name);
bool router_is_local(std::string_view name);

RoutingResult route(const PercolationConfig& cfg, std::string_view router, VertexId u,
                    VertexId v, const RouteOptions& options = {});

}  // namespace percoroute
