#include "percoroute/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace percoroute {

PercolationConfig::PercolationConfig(Topology topology, double open_probability,
                                     std::uint64_t seed)
    : topology_(std::move(topology)), p_(open_probability), seed_(seed) {
  if (!(p_ >= 0.0 && p_ <= 1.0)) {
    throw ConfigError("open probability must be in [0, 1]");
  }
  if (p_ >= 1.0) {
    always_open_ = true;
  } else {
    // floor(p * 2^64), computed in extended precision so the threshold is
    // monotone in p and exact for dyadic p.
    threshold_ = static_cast<std::uint64_t>(std::ldexp(static_cast<long double>(p_), 64));
  }
}

void ProbeLedger::record(EdgeId e, bool open) {
  ++total_calls_;
  if (state_.emplace(e.code, open).second) {
    log_.emplace_back(e, open);
  }
}

void ProbeLedger::export_csv(std::ostream& out) const {
  out << "order,edge_id,state\n";
  std::uint64_t order = 0;
  for (const auto& [edge, open] : log_) {
    out << order++ << ',' << edge.code << ',' << (open ? "open" : "closed") << '\n';
  }
}

bool edge_state(const PercolationConfig& cfg, EdgeId e, ProbeLedger& ledger) {
  const bool open = cfg.edge_open(e);
  ledger.record(e, open);
  return open;
}

std::vector<VertexId> LocalityGuard::path_from_source(VertexId v) const {
  if (!reached(v)) {
    throw LocalityError("path_from_source: vertex not reached");
  }
  std::vector<VertexId> path{v};
  std::uint64_t cur = v.code;
  while (cur != source_.code) {
    cur = parent_.at(cur);
    path.push_back(VertexId{cur});
  }
  std::reverse(path.begin(), path.end());
  return path;
}

bool local_probe(const PercolationConfig& cfg, LocalityGuard& guard, EdgeId e,
                 ProbeLedger& ledger) {
  const auto [a, b] = cfg.topology().endpoints(e);
  const bool a_in = guard.reached(a);
  const bool b_in = guard.reached(b);
  if (!a_in && !b_in) {
    throw LocalityError("local probe of edge " + std::to_string(e.code) +
                        " with no reached endpoint");
  }
  const bool open = edge_state(cfg, e, ledger);
  if (open) {
    if (!a_in) {
      guard.reached_.insert(a.code);
      guard.parent_.emplace(a.code, b.code);
    } else if (!b_in) {
      guard.reached_.insert(b.code);
      guard.parent_.emplace(b.code, a.code);
    }
  }
  return open;
}

namespace {

void check_capacity(const PercolationConfig& cfg, std::uint64_t edge_ceiling) {
  if (cfg.topology().edge_count() > edge_ceiling) {
    throw CapacityError("ground truth refused: " + cfg.topology().to_string() + " has " +
                        std::to_string(cfg.topology().edge_count()) +
                        " edges, ceiling is " + std::to_string(edge_ceiling));
  }
}

// BFS over open edges with a dense visited map. Stops early when `stop_at`
// is discovered; returns the number of visited vertices.
std::uint64_t open_bfs(const PercolationConfig& cfg, VertexId start, const VertexId* stop_at,
                       bool* found) {
  const Topology& t = cfg.topology();
  std::vector<std::uint8_t> visited(t.vertex_count(), 0);
  std::vector<std::uint64_t> queue;
  queue.push_back(start.code);
  visited[start.code] = 1;
  std::uint64_t count = 1;
  if (found) *found = false;
  std::vector<Neighbor> nbrs;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const VertexId x{queue[qi]};
    t.neighbors(x, nbrs);
    for (const Neighbor& nb : nbrs) {
      if (visited[nb.vertex.code] || !cfg.edge_open(nb.edge)) continue;
      visited[nb.vertex.code] = 1;
      ++count;
      if (stop_at && nb.vertex == *stop_at) {
        if (found) *found = true;
        return count;
      }
      queue.push_back(nb.vertex.code);
    }
  }
  return count;
}

}  // namespace

bool ground_truth_connected(const PercolationConfig& cfg, VertexId u, VertexId v,
                            std::uint64_t edge_ceiling) {
  cfg.topology().check_vertex(u);
  cfg.topology().check_vertex(v);
  check_capacity(cfg, edge_ceiling);
  if (u == v) return true;
  bool found = false;
  open_bfs(cfg, u, &v, &found);
  return found;
}

std::uint64_t component_size(const PercolationConfig& cfg, VertexId u,
                             std::uint64_t edge_ceiling) {
  cfg.topology().check_vertex(u);
  check_capacity(cfg, edge_ceiling);
  return open_bfs(cfg, u, nullptr, nullptr);
}

}  // namespace percoroute
