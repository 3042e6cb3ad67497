#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "percoroute/topology.hpp"

namespace percoroute {

// SplitMix64 output stream: mix64(seed, k) is the k-th output (0-indexed) of
// a SplitMix64 generator seeded with `seed`. Published avalanche construction
// with known test vectors, e.g. mix64(0, 0) == 0xE220A8397B1DCDAF.
inline std::uint64_t mix64(std::uint64_t seed, std::uint64_t key) {
  std::uint64_t z = seed + (key + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// One lazily-sampled random subgraph G_p: every edge is open independently
// with probability p, decided by hashing (seed, edge code). Fully determined
// by (topology, p, seed).
class PercolationConfig {
 public:
  PercolationConfig(Topology topology, double open_probability, std::uint64_t seed);

  const Topology& topology() const { return topology_; }
  double open_probability() const { return p_; }
  std::uint64_t seed() const { return seed_; }

  // Pure form, no probe accounting. Open iff mix64(seed, code) < floor(p*2^64).
  bool edge_open(EdgeId e) const {
    topology_.check_edge(e);
    return always_open_ || mix64(seed_, e.code) < threshold_;
  }

 private:
  Topology topology_;
  double p_;
  std::uint64_t seed_;
  std::uint64_t threshold_ = 0;
  bool always_open_ = false;
};

// Probe accounting for one routing trial. distinct_probes is the reported
// complexity; total_calls keeps the re-query count for diagnostics.
class ProbeLedger {
 public:
  std::uint64_t total_calls() const { return total_calls_; }
  std::uint64_t distinct_probes() const { return log_.size(); }

  bool was_probed(EdgeId e) const { return state_.count(e.code) != 0; }

  // Recorded state of a probed edge, if any.
  std::optional<bool> probed_state(EdgeId e) const {
    const auto it = state_.find(e.code);
    return it == state_.end() ? std::nullopt : std::optional<bool>(it->second);
  }

  // First-time probes, in probe order.
  const std::vector<std::pair<EdgeId, bool>>& log() const { return log_; }

  // CSV export: order,edge_id,state
  void export_csv(std::ostream& out) const;

  // Records one oracle call; appends to the log on a first-time probe.
  void record(EdgeId e, bool open);

 private:
  std::unordered_map<std::uint64_t, bool> state_;
  std::vector<std::pair<EdgeId, bool>> log_;
  std::uint64_t total_calls_ = 0;
};

// Queries one edge, with probe accounting.
bool edge_state(const PercolationConfig& cfg, EdgeId e, ProbeLedger& ledger);

// Enforces the local-router rule: an edge may be probed only if one endpoint
// already has an established open path from the source. Also records the
// discovery tree, so any reached vertex can be traced back along open edges.
class LocalityGuard {
 public:
  explicit LocalityGuard(VertexId source) : source_(source) { reached_.insert(source.code); }

  VertexId source() const { return source_; }
  bool reached(VertexId v) const { return reached_.count(v.code) != 0; }
  std::uint64_t reached_count() const { return reached_.size(); }
  const std::unordered_set<std::uint64_t>& reached_set() const { return reached_; }

  // Walks the discovery tree from `v` back to the source; returns the
  // source..v vertex sequence. `v` must be reached.
  std::vector<VertexId> path_from_source(VertexId v) const;

  friend bool local_probe(const PercolationConfig& cfg, LocalityGuard& guard, EdgeId e,
                          ProbeLedger& ledger);

 private:
  VertexId source_;
  std::unordered_set<std::uint64_t> reached_;
  std::unordered_map<std::uint64_t, std::uint64_t> parent_;
};

// Locality-checked probe: throws LocalityError unless one endpoint of `e` is
// already reached; on an open edge both endpoints become reached.
bool local_probe(const PercolationConfig& cfg, LocalityGuard& guard, EdgeId e,
                 ProbeLedger& ledger);

inline constexpr std::uint64_t kGroundTruthEdgeCeiling = std::uint64_t(1) << 24;

// Exact connectivity of u and v in G_p by full enumeration. Never touches a
// ProbeLedger, so conditioning on {u ~ v} does not contaminate measured
// complexity. Throws CapacityError above the edge ceiling.
bool ground_truth_connected(const PercolationConfig& cfg, VertexId u, VertexId v,
                            std::uint64_t edge_ceiling = kGroundTruthEdgeCeiling);

// Size of u's open component, by the same full enumeration.
std::uint64_t component_size(const PercolationConfig& cfg, VertexId u,
                             std::uint64_t edge_ceiling = kGroundTruthEdgeCeiling);

}  // namespace percoroute
