#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "percoroute/errors.hpp"

namespace percoroute {

enum class Family { hypercube, mesh, doubletree, complete };

const char* family_name(Family family);
Family family_from_name(const std::string& name);

// Canonical vertex encoding: a dense index in [0, vertex_count).
struct VertexId {
  std::uint64_t code = 0;
  friend auto operator<=>(const VertexId&, const VertexId&) = default;
};

// Canonical edge encoding: a dense index in [0, edge_count). Each undirected
// edge has exactly one code.
struct EdgeId {
  std::uint64_t code = 0;
  friend auto operator<=>(const EdgeId&, const EdgeId&) = default;
};

struct Neighbor {
  VertexId vertex;  // opposite endpoint
  EdgeId edge;
};

enum class TreeSide : int { first = 0, second = 1 };

struct DoubleTreeVertex {
  TreeSide side;        // leaves are canonically TreeSide::first
  int level;            // 0 = root, depth = shared leaf level
  std::uint64_t index;  // position within the level, < 2^level
};

struct DoubleTreeEdge {
  TreeSide side;
  int parent_level;            // in [0, depth)
  std::uint64_t parent_index;  // < 2^parent_level
  int child;                   // 0 = left, 1 = right
};

// Immutable descriptor of one graph family instance. All operations are pure
// and reentrant; instances are cheap to copy.
class Topology {
 public:
  static Topology hypercube(int dimension);
  static Topology mesh(int dimension, std::uint64_t side);
  static Topology doubletree(int depth);
  static Topology complete(std::uint64_t vertices);

  // Structured-text descriptor, e.g. "hypercube:n=12", "mesh:d=2,M=64",
  // "doubletree:n=10", "complete:n=512".
  static Topology parse(const std::string& text);
  std::string to_string() const;

  Family family() const { return family_; }
  // Family parameter accessors: n for hypercube/doubletree/complete, (d, M)
  // for the mesh.
  int dimension() const { return dim_; }
  std::uint64_t side() const { return side_; }

  std::uint64_t vertex_count() const { return vertex_count_; }
  std::uint64_t edge_count() const { return edge_count_; }

  bool vertex_valid(VertexId v) const { return v.code < vertex_count_; }
  bool edge_valid(EdgeId e) const { return e.code < edge_count_; }
  void check_vertex(VertexId v) const;
  void check_edge(EdgeId e) const;

  // Every incident edge exactly once, with the opposite endpoint, in
  // ascending EdgeId order.
  std::vector<Neighbor> neighbors(VertexId v) const;
  void neighbors(VertexId v, std::vector<Neighbor>& out) const;
  std::uint64_t degree(VertexId v) const;

  std::pair<VertexId, VertexId> endpoints(EdgeId e) const;

  // Graph distance in the un-percolated topology.
  std::uint64_t distance(VertexId u, VertexId v) const;

  // Deterministic shortest path u = w_0, ..., w_m = v (hypercube and mesh
  // only): differing hypercube dimensions are fixed in ascending order; mesh
  // axes are corrected in ascending order, lowest axis fully first.
  std::vector<VertexId> shortest_path_waypoints(VertexId u, VertexId v) const;

  // Double tree only: the corresponding edge in the other tree. Involution.
  EdgeId mirror_edge(EdgeId e) const;

  // Family-specific encode/decode helpers.
  VertexId mesh_vertex(const std::vector<std::uint64_t>& coords) const;
  std::vector<std::uint64_t> mesh_coords(VertexId v) const;
  VertexId doubletree_vertex(TreeSide side, int level, std::uint64_t index) const;
  DoubleTreeVertex doubletree_fields(VertexId v) const;
  EdgeId doubletree_edge(TreeSide side, int parent_level, std::uint64_t parent_index,
                         int child) const;
  DoubleTreeEdge doubletree_edge_fields(EdgeId e) const;
  VertexId doubletree_root(TreeSide side) const;
  EdgeId hypercube_edge(VertexId anchor, int dim) const;
  EdgeId mesh_edge(const std::vector<std::uint64_t>& anchor_coords, int axis) const;
  EdgeId complete_edge(std::uint64_t i, std::uint64_t j) const;

  std::string vertex_label(VertexId v) const;
  std::string edge_label(EdgeId e) const;

  friend bool operator==(const Topology&, const Topology&) = default;

 private:
  Topology(Family family, int dim, std::uint64_t side);

  void require_family(Family expected, const char* op) const;

  Family family_;
  int dim_ = 0;             // hypercube n / mesh d / doubletree depth
  std::uint64_t side_ = 0;  // mesh M / complete n
  std::uint64_t vertex_count_ = 0;
  std::uint64_t edge_count_ = 0;
};

}  // namespace percoroute
