#include "percoroute/topology.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace percoroute {

namespace {

constexpr int kMaxHypercubeDim = 57;   // n * 2^(n-1) must fit in 64 bits
constexpr int kMaxDoubleTreeDepth = 59;

std::uint64_t checked_pow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > (std::uint64_t(1) << 62) / base) {
      throw ConfigError("topology size overflows 64-bit encoding space");
    }
    r *= base;
  }
  return r;
}

// Remove bit `d` from v, shifting higher bits down.
std::uint64_t drop_bit(std::uint64_t v, int d) {
  const std::uint64_t lo = v & ((std::uint64_t(1) << d) - 1);
  return lo | ((v >> (d + 1)) << d);
}

// Insert a zero bit at position `d`.
std::uint64_t insert_zero_bit(std::uint64_t v, int d) {
  const std::uint64_t lo = v & ((std::uint64_t(1) << d) - 1);
  return lo | ((v >> d) << (d + 1));
}

int bit_length(std::uint64_t v) {
  int n = 0;
  while (v) {
    ++n;
    v >>= 1;
  }
  return n;
}

// Longest common prefix of two root-paths in a binary tree, given as level
// counts and within-level indices.
int common_prefix_depth(std::uint64_t i1, int l1, std::uint64_t i2, int l2) {
  const int m = std::min(l1, l2);
  for (int k = m; k >= 1; --k) {
    if ((i1 >> (l1 - k)) == (i2 >> (l2 - k))) return k;
  }
  return 0;
}

}  // namespace

const char* family_name(Family family) {
  switch (family) {
    case Family::hypercube: return "hypercube";
    case Family::mesh: return "mesh";
    case Family::doubletree: return "doubletree";
    case Family::complete: return "complete";
  }
  return "?";
}

Family family_from_name(const std::string& name) {
  if (name == "hypercube") return Family::hypercube;
  if (name == "mesh") return Family::mesh;
  if (name == "doubletree") return Family::doubletree;
  if (name == "complete") return Family::complete;
  throw ConfigError("unknown graph family: " + name);
}

Topology::Topology(Family family, int dim, std::uint64_t side)
    : family_(family), dim_(dim), side_(side) {
  switch (family_) {
    case Family::hypercube:
      vertex_count_ = std::uint64_t(1) << dim_;
      edge_count_ = std::uint64_t(dim_) << (dim_ - 1);
      break;
    case Family::mesh: {
      const std::uint64_t volume = checked_pow(side_, dim_);
      vertex_count_ = volume;
      edge_count_ = std::uint64_t(dim_) * (volume / side_) * (side_ - 1);
      break;
    }
    case Family::doubletree:
      vertex_count_ = 3 * (std::uint64_t(1) << dim_) - 2;
      edge_count_ = (std::uint64_t(1) << (dim_ + 2)) - 4;
      break;
    case Family::complete:
      vertex_count_ = side_;
      edge_count_ = side_ * (side_ - 1) / 2;
      break;
  }
}

Topology Topology::hypercube(int dimension) {
  if (dimension < 1 || dimension > kMaxHypercubeDim) {
    throw ConfigError("hypercube dimension must be in [1, " +
                      std::to_string(kMaxHypercubeDim) + "]");
  }
  return Topology(Family::hypercube, dimension, 0);
}

Topology Topology::mesh(int dimension, std::uint64_t side) {
  if (dimension < 1) throw ConfigError("mesh dimension must be >= 1");
  if (side < 2) throw ConfigError("mesh side length must be >= 2");
  return Topology(Family::mesh, dimension, side);
}

Topology Topology::doubletree(int depth) {
  if (depth < 1 || depth > kMaxDoubleTreeDepth) {
    throw ConfigError("double tree depth must be in [1, " +
                      std::to_string(kMaxDoubleTreeDepth) + "]");
  }
  return Topology(Family::doubletree, depth, 0);
}

Topology Topology::complete(std::uint64_t vertices) {
  if (vertices < 2) throw ConfigError("complete graph needs >= 2 vertices");
  if (vertices > (std::uint64_t(1) << 32)) {
    throw ConfigError("complete graph too large for edge encoding");
  }
  return Topology(Family::complete, 0, vertices);
}

Topology Topology::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("bad topology spec: " + text);
  const Family fam = family_from_name(text.substr(0, colon));

  std::uint64_t n = 0, d = 0, m = 0;
  bool has_n = false, has_d = false, has_m = false;
  std::stringstream rest(text.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("bad topology spec: " + text);
    const std::string key = item.substr(0, eq);
    const std::string raw = item.substr(eq + 1);
    std::uint64_t value = 0;
    try {
      size_t pos = 0;
      if (raw.empty() || raw.find_first_not_of("0123456789") != std::string::npos) {
        throw std::invalid_argument("not a nonnegative integer");
      }
      value = std::stoull(raw, &pos);
      if (pos != raw.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ConfigError("bad topology parameter value in: " + text);
    }
    if (key == "n") { n = value; has_n = true; }
    else if (key == "d") { d = value; has_d = true; }
    else if (key == "M") { m = value; has_m = true; }
    else throw ConfigError("unknown topology parameter '" + key + "' in: " + text);
  }

  switch (fam) {
    case Family::hypercube:
      if (!has_n || has_d || has_m) throw ConfigError("hypercube spec wants n=...");
      return hypercube(static_cast<int>(n));
    case Family::mesh:
      if (!has_d || !has_m || has_n) throw ConfigError("mesh spec wants d=...,M=...");
      return mesh(static_cast<int>(d), m);
    case Family::doubletree:
      if (!has_n || has_d || has_m) throw ConfigError("doubletree spec wants n=...");
      return doubletree(static_cast<int>(n));
    case Family::complete:
      if (!has_n || has_d || has_m) throw ConfigError("complete spec wants n=...");
      return complete(n);
  }
  throw ConfigError("bad topology spec: " + text);
}

std::string Topology::to_string() const {
  std::ostringstream out;
  out << family_name(family_) << ':';
  switch (family_) {
    case Family::hypercube:
    case Family::doubletree: out << "n=" << dim_; break;
    case Family::mesh: out << "d=" << dim_ << ",M=" << side_; break;
    case Family::complete: out << "n=" << side_; break;
  }
  return out.str();
}

void Topology::check_vertex(VertexId v) const {
  if (!vertex_valid(v)) {
    throw EncodingError("vertex code " + std::to_string(v.code) +
                        " out of range for " + to_string());
  }
}

void Topology::check_edge(EdgeId e) const {
  if (!edge_valid(e)) {
    throw EncodingError("edge code " + std::to_string(e.code) +
                        " out of range for " + to_string());
  }
}

void Topology::require_family(Family expected, const char* op) const {
  if (family_ != expected) {
    throw FamilyError(std::string(op) + " is not defined for " + to_string());
  }
}

// ---------------------------------------------------------------------------
// Encoding helpers

EdgeId Topology::hypercube_edge(VertexId anchor, int dim) const {
  require_family(Family::hypercube, "hypercube_edge");
  check_vertex(anchor);
  if (dim < 0 || dim >= dim_ || (anchor.code >> dim) & 1) {
    throw EncodingError("hypercube edge anchor must have bit dim = 0");
  }
  const std::uint64_t per_dim = std::uint64_t(1) << (dim_ - 1);
  return EdgeId{std::uint64_t(dim) * per_dim + drop_bit(anchor.code, dim)};
}

VertexId Topology::mesh_vertex(const std::vector<std::uint64_t>& coords) const {
  require_family(Family::mesh, "mesh_vertex");
  if (coords.size() != static_cast<size_t>(dim_)) {
    throw EncodingError("mesh vertex needs exactly d coordinates");
  }
  std::uint64_t code = 0, mult = 1;
  for (int a = 0; a < dim_; ++a) {
    if (coords[a] >= side_) throw EncodingError("mesh coordinate out of range");
    code += coords[a] * mult;
    mult *= side_;
  }
  return VertexId{code};
}

std::vector<std::uint64_t> Topology::mesh_coords(VertexId v) const {
  require_family(Family::mesh, "mesh_coords");
  check_vertex(v);
  std::vector<std::uint64_t> coords(dim_);
  std::uint64_t rest = v.code;
  for (int a = 0; a < dim_; ++a) {
    coords[a] = rest % side_;
    rest /= side_;
  }
  return coords;
}

EdgeId Topology::mesh_edge(const std::vector<std::uint64_t>& anchor_coords, int axis) const {
  require_family(Family::mesh, "mesh_edge");
  if (axis < 0 || axis >= dim_) throw EncodingError("mesh edge axis out of range");
  if (anchor_coords.size() != static_cast<size_t>(dim_)) {
    throw EncodingError("mesh edge anchor needs exactly d coordinates");
  }
  // Mixed-radix rank with radix M-1 on the edge axis (anchor has the smaller
  // coordinate there, so it ranges over [0, M-1)).
  std::uint64_t rank = 0, mult = 1;
  for (int a = 0; a < dim_; ++a) {
    const std::uint64_t radix = (a == axis) ? side_ - 1 : side_;
    if (anchor_coords[a] >= radix) throw EncodingError("mesh edge anchor out of range");
    rank += anchor_coords[a] * mult;
    mult *= radix;
  }
  const std::uint64_t per_axis = edge_count_ / dim_;
  return EdgeId{std::uint64_t(axis) * per_axis + rank};
}

VertexId Topology::doubletree_vertex(TreeSide side, int level, std::uint64_t index) const {
  require_family(Family::doubletree, "doubletree_vertex");
  if (level < 0 || level > dim_ || index >= (std::uint64_t(1) << level)) {
    throw EncodingError("double tree vertex (level, index) out of range");
  }
  const std::uint64_t per_side = (std::uint64_t(1) << dim_) - 1;
  if (level == dim_) {
    // Shared leaf level: identified at encode time, side is immaterial.
    return VertexId{2 * per_side + index};
  }
  const std::uint64_t offset = (side == TreeSide::second) ? per_side : 0;
  return VertexId{offset + (std::uint64_t(1) << level) - 1 + index};
}

DoubleTreeVertex Topology::doubletree_fields(VertexId v) const {
  require_family(Family::doubletree, "doubletree_fields");
  check_vertex(v);
  const std::uint64_t per_side = (std::uint64_t(1) << dim_) - 1;
  if (v.code >= 2 * per_side) {
    return DoubleTreeVertex{TreeSide::first, dim_, v.code - 2 * per_side};
  }
  const TreeSide side = (v.code >= per_side) ? TreeSide::second : TreeSide::first;
  const std::uint64_t q = v.code - (side == TreeSide::second ? per_side : 0);
  const int level = bit_length(q + 1) - 1;
  return DoubleTreeVertex{side, level, q + 1 - (std::uint64_t(1) << level)};
}

EdgeId Topology::doubletree_edge(TreeSide side, int parent_level,
                                 std::uint64_t parent_index, int child) const {
  require_family(Family::doubletree, "doubletree_edge");
  if (parent_level < 0 || parent_level >= dim_ ||
      parent_index >= (std::uint64_t(1) << parent_level) || (child & ~1)) {
    throw EncodingError("double tree edge fields out of range");
  }
  const std::uint64_t per_side = edge_count_ / 2;
  const std::uint64_t offset = (side == TreeSide::second) ? per_side : 0;
  const std::uint64_t rank =
      2 * ((std::uint64_t(1) << parent_level) - 1 + parent_index) + std::uint64_t(child);
  return EdgeId{offset + rank};
}

DoubleTreeEdge Topology::doubletree_edge_fields(EdgeId e) const {
  require_family(Family::doubletree, "doubletree_edge_fields");
  check_edge(e);
  const std::uint64_t per_side = edge_count_ / 2;
  const TreeSide side = (e.code >= per_side) ? TreeSide::second : TreeSide::first;
  const std::uint64_t rank = e.code - (side == TreeSide::second ? per_side : 0);
  const std::uint64_t q = rank >> 1;
  const int level = bit_length(q + 1) - 1;
  return DoubleTreeEdge{side, level, q + 1 - (std::uint64_t(1) << level),
                        static_cast<int>(rank & 1)};
}

VertexId Topology::doubletree_root(TreeSide side) const {
  return doubletree_vertex(side, 0, 0);
}

EdgeId Topology::complete_edge(std::uint64_t i, std::uint64_t j) const {
  require_family(Family::complete, "complete_edge");
  if (i == j) throw EncodingError("complete edge needs two distinct vertices");
  if (i > j) std::swap(i, j);
  if (j >= side_) throw EncodingError("complete edge endpoint out of range");
  // Row-major rank of the strictly-upper-triangular pair (i, j).
  return EdgeId{i * side_ - i * (i + 1) / 2 + (j - i - 1)};
}

EdgeId Topology::mirror_edge(EdgeId e) const {
  require_family(Family::doubletree, "mirror_edge");
  check_edge(e);
  const std::uint64_t per_side = edge_count_ / 2;
  return EdgeId{e.code >= per_side ? e.code - per_side : e.code + per_side};
}

std::pair<VertexId, VertexId> Topology::endpoints(EdgeId e) const {
  check_edge(e);
  switch (family_) {
    case Family::hypercube: {
      const std::uint64_t per_dim = std::uint64_t(1) << (dim_ - 1);
      const int dim = static_cast<int>(e.code / per_dim);
      const std::uint64_t anchor = insert_zero_bit(e.code % per_dim, dim);
      return {VertexId{anchor}, VertexId{anchor | (std::uint64_t(1) << dim)}};
    }
    case Family::mesh: {
      const std::uint64_t per_axis = edge_count_ / dim_;
      const int axis = static_cast<int>(e.code / per_axis);
      std::uint64_t rest = e.code % per_axis;
      std::uint64_t code = 0, mult = 1, axis_mult = 1;
      for (int a = 0; a < dim_; ++a) {
        const std::uint64_t radix = (a == axis) ? side_ - 1 : side_;
        code += (rest % radix) * mult;
        if (a == axis) axis_mult = mult;
        rest /= radix;
        mult *= side_;
      }
      return {VertexId{code}, VertexId{code + axis_mult}};
    }
    case Family::doubletree: {
      const DoubleTreeEdge f = doubletree_edge_fields(e);
      return {doubletree_vertex(f.side, f.parent_level, f.parent_index),
              doubletree_vertex(f.side, f.parent_level + 1,
                                2 * f.parent_index + f.child)};
    }
    case Family::complete: {
      // Invert the upper-triangular rank: first row i with base(i) <= code.
      const double nd = static_cast<double>(side_);
      const double cd = static_cast<double>(e.code);
      std::uint64_t i = 0;
      const double disc = (nd - 0.5) * (nd - 0.5) - 2.0 * cd;
      if (disc > 0) {
        const double guess = nd - 0.5 - std::sqrt(disc);
        i = guess > 0 ? static_cast<std::uint64_t>(guess) : 0;
        if (i >= side_ - 1) i = side_ - 2;
      }
      const auto row_base = [&](std::uint64_t r) { return r * side_ - r * (r + 1) / 2; };
      while (i > 0 && row_base(i) > e.code) --i;
      while (i + 2 < side_ && row_base(i + 1) <= e.code) ++i;
      const std::uint64_t j = i + 1 + (e.code - row_base(i));
      return {VertexId{i}, VertexId{j}};
    }
  }
  throw FamilyError("endpoints: bad family");
}

// ---------------------------------------------------------------------------
// Neighbors and degrees

std::uint64_t Topology::degree(VertexId v) const {
  check_vertex(v);
  switch (family_) {
    case Family::hypercube: return dim_;
    case Family::mesh: {
      std::uint64_t deg = 0, rest = v.code;
      for (int a = 0; a < dim_; ++a) {
        const std::uint64_t c = rest % side_;
        rest /= side_;
        deg += (c > 0) + (c + 1 < side_);
      }
      return deg;
    }
    case Family::doubletree: {
      const DoubleTreeVertex f = doubletree_fields(v);
      if (f.level == dim_) return 2;  // shared leaf: parents in both trees
      return f.level == 0 ? 2 : 3;
    }
    case Family::complete: return side_ - 1;
  }
  return 0;
}

void Topology::neighbors(VertexId v, std::vector<Neighbor>& out) const {
  check_vertex(v);
  out.clear();
  switch (family_) {
    case Family::hypercube: {
      const std::uint64_t per_dim = std::uint64_t(1) << (dim_ - 1);
      for (int d = 0; d < dim_; ++d) {
        const std::uint64_t bit = std::uint64_t(1) << d;
        const std::uint64_t anchor = v.code & ~bit;
        out.push_back({VertexId{v.code ^ bit},
                       EdgeId{std::uint64_t(d) * per_dim + drop_bit(anchor, d)}});
      }
      break;
    }
    case Family::mesh: {
      const std::uint64_t per_axis = edge_count_ / dim_;
      std::uint64_t rest = v.code, mult = 1, axis_offset = 0;
      // Per axis: the edge toward the smaller coordinate first, then the
      // larger, each ranked in the mixed radix where digit a runs over M-1.
      for (int a = 0; a < dim_; ++a) {
        const std::uint64_t c = rest % side_;
        rest /= side_;
        if (c > 0) {
          std::uint64_t rank = 0, m2 = 1, rr = v.code;
          for (int b = 0; b < dim_; ++b) {
            const std::uint64_t radix = (b == a) ? side_ - 1 : side_;
            std::uint64_t digit = rr % side_;
            rr /= side_;
            if (b == a) digit -= 1;  // anchor is the smaller endpoint
            rank += digit * m2;
            m2 *= radix;
          }
          out.push_back({VertexId{v.code - mult}, EdgeId{axis_offset + rank}});
        }
        if (c + 1 < side_) {
          std::uint64_t rank = 0, m2 = 1, rr = v.code;
          for (int b = 0; b < dim_; ++b) {
            const std::uint64_t radix = (b == a) ? side_ - 1 : side_;
            const std::uint64_t digit = rr % side_;
            rr /= side_;
            rank += digit * m2;
            m2 *= radix;
          }
          out.push_back({VertexId{v.code + mult}, EdgeId{axis_offset + rank}});
        }
        mult *= side_;
        axis_offset += per_axis;
      }
      break;
    }
    case Family::doubletree: {
      const DoubleTreeVertex f = doubletree_fields(v);
      if (f.level == dim_) {
        // Shared leaf: a parent in each tree, first side first.
        for (TreeSide s : {TreeSide::first, TreeSide::second}) {
          out.push_back({doubletree_vertex(s, dim_ - 1, f.index >> 1),
                         doubletree_edge(s, dim_ - 1, f.index >> 1,
                                         static_cast<int>(f.index & 1))});
        }
        break;
      }
      if (f.level > 0) {
        out.push_back({doubletree_vertex(f.side, f.level - 1, f.index >> 1),
                       doubletree_edge(f.side, f.level - 1, f.index >> 1,
                                       static_cast<int>(f.index & 1))});
      }
      for (int child = 0; child < 2; ++child) {
        out.push_back({doubletree_vertex(f.side, f.level + 1, 2 * f.index + child),
                       doubletree_edge(f.side, f.level, f.index, child)});
      }
      break;
    }
    case Family::complete: {
      out.reserve(side_ - 1);
      for (std::uint64_t j = 0; j < side_; ++j) {
        if (j == v.code) continue;
        out.push_back({VertexId{j}, complete_edge(v.code, j)});
      }
      break;
    }
  }
}

std::vector<Neighbor> Topology::neighbors(VertexId v) const {
  std::vector<Neighbor> out;
  neighbors(v, out);
  return out;
}

// ---------------------------------------------------------------------------
// Distances and waypoint paths

std::uint64_t Topology::distance(VertexId u, VertexId v) const {
  check_vertex(u);
  check_vertex(v);
  switch (family_) {
    case Family::hypercube:
      return static_cast<std::uint64_t>(__builtin_popcountll(u.code ^ v.code));
    case Family::mesh: {
      std::uint64_t d = 0, ru = u.code, rv = v.code;
      for (int a = 0; a < dim_; ++a) {
        const std::uint64_t cu = ru % side_, cv = rv % side_;
        ru /= side_;
        rv /= side_;
        d += cu > cv ? cu - cv : cv - cu;
      }
      return d;
    }
    case Family::doubletree: {
      const DoubleTreeVertex a = doubletree_fields(u);
      const DoubleTreeVertex b = doubletree_fields(v);
      const int c = common_prefix_depth(a.index, a.level, b.index, b.level);
      if (a.side == b.side) {
        return std::uint64_t(a.level + b.level - 2 * c);
      }
      // Opposite trees: descend past the identified leaves and back up.
      return std::uint64_t(2 * dim_ - std::abs(a.level - b.level) - 2 * c);
    }
    case Family::complete:
      return u == v ? 0 : 1;
  }
  return 0;
}

std::vector<VertexId> Topology::shortest_path_waypoints(VertexId u, VertexId v) const {
  check_vertex(u);
  check_vertex(v);
  std::vector<VertexId> path{u};
  switch (family_) {
    case Family::hypercube: {
      std::uint64_t cur = u.code;
      for (int d = 0; d < dim_; ++d) {
        const std::uint64_t bit = std::uint64_t(1) << d;
        if ((cur ^ v.code) & bit) {
          cur ^= bit;
          path.push_back(VertexId{cur});
        }
      }
      return path;
    }
    case Family::mesh: {
      std::uint64_t cur = u.code, ru = u.code, rv = v.code, mult = 1;
      for (int a = 0; a < dim_; ++a) {
        std::uint64_t cu = ru % side_;
        const std::uint64_t cv = rv % side_;
        ru /= side_;
        rv /= side_;
        while (cu != cv) {
          if (cu < cv) {
            cur += mult;
            ++cu;
          } else {
            cur -= mult;
            --cu;
          }
          path.push_back(VertexId{cur});
        }
        mult *= side_;
      }
      return path;
    }
    default:
      throw FamilyError("shortest_path_waypoints is only defined for the hypercube and mesh");
  }
}

// ---------------------------------------------------------------------------
// Labels

std::string Topology::vertex_label(VertexId v) const {
  check_vertex(v);
  switch (family_) {
    case Family::hypercube: {
      std::string s(dim_, '0');
      for (int d = 0; d < dim_; ++d) {
        if ((v.code >> d) & 1) s[dim_ - 1 - d] = '1';
      }
      return s;
    }
    case Family::mesh: {
      const auto coords = mesh_coords(v);
      std::string s = "(";
      for (int a = 0; a < dim_; ++a) {
        if (a) s += ',';
        s += std::to_string(coords[a]);
      }
      return s + ")";
    }
    case Family::doubletree: {
      const DoubleTreeVertex f = doubletree_fields(v);
      return std::string(f.side == TreeSide::first ? "first" : "second") + ":" +
             std::to_string(f.level) + ":" + std::to_string(f.index);
    }
    case Family::complete:
      return std::to_string(v.code);
  }
  return "?";
}

std::string Topology::edge_label(EdgeId e) const {
  const auto [a, b] = endpoints(e);
  return "(" + vertex_label(a) + "-" + vertex_label(b) + ")";
}

}  // namespace percoroute
