#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace hats {

/// Index of a vertex inside one Graph. Indices follow the lexicographic
/// order of the vertex ids, so ascending index order is canonical order.
using Vertex = std::uint32_t;

struct Edge {
  Vertex u;
  Vertex v;  // u < v

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected simple graph of sages. Immutable once built.
class Graph {
 public:
  Graph() = default;

  /// Throws hats::Error on invalid ids, unknown endpoints, self-loops or
  /// duplicate edges. Vertices mentioned only by edges are added implicitly.
  static Graph from_edges(
      std::vector<std::string> vertices,
      const std::vector<std::pair<std::string, std::string>>& edges);

  std::size_t vertex_count() const noexcept { return names_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }
  bool empty() const noexcept { return names_.empty(); }

  const std::string& name(Vertex v) const { return names_.at(v); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::optional<Vertex> find(std::string_view id) const;
  /// Like find() but throws hats::Error for an unknown id.
  Vertex at(std::string_view id) const;

  /// Neighbors in canonical (ascending) order.
  std::span<const Vertex> neighbors(Vertex v) const { return adjacency_.at(v); }
  std::size_t degree(Vertex v) const { return adjacency_.at(v).size(); }
  bool adjacent(Vertex u, Vertex v) const;
  std::vector<Edge> edges() const;

  /// Graph on `vertices` (this graph's indices) keeping the listed edges
  /// only. Endpoints of the edges are included automatically.
  Graph subgraph(std::span<const Edge> edges,
                 std::span<const Vertex> vertices = {}) const;
  /// Subgraph induced by `vertices`.
  Graph induced(std::span<const Vertex> vertices) const;
  /// Copy of this graph with the extra edges (and their endpoints) added.
  Graph with_edges(
      const std::vector<std::pair<std::string, std::string>>& extra) const;

  friend bool operator==(const Graph&, const Graph&) = default;
  friend Graph build_three_model(const Graph& g);

 private:
  static Graph make(std::vector<std::string> vertices,
                    const std::vector<std::pair<std::string, std::string>>& edges,
                    bool check_ids);

  std::vector<std::string> names_;
  std::vector<std::vector<Vertex>> adjacency_;
  std::size_t edge_count_ = 0;
};

/// True if `id` is a legal vertex id: nonempty, no whitespace, no ':'.
bool valid_vertex_id(std::string_view id);

/// Parses the line-oriented graph format (`vertex <id>`, `edge <a> <b>`,
/// `#` comments). Errors carry the offending line number.
Graph parse_graph(std::string_view text);
/// Inverse of parse_graph; isolated vertices are written as `vertex` lines.
std::string format_graph(const Graph& g);

std::vector<std::string> canonical_neighbors(const Graph& g, std::string_view v);

/// Connected components, each sorted ascending, ordered by smallest vertex.
std::vector<std::vector<Vertex>> connected_components(const Graph& g);
bool is_connected(const Graph& g);

/// Iteratively strips vertices of degree <= 1.
Graph prune_to_two_core(const Graph& g);

/// 3*G: vertices "name:color", (u,i)-(v,j) adjacent iff uv is an edge.
Graph build_three_model(const Graph& g);

/// Shortest path (BFS, ties to smallest index) from any vertex of `from`
/// to any vertex of `to`; empty if unreachable. Includes both endpoints.
std::vector<Vertex> shortest_path(const Graph& g, std::span<const Vertex> from,
                                  std::span<const Vertex> to);

/// A simple cycle as a vertex sequence, no vertex repeated.
using Cycle = std::vector<Vertex>;

/// All simple cycles of length >= 3 through vertices allowed by `mask`
/// (empty mask: all vertices). Each cycle starts at its smallest vertex and
/// is oriented so that its second vertex is smaller than its last.
/// Throws BoundError past `limit` cycles.
std::vector<Cycle> simple_cycles(const Graph& g, std::span<const bool> mask = {},
                                 std::size_t limit = 500000);

enum class StructureKind { Tree, Unicyclic, Multicyclic };

/// Two vertex-disjoint cycles and a shortest path between them. The path
/// starts on `first` and ends on `second`; its first two vertices are the
/// adjacent pivots A and B.
struct DisjointCyclesWitness {
  Cycle first;
  Cycle second;
  std::vector<Vertex> path;
};

/// Two cycles sharing exactly the vertex `shared`; both start at it.
struct SharedVertexWitness {
  Vertex shared = 0;
  Cycle first;
  Cycle second;
};

/// Vertices a, b joined by three internally disjoint paths. Each path runs
/// from a to b inclusive; paths are ordered by length, then lexicographically.
struct ThetaWitness {
  Vertex a = 0;
  Vertex b = 0;
  std::array<std::vector<Vertex>, 3> paths;
};

using Witness =
    std::variant<DisjointCyclesWitness, SharedVertexWitness, ThetaWitness>;

struct StructureReport {
  StructureKind kind = StructureKind::Tree;
  Cycle cycle;                     // Unicyclic only
  std::optional<Witness> witness;  // Multicyclic only
};

/// Classifies a connected nonempty graph. Throws hats::Error if the graph is
/// disconnected or empty.
StructureReport structural_class(const Graph& g);

bool is_cycle_of(const Graph& g, std::span<const Vertex> cycle);
/// Checks a witness against `g` by direct inspection.
bool validate_witness(const Graph& g, const Witness& w);

std::string describe(const Graph& g, const StructureReport& report);

}  // namespace hats
