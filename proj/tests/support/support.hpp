#pragma once

// Shared test helpers: naive oracles that only read graphs and tables,
// random instances, and an isomorphism-free generator of small connected
// graphs.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hats/graph.hpp"
#include "hats/strategy.hpp"

namespace hats::test {

inline Graph cycle_graph(std::size_t n, const std::string& prefix = "c") {
  std::vector<std::pair<std::string, std::string>> edges;
  auto id = [&](std::size_t i) { return prefix + (i < 10 ? "0" : "") + std::to_string(i); };
  for (std::size_t i = 0; i < n; ++i) edges.emplace_back(id(i), id((i + 1) % n));
  return Graph::from_edges({}, edges);
}

inline Graph path_graph(std::size_t n, const std::string& prefix = "p") {
  std::vector<std::pair<std::string, std::string>> edges;
  auto id = [&](std::size_t i) { return prefix + (i < 10 ? "0" : "") + std::to_string(i); };
  for (std::size_t i = 0; i + 1 < n; ++i) edges.emplace_back(id(i), id(i + 1));
  if (n == 1) return Graph::from_edges({id(0)}, {});
  return Graph::from_edges({}, edges);
}

inline std::vector<std::string> names(const std::string& first, const std::string& prefix, std::size_t count,
                                      const std::string& last = "") {
  std::vector<std::string> out{first};
  for (std::size_t i = 1; i <= count; ++i) out.push_back(prefix + std::to_string(i));
  if (!last.empty()) out.push_back(last);
  return out;
}

/// Counts admissible disproving placements by walking every placement and
/// reading each table cell directly.
inline std::uint64_t naive_count(const Strategy& s, const Hint& h = Hint::none()) {
  const Graph& g = s.graph();
  const std::size_t n = g.vertex_count();
  std::vector<Color> c(n, 0);
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= 3;
  std::uint64_t count = 0;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t rest = idx;
    for (std::size_t i = n; i-- > 0;) {
      c[i] = static_cast<Color>(rest % 3);
      rest /= 3;
    }
    bool ok = true;
    switch (h.kind()) {
      case Hint::Kind::Minus: ok = c[h.first()] != h.color(); break;
      case Hint::Kind::Equal: ok = c[h.first()] == c[h.second()]; break;
      case Hint::Kind::NotEqual: ok = c[h.first()] != c[h.second()]; break;
      default: break;
    }
    if (!ok) continue;
    bool someone_right = false;
    for (Vertex v = 0; v < n && !someone_right; ++v) {
      std::size_t cell = 0;
      for (Vertex w : g.neighbors(v)) cell = cell * 3 + c[w];
      someone_right = s.table(v)[cell].contains(c[v]);
    }
    if (!someone_right) ++count;
  }
  return count;
}

inline Graph random_graph(std::mt19937_64& rng, std::size_t n, double p) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("v" + std::to_string(i));
  std::vector<std::pair<std::string, std::string>> edges;
  std::bernoulli_distribution coin(p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (coin(rng)) edges.emplace_back(ids[i], ids[j]);
    }
  }
  return Graph::from_edges(ids, edges);
}

inline Strategy random_strategy(std::mt19937_64& rng, const Graph& g) {
  std::uniform_int_distribution<int> color(0, 2);
  return Strategy::tabulate(g, [&](Vertex, std::span<const Color>) {
    return GuessSet::of(static_cast<Color>(color(rng)));
  });
}

/// Graph on n <= 11 vertices stored as an upper-triangle bit mask. The
/// canonical form is the minimum mask over all vertex permutations.
class SmallGraph {
 public:
  SmallGraph(std::size_t n, std::uint64_t mask) : n_(n), mask_(mask) {}
  std::size_t n() const { return n_; }
  std::uint64_t mask() const { return mask_; }
  static std::size_t bit(std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    return j * (j - 1) / 2 + i;
  }
  bool edge(std::size_t i, std::size_t j) const { return (mask_ >> bit(i, j)) & 1U; }
  std::size_t edges() const { return static_cast<std::size_t>(__builtin_popcountll(mask_)); }

  std::uint64_t canonical() const {
    std::vector<std::size_t> perm(n_);
    std::iota(perm.begin(), perm.end(), 0);
    std::uint64_t best = UINT64_MAX;
    do {
      std::uint64_t m = 0;
      for (std::size_t j = 1; j < n_; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
          if (edge(i, j)) m |= std::uint64_t{1} << bit(perm[i], perm[j]);
        }
      }
      best = std::min(best, m);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  }

  Graph to_graph() const {
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n_; ++i) ids.push_back(std::string(1, static_cast<char>('a' + i)));
    std::vector<std::pair<std::string, std::string>> e;
    for (std::size_t j = 1; j < n_; ++j) {
      for (std::size_t i = 0; i < j; ++i) {
        if (edge(i, j)) e.emplace_back(ids[i], ids[j]);
      }
    }
    return Graph::from_edges(ids, e);
  }

 private:
  std::size_t n_;
  std::uint64_t mask_;
};

/// Connected graphs on exactly n vertices with at most `max_edges` edges, one
/// per isomorphism class. Grows (n-1)-vertex representatives by a vertex
/// joined to a nonempty neighbor set: deleting a non-cut vertex of any
/// connected graph lands in the smaller family.
inline std::vector<SmallGraph> connected_graphs(std::size_t n, std::size_t max_edges = 64) {
  if (n == 1) return {SmallGraph(1, 0)};
  std::set<std::uint64_t> seen;
  std::vector<SmallGraph> out;
  for (const SmallGraph& base : connected_graphs(n - 1, max_edges)) {
    for (std::uint64_t sub = 1; sub < (std::uint64_t{1} << (n - 1)); ++sub) {
      std::uint64_t mask = base.mask();
      for (std::size_t i = 0; i + 1 < n; ++i) {
        if ((sub >> i) & 1U) mask |= std::uint64_t{1} << SmallGraph::bit(i, n - 1);
      }
      SmallGraph g(n, mask);
      if (g.edges() > max_edges) continue;
      std::uint64_t canon = g.canonical();
      if (seen.insert(canon).second) out.emplace_back(n, canon);
    }
  }
  std::sort(out.begin(), out.end(), [](const SmallGraph& a, const SmallGraph& b) { return a.mask() < b.mask(); });
  return out;
}

/// Unicyclic connected graphs on n vertices.
inline std::vector<SmallGraph> unicyclic_graphs(std::size_t n) {
  std::vector<SmallGraph> out;
  for (const SmallGraph& g : connected_graphs(n, n)) {
    if (g.edges() == n) out.push_back(g);
  }
  return out;
}

inline std::string vertex_name(std::size_t i) { return std::string(1, static_cast<char>('a' + i)); }

/// Every hint on `g`: Minus for each vertex and color, Equal and NotEqual for
/// each vertex pair, TwoGuesses for each vertex.
inline std::vector<Hint> all_hints(const Graph& g) {
  std::vector<Hint> out;
  const auto n = static_cast<Vertex>(g.vertex_count());
  for (Vertex v = 0; v < n; ++v) {
    for (Color c = 0; c < kColors; ++c) out.push_back(Hint::minus(v, c));
  }
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      out.push_back(Hint::equal(u, v));
      out.push_back(Hint::not_equal(u, v));
    }
  }
  for (Vertex v = 0; v < n; ++v) out.push_back(Hint::two_guesses(v));
  return out;
}

}  // namespace hats::test
