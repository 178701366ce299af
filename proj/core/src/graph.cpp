#include "hats/graph.hpp"

#include <algorithm>
#include <memory>
#include <cctype>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "hats/error.hpp"

namespace hats {

namespace {

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

bool valid_vertex_id(std::string_view id) {
  if (id.empty()) return false;
  for (char c : id) {
    if (c == ':' || std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

Graph Graph::from_edges(
    std::vector<std::string> vertices,
    const std::vector<std::pair<std::string, std::string>>& edges) {
  return make(std::move(vertices), edges, true);
}

Graph Graph::make(std::vector<std::string> vertices,
                  const std::vector<std::pair<std::string, std::string>>& edges,
                  bool check_ids) {
  for (const auto& [a, b] : edges) {
    vertices.push_back(a);
    vertices.push_back(b);
  }
  if (check_ids) {
    for (const auto& v : vertices) {
      if (!valid_vertex_id(v)) throw Error("invalid vertex id '" + v + "'");
    }
  }
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());

  Graph g;
  g.names_ = std::move(vertices);
  g.adjacency_.resize(g.names_.size());
  std::set<Edge> seen;
  for (const auto& [a, b] : edges) {
    if (a == b) throw Error("self-loop at '" + a + "'");
    Vertex u = g.at(a);
    Vertex v = g.at(b);
    Edge e{std::min(u, v), std::max(u, v)};
    if (!seen.insert(e).second) {
      throw Error("duplicate edge '" + a + "' '" + b + "'");
    }
    g.adjacency_[u].push_back(v);
    g.adjacency_[v].push_back(u);
  }
  for (auto& nbrs : g.adjacency_) std::sort(nbrs.begin(), nbrs.end());
  g.edge_count_ = seen.size();
  return g;
}

std::optional<Vertex> Graph::find(std::string_view id) const {
  auto it = std::lower_bound(names_.begin(), names_.end(), id,
                             [](const std::string& a, std::string_view b) { return a < b; });
  if (it == names_.end() || *it != id) return std::nullopt;
  return static_cast<Vertex>(it - names_.begin());
}

Vertex Graph::at(std::string_view id) const {
  auto v = find(id);
  if (!v) throw Error("unknown vertex '" + std::string(id) + "'");
  return *v;
}

bool Graph::adjacent(Vertex u, Vertex v) const {
  const auto& nbrs = adjacency_.at(u);
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (Vertex u = 0; u < adjacency_.size(); ++u) {
    for (Vertex v : adjacency_[u]) {
      if (u < v) out.push_back({u, v});
    }
  }
  return out;
}

Graph Graph::subgraph(std::span<const Edge> edges, std::span<const Vertex> vertices) const {
  std::vector<std::string> names;
  for (Vertex v : vertices) names.push_back(name(v));
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& e : edges) {
    if (!adjacent(e.u, e.v)) throw Error("subgraph edge not in graph");
    pairs.emplace_back(name(e.u), name(e.v));
  }
  return from_edges(std::move(names), pairs);
}

Graph Graph::induced(std::span<const Vertex> vertices) const {
  std::vector<bool> keep(vertex_count(), false);
  for (Vertex v : vertices) keep.at(v) = true;
  std::vector<Edge> kept;
  for (const auto& e : edges()) {
    if (keep[e.u] && keep[e.v]) kept.push_back(e);
  }
  return subgraph(kept, vertices);
}

Graph Graph::with_edges(const std::vector<std::pair<std::string, std::string>>& extra) const {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& e : edges()) pairs.emplace_back(name(e.u), name(e.v));
  pairs.insert(pairs.end(), extra.begin(), extra.end());
  return from_edges(names_, pairs);
}

Graph parse_graph(std::string_view text) {
  std::vector<std::string> vertices;
  std::set<std::string> declared;
  std::vector<std::pair<std::string, std::string>> edges;
  std::set<std::pair<std::string, std::string>> seen_edges;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tokens = split_tokens(line);
    if (tokens.empty()) {
      if (end == text.size()) break;
      continue;
    }
    for (auto t : tokens.size() > 1 ? std::span(tokens).subspan(1) : std::span<std::string_view>{}) {
      if (!valid_vertex_id(t)) {
        throw ParseError(line_no, "invalid vertex id '" + std::string(t) + "'");
      }
    }
    if (tokens[0] == "vertex") {
      if (tokens.size() != 2) throw ParseError(line_no, "expected 'vertex <id>'");
      std::string id(tokens[1]);
      if (!declared.insert(id).second) {
        throw ParseError(line_no, "duplicate vertex declaration '" + id + "'");
      }
      vertices.push_back(id);
    } else if (tokens[0] == "edge") {
      if (tokens.size() != 3) throw ParseError(line_no, "expected 'edge <id> <id>'");
      std::string a(tokens[1]);
      std::string b(tokens[2]);
      if (a == b) throw ParseError(line_no, "self-loop at '" + a + "'");
      auto key = std::minmax(a, b);
      if (!seen_edges.insert({key.first, key.second}).second) {
        throw ParseError(line_no, "duplicate edge '" + a + "' '" + b + "'");
      }
      edges.emplace_back(a, b);
    } else {
      throw ParseError(line_no, "unknown directive '" + std::string(tokens[0]) + "'");
    }
    if (end == text.size()) break;
  }
  return Graph::from_edges(std::move(vertices), edges);
}

std::string format_graph(const Graph& g) {
  std::ostringstream out;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (g.degree(v) == 0) out << "vertex " << g.name(v) << '\n';
  }
  for (const auto& e : g.edges()) out << "edge " << g.name(e.u) << ' ' << g.name(e.v) << '\n';
  return out.str();
}

std::vector<std::string> canonical_neighbors(const Graph& g, std::string_view v) {
  std::vector<std::string> out;
  for (Vertex u : g.neighbors(g.at(v))) out.push_back(g.name(u));
  return out;
}

std::vector<std::vector<Vertex>> connected_components(const Graph& g) {
  std::vector<std::vector<Vertex>> out;
  std::vector<bool> seen(g.vertex_count(), false);
  for (Vertex s = 0; s < g.vertex_count(); ++s) {
    if (seen[s]) continue;
    std::vector<Vertex> comp{s};
    seen[s] = true;
    for (std::size_t i = 0; i < comp.size(); ++i) {
      for (Vertex w : g.neighbors(comp[i])) {
        if (!seen[w]) {
          seen[w] = true;
          comp.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

bool is_connected(const Graph& g) { return connected_components(g).size() <= 1; }

Graph prune_to_two_core(const Graph& g) {
  std::vector<std::size_t> degree(g.vertex_count());
  std::vector<bool> removed(g.vertex_count(), false);
  std::deque<Vertex> queue;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    degree[v] = g.degree(v);
    if (degree[v] <= 1) queue.push_back(v);
  }
  while (!queue.empty()) {
    Vertex v = queue.front();
    queue.pop_front();
    if (removed[v]) continue;
    removed[v] = true;
    for (Vertex w : g.neighbors(v)) {
      if (!removed[w] && --degree[w] == 1) queue.push_back(w);
    }
  }
  std::vector<Vertex> keep;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (!removed[v]) keep.push_back(v);
  }
  return g.induced(keep);
}

Graph build_three_model(const Graph& g) {
  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::string>> edges;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    for (int c = 0; c < 3; ++c) names.push_back(g.name(v) + ":" + std::to_string(c));
  }
  for (const auto& e : g.edges()) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        edges.emplace_back(g.name(e.u) + ":" + std::to_string(i),
                           g.name(e.v) + ":" + std::to_string(j));
      }
    }
  }
  return Graph::make(std::move(names), edges, false);
}

std::vector<Vertex> shortest_path(const Graph& g, std::span<const Vertex> from,
                                  std::span<const Vertex> to) {
  constexpr Vertex kNone = static_cast<Vertex>(-1);
  std::vector<Vertex> parent(g.vertex_count(), kNone);
  std::vector<bool> seen(g.vertex_count(), false);
  std::vector<bool> target(g.vertex_count(), false);
  for (Vertex t : to) target.at(t) = true;
  std::vector<Vertex> sources(from.begin(), from.end());
  std::sort(sources.begin(), sources.end());
  std::deque<Vertex> queue;
  for (Vertex s : sources) {
    if (seen.at(s)) continue;
    seen[s] = true;
    queue.push_back(s);
  }
  while (!queue.empty()) {
    Vertex v = queue.front();
    queue.pop_front();
    if (target[v]) {
      std::vector<Vertex> path;
      for (Vertex x = v; x != kNone; x = parent[x]) path.push_back(x);
      std::reverse(path.begin(), path.end());
      return path;
    }
    for (Vertex w : g.neighbors(v)) {
      if (!seen[w]) {
        seen[w] = true;
        parent[w] = v;
        queue.push_back(w);
      }
    }
  }
  return {};
}

std::vector<Cycle> simple_cycles(const Graph& g, std::span<const bool> mask, std::size_t limit) {
  const std::size_t n = g.vertex_count();
  auto allowed = [&](Vertex v) { return mask.empty() || mask[v]; };
  std::vector<Cycle> out;
  std::vector<bool> on_path(n, false);
  std::vector<Vertex> path;
  // Explicit stack of (vertex, next neighbor position).
  std::vector<std::pair<Vertex, std::size_t>> stack;
  for (Vertex s = 0; s < n; ++s) {
    if (!allowed(s)) continue;
    path.assign(1, s);
    on_path.assign(n, false);
    on_path[s] = true;
    stack.assign(1, {s, 0});
    while (!stack.empty()) {
      auto& [v, pos] = stack.back();
      auto nbrs = g.neighbors(v);
      if (pos == nbrs.size()) {
        on_path[v] = false;
        path.pop_back();
        stack.pop_back();
        continue;
      }
      Vertex w = nbrs[pos++];
      if (w == s) {
        if (path.size() >= 3 && path[1] < path.back()) {
          out.push_back(path);
          if (out.size() > limit) throw BoundError("too many simple cycles to enumerate");
        }
        continue;
      }
      if (w < s || on_path[w] || !allowed(w)) continue;
      on_path[w] = true;
      path.push_back(w);
      stack.emplace_back(w, 0);
    }
  }
  return out;
}

namespace {

Cycle rotate_to(const Cycle& c, Vertex start) {
  auto it = std::find(c.begin(), c.end(), start);
  Cycle r(it, c.end());
  r.insert(r.end(), c.begin(), it);
  if (r.size() > 2 && r[1] > r.back()) std::reverse(r.begin() + 1, r.end());
  return r;
}

Cycle order_unique_cycle(const Graph& core) {
  // `core` is a single cycle: walk it from its smallest vertex.
  Cycle c{0};
  Vertex prev = 0;
  Vertex cur = core.neighbors(0)[0];
  while (cur != 0) {
    c.push_back(cur);
    auto nbrs = core.neighbors(cur);
    Vertex next = nbrs[0] == prev ? nbrs[1] : nbrs[0];
    prev = cur;
    cur = next;
  }
  if (c.size() > 2 && c[1] > c.back()) std::reverse(c.begin() + 1, c.end());
  return c;
}

using Bits = std::vector<std::uint64_t>;

Bits to_bits(const Cycle& c, std::size_t n) {
  Bits b((n + 63) / 64, 0);
  for (Vertex v : c) b[v / 64] |= std::uint64_t{1} << (v % 64);
  return b;
}

std::size_t common_count(const Bits& a, const Bits& b) {
  std::size_t k = 0;
  for (std::size_t i = 0; i < a.size(); ++i) k += static_cast<std::size_t>(__builtin_popcountll(a[i] & b[i]));
  return k;
}

bool cycle_has_edge(const Cycle& c, Vertex a, Vertex b) {
  for (std::size_t i = 0; i < c.size(); ++i) {
    Vertex x = c[i];
    Vertex y = c[(i + 1) % c.size()];
    if ((x == a && y == b) || (x == b && y == a)) return true;
  }
  return false;
}

// Arcs of `other` relative to `base`: maximal segments of `other` whose
// inner vertices avoid `base`, excluding segments that are edges of `base`.
std::vector<std::vector<Vertex>> arcs(const Cycle& other, const Cycle& base, const Bits& base_bits) {
  auto in_base = [&](Vertex v) { return (base_bits[v / 64] >> (v % 64)) & 1U; };
  std::vector<std::size_t> hits;
  for (std::size_t i = 0; i < other.size(); ++i) {
    if (in_base(other[i])) hits.push_back(i);
  }
  std::vector<std::vector<Vertex>> out;
  for (std::size_t h = 0; h < hits.size(); ++h) {
    std::size_t i = hits[h];
    std::size_t j = hits[(h + 1) % hits.size()];
    std::vector<Vertex> seg{other[i]};
    for (std::size_t k = (i + 1) % other.size(); k != j; k = (k + 1) % other.size()) seg.push_back(other[k]);
    seg.push_back(other[j]);
    if (seg.size() == 2 && cycle_has_edge(base, seg[0], seg[1])) continue;
    if (seg.front() > seg.back()) std::reverse(seg.begin(), seg.end());
    out.push_back(std::move(seg));
  }
  return out;
}

ThetaWitness theta_from(const Cycle& c1, const Cycle& c2, std::size_t n) {
  Bits b1 = to_bits(c1, n);
  Bits b2 = to_bits(c2, n);
  struct Candidate {
    std::vector<Vertex> arc;
    const Cycle* base;
  };
  std::vector<Candidate> cands;
  for (auto& a : arcs(c2, c1, b1)) cands.push_back({std::move(a), &c1});
  for (auto& a : arcs(c1, c2, b2)) cands.push_back({std::move(a), &c2});
  if (cands.empty()) throw InternalError("no arc between intersecting cycles");
  auto best = std::min_element(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) {
    return std::forward_as_tuple(x.arc.size(), x.arc) < std::forward_as_tuple(y.arc.size(), y.arc);
  });
  const Cycle& base = *best->base;
  ThetaWitness w;
  w.a = best->arc.front();
  w.b = best->arc.back();
  // Split the base cycle into its two a-b paths.
  Cycle r = rotate_to(base, w.a);
  auto pos_b = static_cast<std::size_t>(std::find(r.begin(), r.end(), w.b) - r.begin());
  std::vector<Vertex> p1(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(pos_b) + 1);
  std::vector<Vertex> p2{w.a};
  for (std::size_t k = r.size() - 1; k >= pos_b; --k) p2.push_back(r[k]);
  std::array<std::vector<Vertex>, 3> paths{best->arc, p1, p2};
  std::sort(paths.begin(), paths.end(), [](const auto& x, const auto& y) {
    return std::forward_as_tuple(x.size(), x) < std::forward_as_tuple(y.size(), y);
  });
  w.paths = std::move(paths);
  return w;
}

}  // namespace

StructureReport structural_class(const Graph& g) {
  if (g.empty()) throw Error("structural_class: empty graph");
  if (!is_connected(g)) throw Error("structural_class: graph is disconnected");
  StructureReport report;
  const std::size_t n = g.vertex_count();
  const std::size_t m = g.edge_count();
  if (m + 1 == n) {
    report.kind = StructureKind::Tree;
    return report;
  }
  Graph core = prune_to_two_core(g);
  if (m == n) {
    report.kind = StructureKind::Unicyclic;
    for (Vertex v : order_unique_cycle(core)) report.cycle.push_back(g.at(core.name(v)));
    report.cycle = rotate_to(report.cycle, *std::min_element(report.cycle.begin(), report.cycle.end()));
    return report;
  }
  report.kind = StructureKind::Multicyclic;

  auto mask = std::make_unique<bool[]>(n);
  for (const auto& id : core.names()) mask[g.at(id)] = true;
  std::vector<Cycle> cycles = simple_cycles(g, std::span<const bool>(mask.get(), n));
  auto key = [](const Cycle& c) {
    Cycle s = c;
    std::sort(s.begin(), s.end());
    return std::make_tuple(c.size(), s, c);
  };
  std::sort(cycles.begin(), cycles.end(), [&](const Cycle& a, const Cycle& b) { return key(a) < key(b); });
  std::vector<Bits> bits;
  bits.reserve(cycles.size());
  for (const auto& c : cycles) bits.push_back(to_bits(c, n));

  // First pair (by total length, then index order) satisfying `pred`.
  auto best_pair = [&](auto pred) -> std::optional<std::pair<std::size_t, std::size_t>> {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    std::size_t best_total = static_cast<std::size_t>(-1);
    for (std::size_t i = 0; i < cycles.size(); ++i) {
      if (2 * cycles[i].size() > best_total) break;
      for (std::size_t j = i + 1; j < cycles.size(); ++j) {
        std::size_t total = cycles[i].size() + cycles[j].size();
        if (total >= best_total && best) break;
        if (pred(common_count(bits[i], bits[j]))) {
          best = {i, j};
          best_total = total;
          break;
        }
      }
    }
    return best;
  };

  if (auto p = best_pair([](std::size_t k) { return k == 0; })) {
    DisjointCyclesWitness w;
    w.first = cycles[p->first];
    w.second = cycles[p->second];
    w.path = shortest_path(g, w.first, w.second);
    w.first = rotate_to(w.first, w.path.front());
    w.second = rotate_to(w.second, w.path.back());
    report.witness = std::move(w);
    return report;
  }
  if (auto p = best_pair([](std::size_t k) { return k == 1; })) {
    SharedVertexWitness w;
    const Cycle& a = cycles[p->first];
    const Cycle& b = cycles[p->second];
    for (Vertex v : a) {
      if (std::find(b.begin(), b.end(), v) != b.end()) w.shared = v;
    }
    w.first = rotate_to(a, w.shared);
    w.second = rotate_to(b, w.shared);
    report.witness = std::move(w);
    return report;
  }
  if (auto p = best_pair([](std::size_t k) { return k >= 2; })) {
    report.witness = theta_from(cycles[p->first], cycles[p->second], n);
    return report;
  }
  throw InternalError("multicyclic graph without a witness");
}

bool is_cycle_of(const Graph& g, std::span<const Vertex> cycle) {
  if (cycle.size() < 3) return false;
  std::set<Vertex> distinct(cycle.begin(), cycle.end());
  if (distinct.size() != cycle.size()) return false;
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    if (cycle[i] >= g.vertex_count() || cycle[(i + 1) % cycle.size()] >= g.vertex_count()) return false;
    if (!g.adjacent(cycle[i], cycle[(i + 1) % cycle.size()])) return false;
  }
  return true;
}

namespace {

bool is_path_of(const Graph& g, std::span<const Vertex> path) {
  if (path.empty()) return false;
  std::set<Vertex> distinct(path.begin(), path.end());
  if (distinct.size() != path.size()) return false;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (!g.adjacent(path[i], path[i + 1])) return false;
  }
  return true;
}

}  // namespace

bool validate_witness(const Graph& g, const Witness& w) {
  if (const auto* d = std::get_if<DisjointCyclesWitness>(&w)) {
    if (!is_cycle_of(g, d->first) || !is_cycle_of(g, d->second)) return false;
    std::set<Vertex> a(d->first.begin(), d->first.end());
    for (Vertex v : d->second) {
      if (a.count(v)) return false;
    }
    if (d->path.size() < 2 || !is_path_of(g, d->path)) return false;
    if (!a.count(d->path.front())) return false;
    if (std::find(d->second.begin(), d->second.end(), d->path.back()) == d->second.end()) return false;
    for (std::size_t i = 1; i + 1 < d->path.size(); ++i) {
      Vertex v = d->path[i];
      if (a.count(v) || std::find(d->second.begin(), d->second.end(), v) != d->second.end()) return false;
    }
    return true;
  }
  if (const auto* s = std::get_if<SharedVertexWitness>(&w)) {
    if (!is_cycle_of(g, s->first) || !is_cycle_of(g, s->second)) return false;
    if (s->first.front() != s->shared || s->second.front() != s->shared) return false;
    std::set<Vertex> a(s->first.begin(), s->first.end());
    std::size_t common = 0;
    for (Vertex v : s->second) common += a.count(v);
    return common == 1;
  }
  const auto& t = std::get<ThetaWitness>(w);
  if (t.a == t.b) return false;
  std::set<Vertex> inner;
  std::size_t bare_edges = 0;
  for (const auto& p : t.paths) {
    if (p.size() < 2 || p.front() != t.a || p.back() != t.b || !is_path_of(g, p)) return false;
    if (p.size() == 2) ++bare_edges;
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
      if (!inner.insert(p[i]).second) return false;
    }
  }
  return bare_edges <= 1;
}

std::string describe(const Graph& g, const StructureReport& report) {
  auto list = [&](std::span<const Vertex> vs) {
    std::string s;
    for (Vertex v : vs) {
      if (!s.empty()) s += ' ';
      s += g.name(v);
    }
    return s;
  };
  switch (report.kind) {
    case StructureKind::Tree:
      return "tree";
    case StructureKind::Unicyclic:
      return "unicyclic C" + std::to_string(report.cycle.size()) + " [" + list(report.cycle) + "]";
    case StructureKind::Multicyclic:
      break;
  }
  if (!report.witness) return "multicyclic";
  if (const auto* d = std::get_if<DisjointCyclesWitness>(&*report.witness)) {
    return "disjoint cycles [" + list(d->first) + "] [" + list(d->second) + "] path [" + list(d->path) + "]";
  }
  if (const auto* s = std::get_if<SharedVertexWitness>(&*report.witness)) {
    return "cycles sharing " + g.name(s->shared) + " [" + list(s->first) + "] [" + list(s->second) + "]";
  }
  const auto& t = std::get<ThetaWitness>(*report.witness);
  return "theta " + g.name(t.a) + "-" + g.name(t.b) + " [" + list(t.paths[0]) + "] [" + list(t.paths[1]) + "] [" +
         list(t.paths[2]) + "]";
}

}  // namespace hats
