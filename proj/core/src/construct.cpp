#include "hats/construct.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <type_traits>
#include <variant>

#include "hats/error.hpp"
#include "hats/fixtures.hpp"
#include "hats/nine_vertex.hpp"

namespace hats {

namespace fx = fixtures;

namespace {

using See = std::function<Color(std::string_view)>;
using Rule = std::function<GuessSet(const See&)>;
using Edges = std::vector<std::pair<std::string, std::string>>;

std::vector<GuessSet> flat(const fx::Table1& t) {
  std::vector<GuessSet> out;
  for (Color c : t) out.push_back(GuessSet::of(c));
  return out;
}

std::vector<GuessSet> flat(const fx::Table2& t) {
  std::vector<GuessSet> out;
  for (const auto& row : t) {
    for (Color c : row) out.push_back(GuessSet::of(c));
  }
  return out;
}

std::vector<GuessSet> flat(const fx::Table3& t) {
  std::vector<GuessSet> out;
  for (const auto& m : t) {
    auto part = flat(m);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::vector<GuessSet> flat(const fx::Table4& t) {
  std::vector<GuessSet> out;
  for (const auto& m : t) {
    for (const auto& n : m) {
      auto part = flat(n);
      out.insert(out.end(), part.begin(), part.end());
    }
  }
  return out;
}

// Strategy assembled from canonical tables and rules; sages with neither
// guess 0.
class Assembly {
 public:
  explicit Assembly(Graph g) : g_(std::move(g)) {}

  const Graph& graph() const { return g_; }

  // Table written over `axes` (neighbor ids in the order the table reads them).
  void place(const std::string& v, const std::vector<std::string>& axes, const std::vector<GuessSet>& table) {
    auto canonical = canonical_neighbors(g_, v);
    if (axes.size() != canonical.size()) throw InternalError("axes of '" + v + "' do not match its neighbors");
    tables_[v] = reorder_axes(table, axes, canonical);
  }

  void rule(const std::string& v, Rule r) { rules_[v] = std::move(r); }

  // Every sage of `s` keeps its guesses unless overridden later.
  void adopt(const Strategy& s) {
    for (const auto& id : s.graph().names()) {
      rules_[id] = [&s, id](const See& see) { return s.guess_by_name(id, see); };
    }
  }

  Strategy build() const {
    return Strategy::tabulate(g_, [&](Vertex v, std::span<const Color> seen) {
      const std::string& id = g_.name(v);
      if (auto it = tables_.find(id); it != tables_.end()) {
        std::size_t idx = 0;
        for (Color c : seen) idx = idx * 3 + c;
        return it->second[idx];
      }
      auto it = rules_.find(id);
      if (it == rules_.end()) return GuessSet::of(0);
      auto nbrs = g_.neighbors(v);
      See see = [&](std::string_view other) {
        Vertex u = g_.at(other);
        auto pos = std::lower_bound(nbrs.begin(), nbrs.end(), u);
        if (pos == nbrs.end() || *pos != u) {
          throw InternalError("sage '" + id + "' cannot see '" + std::string(other) + "'");
        }
        return seen[static_cast<std::size_t>(pos - nbrs.begin())];
      };
      return it->second(see);
    });
  }

 private:
  Graph g_;
  std::map<std::string, std::vector<GuessSet>> tables_;
  std::map<std::string, Rule> rules_;
};

Edges cycle_edges(const std::vector<std::string>& c) {
  Edges e;
  for (std::size_t i = 0; i < c.size(); ++i) e.emplace_back(c[i], c[(i + 1) % c.size()]);
  return e;
}

Edges path_edges(const std::vector<std::string>& p) {
  Edges e;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) e.emplace_back(p[i], p[i + 1]);
  return e;
}

Edges edges_of(const Graph& g) {
  Edges e;
  for (const auto& edge : g.edges()) e.emplace_back(g.name(edge.u), g.name(edge.v));
  return e;
}

Graph union_graph(std::initializer_list<const Graph*> parts, const Edges& extra = {}) {
  std::set<std::pair<std::string, std::string>> seen;
  std::vector<std::string> names;
  Edges edges;
  for (const Graph* g : parts) {
    names.insert(names.end(), g->names().begin(), g->names().end());
    for (auto e : edges_of(*g)) {
      if (e.first > e.second) std::swap(e.first, e.second);
      if (seen.insert(e).second) edges.push_back(e);
    }
  }
  for (auto e : extra) {
    if (e.first > e.second) std::swap(e.first, e.second);
    if (seen.insert(e).second) edges.push_back(e);
  }
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  return Graph::from_edges(names, edges);
}

std::vector<std::string> names_of(const Graph& g, std::span<const Vertex> vs) {
  std::vector<std::string> out;
  for (Vertex v : vs) out.push_back(g.name(v));
  return out;
}

HintedStrategy verified(Strategy s, Hint h, const std::string& what) {
  require_winning(s, h, what);
  return {std::move(s), h};
}

}  // namespace

std::uint64_t count_disproving(const Strategy& s, const Hint& h) {
  if (s.graph().vertex_count() <= 13) return enumerate_disproving(s, h, {13, 0, 0}).count;
  return count_by_elimination(s, h);
}

void require_winning(const Strategy& s, const Hint& h, const std::string& what) {
  std::uint64_t n = count_disproving(s, h);
  if (n != 0) {
    throw InternalError(what + ": strategy has " + std::to_string(n) + " disproving placements");
  }
}

Strategy cycle_pivot_strategy(const std::vector<std::string>& cycle) {
  const std::size_t n = cycle.size();
  if (n < 3) throw Error("cycle needs at least 3 sages");
  Assembly a(Graph::from_edges(cycle, cycle_edges(cycle)));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& prev = cycle[(i + n - 1) % n];
    const auto& next = cycle[(i + 1) % n];
    a.place(cycle[i], {prev, next}, flat(i == 0 ? fx::kCycleA : fx::kCycleS));
  }
  return a.build();
}

HintedStrategy cycle_hint_strategy(const std::vector<std::string>& cycle, Color forbidden) {
  if (forbidden >= kColors) throw Error("hint color must be 0, 1 or 2");
  Strategy s = cycle_pivot_strategy(cycle);
  if (forbidden != 2) s = permute_colors(s, swap_colors(2, forbidden));
  Hint h = Hint::minus(s.graph().at(cycle.front()), forbidden);
  return verified(std::move(s), h, "cycle with hint");
}

HintedStrategy path_neq_strategy(const std::vector<std::string>& path) {
  const std::size_t n = path.size();
  if (n < 2) throw Error("path needs at least 2 sages");
  Assembly a(Graph::from_edges(path, path_edges(path)));
  a.place(path.front(), {path[1]}, flat(fx::kPathEnd));
  a.place(path.back(), {path[n - 2]}, flat(fx::kPathEnd));
  for (std::size_t i = 1; i + 1 < n; ++i) a.place(path[i], {path[i - 1], path[i + 1]}, flat(fx::kPathInner));
  Strategy s = a.build();
  Hint h = Hint::not_equal(s.graph().at(path.front()), s.graph().at(path.back()));
  return verified(std::move(s), h, "path with A != B");
}

HintedStrategy path_eq_strategy(const std::vector<std::string>& path) {
  const std::size_t n = path.size();
  if (n < 2) throw Error("path needs at least 2 sages");
  Assembly a(Graph::from_edges(path, path_edges(path)));
  const auto& b = path.back();
  const auto& d = path[n - 2];
  std::optional<HintedStrategy> rest;
  if (n == 2) {
    a.place(path.front(), {b}, flat(fx::Table1{0, 0, 0}));
  } else {
    rest = path_neq_strategy(std::vector<std::string>(path.begin(), path.end() - 1));
    a.adopt(rest->strategy);
  }
  a.place(b, {d}, flat(fx::kSayWhatISee));
  Strategy s = a.build();
  Hint h = Hint::equal(s.graph().at(path.front()), s.graph().at(b));
  return verified(std::move(s), h, "path with A = B");
}

HintedStrategy push_hint(const HintedStrategy& inner, const std::string& leaf) {
  if (inner.hint.kind() != Hint::Kind::Minus) throw Error("hint pushing needs a Minus hint");
  const Graph& g0 = inner.strategy.graph();
  if (g0.find(leaf)) throw Error("leaf '" + leaf + "' already belongs to the graph");
  require_winning(inner.strategy, inner.hint, "hint push input");
  const Color i = inner.hint.color();
  const std::string pivot = g0.name(inner.hint.first());
  const Strategy base = i == 2 ? inner.strategy : permute_colors(inner.strategy, swap_colors(2, i));

  Assembly a(g0.with_edges({{pivot, leaf}}));
  a.adopt(base);
  a.place(leaf, {pivot}, flat(fx::kPushLeaf));
  a.rule(pivot, [&base, pivot, leaf](const See& see) {
    switch (see(leaf)) {
      case 0:
        return GuessSet::of(2);
      case 1:
        return base.guess_by_name(pivot, see);
      default:
        return GuessSet::of(0);
    }
  });
  Strategy s = a.build();
  if (i != 2) s = permute_colors(s, swap_colors(2, i));
  Hint h = Hint::minus(s.graph().at(leaf), i);
  return verified(std::move(s), h, "hint push");
}

HintedStrategy push_hint_along(const HintedStrategy& inner, const std::vector<std::string>& tail) {
  if (tail.empty() || inner.hint.kind() != Hint::Kind::Minus ||
      inner.strategy.graph().name(inner.hint.first()) != tail.front()) {
    throw Error("tail must start at the hinted pivot");
  }
  HintedStrategy cur = inner;
  for (std::size_t j = 1; j < tail.size(); ++j) cur = push_hint(cur, tail[j]);
  return cur;
}

Strategy sum_three(const HintedStrategy& h0, const HintedStrategy& h1, const HintedStrategy& h2,
                   const std::string& leaf) {
  const std::array<const HintedStrategy*, 3> parts{&h0, &h1, &h2};
  std::string pivot;
  for (Color j = 0; j < kColors; ++j) {
    const auto& p = *parts[j];
    if (p.hint.kind() != Hint::Kind::Minus || p.hint.color() != j) {
      throw Error("input " + std::to_string(j) + " must be winning under Minus(A," + std::to_string(j) + ")");
    }
    const std::string& a = p.strategy.graph().name(p.hint.first());
    if (j == 0) pivot = a;
    if (a != pivot) throw Error("inputs must share the hinted sage");
    require_winning(p.strategy, p.hint, "sum input");
  }
  std::map<std::string, int> owner;
  for (Color j = 0; j < kColors; ++j) {
    for (const auto& id : parts[j]->strategy.graph().names()) {
      if (id == pivot) continue;
      if (!owner.emplace(id, j).second) throw Error("inputs may share only the hinted sage");
    }
  }
  if (owner.count(leaf) || leaf == pivot) throw Error("leaf '" + leaf + "' already belongs to an input");

  Assembly a(union_graph({&h0.strategy.graph(), &h1.strategy.graph(), &h2.strategy.graph()}, {{pivot, leaf}}));
  for (const auto& [id, j] : owner) {
    const Strategy* s = &parts[static_cast<std::size_t>(j)]->strategy;
    a.rule(id, [s, id](const See& see) { return s->guess_by_name(id, see); });
  }
  a.rule(leaf, [pivot](const See& see) { return GuessSet::of(see(pivot)); });
  a.rule(pivot, [parts, pivot, leaf](const See& see) {
    return parts[see(leaf)]->strategy.guess_by_name(pivot, see);
  });
  Strategy s = a.build();
  require_winning(s, Hint::none(), "sum of three");
  return s;
}

Strategy two_disjoint_cycles_strategy(const Graph& g, const DisjointCyclesWitness& w) {
  if (!validate_witness(g, w) || w.path.size() < 2) throw Error("invalid disjoint-cycles witness");
  const std::string a = g.name(w.path[0]);
  const std::string b = g.name(w.path[1]);
  HintedStrategy side_a = cycle_hint_strategy(names_of(g, w.first), 2);
  HintedStrategy side_b = cycle_hint_strategy(names_of(g, w.second), 2);
  std::vector<std::string> tail;
  for (std::size_t i = w.path.size(); i-- > 1;) tail.push_back(g.name(w.path[i]));
  side_b = push_hint_along(side_b, tail);

  const Strategy& fa = side_a.strategy;
  const Strategy& fb = side_b.strategy;
  Assembly asm_(union_graph({&fa.graph(), &fb.graph()}, {{a, b}}));
  asm_.adopt(fa);
  asm_.adopt(fb);
  asm_.rule(a, [&fa, a, b](const See& see) { return see(b) == 2 ? fa.guess_by_name(a, see) : GuessSet::of(2); });
  asm_.rule(b, [&fb, a, b](const See& see) { return see(a) == 2 ? GuessSet::of(2) : fb.guess_by_name(b, see); });
  Strategy s = asm_.build();
  require_winning(s, Hint::none(), "disjoint cycles");
  return s;
}

Strategy shared_vertex_strategy(const std::vector<std::string>& first, const std::vector<std::string>& second) {
  if (first.size() < 3 || second.size() < 3 || first.front() != second.front()) {
    throw Error("shared-vertex cycles need lengths >= 3 and a common first sage");
  }
  const std::size_t k = first.size() - 1;
  const std::size_t m = second.size() - 1;
  Edges edges = cycle_edges(first);
  for (auto& e : cycle_edges(second)) edges.push_back(e);
  std::vector<std::string> names = first;
  names.insert(names.end(), second.begin() + 1, second.end());
  Assembly a(Graph::from_edges(names, edges));
  for (std::size_t i = 1; i <= k; ++i) {
    a.place(first[i], {first[i - 1], first[(i + 1) % (k + 1)]}, flat(i == k ? fx::kSharedT : fx::kSharedS));
  }
  for (std::size_t i = 1; i <= m; ++i) {
    a.place(second[i], {second[i - 1], second[(i + 1) % (m + 1)]}, flat(i == 1 ? fx::kSharedT : fx::kSharedS));
  }
  a.place(first.front(), {first[1], first[k], second[1], second[m]}, flat(fx::kSharedA));
  Strategy s = a.build();
  require_winning(s, Hint::none(), "shared-vertex cycles");
  return s;
}

Strategy shared_vertex_strategy(const Graph& g, const SharedVertexWitness& w) {
  if (!validate_witness(g, w)) throw Error("invalid shared-vertex witness");
  return shared_vertex_strategy(names_of(g, w.first), names_of(g, w.second));
}

Strategy shared_vertex_strategy(std::size_t k, std::size_t m) {
  if (k < 2 || m < 2) throw Error("shared-vertex cycles need k, m >= 2");
  std::vector<std::string> first{"A"};
  std::vector<std::string> second{"A"};
  for (std::size_t i = 1; i <= k; ++i) first.push_back("B" + std::to_string(i));
  for (std::size_t i = 1; i <= m; ++i) second.push_back("D" + std::to_string(i));
  return shared_vertex_strategy(first, second);
}

namespace {

Strategy edge_theta(const Graph& g, const std::vector<std::string>& mid, const std::vector<std::string>& low) {
  const std::string& a = mid.front();
  const std::string& b = mid.back();
  Assembly s(g);
  s.place(a, {b, mid[1], low[1]}, flat(fx::kEdgeThetaA));
  s.place(b, {a, mid[mid.size() - 2], low[low.size() - 2]}, flat(fx::kEdgeThetaB));
  for (std::size_t j = 1; j + 1 < mid.size(); ++j) s.place(mid[j], {mid[j - 1], mid[j + 1]}, flat(fx::kEdgeThetaS));
  for (std::size_t j = 1; j + 1 < low.size(); ++j) s.place(low[j], {low[j + 1], low[j - 1]}, flat(fx::kEdgeThetaS));
  return s.build();
}

Strategy three_path_theta(const Graph& g, const std::vector<std::string>& up, const std::vector<std::string>& mid,
                          const std::vector<std::string>& low) {
  const std::string& a = up.front();
  const std::string& b = up.back();
  Assembly s(g);
  s.place(a, {up[1], mid[1], low[1]}, flat(fx::kThetaA));
  s.place(b, {up[up.size() - 2], mid[mid.size() - 2], low[low.size() - 2]}, flat(fx::kThetaB));
  for (std::size_t j = 1; j + 1 < up.size(); ++j) s.place(up[j], {up[j + 1], up[j - 1]}, flat(fx::kThetaS));
  for (std::size_t j = 1; j + 1 < mid.size(); ++j) s.place(mid[j], {mid[j - 1], mid[j + 1]}, flat(fx::kThetaS));
  for (std::size_t j = 1; j + 1 < low.size(); ++j) {
    s.place(low[j], {low[j - 1], low[j + 1]}, flat(j == 1 ? fx::kThetaW : fx::kThetaSLower));
  }
  return s.build();
}

}  // namespace

Strategy theta_strategy(const Graph& g, const ThetaWitness& w, const SolverConfig& solver) {
  if (!validate_witness(g, w)) throw Error("invalid theta witness");
  std::array<std::vector<std::string>, 3> p;
  for (std::size_t i = 0; i < 3; ++i) p[i] = names_of(g, w.paths[i]);
  std::sort(p.begin(), p.end(), [](const auto& x, const auto& y) {
    return std::forward_as_tuple(x.size(), x) < std::forward_as_tuple(y.size(), y);
  });
  Edges edges;
  for (const auto& path : p) {
    for (auto& e : path_edges(path)) edges.push_back(e);
  }
  Graph theta = Graph::from_edges({}, edges);
  Strategy s;
  std::string what;
  if (p[0].size() == 2) {
    s = edge_theta(theta, p[1], p[2]);
    what = "theta with edge";
  } else if (p[2].size() == 3 || p[1].size() == 3) {
    // Two single-vertex paths close a 4-cycle.
    std::vector<std::string> c4{p[0][0], p[0][1], p[0][2], p[1][1]};
    auto base = base_cycle_strategy(c4, solver);
    if (!base) throw InternalError("no base strategy for the 4-cycle");
    return extend_to_supergraph(*base, theta);
  } else {
    s = three_path_theta(theta, p[0], p[1], p[2]);
    what = "theta with three paths";
  }
  require_winning(s, Hint::none(), what);
  return s;
}

Strategy theta_strategy(std::size_t upper, std::size_t middle, std::size_t lower, const SolverConfig& solver) {
  std::array<std::size_t, 3> len{upper, middle, lower};
  const std::array<const char*, 3> prefix{"U", "M", "L"};
  if (std::count(len.begin(), len.end(), 0U) > 1) throw Error("at most one theta path may be a bare edge");
  Edges edges;
  std::array<std::vector<std::string>, 3> paths;
  for (std::size_t i = 0; i < 3; ++i) {
    paths[i].push_back("A");
    for (std::size_t j = 1; j <= len[i]; ++j) paths[i].push_back(prefix[i] + std::to_string(j));
    paths[i].push_back("B");
    for (auto& e : path_edges(paths[i])) edges.push_back(e);
  }
  Graph g = Graph::from_edges({}, edges);
  ThetaWitness w;
  w.a = g.at("A");
  w.b = g.at("B");
  for (std::size_t i = 0; i < 3; ++i) {
    for (const auto& id : paths[i]) w.paths[i].push_back(g.at(id));
  }
  return theta_strategy(g, w, solver);
}

Strategy extend_to_supergraph(const Strategy& sub, const Graph& g, const Hint& h) {
  const Graph& s = sub.graph();
  for (const auto& id : s.names()) {
    if (!g.find(id)) throw Error("sage '" + id + "' is not in the target graph");
  }
  for (const auto& e : s.edges()) {
    if (!g.adjacent(g.at(s.name(e.u)), g.at(s.name(e.v)))) {
      throw Error("edge " + s.name(e.u) + "-" + s.name(e.v) + " is not in the target graph");
    }
  }
  if (count_disproving(sub, h) != 0) throw Error("strategy to extend is not winning");
  return transplant(sub, g, 0);
}

std::optional<Strategy> base_cycle_strategy(const std::vector<std::string>& cycle, const SolverConfig& solver,
                                            std::size_t max_n) {
  const std::size_t n = cycle.size();
  if (n < 3 || n > max_n || !(n % 3 == 0 || n == 4)) return std::nullopt;
  static std::mutex mu;
  static std::map<std::size_t, Strategy> cache;
  std::vector<std::string> abstract;
  for (std::size_t i = 0; i < n; ++i) abstract.push_back("c" + std::string(i < 10 ? "0" : "") + std::to_string(i));
  Strategy base;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) {
      Synthesis r = synthesize(Graph::from_edges(abstract, cycle_edges(abstract)), Hint::none(), solver);
      if (!r.win) throw InternalError("SAT reports a losing base cycle of length " + std::to_string(n));
      it = cache.emplace(n, std::move(*r.strategy)).first;
    }
    base = it->second;
  }
  std::map<std::string, std::string> rename;
  for (std::size_t i = 0; i < n; ++i) rename[abstract[i]] = cycle[i];
  Strategy s = relabel(base, rename);
  require_winning(s, Hint::none(), "base cycle");
  return s;
}

std::optional<HintedStrategy> component_hint_strategy(const Graph& g, Vertex pivot, Color forbidden) {
  std::vector<Vertex> comp;
  for (auto& c : connected_components(g)) {
    if (std::binary_search(c.begin(), c.end(), pivot)) comp = c;
  }
  Graph sub = g.induced(comp);
  StructureReport r = structural_class(sub);
  if (r.kind == StructureKind::Tree) return std::nullopt;
  Cycle cycle = r.cycle;
  if (r.kind == StructureKind::Multicyclic) {
    std::visit(
        [&](const auto& w) {
          using W = std::decay_t<decltype(w)>;
          if constexpr (std::is_same_v<W, ThetaWitness>) {
            cycle = w.paths[0];
            for (std::size_t i = w.paths[1].size() - 1; i-- > 1;) cycle.push_back(w.paths[1][i]);
          } else {
            cycle = w.first;
          }
        },
        *r.witness);
  }
  Vertex p = sub.at(g.name(pivot));
  std::vector<Vertex> path = shortest_path(sub, std::span<const Vertex>(&p, 1), cycle);
  auto start = std::find(cycle.begin(), cycle.end(), path.back());
  std::rotate(cycle.begin(), start, cycle.end());
  HintedStrategy hs = cycle_hint_strategy(names_of(sub, cycle), forbidden);
  std::vector<std::string> tail;
  for (std::size_t i = path.size(); i-- > 0;) tail.push_back(sub.name(path[i]));
  return push_hint_along(hs, tail);
}

namespace {

struct ComponentInfo {
  Graph sub;
  StructureReport report;
  bool wins = false;
  std::string text;
};

std::string kind_text(const Graph& sub, const StructureReport& r) {
  switch (r.kind) {
    case StructureKind::Tree:
      return "tree on " + std::to_string(sub.vertex_count()) + " vertices";
    case StructureKind::Unicyclic: {
      std::size_t n = r.cycle.size();
      std::string s = "unicyclic C_" + std::to_string(n);
      if (n == 4) return s + ", length 4";
      if (n % 3 == 0) return s + ", length divisible by 3";
      return s + ", length not divisible by 3";
    }
    case StructureKind::Multicyclic:
      return "multicyclic, " + describe(sub, r);
  }
  return "";
}

ComponentInfo analyze(const Graph& g, const std::vector<Vertex>& comp) {
  ComponentInfo info{g.induced(comp), {}, false, {}};
  info.report = structural_class(info.sub);
  switch (info.report.kind) {
    case StructureKind::Tree:
      info.wins = false;
      break;
    case StructureKind::Unicyclic: {
      std::size_t n = info.report.cycle.size();
      info.wins = n % 3 == 0 || n == 4;
      break;
    }
    case StructureKind::Multicyclic:
      info.wins = true;
      break;
  }
  info.text = kind_text(info.sub, info.report);
  return info;
}

// Strategy on part of `info.sub`, winning unhinted, or empty above bounds.
std::optional<Strategy> component_certificate(const ComponentInfo& info, const ClassifyOptions& opt,
                                              std::string& provenance) {
  const Graph& sub = info.sub;
  if (info.report.kind == StructureKind::Unicyclic) {
    provenance = "sat-cycle";
    return base_cycle_strategy(names_of(sub, info.report.cycle), opt.solver, opt.cycle_synthesis_bound);
  }
  return std::visit(
      [&](const auto& w) -> std::optional<Strategy> {
        using W = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<W, DisjointCyclesWitness>) {
          provenance = "disjoint-cycles";
          return two_disjoint_cycles_strategy(sub, w);
        } else if constexpr (std::is_same_v<W, SharedVertexWitness>) {
          provenance = "shared-vertex";
          return shared_vertex_strategy(sub, w);
        } else {
          const bool edge = std::any_of(w.paths.begin(), w.paths.end(), [](const auto& p) { return p.size() == 2; });
          provenance = edge ? "theta-edge" : "theta-paths";
          return theta_strategy(sub, w, opt.solver);
        }
      },
      *info.report.witness);
}

Strategy with_two_guesses(const Strategy& s, Vertex v) {
  if (s.two_guess_vertex() == v) return s;
  std::vector<std::vector<GuessSet>> tables;
  for (Vertex u = 0; u < s.graph().vertex_count(); ++u) {
    auto t = s.table(u);
    std::vector<GuessSet> row(t.begin(), t.end());
    if (u == v) {
      for (auto& cell : row) {
        Color c = cell.first();
        cell = GuessSet::pair(c, static_cast<Color>((c + 1) % 3));
      }
    }
    tables.push_back(std::move(row));
  }
  return Strategy(s.graph(), std::move(tables));
}

void finish_certificate(Verdict& v, const Strategy& part, const Graph& g, const Hint& part_hint, const Hint& h) {
  Strategy full = extend_to_supergraph(part, g, part_hint);
  if (h.kind() == Hint::Kind::TwoGuesses) full = with_two_guesses(full, h.first());
  if (g.vertex_count() <= 10) require_winning(full, h, "extended certificate");
  v.certificate = std::move(full);
}

}  // namespace

Verdict classify(const Graph& g, const ClassifyOptions& options) {
  Verdict v;
  if (g.empty()) {
    v.outcome = Outcome::Lose;
    v.reason = "empty graph";
    return v;
  }
  std::vector<ComponentInfo> infos;
  for (const auto& comp : connected_components(g)) infos.push_back(analyze(g, comp));
  auto winner = std::find_if(infos.begin(), infos.end(), [](const ComponentInfo& c) { return c.wins; });
  if (winner == infos.end()) {
    v.outcome = Outcome::Lose;
    if (infos.size() == 1) {
      v.reason = infos[0].text;
    } else {
      v.reason = "every component loses:";
      for (std::size_t i = 0; i < infos.size(); ++i) v.reason += (i ? "; " : " ") + infos[i].text;
    }
    return v;
  }
  v.outcome = Outcome::Win;
  v.reason = winner->text;
  if (infos.size() > 1) v.reason = "component " + winner->sub.name(0) + ": " + v.reason;
  if (!options.certificates) return v;
  try {
    std::string provenance;
    auto part = component_certificate(*winner, options, provenance);
    if (!part) {
      v.provenance = "none, cycle above the synthesis bound";
      return v;
    }
    v.provenance = provenance;
    finish_certificate(v, *part, g, Hint::none(), Hint::none());
  } catch (const BoundError& e) {
    v.provenance = std::string("none, ") + e.what();
    v.certificate.reset();
  }
  return v;
}

Verdict classify_hinted(const Graph& g, const Hint& h, const ClassifyOptions& options) {
  check_hint(h, g);
  if (h.is_none()) return classify(g, options);
  Verdict v = classify(g, options);
  v.hint = h;
  if (v.outcome == Outcome::Win) {
    v.reason = "wins without the hint: " + v.reason;
    if (v.certificate) {
      if (h.kind() == Hint::Kind::TwoGuesses) v.certificate = with_two_guesses(*v.certificate, h.first());
      if (g.vertex_count() <= 13) require_winning(*v.certificate, h, "unhinted certificate");
    }
    return v;
  }
  v.certificate.reset();
  v.provenance.clear();

  std::vector<std::vector<Vertex>> comps = connected_components(g);
  auto comp_of = [&](Vertex x) {
    for (std::size_t i = 0; i < comps.size(); ++i) {
      if (std::binary_search(comps[i].begin(), comps[i].end(), x)) return i;
    }
    return comps.size();
  };
  auto is_tree = [&](Vertex x) {
    const auto& c = comps[comp_of(x)];
    Graph sub = g.induced(c);
    return sub.edge_count() + 1 == sub.vertex_count();
  };
  auto win = [&](const std::string& reason, const std::string& provenance) {
    v.outcome = Outcome::Win;
    v.reason = reason;
    v.provenance = provenance;
  };
  auto lose = [&](const std::string& reason) {
    v.outcome = Outcome::Lose;
    v.reason = reason;
  };
  const std::string a = g.name(h.first());

  try {
    switch (h.kind()) {
      case Hint::Kind::Minus: {
        auto hs = component_hint_strategy(g, h.first(), h.color());
        if (!hs) {
          lose("the component of " + a + " is a tree");
          break;
        }
        win("the component of " + a + " contains a cycle", "cycle-hint-push");
        if (options.certificates) finish_certificate(v, hs->strategy, g, hs->hint, h);
        break;
      }
      case Hint::Kind::TwoGuesses: {
        if (g.degree(h.first()) == 0) {
          lose(a + " is isolated");
          break;
        }
        const std::string b = g.name(g.neighbors(h.first())[0]);
        win(a + " has a neighbor", "two-guess-edge");
        if (!options.certificates) break;
        Graph edge = Graph::from_edges({}, {{a, b}});
        std::vector<std::vector<GuessSet>> t(2);
        const bool a_first = a < b;
        auto& ta = t[a_first ? 0 : 1];
        auto& tb = t[a_first ? 1 : 0];
        for (Color c = 0; c < kColors; ++c) {
          ta.push_back(GuessSet::all_but(c));
          tb.push_back(GuessSet::of(c));
        }
        Strategy s(edge, std::move(t));
        Hint local = Hint::two_guesses(edge.at(a));
        require_winning(s, local, "two-guess edge");
        finish_certificate(v, s, g, local, h);
        break;
      }
      case Hint::Kind::Equal:
      case Hint::Kind::NotEqual: {
        const bool equal = h.kind() == Hint::Kind::Equal;
        const std::string b = g.name(h.second());
        if (comp_of(h.first()) == comp_of(h.second())) {
          Vertex s0 = h.first();
          Vertex t0 = h.second();
          auto path = names_of(g, shortest_path(g, std::span<const Vertex>(&s0, 1), std::span<const Vertex>(&t0, 1)));
          win(a + " and " + b + " share a component", equal ? "path-eq" : "path-neq");
          if (!options.certificates) break;
          HintedStrategy hs = equal ? path_eq_strategy(path) : path_neq_strategy(path);
          finish_certificate(v, hs.strategy, g, hs.hint, h);
          break;
        }
        const bool ta = is_tree(h.first());
        const bool tb = is_tree(h.second());
        if (equal ? (ta && tb) : (ta || tb)) {
          lose(equal ? a + " and " + b + " lie in different tree components"
                     : a + " and " + b + " lie in different components, not both with a cycle");
          break;
        }
        if (equal) {
          // The side with a cycle plays Minus(.,2); the other hinted sage says 2.
          const bool use_a = !ta;
          Vertex x = use_a ? h.first() : h.second();
          const std::string other = use_a ? b : a;
          win("the component of " + g.name(x) + " contains a cycle", "cross-equal");
          if (!options.certificates) break;
          auto hs = component_hint_strategy(g, x, 2);
          Graph lone = Graph::from_edges({other}, {});
          Assembly s(union_graph({&hs->strategy.graph(), &lone}));
          s.adopt(hs->strategy);
          s.rule(other, [](const See&) { return GuessSet::of(2); });
          Strategy built = s.build();
          Hint local = Hint::equal(built.graph().at(a), built.graph().at(b));
          require_winning(built, local, "cross-component equal");
          finish_certificate(v, built, g, local, h);
        } else {
          win("both components contain a cycle", "cross-not-equal");
          if (!options.certificates) break;
          auto ha = component_hint_strategy(g, h.first(), 2);
          auto hb = component_hint_strategy(g, h.second(), 2);
          Assembly s(union_graph({&ha->strategy.graph(), &hb->strategy.graph()}));
          s.adopt(ha->strategy);
          s.adopt(hb->strategy);
          Strategy built = s.build();
          Hint local = Hint::not_equal(built.graph().at(a), built.graph().at(b));
          require_winning(built, local, "cross-component not-equal");
          finish_certificate(v, built, g, local, h);
        }
        break;
      }
      case Hint::Kind::None:
        break;
    }
  } catch (const BoundError& e) {
    v.provenance = std::string("none, ") + e.what();
    v.certificate.reset();
  }
  return v;
}

std::string format_verdict(const Verdict& v) {
  std::string out = v.outcome == Outcome::Win ? "WIN\n" : "LOSE\n";
  out += "reason " + v.reason;
  if (!v.provenance.empty()) out += "; certificate " + v.provenance;
  out += '\n';
  if (v.certificate) out += format_strategy(*v.certificate);
  return out;
}

}  // namespace hats
