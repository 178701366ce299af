#include <doctest.h>

#include <random>

#include "hats/error.hpp"
#include "hats/graph.hpp"
#include "support/support.hpp"

using namespace hats;
using namespace hats::test;

TEST_CASE("graph file round trip") {
  const char* text =
      "# two pieces\n"
      "vertex lonely\n"
      "edge b a\n"
      "edge b c   # trailing comment\n"
      "\n"
      "edge c a\n";
  Graph g = parse_graph(text);
  CHECK(g.vertex_count() == 4);
  CHECK(g.edge_count() == 3);
  CHECK(g.names() == std::vector<std::string>{"a", "b", "c", "lonely"});
  CHECK(canonical_neighbors(g, "b") == std::vector<std::string>{"a", "c"});
  CHECK(g.degree(g.at("lonely")) == 0);
  Graph again = parse_graph(format_graph(g));
  CHECK(again == g);
  CHECK(format_graph(again) == format_graph(g));
}

TEST_CASE("graph parse errors carry line numbers") {
  auto line_of = [](const char* text) {
    try {
      parse_graph(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  CHECK(line_of("edge a b\nedge a a\n") == 2);
  CHECK(line_of("edge a b\nedge b a\n") == 2);
  CHECK(line_of("vertex a\nvertex a:b\n") == 2);
  CHECK(line_of("edge a\n") == 1);
  CHECK(line_of("node a\n") == 1);
  CHECK(line_of("edge a b extra\n") == 1);
}

TEST_CASE("vertex ids") {
  CHECK(valid_vertex_id("A1"));
  CHECK(valid_vertex_id("x-y_z"));
  CHECK_FALSE(valid_vertex_id(""));
  CHECK_FALSE(valid_vertex_id("a b"));
  CHECK_FALSE(valid_vertex_id("a:0"));
  CHECK_THROWS_AS(Graph::from_edges({"a"}, {{"a", "a"}}), Error);
  CHECK_THROWS_AS(Graph::from_edges({}, {{"a", "b"}, {"a", "b"}}), Error);
  CHECK_THROWS_AS(parse_graph("vertex a\nvertex a\n"), ParseError);
}

TEST_CASE("components and connectivity") {
  Graph g = Graph::from_edges({"z"}, {{"a", "b"}, {"c", "d"}, {"d", "e"}});
  auto comps = connected_components(g);
  REQUIRE(comps.size() == 3);
  CHECK(comps[0] == std::vector<Vertex>{g.at("a"), g.at("b")});
  CHECK(comps[1] == std::vector<Vertex>{g.at("c"), g.at("d"), g.at("e")});
  CHECK(comps[2] == std::vector<Vertex>{g.at("z")});
  CHECK_FALSE(is_connected(g));
  CHECK(is_connected(cycle_graph(5)));
}

TEST_CASE("two-core strips trees and keeps cycles") {
  Graph g = Graph::from_edges({}, {{"a", "b"}, {"b", "c"}, {"c", "a"}, {"c", "d"}, {"d", "e"}, {"b", "f"}});
  Graph core = prune_to_two_core(g);
  CHECK(core.names() == std::vector<std::string>{"a", "b", "c"});
  CHECK(core.edge_count() == 3);
  CHECK(prune_to_two_core(path_graph(6)).empty());
}

TEST_CASE("three model sizes") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 30; ++i) {
    Graph g = random_graph(rng, 1 + i % 6, 0.5);
    Graph t = build_three_model(g);
    CHECK(t.vertex_count() == 3 * g.vertex_count());
    CHECK(t.edge_count() == 9 * g.edge_count());
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
      for (Color c = 0; c < 3; ++c) {
        CHECK(t.degree(t.at(g.name(v) + ":" + std::to_string(c))) == 3 * g.degree(v));
      }
    }
  }
}

TEST_CASE("shortest path prefers small indices") {
  Graph g = cycle_graph(6);
  std::vector<Vertex> from{g.at("c00")};
  std::vector<Vertex> to{g.at("c03")};
  auto p = shortest_path(g, from, to);
  CHECK(p == std::vector<Vertex>{g.at("c00"), g.at("c01"), g.at("c02"), g.at("c03")});
  Graph split = Graph::from_edges({}, {{"a", "b"}, {"c", "d"}});
  std::vector<Vertex> a{split.at("a")};
  std::vector<Vertex> d{split.at("d")};
  CHECK(shortest_path(split, a, d).empty());
}

TEST_CASE("simple cycle counts agree with a subset oracle") {
  // A nonempty edge set is a simple cycle iff it is connected and 2-regular.
  std::mt19937_64 rng(5);
  for (int i = 0; i < 40; ++i) {
    Graph g = random_graph(rng, 3 + i % 4, 0.6);
    auto edges = g.edges();
    if (edges.size() > 14) continue;
    std::size_t oracle = 0;
    for (std::uint32_t sub = 1; sub < (1U << edges.size()); ++sub) {
      std::vector<Edge> chosen;
      std::vector<int> deg(g.vertex_count(), 0);
      for (std::size_t e = 0; e < edges.size(); ++e) {
        if ((sub >> e) & 1U) {
          chosen.push_back(edges[e]);
          ++deg[edges[e].u];
          ++deg[edges[e].v];
        }
      }
      bool two_regular = true;
      for (int d : deg) two_regular = two_regular && (d == 0 || d == 2);
      if (!two_regular) continue;
      if (is_connected(g.subgraph(chosen))) ++oracle;
    }
    auto cycles = simple_cycles(g);
    CHECK(cycles.size() == oracle);
    for (const Cycle& c : cycles) {
      CHECK(is_cycle_of(g, c));
      CHECK(c.front() == *std::min_element(c.begin(), c.end()));
      CHECK(c[1] < c.back());
    }
  }
  CHECK(simple_cycles(Graph::from_edges({}, {{"a", "b"}, {"a", "c"}, {"a", "d"}, {"b", "c"}, {"b", "d"},
                                             {"c", "d"}}))
            .size() == 7);
}

TEST_CASE("structural class follows the cyclomatic number") {
  std::mt19937_64 rng(3);
  int multicyclic = 0;
  for (int i = 0; i < 300; ++i) {
    Graph g = random_graph(rng, 2 + i % 8, 0.35);
    if (!is_connected(g)) continue;
    StructureReport r = structural_class(g);
    const std::size_t rank = g.edge_count() + 1 - g.vertex_count();
    if (rank == 0) {
      CHECK(r.kind == StructureKind::Tree);
    } else if (rank == 1) {
      CHECK(r.kind == StructureKind::Unicyclic);
      CHECK(is_cycle_of(g, r.cycle));
    } else {
      ++multicyclic;
      REQUIRE(r.kind == StructureKind::Multicyclic);
      REQUIRE(r.witness.has_value());
      CHECK(validate_witness(g, *r.witness));
    }
    CHECK_FALSE(describe(g, r).empty());
  }
  CHECK(multicyclic > 20);
  CHECK_THROWS_AS(structural_class(Graph::from_edges({}, {{"a", "b"}, {"c", "d"}})), Error);
}

TEST_CASE("witness kinds") {
  Graph dumbbell = Graph::from_edges({}, {{"a", "b"}, {"b", "c"}, {"c", "a"}, {"c", "x"}, {"x", "d"}, {"d", "e"},
                                          {"e", "f"}, {"f", "d"}});
  auto r = structural_class(dumbbell);
  REQUIRE(r.witness);
  const auto* dc = std::get_if<DisjointCyclesWitness>(&*r.witness);
  REQUIRE(dc != nullptr);
  CHECK(dc->path.size() == 3);

  Graph bowtie = Graph::from_edges({}, {{"a", "b"}, {"b", "c"}, {"c", "a"}, {"a", "d"}, {"d", "e"}, {"e", "a"}});
  r = structural_class(bowtie);
  const auto* sv = std::get_if<SharedVertexWitness>(&*r.witness);
  REQUIRE(sv != nullptr);
  CHECK(sv->shared == bowtie.at("a"));

  Graph theta = Graph::from_edges({}, {{"a", "b"}, {"a", "c"}, {"c", "b"}, {"a", "d"}, {"d", "e"}, {"e", "b"}});
  r = structural_class(theta);
  const auto* th = std::get_if<ThetaWitness>(&*r.witness);
  REQUIRE(th != nullptr);
  CHECK(th->paths[0].size() == 2);
  CHECK(th->paths[2].size() == 4);

  ThetaWitness broken = *th;
  broken.paths[1] = broken.paths[2];
  CHECK_FALSE(validate_witness(theta, broken));
}

TEST_CASE("small connected graph generator matches known counts") {
  const std::size_t connected[] = {1, 1, 2, 6, 21, 112};
  const std::size_t unicyclic[] = {0, 0, 1, 2, 5, 13, 33};
  for (std::size_t n = 1; n <= 6; ++n) CHECK(connected_graphs(n).size() == connected[n - 1]);
  for (std::size_t n = 3; n <= 7; ++n) CHECK(unicyclic_graphs(n).size() == unicyclic[n - 1]);
}
