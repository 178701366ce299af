#include <doctest.h>

#include "hats/construct.hpp"
#include "hats/error.hpp"
#include "hats/nine_vertex.hpp"
#include "support/support.hpp"

using namespace hats;
using namespace hats::test;

namespace {

std::uint64_t count(const HintedStrategy& hs) { return count_disproving(hs.strategy, hs.hint); }

Graph theta_graph(std::size_t u, std::size_t m, std::size_t l) { return theta_strategy(u, m, l).graph(); }

}  // namespace

TEST_CASE("cycle pivot strategy loses by exactly k+1 placements") {
  for (std::size_t k = 2; k <= 9; ++k) {
    Strategy s = cycle_pivot_strategy(names("A", "S", k));
    EnumerationOptions opt;
    opt.sample_limit = 100;
    DisproofReport r = enumerate_disproving(s, Hint::none(), opt);
    CHECK(r.count == k + 1);
    CHECK(naive_count(s) == k + 1);
    for (const Placement& p : r.samples) CHECK(p.colors[s.graph().at("A")] == 2);
  }
}

TEST_CASE("cycle hint strategies win for every forbidden color") {
  for (std::size_t n = 3; n <= 9; ++n) {
    for (Color i = 0; i < kColors; ++i) {
      HintedStrategy hs = cycle_hint_strategy(names("A", "S", n - 1), i);
      CHECK(hs.hint == Hint::minus(hs.strategy.graph().at("A"), i));
      CHECK(naive_count(hs.strategy, hs.hint) == 0);
      CHECK(naive_count(hs.strategy) > 0);
    }
  }
}

TEST_CASE("path strategies win under equality hints") {
  for (std::size_t n = 2; n <= 8; ++n) {
    auto path = names("A", "P", n - 2, "B");
    HintedStrategy neq = path_neq_strategy(path);
    HintedStrategy eq = path_eq_strategy(path);
    CHECK(neq.hint.kind() == Hint::Kind::NotEqual);
    CHECK(eq.hint.kind() == Hint::Kind::Equal);
    CHECK(naive_count(neq.strategy, neq.hint) == 0);
    CHECK(naive_count(eq.strategy, eq.hint) == 0);
  }
}

TEST_CASE("hint pushing along tails") {
  for (std::size_t n : {3, 4, 5}) {
    for (std::size_t tail = 1; tail <= 3; ++tail) {
      for (Color i = 0; i < kColors; ++i) {
        HintedStrategy base = cycle_hint_strategy(names("A", "S", n - 1), i);
        HintedStrategy pushed = push_hint_along(base, names("A", "T", tail));
        CHECK(pushed.strategy.graph().vertex_count() == n + tail);
        CHECK(pushed.hint.kind() == Hint::Kind::Minus);
        CHECK(pushed.strategy.graph().name(pushed.hint.first()) == "T" + std::to_string(tail));
        CHECK(count(pushed) == 0);
      }
    }
  }
  HintedStrategy one = push_hint(cycle_hint_strategy({"A", "B", "C"}, 1), "L");
  CHECK(one.strategy.graph().name(one.hint.first()) == "L");
  CHECK(one.hint.color() == 1);
  CHECK(count(one) == 0);
}

TEST_CASE("sum of three hinted graphs and a pendant") {
  std::vector<HintedStrategy> parts;
  const char* prefix[3] = {"X", "Y", "Z"};
  const std::size_t len[3] = {3, 4, 3};
  for (Color j = 0; j < kColors; ++j) parts.push_back(cycle_hint_strategy(names("A", prefix[j], len[j] - 1), j));
  Strategy s = sum_three(parts[0], parts[1], parts[2], "B");
  CHECK(s.graph().vertex_count() == 9);
  CHECK(naive_count(s) == 0);
  CHECK_THROWS_AS(sum_three(parts[0], parts[0], parts[2], "B"), Error);
}

TEST_CASE("two disjoint cycles") {
  Graph g = Graph::from_edges({}, {{"a1", "a2"}, {"a2", "a3"}, {"a3", "a4"}, {"a4", "a1"}, {"a1", "m"}, {"m", "b1"},
                                   {"b1", "b2"}, {"b2", "b3"}, {"b3", "b1"}});
  auto r = structural_class(g);
  const auto& w = std::get<DisjointCyclesWitness>(*r.witness);
  Strategy s = two_disjoint_cycles_strategy(g, w);
  CHECK(naive_count(s) == 0);
}

TEST_CASE("shared vertex cycles") {
  for (auto [k, m] : std::vector<std::pair<std::size_t, std::size_t>>{{2, 2}, {2, 3}, {3, 2}, {2, 4}, {3, 3}, {4, 4}}) {
    Strategy s = shared_vertex_strategy(k, m);
    CHECK(s.graph().vertex_count() == 1 + k + m);
    CHECK(naive_count(s) == 0);
    CHECK(contract_full(s) == 0);
  }
}

TEST_CASE("theta graphs") {
  for (auto t : std::vector<std::array<std::size_t, 3>>{
           {1, 1, 2}, {1, 2, 2}, {2, 2, 2}, {1, 1, 3}, {2, 3, 1}, {0, 2, 2}, {0, 3, 3}, {0, 2, 4}}) {
    Strategy s = theta_strategy(t[0], t[1], t[2]);
    CHECK(s.graph().vertex_count() == 2 + t[0] + t[1] + t[2]);
    CHECK(count_disproving(s, Hint::none()) == 0);
  }
  // Shapes routed through a contained short cycle.
  for (auto t : std::vector<std::array<std::size_t, 3>>{{0, 1, 1}, {0, 3, 1}, {0, 1, 2}, {1, 1, 1}}) {
    Strategy s = theta_strategy(t[0], t[1], t[2]);
    CHECK(s.graph() == theta_graph(t[0], t[1], t[2]));
    CHECK(count_disproving(s, Hint::none()) == 0);
  }
}

TEST_CASE("extension to supergraphs") {
  HintedStrategy hs = cycle_hint_strategy({"A", "B", "C"}, 0);
  Graph big = hs.strategy.graph().with_edges({{"A", "x"}, {"x", "y"}, {"y", "B"}});
  Strategy wide = extend_to_supergraph(hs.strategy, big, hs.hint);
  Hint moved = Hint::minus(big.at("A"), 0);
  CHECK(naive_count(wide, moved) == 0);
  Graph other = Graph::from_edges({}, {{"A", "B"}, {"B", "Q"}});
  CHECK_THROWS_AS(extend_to_supergraph(hs.strategy, other, hs.hint), Error);
  CHECK_THROWS_AS(extend_to_supergraph(hs.strategy, big), Error);
}

TEST_CASE("base cycle strategies") {
  CHECK(base_cycle_strategy(names("A", "S", 3), internal_solver()).has_value());
  auto c6 = base_cycle_strategy(names("q", "r", 5), internal_solver());
  REQUIRE(c6);
  CHECK(c6->graph().names().front() == "q");
  CHECK(naive_count(*c6) == 0);
  CHECK_FALSE(base_cycle_strategy(names("A", "S", 4), internal_solver()).has_value());
  CHECK_FALSE(base_cycle_strategy(names("A", "S", 11), internal_solver(), 9).has_value());
}

TEST_CASE("classification of named graphs") {
  auto verdict = [](const Graph& g) { return classify(g); };
  CHECK(verdict(path_graph(6)).outcome == Outcome::Lose);
  CHECK(verdict(cycle_graph(5)).outcome == Outcome::Lose);
  CHECK(verdict(cycle_graph(7)).outcome == Outcome::Lose);
  Verdict c4 = verdict(cycle_graph(4));
  CHECK(c4.outcome == Outcome::Win);
  CHECK(c4.provenance == "sat-cycle");
  REQUIRE(c4.certificate);
  CHECK(naive_count(*c4.certificate) == 0);
  Verdict c12 = verdict(cycle_graph(12));
  CHECK(c12.outcome == Outcome::Win);
  CHECK_FALSE(c12.certificate);
  CHECK(c12.provenance.find("synthesis bound") != std::string::npos);
  Verdict theta = verdict(theta_graph(2, 2, 3));
  CHECK(theta.outcome == Outcome::Win);
  CHECK(theta.provenance == "theta-paths");
  REQUIRE(theta.certificate);
  CHECK(count_disproving(*theta.certificate, Hint::none()) == 0);
}

TEST_CASE("disconnected graphs win when a component wins") {
  Graph two_trees = Graph::from_edges({}, {{"a", "b"}, {"c", "d"}, {"d", "e"}});
  Graph tree_and_c4 = path_graph(2).with_edges({{"c0", "c1"}, {"c1", "c2"}, {"c2", "c3"}, {"c3", "c0"}});
  Graph tree_and_c3 = path_graph(2).with_edges({{"c0", "c1"}, {"c1", "c2"}, {"c2", "c0"}});
  Graph tree_and_c5 = path_graph(3).with_edges({{"c0", "c1"}, {"c1", "c2"}, {"c2", "c3"}, {"c3", "c4"}, {"c4", "c0"}});
  Graph dots = Graph::from_edges({"z"}, {{"a", "b"}});
  for (const Graph& g : {two_trees, tree_and_c4, tree_and_c3, tree_and_c5, dots}) {
    Verdict v = classify(g);
    const bool sat = synthesize(g, Hint::none(), internal_solver(UINT32_MAX)).win;
    CHECK((v.outcome == Outcome::Win) == sat);
    if (v.certificate) CHECK(naive_count(*v.certificate) == 0);
  }
  CHECK(classify(tree_and_c3).outcome == Outcome::Win);
  CHECK(classify(tree_and_c5).outcome == Outcome::Lose);
  CHECK(classify(Graph()).outcome == Outcome::Lose);
}

TEST_CASE("hinted verdicts on disconnected graphs") {
  Graph g = Graph::from_edges({}, {{"a", "b"}, {"c0", "c1"}, {"c1", "c2"}, {"c2", "c3"}, {"c3", "c4"}, {"c4", "c0"}});
  for (const Hint& h :
       {Hint::equal(g.at("a"), g.at("c0")), Hint::not_equal(g.at("a"), g.at("c0")), Hint::equal(g.at("a"), g.at("b")),
        Hint::not_equal(g.at("c0"), g.at("c2")), Hint::minus(g.at("b"), 1), Hint::minus(g.at("c2"), 0),
        Hint::two_guesses(g.at("a")), Hint::two_guesses(g.at("c1"))}) {
    Verdict v = classify_hinted(g, h);
    const bool sat = synthesize(g, h, internal_solver(UINT32_MAX)).win;
    CHECK((v.outcome == Outcome::Win) == sat);
    if (v.certificate) CHECK(naive_count(*v.certificate, h) == 0);
  }
}

TEST_CASE("classifier agrees with SAT on graphs up to five vertices") {
  for (std::size_t n = 1; n <= 5; ++n) {
    for (const SmallGraph& sg : connected_graphs(n)) {
      Graph g = sg.to_graph();
      Verdict v = classify(g);
      CHECK((v.outcome == Outcome::Win) == synthesize(g, Hint::none(), internal_solver(UINT32_MAX)).win);
      if (v.outcome == Outcome::Win) {
        REQUIRE(v.certificate);
        CHECK(naive_count(*v.certificate) == 0);
      }
    }
  }
}

TEST_CASE("hinted certificates are winning") {
  for (std::size_t n = 2; n <= 4; ++n) {
    for (const SmallGraph& sg : connected_graphs(n)) {
      Graph g = sg.to_graph();
      for (const Hint& h : all_hints(g)) {
        Verdict v = classify_hinted(g, h);
        if (v.outcome == Outcome::Win) {
          REQUIRE(v.certificate);
          CHECK(naive_count(*v.certificate, h) == 0);
        }
      }
    }
  }
}

TEST_CASE("verdict text") {
  Verdict v = classify(cycle_graph(5));
  CHECK(format_verdict(v) == "LOSE\nreason unicyclic C_5, length not divisible by 3\n");
  Verdict w = classify(cycle_graph(3));
  std::string text = format_verdict(w);
  CHECK(text.rfind("WIN\nreason ", 0) == 0);
  CHECK(text.find("; certificate sat-cycle\nstrategy ") != std::string::npos);
  CHECK(format_verdict(classify(cycle_graph(3))) == text);
}
