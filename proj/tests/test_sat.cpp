#include <doctest.h>

#include <chrono>
#include <cstdlib>
#include <random>

#include "hats/error.hpp"
#include "hats/sat.hpp"
#include "support/support.hpp"

using namespace hats;
using namespace hats::test;

namespace {

std::vector<bool> assignment_of(const Strategy& s, const VarMap& map) {
  std::vector<bool> a(map.var_count() + 1, false);
  const Graph& g = s.graph();
  for (Vertex u = 0; u < g.vertex_count(); ++u) {
    for (std::uint64_t beta = 0; beta < pow3(g.degree(u)); ++beta) {
      for (Color alpha = 0; alpha < kColors; ++alpha) a[map.id(u, alpha, beta)] = !s.table(u)[beta].contains(alpha);
    }
  }
  return a;
}

bool satisfies(const Cnf& cnf, const std::vector<bool>& a) {
  for (const auto& clause : cnf.clauses) {
    bool sat = false;
    for (int l : clause) sat = sat || (l > 0 ? a[l] : !a[-l]);
    if (!sat) return false;
  }
  return true;
}

bool brute_sat(const Cnf& cnf) {
  std::vector<bool> a(cnf.var_count + 1, false);
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << cnf.var_count); ++m) {
    for (std::uint32_t v = 1; v <= cnf.var_count; ++v) a[v] = (m >> (v - 1)) & 1U;
    if (satisfies(cnf, a)) return true;
  }
  return false;
}

Cnf random_cnf(std::mt19937_64& rng, std::uint32_t vars, std::size_t clauses, std::size_t width) {
  Cnf cnf;
  cnf.var_count = vars;
  std::uniform_int_distribution<int> var(1, static_cast<int>(vars));
  std::bernoulli_distribution sign(0.5);
  for (std::size_t i = 0; i < clauses; ++i) {
    std::vector<int> c;
    for (std::size_t j = 0; j < width; ++j) c.push_back(sign(rng) ? var(rng) : -var(rng));
    cnf.clauses.push_back(c);
  }
  return cnf;
}

}  // namespace

TEST_CASE("variable map layout") {
  Graph g = Graph::from_edges({"z"}, {{"a", "b"}, {"b", "c"}});
  VarMap map(g);
  CHECK(map.var_count() == 9 + 27 + 9 + 3);
  CHECK(map.id(g.at("a"), 0, 0) == 1);
  CHECK(map.id(g.at("a"), 1, 2) == 1 + 3 + 2);
  CHECK(map.block_base(g.at("b")) == 9);
  CHECK(map.id(g.at("b"), 2, 8) == 9 + 2 * 9 + 8 + 1);
  for (std::uint32_t id = 1; id <= map.var_count(); ++id) {
    VarKey k = map.key(id);
    CHECK(map.id(k.vertex, k.alpha, k.beta) == id);
  }
  CHECK_THROWS_AS(map.key(0), Error);
  CHECK_THROWS_AS(map.key(map.var_count() + 1), Error);
  CHECK_THROWS_AS(map.id(g.at("a"), 0, 3), Error);
}

TEST_CASE("clause counts") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 20; ++i) {
    Graph g = random_graph(rng, 2 + i % 5, 0.5);
    const std::size_t n = g.vertex_count();
    std::uint64_t restriction = 0;
    for (Vertex u = 0; u < n; ++u) restriction += 4 * pow3(g.degree(u));
    CHECK(encode_cnf(g, Hint::none()).cnf.clauses.size() == restriction + pow3(n));
    CHECK(encode_cnf(g, Hint::minus(0, 1)).cnf.clauses.size() == restriction + 2 * pow3(n - 1));
    CHECK(encode_cnf(g, Hint::equal(0, 1)).cnf.clauses.size() == restriction + pow3(n - 1));
    CHECK(encode_cnf(g, Hint::not_equal(0, 1)).cnf.clauses.size() == restriction + 2 * pow3(n - 1));
    CHECK(encode_cnf(g, Hint::two_guesses(0)).cnf.clauses.size() == restriction + pow3(n));
  }
  CHECK_THROWS_AS(encode_cnf(path_graph(14), Hint::none()), BoundError);
}

TEST_CASE("strategies satisfy the encoding exactly when winning") {
  std::mt19937_64 rng(32);
  std::uniform_int_distribution<int> col(0, 2);
  int winning = 0;
  for (int i = 0; i < 400; ++i) {
    Graph g = random_graph(rng, 2 + i % 4, 0.7);
    const bool two = i % 3 == 0;
    Strategy s = Strategy::tabulate(g, [&](Vertex v, std::span<const Color>) {
      return two && v == 0 ? GuessSet::all_but(static_cast<Color>(col(rng)))
                           : GuessSet::of(static_cast<Color>(col(rng)));
    });
    const Hint h = two ? Hint::two_guesses(0) : i % 3 == 1 ? Hint::not_equal(0, 1) : Hint::none();
    Encoding enc = encode_cnf(g, h);
    const bool wins = naive_count(s, h) == 0;
    winning += wins;
    CHECK(satisfies(enc.cnf, assignment_of(s, enc.map)) == wins);
    if (wins) CHECK(decode_model(enc.map, assignment_of(s, enc.map)) == s);
  }
  for (std::size_t n : {3, 4, 6}) {
    Graph g = cycle_graph(n);
    Synthesis r = synthesize(g, Hint::none(), internal_solver());
    REQUIRE(r.strategy);
    Encoding enc = encode_cnf(g, Hint::none());
    CHECK(satisfies(enc.cnf, assignment_of(*r.strategy, enc.map)));
    ++winning;
  }
  CHECK(winning > 0);
}

TEST_CASE("DIMACS text") {
  Graph g = Graph::from_edges({"z"}, {{"a", "b"}});
  Encoding enc = encode_cnf(g, Hint::none());
  std::string text = write_dimacs(enc.cnf, enc.map);
  CHECK(text.rfind("c var 1 a 0 0\n", 0) == 0);
  CHECK(text.find("c var 19 z 0 -\n") != std::string::npos);
  CHECK(text.find("p cnf 21 ") != std::string::npos);
  Cnf back = parse_dimacs(text);
  CHECK(back.var_count == enc.cnf.var_count);
  CHECK(back.clauses == enc.cnf.clauses);
  auto comments = parse_var_comments(text);
  CHECK(comments.size() == 21);
  CHECK(comments[18] == VarComment{19, "z", 0, ""});
  CHECK_NOTHROW(check_var_comments(comments, enc.map));
  comments[3].vertex = "b";
  CHECK_THROWS_AS(check_var_comments(comments, enc.map), Error);
  CHECK(write_dimacs(enc.cnf, enc.map) == text);
}

TEST_CASE("DIMACS parse errors") {
  CHECK_THROWS_AS(parse_dimacs("1 2 0\n"), ParseError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 3 0\n"), ParseError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 2\n1 2 0\n"), ParseError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 2\n"), ParseError);
  CHECK_THROWS_AS(parse_dimacs("p dnf 2 1\n1 2 0\n"), ParseError);
  CHECK(parse_dimacs("c hi\np cnf 3 2\n1 -2\n 3 0 -1 0\n").clauses == std::vector<std::vector<int>>{{1, -2, 3}, {-1}});
}

TEST_CASE("solver output parsing") {
  SolveResult r = parse_solver_output("c hello\ns SATISFIABLE\nv 1 -2\nv 3 0\n", 3, 10);
  CHECK(r.status == SatStatus::Sat);
  CHECK(r.assignment == std::vector<bool>{false, true, false, true});
  CHECK(parse_solver_output("s UNSATISFIABLE\n", 3, 20).status == SatStatus::Unsat);
  CHECK(parse_solver_output("s UNSATISFIABLE\r\n", 3, 0).status == SatStatus::Unsat);
  CHECK(parse_solver_output("", 3, 20).status == SatStatus::Unsat);
  CHECK_THROWS_AS(parse_solver_output("s SATISFIABLE\nv 1 0\n", 3, 10), SolverError);
  CHECK_THROWS_AS(parse_solver_output("s SATISFIABLE\nv 1 2 4 0\n", 3, 10), SolverError);
  CHECK_THROWS_AS(parse_solver_output("s UNKNOWN\n", 3, 0), SolverError);
  CHECK_THROWS_AS(parse_solver_output("s UNSATISFIABLE\n", 3, 10), SolverError);
  CHECK_THROWS_AS(parse_solver_output("", 3, 10), SolverError);
  CHECK_THROWS_AS(parse_solver_output("s SATISFIABLE\nv 1 2 3 0\n", 3, 1), SolverError);
}

TEST_CASE("internal solver agrees with brute force") {
  std::mt19937_64 rng(33);
  int sat = 0;
  for (int i = 0; i < 300; ++i) {
    const std::uint32_t vars = 3 + static_cast<std::uint32_t>(i % 10);
    Cnf cnf = random_cnf(rng, vars, static_cast<std::size_t>(vars * 4.3), 3);
    if (i % 7 == 0) cnf.clauses.push_back({});
    SolveResult r = internal_solve(cnf);
    const bool want = brute_sat(cnf);
    CHECK((r.status == SatStatus::Sat) == want);
    if (r.status == SatStatus::Sat) {
      sat++;
      CHECK(satisfies(cnf, r.assignment));
    }
  }
  CHECK(sat > 30);
  CHECK(sat < 270);
}

TEST_CASE("internal solver on structured instances") {
  // Pigeonhole 6 into 5 is unsatisfiable.
  Cnf php;
  const int holes = 5;
  const int pigeons = 6;
  php.var_count = holes * pigeons;
  auto var = [&](int p, int h) { return p * holes + h + 1; };
  for (int p = 0; p < pigeons; ++p) {
    std::vector<int> c;
    for (int h = 0; h < holes; ++h) c.push_back(var(p, h));
    php.clauses.push_back(c);
  }
  for (int h = 0; h < holes; ++h) {
    for (int p = 0; p < pigeons; ++p) {
      for (int q = p + 1; q < pigeons; ++q) php.clauses.push_back({-var(p, h), -var(q, h)});
    }
  }
  CHECK(internal_solve(php).status == SatStatus::Unsat);
  std::mt19937_64 rng(34);
  Cnf big = random_cnf(rng, 200, 600, 3);
  SolveResult r = internal_solve(big);
  REQUIRE(r.status == SatStatus::Sat);
  CHECK(satisfies(big, r.assignment));
  CHECK_THROWS_AS(internal_solve(big, 100), BoundError);
}

TEST_CASE("internal solver time limit") {
  Cnf php;
  const int holes = 11;
  const int pigeons = 12;
  php.var_count = holes * pigeons;
  auto var = [&](int p, int h) { return p * holes + h + 1; };
  for (int p = 0; p < pigeons; ++p) {
    std::vector<int> c;
    for (int h = 0; h < holes; ++h) c.push_back(var(p, h));
    php.clauses.push_back(c);
  }
  for (int h = 0; h < holes; ++h) {
    for (int p = 0; p < pigeons; ++p) {
      for (int q = p + 1; q < pigeons; ++q) php.clauses.push_back({-var(p, h), -var(q, h)});
    }
  }
  auto t0 = std::chrono::steady_clock::now();
  CHECK_THROWS_AS(internal_solve(php, 400, std::chrono::milliseconds(300)), SolverError);
  CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds(5));
}

TEST_CASE("decode rejects malformed models") {
  Graph g = path_graph(2);
  VarMap map(g);
  std::vector<bool> all_true(map.var_count() + 1, true);
  CHECK_THROWS_AS(decode_model(map, all_true), Error);
  CHECK_THROWS_AS(decode_model(map, std::vector<bool>(3, false)), Error);
}

TEST_CASE("synthesis on small graphs") {
  for (std::size_t n : {3, 4}) {
    Synthesis r = synthesize(cycle_graph(n), Hint::none(), internal_solver());
    CHECK(r.win);
    REQUIRE(r.strategy);
    CHECK(naive_count(*r.strategy) == 0);
  }
  for (std::size_t n = 1; n <= 4; ++n) CHECK_FALSE(synthesize(path_graph(n), Hint::none(), internal_solver()).win);
  Graph p2 = path_graph(2);
  Synthesis two = synthesize(p2, Hint::two_guesses(0), internal_solver());
  CHECK(two.win);
  REQUIRE(two.strategy);
  CHECK(naive_count(*two.strategy, Hint::two_guesses(0)) == 0);
  Synthesis minus = synthesize(cycle_graph(5), Hint::minus(0, 2), internal_solver());
  CHECK(minus.win);
}

TEST_CASE("symmetry units") {
  Graph c5 = cycle_graph(5);
  VarMap map(c5);
  auto units = symmetry_units(map, Hint::none());
  CHECK(units.size() == 2 * 2 + 3);
  CHECK(units.front() == std::vector<int>{-static_cast<int>(map.id(0, 0, 0))});
  CHECK(symmetry_units(map, Hint::minus(0, 1)).size() == 2 * 2 + 2);
  CHECK(symmetry_units(map, Hint::equal(0, 2)).size() == 2 * 2 + 1);
  for (const auto& u : units) CHECK(u.size() == 1);
}

TEST_CASE("symmetry units leave verdicts unchanged") {
  SolverConfig plain = internal_solver(UINT32_MAX);
  plain.symmetry_breaking = false;
  SolverConfig broken = internal_solver(UINT32_MAX);
  std::size_t wins = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    for (const SmallGraph& sg : connected_graphs(n)) {
      Graph g = sg.to_graph();
      for (const Hint& h : all_hints(g)) {
        const Synthesis a = synthesize(g, h, plain);
        const Synthesis b = synthesize(g, h, broken);
        CHECK(a.win == b.win);
        wins += b.win;
      }
    }
  }
  CHECK(wins > 0);
  std::mt19937_64 rng(41);
  for (int i = 0; i < 12; ++i) {
    Graph g = random_graph(rng, 3 + i % 3, 0.5);
    CHECK(synthesize(g, Hint::none(), plain).win == synthesize(g, Hint::none(), broken).win);
  }
}

TEST_CASE("external solver protocol") {
  SolverConfig ext = external_solver(HATS_DIMACS_SOLVE);
  Synthesis r = synthesize(cycle_graph(4), Hint::none(), ext);
  CHECK(r.win);
  CHECK_FALSE(synthesize(path_graph(3), Hint::none(), ext).win);
  SolverConfig piped = external_solver("sh", {"-c", std::string(HATS_DIMACS_SOLVE) + " /dev/stdin"});
  CHECK(synthesize(cycle_graph(3), Hint::none(), piped).win);
  CHECK_THROWS_AS(synthesize(cycle_graph(3), Hint::none(), external_solver("/nonexistent/solver")), SolverError);
  CHECK_THROWS_AS(synthesize(cycle_graph(3), Hint::none(), external_solver("false")), SolverError);
  SolverConfig slow = external_solver("sleep", {"10"});
  slow.time_limit = std::chrono::milliseconds(200);
  auto t0 = std::chrono::steady_clock::now();
  CHECK_THROWS_AS(synthesize(cycle_graph(3), Hint::none(), slow), SolverError);
  CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds(5));
}

TEST_CASE("default solver follows the environment") {
  setenv("HATS_SAT_SOLVER", "/opt/some/solver", 1);
  SolverConfig c = default_solver_config();
  CHECK(c.kind == SolverConfig::Kind::External);
  CHECK(c.executable == "/opt/some/solver");
  unsetenv("HATS_SAT_SOLVER");
  CHECK(default_solver_config().kind == SolverConfig::Kind::Internal);
}
