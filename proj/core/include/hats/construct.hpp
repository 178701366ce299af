#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hats/graph.hpp"
#include "hats/sat.hpp"
#include "hats/strategy.hpp"

namespace hats {

struct HintedStrategy {
  Strategy strategy;
  Hint hint;
};

/// Number of disproving placements admitted by `h`: brute force up to 13
/// vertices, variable elimination beyond.
std::uint64_t count_disproving(const Strategy& s, const Hint& h);
/// Throws InternalError naming `what` if the strategy is not winning.
void require_winning(const Strategy& s, const Hint& h, const std::string& what);

/// Cycle sages in cyclic order, first is the pivot A. No hint, no check.
Strategy cycle_pivot_strategy(const std::vector<std::string>& cycle);
/// Winning under Minus(cycle[0], forbidden).
HintedStrategy cycle_hint_strategy(const std::vector<std::string>& cycle, Color forbidden);
/// Path from A = path.front() to B = path.back(); winning under A != B.
HintedStrategy path_neq_strategy(const std::vector<std::string>& path);
/// Winning under A = B.
HintedStrategy path_eq_strategy(const std::vector<std::string>& path);
/// Adds leaf `leaf` at the pivot of a Minus hint; winning under Minus(leaf, i).
HintedStrategy push_hint(const HintedStrategy& inner, const std::string& leaf);
/// Pushes the hint along `tail` (tail.front() is the current pivot).
HintedStrategy push_hint_along(const HintedStrategy& inner, const std::vector<std::string>& tail);
/// Inputs winning under Minus(A,0), Minus(A,1), Minus(A,2) on graphs sharing
/// only A; `leaf` is a new sage attached to A. Winning with no hint.
Strategy sum_three(const HintedStrategy& h0, const HintedStrategy& h1, const HintedStrategy& h2,
                   const std::string& leaf);

/// Strategy on the witness subgraph (cycles plus connecting path).
Strategy two_disjoint_cycles_strategy(const Graph& g, const DisjointCyclesWitness& w);
/// Two cycles through a shared vertex, both listed from it.
Strategy shared_vertex_strategy(const std::vector<std::string>& first, const std::vector<std::string>& second);
Strategy shared_vertex_strategy(const Graph& g, const SharedVertexWitness& w);
/// C_{k+1} and C_{m+1} sharing A, sages A, B1..Bk, D1..Dm.
Strategy shared_vertex_strategy(std::size_t k, std::size_t m);

/// Three internally disjoint paths a..b. Uses the bare-edge tables when one
/// path is the edge ab, the three-path tables otherwise. Shapes the
/// three-path tables cannot handle contain a 4-cycle; those get a base-cycle
/// strategy on it. Returns a strategy on the union of the paths.
Strategy theta_strategy(const Graph& g, const ThetaWitness& w, const SolverConfig& solver = internal_solver());
/// Theta with paths of the given inner lengths; sages A, B, U*, M*, L*.
Strategy theta_strategy(std::size_t upper, std::size_t middle, std::size_t lower,
                        const SolverConfig& solver = internal_solver());

/// Moves a strategy verified on its own graph to a supergraph. Sages outside
/// guess 0; sages inside ignore new neighbors. Throws hats::Error if the
/// source graph is not a subgraph of `g` or `sub` is not winning.
Strategy extend_to_supergraph(const Strategy& sub, const Graph& g, const Hint& h = Hint::none());

/// Winning strategy on C_n for 3 | n or n = 4, synthesized once per length
/// and renamed onto `cycle`. Empty above `max_n` or for losing lengths.
std::optional<Strategy> base_cycle_strategy(const std::vector<std::string>& cycle, const SolverConfig& solver,
                                            std::size_t max_n = 9);

/// Minus(pivot, i) certificate on a cycle of pivot's component, pushed along
/// a shortest path to the pivot. Empty when the component is a tree.
std::optional<HintedStrategy> component_hint_strategy(const Graph& g, Vertex pivot, Color forbidden);

enum class Outcome { Win, Lose };

struct Verdict {
  Outcome outcome = Outcome::Lose;
  std::string reason;
  /// Builder that produced the certificate, e.g. "sat-cycle", "theta-edge".
  std::string provenance;
  std::optional<Strategy> certificate;
  std::optional<Hint> hint;
};

struct ClassifyOptions {
  SolverConfig solver = internal_solver();
  std::size_t cycle_synthesis_bound = 9;
  bool certificates = true;
};

/// WIN iff some component wins; certificates are verified before return.
Verdict classify(const Graph& g, const ClassifyOptions& options = {});
Verdict classify_hinted(const Graph& g, const Hint& h, const ClassifyOptions& options = {});

/// `WIN`/`LOSE`, `reason <text>`, optional `provenance`, strategy lines.
std::string format_verdict(const Verdict& v);

}  // namespace hats
