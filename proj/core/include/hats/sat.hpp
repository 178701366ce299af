#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hats/strategy.hpp"

namespace hats {

/// m^(u)_{alpha,beta}: true iff sage u does not guess alpha on seeing beta.
struct VarKey {
  Vertex vertex = 0;
  Color alpha = 0;
  std::uint64_t beta = 0;  // row-major neighbor-color index

  friend bool operator==(const VarKey&, const VarKey&) = default;
};

/// id = block_base(u) + alpha * 3^deg(u) + beta + 1, blocks in vertex order.
class VarMap {
 public:
  VarMap() = default;
  explicit VarMap(const Graph& g, std::optional<Vertex> two_guess = std::nullopt);

  const Graph& graph() const noexcept { return graph_; }
  std::optional<Vertex> two_guess_vertex() const noexcept { return two_guess_; }
  std::uint32_t var_count() const noexcept { return var_count_; }
  std::uint32_t block_base(Vertex u) const { return bases_.at(u); }

  std::uint32_t id(Vertex u, Color alpha, std::uint64_t beta) const;
  /// Throws hats::Error for ids outside 1..var_count().
  VarKey key(std::uint32_t id) const;

 private:
  Graph graph_;
  std::optional<Vertex> two_guess_;
  std::vector<std::uint32_t> bases_;
  std::uint32_t var_count_ = 0;
};

struct Cnf {
  std::uint32_t var_count = 0;
  std::vector<std::vector<int>> clauses;
};

struct Encoding {
  Cnf cnf;
  VarMap map;
};

/// Restriction clauses per (u, beta) followed by one clause per admissible
/// placement in placement-index order. Throws BoundError above `max_vertices`.
Encoding encode_cnf(const Graph& g, const Hint& h, std::size_t max_vertices = 13);

/// `c var <id> <vertex> <alpha> <beta-digits>` lines ("-" for a sage with no
/// neighbors), then `p cnf`, then the clauses. LF line endings.
std::string write_dimacs(const Cnf& cnf, const VarMap& map);

struct VarComment {
  std::uint32_t id = 0;
  std::string vertex;
  Color alpha = 0;
  std::string beta;  // digits in canonical neighbor order, "" for none

  friend bool operator==(const VarComment&, const VarComment&) = default;
};

std::vector<VarComment> parse_var_comments(std::string_view dimacs);
/// Checks the comments against `map`; throws hats::Error on any mismatch.
void check_var_comments(std::span<const VarComment> comments, const VarMap& map);
/// Plain DIMACS reader; comment lines are skipped.
Cnf parse_dimacs(std::string_view text);

enum class SatStatus { Sat, Unsat };

struct SolveResult {
  SatStatus status = SatStatus::Unsat;
  /// Index 0 unused; assignment[i] is the value of variable i.
  std::vector<bool> assignment;
};

struct SolverConfig {
  enum class Kind { Internal, External };
  Kind kind = Kind::Internal;
  std::string executable;
  /// Argument template; "{file}" is replaced by the DIMACS path.
  std::vector<std::string> arguments{"{file}"};
  std::uint32_t internal_var_bound = 400;
  /// Wall-clock limit for one solve; zero means none. Exceeding it throws
  /// SolverError.
  std::chrono::milliseconds time_limit{0};
  /// Append symmetry_units before solving.
  bool symmetry_breaking = true;
};

/// External solver named by HATS_SAT_SOLVER if set, otherwise internal.
SolverConfig default_solver_config();
SolverConfig internal_solver(std::uint32_t var_bound = 400);
SolverConfig external_solver(std::string executable, std::vector<std::string> arguments = {"{file}"});

/// Parses `s`/`v` lines. Exit codes 10 and 20 are accepted as SAT/UNSAT,
/// 0 defers to the `s` line; anything else is a SolverError.
SolveResult parse_solver_output(std::string_view output, std::uint32_t var_count, int exit_code);

SolveResult run_solver(const Cnf& cnf, const std::string& dimacs, const SolverConfig& config);

/// CDCL search with unit propagation, clause learning and restarts. Throws
/// BoundError when the instance has more than `var_bound` variables and
/// SolverError once `time_limit` (if nonzero) has passed.
SolveResult internal_solve(const Cnf& cnf, std::uint32_t var_bound = 400,
                           std::chrono::milliseconds time_limit = std::chrono::milliseconds{0});

/// Reads guesses off the false variables of each (u, beta) block. Throws
/// hats::Error if a block has the wrong number of false variables.
Strategy decode_model(const VarMap& map, const std::vector<bool>& assignment);

/// Unit clauses fixing color labels that can be renamed without changing
/// whether a strategy wins: a greedy independent set of sages guesses 0 on
/// the all-zero view and avoids 2 on the next view, every other sage avoids
/// 2 on the all-zero view. Sages named by the hint are left alone. Adding
/// the units preserves satisfiability.
std::vector<std::vector<int>> symmetry_units(const VarMap& map, const Hint& h);

struct Synthesis {
  bool win = false;
  std::optional<Strategy> strategy;
};

/// Encode (plus symmetry units when enabled), solve, decode, then re-verify the decoded strategy by brute
/// force; a verification failure throws InternalError.
Synthesis synthesize(const Graph& g, const Hint& h, const SolverConfig& config = default_solver_config());

}  // namespace hats
