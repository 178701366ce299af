#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hats/graph.hpp"

namespace hats {

using Color = std::uint8_t;
inline constexpr int kColors = 3;

/// 3^k for small k; throws OverflowError past 64 bits.
std::uint64_t pow3(std::size_t k);

/// Nonempty set of at most two colors, stored as a 3-bit mask.
class GuessSet {
 public:
  constexpr GuessSet() = default;
  static constexpr GuessSet of(Color c) { return GuessSet(static_cast<std::uint8_t>(1U << c)); }
  static constexpr GuessSet pair(Color a, Color b) {
    return GuessSet(static_cast<std::uint8_t>((1U << a) | (1U << b)));
  }
  /// The two colors other than `c`.
  static constexpr GuessSet all_but(Color c) { return GuessSet(static_cast<std::uint8_t>(7U & ~(1U << c))); }
  static constexpr GuessSet from_mask(std::uint8_t mask) { return GuessSet(mask); }

  constexpr bool contains(Color c) const { return (mask_ >> c) & 1U; }
  constexpr int size() const { return ((mask_ >> 0) & 1) + ((mask_ >> 1) & 1) + ((mask_ >> 2) & 1); }
  constexpr std::uint8_t mask() const { return mask_; }
  /// Smallest color in the set.
  Color first() const;
  /// Digits in ascending order, e.g. "1" or "02".
  std::string to_string() const;

  friend constexpr bool operator==(GuessSet, GuessSet) = default;

 private:
  constexpr explicit GuessSet(std::uint8_t mask) : mask_(mask) {}
  std::uint8_t mask_ = 0;
};

/// A color per vertex, indexed by Vertex.
struct Placement {
  std::vector<Color> colors;

  friend bool operator==(const Placement&, const Placement&) = default;
};

/// Row-major placement index, first (lexicographically smallest) vertex most
/// significant.
std::uint64_t placement_index(const Placement& p);
Placement placement_from_index(std::uint64_t index, std::size_t vertex_count);
std::string format_placement(const Placement& p);
/// Accepts `placement <digits>` or a bare digit string over vertices in
/// sorted order.
Placement parse_placement(std::string_view text, const Graph& g);

class Hint {
 public:
  enum class Kind { None, Minus, Equal, NotEqual, TwoGuesses };

  Hint() = default;
  static Hint none() { return {}; }
  static Hint minus(Vertex v, Color forbidden);
  static Hint equal(Vertex u, Vertex v);
  static Hint not_equal(Vertex u, Vertex v);
  static Hint two_guesses(Vertex v);

  Kind kind() const noexcept { return kind_; }
  Vertex first() const noexcept { return first_; }
  Vertex second() const noexcept { return second_; }
  Color color() const noexcept { return color_; }
  bool is_none() const noexcept { return kind_ == Kind::None; }

  /// Placement filter; None and TwoGuesses admit everything.
  bool admits(std::span<const Color> colors) const;

  friend bool operator==(const Hint&, const Hint&) = default;

 private:
  Kind kind_ = Kind::None;
  Vertex first_ = 0;
  Vertex second_ = 0;
  Color color_ = 0;
};

/// CLI syntax: "A-2" (Minus), "A=B", "A!=B", "2:A" (TwoGuesses), "" or
/// "none". Vertex ids are resolved against `g`.
Hint parse_hint(std::string_view text, const Graph& g);
std::string format_hint(const Hint& h, const Graph& g);
/// Throws hats::Error if the hint references vertices outside `g`.
void check_hint(const Hint& h, const Graph& g);

bool admissible(const Hint& h, const Placement& p);

/// A collective strategy: per vertex, a guess table of 3^deg cells indexed
/// row-major by the colors of the canonical neighbor list (first neighbor
/// most significant). At most one vertex may guess two colors; all of its
/// cells then hold exactly two.
class Strategy {
 public:
  Strategy() = default;
  /// Validates table sizes and cell sizes; throws hats::Error on mismatch.
  Strategy(Graph g, std::vector<std::vector<GuessSet>> tables);

  /// Fills every table by calling `f(v, neighbor_colors)`; the colors are
  /// listed in canonical neighbor order.
  static Strategy tabulate(Graph g,
                           const std::function<GuessSet(Vertex, std::span<const Color>)>& f);

  const Graph& graph() const noexcept { return graph_; }
  std::span<const GuessSet> table(Vertex v) const { return tables_.at(v); }
  std::optional<Vertex> two_guess_vertex() const noexcept { return two_guess_; }

  /// Index of v's cell under the full placement `colors`.
  std::size_t cell_index(Vertex v, std::span<const Color> colors) const;
  GuessSet guess(Vertex v, std::span<const Color> colors) const {
    return tables_[v][cell_index(v, colors)];
  }
  /// Guess of the sage `id` when neighbor colors are looked up by name.
  /// Used to transplant strategies between graphs sharing vertex ids.
  GuessSet guess_by_name(std::string_view id,
                         const std::function<Color(std::string_view)>& color_of) const;

  friend bool operator==(const Strategy&, const Strategy&) = default;

 private:
  Graph graph_;
  std::vector<std::vector<GuessSet>> tables_;
  std::optional<Vertex> two_guess_;
};

/// One `strategy <id> | <neighbors> | <cells>` line per vertex.
std::string format_strategy(const Strategy& s);
Strategy parse_strategy(std::string_view text, const Graph& g);

/// Throws hats::Error if the placement does not fit the strategy's graph.
GuessSet evaluate_guess(const Strategy& s, std::string_view v, const Placement& p);
bool is_disproving(const Strategy& s, const Placement& p);

struct EnumerationOptions {
  std::size_t max_vertices = 13;
  std::size_t sample_limit = 8;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

struct DisproofReport {
  std::uint64_t count = 0;
  std::vector<Placement> samples;  // in placement-index order
};

/// Throws hats::Error if the hint does not match the strategy's shape
/// (TwoGuesses(v) <=> v is the strategy's two-guess vertex).
void check_strategy_hint(const Strategy& s, const Hint& h);

/// Counts every admissible disproving placement. Throws BoundError when the
/// graph has more than `max_vertices` vertices.
DisproofReport enumerate_disproving(const Strategy& s, const Hint& h,
                                    const EnumerationOptions& options = {});

struct Verification {
  bool winning = false;
  DisproofReport report;
};

/// With `early_exit` the report holds at most the first disproving
/// placement and its count is not the full count.
Verification verify_winning(const Strategy& s, const Hint& h,
                            const EnumerationOptions& options = {}, bool early_exit = false);

using ColorPermutation = std::array<Color, 3>;

/// s'_v(pi(b1..bd)) = pi(s_v(b1..bd)). Throws if pi is not a permutation.
Strategy permute_colors(const Strategy& s, const ColorPermutation& pi);
/// Transposition swapping colors a and b.
ColorPermutation swap_colors(Color a, Color b);

/// Re-indexes a guess table written for `old_order` of neighbors so that it
/// is indexed by `new_order`, preserving every lookup.
std::vector<GuessSet> reorder_axes(std::span<const GuessSet> table,
                                   std::span<const std::string> old_order,
                                   std::span<const std::string> new_order);

/// Exhaustive search over all collective strategies. Throws BoundError when
/// the strategy space exceeds `max_space`.
std::optional<Strategy> search_all_strategies(const Graph& g, const Hint& h,
                                              std::uint64_t max_space = 10'000'000);

/// Strategy on `target` in which the sages of `sub` (matched by id) keep their
/// guesses and ignore neighbors outside `sub`; every other sage guesses
/// `fallback`. A two-guess vertex of `sub` keeps two guesses.
Strategy transplant(const Strategy& sub, const Graph& target, Color fallback = 0);

/// Same strategy with vertex ids renamed; ids absent from `rename` keep
/// their name. Guesses follow the sages, so axis order is recomputed.
Strategy relabel(const Strategy& s, const std::map<std::string, std::string>& rename);

}  // namespace hats
