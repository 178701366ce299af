#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hats/strategy.hpp"

namespace hats {

/// Index of one layer vertex: alpha is the near vertex's color, beta the far
/// one's.
struct ColorPair {
  Color alpha = 0;
  Color beta = 0;

  constexpr std::size_t index() const { return 3U * alpha + beta; }
  constexpr ColorPair transpose() const { return {beta, alpha}; }
  static constexpr ColorPair from_index(std::size_t i) {
    return {static_cast<Color>(i / 3), static_cast<Color>(i % 3)};
  }
  /// "00" .. "22".
  std::string label() const;

  friend constexpr bool operator==(ColorPair, ColorPair) = default;
};

/// 0/1 tensor M^(u) with one 9-valued index per incident edge, edges in
/// canonical neighbor order. Stored row-major, first edge most significant.
class AdjacencyTensor {
 public:
  AdjacencyTensor(Vertex owner, std::vector<Vertex> edges, std::vector<std::uint8_t> entries);

  Vertex owner() const noexcept { return owner_; }
  std::span<const Vertex> edges() const noexcept { return edges_; }
  std::size_t rank() const noexcept { return edges_.size(); }
  std::span<const std::uint8_t> entries() const noexcept { return entries_; }

  std::uint8_t at(std::span<const ColorPair> index) const;
  std::size_t ones() const;

 private:
  Vertex owner_;
  std::vector<Vertex> edges_;
  std::vector<std::uint8_t> entries_;
};

/// Throws hats::Error for a two-guess vertex and BoundError past degree 7.
AdjacencyTensor adjacency_tensor(const Strategy& s, Vertex u);

/// 9x9 matrix over layer indices with checked 64-bit arithmetic.
class TransferMatrix {
 public:
  TransferMatrix() { cells_.fill(0); }
  static TransferMatrix identity();

  std::uint64_t& operator()(std::size_t row, std::size_t col) { return cells_[row * 9 + col]; }
  std::uint64_t operator()(std::size_t row, std::size_t col) const { return cells_[row * 9 + col]; }

  std::uint64_t trace() const;
  std::uint64_t sum() const;

  /// Throws OverflowError instead of wrapping.
  friend TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b);
  friend bool operator==(const TransferMatrix&, const TransferMatrix&) = default;

 private:
  std::array<std::uint64_t, 81> cells_;
};

/// Degree-2 vertex u with neighbors `in` and out. Row = (c_in, c_u) which is
/// the incoming pair read toward u, column = (c_u, c_out).
TransferMatrix transfer_matrix(const Strategy& s, Vertex u, Vertex in);
/// Same, with the first canonical neighbor as `in`.
TransferMatrix transfer_matrix(const Strategy& s, Vertex u);
/// From a table written as table[c_in][c_out].
TransferMatrix transfer_matrix(const std::array<std::array<Color, 3>, 3>& table);

/// Ordered product; throws hats::Error on an empty list.
TransferMatrix matrix_power_chain(std::span<const TransferMatrix> chain);
TransferMatrix matrix_power(const TransferMatrix& m, unsigned k);
/// Trace of the product around a cycle: the number of disproving cyclic chains.
std::uint64_t cycle_chain_count(std::span<const TransferMatrix> chain);

/// Plain-text grid with 00..22 row and column labels.
std::string format_matrix(const TransferMatrix& m);
/// Rank-2 tensors print as 9x9 grids (first edge = rows); others as a list
/// of nonzero index tuples.
std::string format_tensor(const AdjacencyTensor& t, const Graph& g);

enum class ContractionMethod { Auto, Elimination, Direct };

struct ContractionOptions {
  ContractionMethod method = ContractionMethod::Auto;
  /// Largest intermediate factor, in variables, for elimination.
  std::size_t max_factor_vars = 14;
  /// Vertex bound for the direct placement sum.
  std::size_t max_direct_vertices = 13;
};

/// Full contraction of the adjacency tensors: the number of disproving
/// placements. Isolated vertices contribute a factor 2. Rejects two-guess
/// strategies.
std::uint64_t contract_full(const Strategy& s, const ContractionOptions& options = {});

/// Elimination count generalized to hints and a two-guess sage. Used to
/// verify certificates on graphs too large for brute force.
std::uint64_t count_by_elimination(const Strategy& s, const Hint& h,
                                   std::size_t max_factor_vars = 14);

/// Greedy minimum-degree elimination order over the interaction graph.
std::vector<Vertex> elimination_order(const Graph& g);

enum class Step : std::uint8_t { Up, Flat, Down };

std::vector<Step> motzkin_encode(std::span<const Color> colors);
std::vector<Color> motzkin_decode(Color start, std::span<const Step> steps);
/// "up flat down ..." separated by single spaces.
std::string format_steps(std::span<const Step> steps);
/// Lattice path drawn with '/', '_' and '\', highest row first.
std::string render_motzkin(std::span<const Step> steps);

}  // namespace hats
